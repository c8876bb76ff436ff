#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mdsq/common.hpp"

namespace mdsq {

// A base-g digit restriction: members are the integers whose base-g expansion
// never uses a forbidden digit.  The expansion of 0 is the empty string, so 0
// is a member exactly when digit 0 is not forbidden.
struct DigitSet {
    unsigned g = 10;
    u32 forbidden_mask = 0;  // bit d set <=> digit d is forbidden
    std::string label;

    bool allowed(unsigned d) const { return ((forbidden_mask >> d) & 1u) == 0; }
    bool forbidden(unsigned d) const { return !allowed(d); }
    unsigned num_forbidden() const { return static_cast<unsigned>(__builtin_popcount(forbidden_mask)); }
    unsigned num_allowed() const { return g - num_forbidden(); }

    std::vector<unsigned> allowed_digits() const;
    std::vector<unsigned> forbidden_digits() const;
    unsigned min_allowed() const;          // smallest allowed digit
    unsigned min_allowed_nonzero() const;  // smallest allowed digit >= 1

    // Strict validation per the domain contract: base >= 2, forbidden digits in
    // range, at least two digits left allowed.  An empty forbidden set is
    // accepted by make() for unrestricted reference runs; the CLI rejects it.
    static DigitSet make(unsigned g, const std::vector<unsigned>& forbidden,
                         std::string label = "");
    // Text form "g=10;forbidden=7" or "g=10;forbidden=0,5".
    static DigitSet parse(const std::string& text);
    std::string text() const;
};

bool is_member(u64 n, const DigitSet& ds);

// #{1 <= n <= X : is_member(n)} by digit dynamic programming.
u64 count_leq(u64 X, const DigitSet& ds);

// Smallest member >= n (n >= 1), or nullopt on u64 overflow.  Jumps over the
// whole block below the most significant forbidden digit, so stepping through
// [lo,hi] costs output size times the digit count.
std::optional<u64> next_member_geq(u64 n, const DigitSet& ds);

void for_each_member(u64 lo, u64 hi, const DigitSet& ds,
                     const std::function<void(u64)>& fn);
std::vector<u64> members(u64 lo, u64 hi, const DigitSet& ds);

// Fixed-length string model over the allowed alphabet: all k-position strings,
// including the all-zero string; X = g^k.
struct StringModel {
    DigitSet ds;
    unsigned k = 1;

    u64 X() const;
    u64 cardinality() const;  // (g-t)^k
};

struct FourierValue {
    double theta = 0;
    cplx value;
    unsigned k = 0;
};

// Correction terms relating the string-model product to the transform of
// A(X) = A cap [1, g^k].
struct FourierCorrection {
    bool subtract_zero_string = false;  // 0 is an allowed string but not in [1,X]
    bool add_gk = false;                // g^k is a member on the closed right end
    bool product_form_valid = false;    // false when digit 0 is forbidden: short
                                        // members are not length-k strings
};

// prod_j sum_{a allowed} e(theta a g^j): the transform of the full string model.
FourierValue fourier_product(double theta, const StringModel& sm);
FourierValue fourier_product_frac(u64 num, u64 den, const StringModel& sm);
FourierCorrection fourier_correction(const StringModel& sm);

// Exact transform of A(X): sum_{n in A, 1 <= n <= g^k} e(theta n).
cplx transform_ax(double theta, const StringModel& sm);
cplx transform_ax_frac(u64 num, u64 den, const StringModel& sm);

struct FourierDecayReport {
    double c_g_estimate = 0;  // fitted L-infinity decay rate at a rational probe
    double C_g_estimate = 0;  // measured L1 constant (a lower proxy for the sup)
    double alpha_g = 0;       // log(C_g * (g/(g-1)) * log g) / log g
    double max_grid_sum = 0;  // max over sampled theta of sum_a |1hat(theta + a/X)|
    std::vector<std::pair<double, double>> samples;  // (theta, grid sum)
};

// Grid estimate of sup_theta sum_{0<=a<X} |1hat_A(theta + a/X)|, with one
// refinement pass around the maximizer.  C_g_estimate = (max / (g log g)^k)^{1/k}.
FourierDecayReport measure_l1_constant(const StringModel& sm, unsigned theta_samples);

struct RationalDecay {
    double ratio = 0;            // |1hat_A(r/s)| / #A(X)
    double fitted_exponent = 0;  // -log(ratio) log(s) / log(X)
};

// Decay of the transform at r/s where s has a nontrivial divisor coprime to g.
// Throws std::domain_error("major-arc-type denominator") otherwise.
RationalDecay decay_at_rational(u64 r, u64 s, const StringModel& sm);

double alpha_g_from_C(double C_g, unsigned g);

}  // namespace mdsq
