#pragma once

#include <map>
#include <vector>

#include "mdsq/common.hpp"
#include "mdsq/digitset.hpp"
#include "mdsq/gaussian.hpp"

namespace mdsq {

// Representation sums over missing-digit sets:
//   r2(n) = sum_{a^2+b^2=n} Lambda(a)Lambda(b)   (prime powers, a,b >= 2)
//   r1(n) = sum_{a^2+b^2=n, b>=1} Lambda(a)      (b a positive integer)
//   rstar(n) = #{(p,q) primes : p^2+q^2=n}       (ordered)
//   rtildestar(n) = #{(p,b) : p prime, b>=1, p^2+b^2=n}

struct Representation {
    u64 p = 0, q = 0;  // ordered
    u64 n = 0;         // p^2 + q^2
};

struct RStarResult {
    u64 count = 0;
    std::vector<Representation> reps;  // ordered pairs, sorted by p
};

// One pass over ordered prime(-power) pairs with member sums <= X.
struct Ledger {
    u64 X = 0;
    DigitSet ds;
    u64 member_count = 0;  // #A(X)

    double r2_sum = 0;  // sum over members of r2(n)
    u64 rstar_sum = 0;  // = number of ordered prime pairs with member sum
    u64 rstar_sq_sum = 0;
    u64 nonzero_count = 0;  // #{n member : rstar(n) > 0}
    u64 gt2_count = 0;      // #{n member : rstar(n) > 2}
    u64 quadruple_count = 0;
    i64 defect_sum = 0;  // sum of rstar^2 - 2 rstar over represented members
    u64 big_pair_count = 0;  // ordered prime pairs with p, q > X^{1/4}
    std::map<u64, u64> histogram;  // rstar value -> #n

    bool tilde_valid = false;  // r1/rtilde stats only gathered at small X
    double r1_sum = 0;
    u64 rtilde_sum = 0;
};

inline constexpr u64 kLedgerBudget = 100000000000ull;  // 10^11
inline constexpr u64 kTildeBudget = 100000000ull;      // 10^8: r1 scans all b >= 1

Ledger build_ledger(u64 X, const DigitSet& ds, bool with_tilde = false);
// Serial reference, identical contract; baseline for tests and the benchmark.
Ledger build_ledger_serial(u64 X, const DigitSet& ds, bool with_tilde = false);

RStarResult r_star(u64 n);

struct OffDiagonal {
    u64 quadruple_count = 0;
    i64 defect_sum = 0;
};

OffDiagonal off_diagonal_count(u64 X, const DigitSet& ds);

// Brute-force oracle: enumerate all ordered pairs of representations with
// distinct prime multisets, n member, n <= X.  Quadratic in rstar per n.
u64 quadruple_count_bruteforce(u64 X, const DigitSet& ds);

struct NonzeroCount {
    u64 nonzero = 0;  // #{n member : rstar(n) > 0}
    u64 gt2 = 0;      // #{n member : rstar(n) > 2}
    std::map<u64, u64> histogram;
};

NonzeroCount nonzero_count(u64 X, const DigitSet& ds);

// All members n <= X carrying at least two distinct unordered prime pairs;
// reps are stored with p <= q, one per multiset.
struct Collision {
    u64 n = 0;
    std::vector<Representation> reps;
};

std::vector<Collision> collision_list(u64 X, const DigitSet& ds);

// Gaussian split of a collision p1^2+q1^2 = p2^2+q2^2:
//   z = gcd(p1+i q1, p2+i q2),  w = (p1+i q1)/z,
//   p2+i q2 = unit * z * conj(w)  for one of the four units.
struct CollisionQuadruple {
    Representation rep1, rep2;
    Gaussian z, w;
    int unit_power = 0;  // p2+i q2 = i^unit_power * z * conj(w)
    bool degenerate = false;
};

CollisionQuadruple gaussian_factor_collision(const Representation& rep1,
                                             const Representation& rep2);

struct IntervalR2 {
    double sum = 0;        // exact sum_{t < n <= t+H} r2(n)
    double main_term = 0;  // (pi/4) H
};

IntervalR2 short_interval_r2(u64 t, u64 H);

struct LatticeCount {
    u64 count = 0;  // #{(a,b) >= 1 : a^2+b^2 <= x, (a,b) = (u,v) mod q}
    double main_term = 0;  // (pi/4) x / q^2
    double error = 0;
    double fitted_C = 0;  // error * q / sqrt(x)
};

LatticeCount lattice_count_ap(u64 x, u64 q, u64 u, u64 v);

// One pass over all prime-power pairs <= X, binned by missing digit: row b
// collects sums over n <= X whose base-g expansion avoids b.
struct BiasRow {
    unsigned b = 0;
    double r2_sum = 0;
    u64 member_count = 0;
    u64 rstar_sum = 0;
};

std::vector<BiasRow> bias_table(u64 X, unsigned g);

}  // namespace mdsq
