#pragma once

#include <functional>
#include <vector>

#include "mdsq/common.hpp"

namespace mdsq {

// Upper beta-sieve weights: lambda_d = mu(d) for d = p1...pr with
// p1 > ... > pr taken from the sieve primes below z, provided
//   p1...p_{m-1} * p_m^{beta+1} <= D   for every odd m <= r,
// and lambda_d = 0 otherwise (in particular off squarefree d | P(z), d <= D).

struct SieveConfig {
    u64 z = 2;
    double s_exponent = 3;  // D = z^s
    double kappa = 4;
    unsigned beta = 37;   // 9 kappa + 1
    u64 coprime_to = 1;   // primes dividing this are excluded from P(z)
    bool guarantee = false;  // s >= 9 kappa + 2 (Fundamental Lemma hypothesis)

    double log_D() const { return s_exponent * std::log(static_cast<double>(z)); }

    static SieveConfig make(u64 z, double s_exponent, double kappa = 4,
                            u64 coprime_to = 1);
};

struct SieveWeights {
    SieveConfig cfg;
    std::vector<u64> sieve_primes;  // P(z) primes, ascending

    // lambda_d for arbitrary d; 0 off the support
    int lambda(u64 d) const;
    // number of supported entries (enumeration count; may be large)
    u64 support_size() const;
    // visit every (d, lambda_d) with lambda_d != 0; throws BudgetExceeded past
    // the cap.  d values fit u64 only when the support is shallow; entries with
    // log d > 63 log 2 are reported via their factor chain instead.
    void for_each_entry(const std::function<void(u64 d, int lambda)>& fn,
                        u64 cap = 1000000) const;
};

SieveWeights build_weights(const SieveConfig& cfg);

// Lemma-2.11(ii) check at a single n: 1_{(n,P(z))=1} <= sum_{d|n} lambda_d.
bool upper_bound_check(u64 n, const SieveWeights& w);

// Exhaustive scan over 1 <= n <= n_max; returns the number of violations.
u64 count_violations(const SieveWeights& w, u64 n_max);

struct DensitySum {
    double value = 0;    // sum_d lambda_d g(d)
    double product = 0;  // prod_{p in P(z)} (1 - g(p))
    double ratio = 0;    // value / product
    bool exact = false;  // rational path taken (small prime sets only)
    Rational value_exact, product_exact;
};

// g must be multiplicative with 0 <= g(p) < 1 on the sieve primes.
DensitySum weighted_density_sum(const SieveWeights& w,
                                const std::function<Rational(u64)>& g_at_prime);

// The section-4 density g(h) = rho(h; a, b) / h^2.
DensitySum weighted_density_sum_quad(const SieveWeights& w, u64 a, u64 b);

}  // namespace mdsq
