#pragma once

#include <vector>

#include "mdsq/common.hpp"

namespace mdsq {

// Primes and von Mangoldt support on a window [lo, hi].
struct PrimeTable {
    u64 lo = 2, hi = 2;
    std::vector<u64> primes;                          // sorted primes in [lo, hi]
    std::vector<std::pair<u64, double>> prime_powers; // sorted (n, Lambda(n)) for
                                                      // prime powers in [lo, hi]

    double lambda(u64 n) const;  // Lambda(n), 0 off prime powers
    double psi() const;          // sum of Lambda over the window
};

inline constexpr u64 kDefaultSegmentBudget = 1ull << 30;

// Segmented sieve of Eratosthenes.  The window length is capped by `budget`;
// exceeding it throws BudgetExceeded before any work is done.
PrimeTable sieve(u64 lo, u64 hi, u64 budget = kDefaultSegmentBudget);

// Serial reference implementation, same contract, used by tests and the
// benchmark as the baseline for the parallel kernel.
PrimeTable sieve_serial(u64 lo, u64 hi, u64 budget = kDefaultSegmentBudget);

std::vector<u64> primes_coprime_to(u64 m, u64 lo, u64 hi);

}  // namespace mdsq
