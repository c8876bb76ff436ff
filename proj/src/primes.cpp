#include "mdsq/primes.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace mdsq {

double PrimeTable::lambda(u64 n) const {
    auto it = std::lower_bound(prime_powers.begin(), prime_powers.end(),
                               std::make_pair(n, 0.0));
    if (it != prime_powers.end() && it->first == n) return it->second;
    return 0.0;
}

double PrimeTable::psi() const {
    double s = 0;
    for (auto& [n, l] : prime_powers) s += l;
    return s;
}

namespace {

constexpr u64 kSegmentSize = 1ull << 22;  // cache-resident bitmap

// primes up to n by a plain sieve; n is at most sqrt(hi) <= 10^6
std::vector<u64> base_primes(u64 n) {
    std::vector<char> is_p(n + 1, 1);
    std::vector<u64> out;
    for (u64 i = 2; i <= n; ++i) {
        if (!is_p[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= n; j += i) is_p[j] = 0;
    }
    return out;
}

// sieve one segment [s_lo, s_hi] into a list of primes
void sieve_segment(u64 s_lo, u64 s_hi, const std::vector<u64>& base,
                   std::vector<u64>& out) {
    std::vector<char> flags(s_hi - s_lo + 1, 1);
    for (u64 p : base) {
        if (p * p > s_hi) break;
        u64 start = std::max(p * p, (s_lo + p - 1) / p * p);
        for (u64 j = start; j <= s_hi; j += p) flags[j - s_lo] = 0;
    }
    for (u64 n = std::max<u64>(s_lo, 2); n <= s_hi; ++n)
        if (flags[n - s_lo]) out.push_back(n);
}

void fill_prime_powers(PrimeTable& pt, const std::vector<u64>& base) {
    for (u64 p : pt.primes) pt.prime_powers.emplace_back(p, std::log(static_cast<double>(p)));
    // proper powers p^m in [lo, hi] come from base primes p <= sqrt(hi)
    for (u64 p : base) {
        double lp = std::log(static_cast<double>(p));
        u128 pm = (u128)p * p;
        while (pm <= pt.hi) {
            if ((u64)pm >= pt.lo) pt.prime_powers.emplace_back((u64)pm, lp);
            pm *= p;
        }
    }
    std::sort(pt.prime_powers.begin(), pt.prime_powers.end());
}

void check_window(u64 lo, u64 hi, u64 budget) {
    if (lo < 2 || lo > hi) throw ConfigError("need 2 <= lo <= hi");
    if (hi > 1000000000000ull) throw BudgetExceeded("sieve window beyond 10^12");
    if (hi - lo + 1 > budget) throw BudgetExceeded("sieve window exceeds segment budget");
}

}  // namespace

PrimeTable sieve_serial(u64 lo, u64 hi, u64 budget) {
    check_window(lo, hi, budget);
    PrimeTable pt;
    pt.lo = lo;
    pt.hi = hi;
    auto base = base_primes(isqrt_u64(hi));
    for (u64 s_lo = lo; s_lo <= hi; s_lo += kSegmentSize) {
        u64 s_hi = std::min(hi, s_lo + kSegmentSize - 1);
        sieve_segment(s_lo, s_hi, base, pt.primes);
    }
    fill_prime_powers(pt, base);
    return pt;
}

PrimeTable sieve(u64 lo, u64 hi, u64 budget) {
    check_window(lo, hi, budget);
    PrimeTable pt;
    pt.lo = lo;
    pt.hi = hi;
    auto base = base_primes(isqrt_u64(hi));

    const u64 nseg = (hi - lo) / kSegmentSize + 1;
    std::vector<std::vector<u64>> per_segment(nseg);
#pragma omp parallel for schedule(dynamic)
    for (u64 i = 0; i < nseg; ++i) {
        u64 s_lo = lo + i * kSegmentSize;
        u64 s_hi = std::min(hi, s_lo + kSegmentSize - 1);
        sieve_segment(s_lo, s_hi, base, per_segment[i]);
    }
    for (auto& seg : per_segment)
        pt.primes.insert(pt.primes.end(), seg.begin(), seg.end());
    fill_prime_powers(pt, base);
    return pt;
}

std::vector<u64> primes_coprime_to(u64 m, u64 lo, u64 hi) {
    if (m < 1) throw ConfigError("modulus must be >= 1");
    if (lo < 2) lo = 2;
    if (lo > hi) return {};
    auto pt = sieve(lo, hi);
    std::vector<u64> out;
    for (u64 p : pt.primes)
        if (gcd_u64(p, m) == 1) out.push_back(p);
    return out;
}

}  // namespace mdsq
