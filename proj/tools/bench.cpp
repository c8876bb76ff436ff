// Benchmark: OpenMP kernels against their serial reference implementations.
// Prints one line per case with serial time, parallel time and speedup, and
// cross-checks that both paths agree before timing is reported.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "mdsq/digitset.hpp"
#include "mdsq/primes.hpp"
#include "mdsq/repcount.hpp"

using namespace mdsq;

namespace {

double seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void bench_sieve(u64 hi) {
    PrimeTable serial, parallel;
    double ts = seconds([&] { serial = sieve_serial(2, hi); });
    double tp = seconds([&] { parallel = sieve(2, hi); });
    bool ok = serial.primes == parallel.primes &&
              serial.prime_powers.size() == parallel.prime_powers.size();
    std::printf("sieve        hi=%-12llu serial=%8.3fs parallel=%8.3fs speedup=%5.2fx %s\n",
                static_cast<unsigned long long>(hi), ts, tp, ts / tp,
                ok ? "match" : "MISMATCH");
}

void bench_ledger(u64 X, const DigitSet& ds) {
    Ledger serial, parallel;
    double ts = seconds([&] { serial = build_ledger_serial(X, ds); });
    double tp = seconds([&] { parallel = build_ledger(X, ds); });
    bool ok = serial.rstar_sum == parallel.rstar_sum &&
              serial.rstar_sq_sum == parallel.rstar_sq_sum &&
              serial.nonzero_count == parallel.nonzero_count &&
              serial.r2_sum == parallel.r2_sum;  // bitwise: fixed reduction order
    std::printf("ledger       X=%-13llu serial=%8.3fs parallel=%8.3fs speedup=%5.2fx %s\n",
                static_cast<unsigned long long>(X), ts, tp, ts / tp,
                ok ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    u64 sieve_hi = 100000000ull;  // 10^8
    u64 ledger_x = 1000000000ull;  // 10^9
    if (argc > 1) sieve_hi = std::stoull(argv[1]);
    if (argc > 2) ledger_x = std::stoull(argv[2]);

    std::printf("threads: %d\n", omp_get_max_threads());
    bench_sieve(sieve_hi);
    auto ds = DigitSet::make(10, {7});
    bench_ledger(ledger_x, ds);
    return 0;
}
