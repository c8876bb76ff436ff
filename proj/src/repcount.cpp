#include "mdsq/repcount.hpp"

#include <algorithm>
#include <cmath>

#include "mdsq/primes.hpp"

namespace mdsq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic Miller-Rabin, valid for all 64-bit n.
bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool member_fast(u64 n, const DigitSet& ds) {
    const u64 g = ds.g;
    const u32 mask = ds.forbidden_mask;
    while (n) {
        if ((mask >> (n % g)) & 1u) return false;
        n /= g;
    }
    return true;
}

u32 digit_mask(u64 n, u64 g) {
    u32 m = 0;
    while (n) {
        m |= 1u << (n % g);
        n /= g;
    }
    return m;
}

// Packed per-pair record for the rstar ledger: (n << 1) | (p == q).
void scan_runs(std::vector<u64>& packed, Ledger& led) {
    std::sort(packed.begin(), packed.end());
    size_t i = 0;
    while (i < packed.size()) {
        u64 n = packed[i] >> 1;
        u64 c = 0, d = 0;  // off-diagonal multisets, diagonal reps
        size_t j = i;
        while (j < packed.size() && (packed[j] >> 1) == n) {
            if (packed[j] & 1)
                ++d;
            else
                ++c;
            ++j;
        }
        u64 rstar = 2 * c + d;
        led.rstar_sum += rstar;
        led.rstar_sq_sum += rstar * rstar;
        ++led.nonzero_count;
        if (rstar > 2) ++led.gt2_count;
        led.quadruple_count += rstar * rstar - 4 * c - d;
        led.defect_sum += static_cast<i64>(rstar * rstar) - 2 * static_cast<i64>(rstar);
        ++led.histogram[rstar];
        i = j;
    }
}

Ledger build_impl(u64 X, const DigitSet& ds, bool with_tilde, bool parallel) {
    if (X > kLedgerBudget) throw BudgetExceeded("ledger bound beyond 10^11");
    if (X < 8) {
        Ledger led;
        led.X = X;
        led.ds = ds;
        led.member_count = X ? count_leq(X, ds) : 0;
        return led;
    }
    Ledger led;
    led.X = X;
    led.ds = ds;
    led.member_count = count_leq(X, ds);

    const u64 root = isqrt_u64(X);
    auto pt = sieve(2, root);
    const auto& primes = pt.primes;
    const auto& pp = pt.prime_powers;
    const u64 x4 = isqrt_u64(root);  // X^{1/4}

    // rstar pass: unordered prime pairs with member sums
    std::vector<u64> packed;
    u64 big_pairs = 0;
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : big_pairs) if (parallel)
    for (size_t i = 0; i < primes.size(); ++i) {
        u64 p = primes[i];
        u64 p2 = p * p;
        if (p2 + p2 > X) continue;
        std::vector<u64> local;
        for (size_t j = i; j < primes.size(); ++j) {
            u64 q = primes[j];
            u64 n = p2 + q * q;
            if (n > X) break;
            if (!member_fast(n, ds)) continue;
            local.push_back((n << 1) | (p == q ? 1 : 0));
            if (p > x4) big_pairs += (p == q) ? 1 : 2;
        }
#pragma omp critical
        packed.insert(packed.end(), local.begin(), local.end());
    }
    led.big_pair_count = big_pairs;
    scan_runs(packed, led);
    packed.clear();
    packed.shrink_to_fit();

    // r2 pass over prime-power pairs; per-outer partials keep the double
    // reduction deterministic under any schedule
    std::vector<double> partial(pp.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
    for (size_t i = 0; i < pp.size(); ++i) {
        auto [a, la] = pp[i];
        u64 a2 = a * a;
        if (a2 + a2 > X) continue;
        double acc = 0;
        for (size_t j = i; j < pp.size(); ++j) {
            auto [b, lb] = pp[j];
            u64 n = a2 + b * b;
            if (n > X) break;
            if (!member_fast(n, ds)) continue;
            acc += (i == j ? 1.0 : 2.0) * la * lb;
        }
        partial[i] = acc;
    }
    for (double v : partial) led.r2_sum += v;

    if (with_tilde) {
        if (X > kTildeBudget) throw BudgetExceeded("r1/rtilde scan beyond 10^8");
        led.tilde_valid = true;
        std::vector<double> part1(pp.size(), 0.0);
        std::vector<u64> partt(pp.size(), 0);
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
        for (size_t i = 0; i < pp.size(); ++i) {
            auto [a, la] = pp[i];
            u64 a2 = a * a;
            if (a2 >= X) continue;
            bool a_prime = std::binary_search(primes.begin(), primes.end(), a);
            u64 hits = 0;
            u64 bmax = isqrt_u64(X - a2);
            for (u64 b = 1; b <= bmax; ++b)
                if (member_fast(a2 + b * b, ds)) ++hits;
            part1[i] = la * static_cast<double>(hits);
            if (a_prime) partt[i] = hits;
        }
        for (size_t i = 0; i < pp.size(); ++i) {
            led.r1_sum += part1[i];
            led.rtilde_sum += partt[i];
        }
    }
    return led;
}

}  // namespace

Ledger build_ledger(u64 X, const DigitSet& ds, bool with_tilde) {
    return build_impl(X, ds, with_tilde, true);
}

Ledger build_ledger_serial(u64 X, const DigitSet& ds, bool with_tilde) {
    return build_impl(X, ds, with_tilde, false);
}

RStarResult r_star(u64 n) {
    RStarResult out;
    if (n < 8) return out;
    auto pt = sieve(2, isqrt_u64(n - 4));
    for (u64 p : pt.primes) {
        u64 p2 = p * p;
        if (p2 + 4 > n) break;
        u64 m = n - p2;
        u64 q = isqrt_u64(m);
        if (q * q == m && is_prime_u64(q)) {
            out.reps.push_back({p, q, n});
            ++out.count;
        }
    }
    return out;
}

OffDiagonal off_diagonal_count(u64 X, const DigitSet& ds) {
    auto led = build_ledger(X, ds);
    return {led.quadruple_count, led.defect_sum};
}

u64 quadruple_count_bruteforce(u64 X, const DigitSet& ds) {
    if (X > 1000000) throw BudgetExceeded("brute-force quadruple scan limited to 10^6");
    auto pt = sieve(2, isqrt_u64(std::max<u64>(X, 8) - 4));
    u64 total = 0;
    for_each_member(8, X, ds, [&](u64 n) {
        std::vector<std::pair<u64, u64>> multisets;  // (min, max), one per ordered rep
        for (u64 p : pt.primes) {
            u64 p2 = p * p;
            if (p2 + 4 > n) break;
            u64 m = n - p2;
            u64 q = isqrt_u64(m);
            if (q * q == m && is_prime_u64(q))
                multisets.emplace_back(std::min(p, q), std::max(p, q));
        }
        for (size_t i = 0; i < multisets.size(); ++i)
            for (size_t j = 0; j < multisets.size(); ++j)
                if (multisets[i] != multisets[j]) ++total;
    });
    return total;
}

NonzeroCount nonzero_count(u64 X, const DigitSet& ds) {
    auto led = build_ledger(X, ds);
    return {led.nonzero_count, led.gt2_count, led.histogram};
}

std::vector<Collision> collision_list(u64 X, const DigitSet& ds) {
    if (X > 1000000000ull) throw BudgetExceeded("collision list limited to 10^9");
    auto pt = sieve(2, isqrt_u64(std::max<u64>(X, 8)));
    const auto& primes = pt.primes;
    std::vector<Representation> triples;
    for (size_t i = 0; i < primes.size(); ++i) {
        u64 p = primes[i], p2 = p * p;
        if (p2 + p2 > X) break;
        for (size_t j = i; j < primes.size(); ++j) {
            u64 q = primes[j];
            u64 n = p2 + q * q;
            if (n > X) break;
            if (member_fast(n, ds)) triples.push_back({p, q, n});
        }
    }
    std::sort(triples.begin(), triples.end(), [](const auto& a, const auto& b) {
        return a.n != b.n ? a.n < b.n : a.p < b.p;
    });
    std::vector<Collision> out;
    size_t i = 0;
    while (i < triples.size()) {
        size_t j = i;
        while (j < triples.size() && triples[j].n == triples[i].n) ++j;
        if (j - i >= 2) {
            Collision c;
            c.n = triples[i].n;
            c.reps.assign(triples.begin() + i, triples.begin() + j);
            out.push_back(std::move(c));
        }
        i = j;
    }
    return out;
}

CollisionQuadruple gaussian_factor_collision(const Representation& rep1,
                                             const Representation& rep2) {
    if (rep1.n != rep2.n) throw ConfigError("collision requires equal sums");
    auto ms = [](const Representation& r) {
        return std::make_pair(std::min(r.p, r.q), std::max(r.p, r.q));
    };
    if (ms(rep1) == ms(rep2)) throw ConfigError("collision requires distinct prime multisets");

    CollisionQuadruple out;
    out.rep1 = rep1;
    out.rep2 = rep2;
    Gaussian z1{static_cast<i64>(rep1.p), static_cast<i64>(rep1.q)};
    Gaussian z2{static_cast<i64>(rep2.p), static_cast<i64>(rep2.q)};
    out.z = gaussian_gcd(z1, z2);
    if (out.z.is_unit() || !gaussian_div_exact(z1, out.z, out.w)) {
        out.degenerate = true;
        return out;
    }
    Gaussian base = out.z * out.w.conj();
    for (int k = 0; k < 4; ++k) {
        if (kUnits[k] * base == z2) {
            out.unit_power = k;
            return out;
        }
    }
    out.degenerate = true;
    return out;
}

IntervalR2 short_interval_r2(u64 t, u64 H) {
    if (t + H > 1000000000000ull) throw BudgetExceeded("interval end beyond 10^12");
    IntervalR2 out;
    out.main_term = kPi / 4.0 * static_cast<double>(H);
    u64 hi = t + H;
    if (hi < 8) return out;
    auto pt = sieve(2, isqrt_u64(hi));
    const auto& pp = pt.prime_powers;
    // ordered pairs (a,b), a^2+b^2 in (t, t+H]
    std::vector<double> partial(pp.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (size_t i = 0; i < pp.size(); ++i) {
        auto [a, la] = pp[i];
        u64 a2 = a * a;
        if (a2 + 4 > hi) continue;
        // b^2 in (t - a^2, hi - a^2]
        u64 blo = (t > a2) ? isqrt_u64(t - a2) : 1;  // largest b with b^2 <= t-a^2
        u64 bhi = isqrt_u64(hi - a2);
        auto it = std::upper_bound(pp.begin(), pp.end(), std::make_pair(blo, 1e18));
        double acc = 0;
        for (; it != pp.end() && it->first <= bhi; ++it) {
            u64 n = a2 + it->first * it->first;
            if (n > t && n <= hi) acc += la * it->second;
        }
        partial[i] = acc;
    }
    for (double v : partial) out.sum += v;
    return out;
}

LatticeCount lattice_count_ap(u64 x, u64 q, u64 u, u64 v) {
    if (q < 1 || u < 1 || v < 1 || u > q || v > q) throw ConfigError("need 0 < u,v <= q");
    LatticeCount out;
    out.main_term = kPi / 4.0 * static_cast<double>(x) / static_cast<double>(q * q);
    for (u64 a = u; a * a < x; a += q) {
        u64 bmax = isqrt_u64(x - a * a);
        if (bmax >= v) out.count += (bmax - v) / q + 1;
    }
    out.error = std::abs(static_cast<double>(out.count) - out.main_term);
    out.fitted_C = out.error * static_cast<double>(q) / std::sqrt(static_cast<double>(x));
    return out;
}

std::vector<BiasRow> bias_table(u64 X, unsigned g) {
    if (g < 2 || g > 32) throw ConfigError("bias table supports 2 <= g <= 32");
    if (X > kLedgerBudget) throw BudgetExceeded("ledger bound beyond 10^11");
    std::vector<BiasRow> rows(g);
    for (unsigned b = 0; b < g; ++b) {
        rows[b].b = b;
        rows[b].member_count = count_leq(X, DigitSet::make(g, {b}));
    }
    if (X < 8) return rows;

    auto pt = sieve(2, isqrt_u64(X));
    const auto& pp = pt.prime_powers;
    const auto& primes = pt.primes;

    // r2 mass per missing digit, one pass: a pair's sum contributes to every
    // digit absent from its expansion
    std::vector<std::vector<double>> part2(pp.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (size_t i = 0; i < pp.size(); ++i) {
        auto [a, la] = pp[i];
        u64 a2 = a * a;
        if (a2 + a2 > X) continue;
        std::vector<double> acc(g, 0.0);
        for (size_t j = i; j < pp.size(); ++j) {
            auto [b, lb] = pp[j];
            u64 n = a2 + b * b;
            if (n > X) break;
            u32 mask = digit_mask(n, g);
            double w = (i == j ? 1.0 : 2.0) * la * lb;
            for (unsigned d = 0; d < g; ++d)
                if (!((mask >> d) & 1u)) acc[d] += w;
        }
        part2[i] = std::move(acc);
    }
    for (const auto& acc : part2)
        for (unsigned d = 0; d < acc.size(); ++d) rows[d].r2_sum += acc[d];
    part2.clear();

    std::vector<u64> star(g, 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (size_t i = 0; i < primes.size(); ++i) {
        u64 p = primes[i], p2 = p * p;
        if (p2 + p2 > X) continue;
        std::vector<u64> acc(g, 0);
        for (size_t j = i; j < primes.size(); ++j) {
            u64 q = primes[j];
            u64 n = p2 + q * q;
            if (n > X) break;
            u32 mask = digit_mask(n, g);
            u64 w = (i == j) ? 1 : 2;
            for (unsigned d = 0; d < g; ++d)
                if (!((mask >> d) & 1u)) acc[d] += w;
        }
#pragma omp critical
        for (unsigned d = 0; d < g; ++d) star[d] += acc[d];
    }
    for (unsigned d = 0; d < g; ++d) rows[d].rstar_sum = star[d];
    return rows;
}

}  // namespace mdsq
