#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mdsq/digitset.hpp"
#include "mdsq/primes.hpp"
#include "mdsq/repcount.hpp"

using namespace mdsq;

namespace {

const double kPi = 3.14159265358979323846;

// independent r2 mass over members: direct double loop with Lambda lookups
double brute_r2_sum(u64 X, const DigitSet& ds) {
    auto pt = sieve(2, isqrt_u64(X));
    double total = 0;
    for (auto [a, la] : pt.prime_powers)
        for (auto [b, lb] : pt.prime_powers) {
            u64 n = a * a + b * b;
            if (n <= X && is_member(n, ds)) total += la * lb;
        }
    return total;
}

DigitSet trivial() { return DigitSet::make(10, {}); }

}  // namespace

TEST_CASE("ledger at X = 50, forbidden digit 9") {
    auto ds = DigitSet::make(10, {9});
    auto led = build_ledger(50, ds);
    // represented members: 8=(2,2), 13=(2,3)(3,2), 18=(3,3), 34=(3,5)(5,3),
    // 50=(5,5); 29 carries the forbidden digit
    CHECK(led.rstar_sum == 7);
    CHECK(led.nonzero_count == 5);
    CHECK(led.gt2_count == 0);
    CHECK(led.histogram == std::map<u64, u64>{{1, 3}, {2, 2}});
    CHECK(led.rstar_sq_sum == 3 * 1 + 2 * 4);
    CHECK(led.quadruple_count == 0);
    CHECK(led.member_count == count_leq(50, ds));
    CHECK(led.r2_sum == doctest::Approx(brute_r2_sum(50, ds)).epsilon(1e-12));
}

TEST_CASE("r2 of a single representation") {
    auto led = build_ledger(8, DigitSet::make(10, {9}));
    double l2 = std::log(2.0);
    CHECK(led.r2_sum == doctest::Approx(l2 * l2).epsilon(1e-12));
    CHECK(led.rstar_sum == 1);
}

TEST_CASE("r_star examples") {
    auto r338 = r_star(338);
    CHECK(r338.count == 3);
    REQUIRE(r338.reps.size() == 3);
    CHECK(r338.reps[0].p == 7);
    CHECK(r338.reps[0].q == 17);
    CHECK(r338.reps[1].p == 13);
    CHECK(r338.reps[1].q == 13);
    CHECK(r338.reps[2].p == 17);
    CHECK(r338.reps[2].q == 7);
    CHECK(r_star(4).count == 0);
    CHECK(r_star(53).count == 2);
}

TEST_CASE("off-diagonal counting") {
    // 338 = 7^2+17^2 = 13^2+13^2 is the first collision
    auto od = off_diagonal_count(400, trivial());
    CHECK(od.quadruple_count == 4);  // 2 ordered reps of {7,17} x {13,13}, both orders
    CHECK(quadruple_count_bruteforce(400, trivial()) == 4);
    CHECK(quadruple_count_bruteforce(337, trivial()) == 0);
    CHECK(off_diagonal_count(50, DigitSet::make(10, {9})).quadruple_count == 0);

    // ledger agrees with the brute-force recount on a bigger window
    for (u64 X : {10000ull, 100000ull}) {
        auto led = build_ledger(X, trivial());
        CHECK(led.quadruple_count == quadruple_count_bruteforce(X, trivial()));
    }
    auto ds7 = DigitSet::make(10, {7});
    auto led7 = build_ledger(100000, ds7);
    CHECK(led7.quadruple_count == quadruple_count_bruteforce(100000, ds7));
}

TEST_CASE("defect equals quadruples minus diagonal representations") {
    // per n: (r^2 - 2r) - (r^2 - sum of class sizes squared) = -#{(p,p) reps}
    for (u64 X : {400ull, 50000ull}) {
        auto led = build_ledger(X, trivial());
        u64 diag = 0;
        auto pt = sieve(2, isqrt_u64(X / 2));
        for (u64 p : pt.primes)
            if (2 * p * p <= X && is_member(2 * p * p, trivial())) ++diag;
        CHECK(led.defect_sum == static_cast<i64>(led.quadruple_count) - static_cast<i64>(diag));
    }
}

TEST_CASE("nonzero counts") {
    auto nz = nonzero_count(50, DigitSet::make(10, {7}));
    // represented members avoiding digit 7: 8, 13, 18, 29, 34, 50
    CHECK(nz.nonzero == 6);
    u64 masses = 0;
    for (auto& [v, c] : nz.histogram) masses += c;
    CHECK(masses == nz.nonzero);
    CHECK(nonzero_count(8, trivial()).nonzero == 1);
}

TEST_CASE("sandwich inequality on ledgers") {
    for (u64 X : {1000ull, 100000ull, 1000000ull}) {
        auto led = build_ledger(X, DigitSet::make(10, {7}));
        double lhs = static_cast<double>(led.rstar_sum) * led.rstar_sum /
                     static_cast<double>(led.rstar_sq_sum);
        CHECK(lhs <= static_cast<double>(led.nonzero_count) * (1 + 1e-12));
        CHECK(led.nonzero_count <= led.rstar_sum);
    }
}

TEST_CASE("corollary bracketing at X = 10^6") {
    auto led = build_ledger(1000000, DigitSet::make(10, {7}));
    double lq = std::log(std::pow(1e6, 0.25));
    double lh = std::log(std::sqrt(1e6));
    CHECK(lq * lq * static_cast<double>(led.big_pair_count) < led.r2_sum);
    CHECK(led.r2_sum <= lh * lh * static_cast<double>(led.rstar_sum));
}

TEST_CASE("parallel ledger equals serial reference") {
    auto ds = DigitSet::make(10, {7});
    auto a = build_ledger(1000000, ds, true);
    auto b = build_ledger_serial(1000000, ds, true);
    CHECK(a.rstar_sum == b.rstar_sum);
    CHECK(a.rstar_sq_sum == b.rstar_sq_sum);
    CHECK(a.nonzero_count == b.nonzero_count);
    CHECK(a.quadruple_count == b.quadruple_count);
    CHECK(a.defect_sum == b.defect_sum);
    CHECK(a.histogram == b.histogram);
    CHECK(a.big_pair_count == b.big_pair_count);
    CHECK(a.r2_sum == b.r2_sum);  // bitwise: fixed reduction order
    CHECK(a.r1_sum == b.r1_sum);
    CHECK(a.rtilde_sum == b.rtilde_sum);
}

TEST_CASE("r1 and rtilde masses at small X") {
    auto ds = DigitSet::make(10, {9});
    auto led = build_ledger(100, ds, true);
    REQUIRE(led.tilde_valid);
    // brute: r1 over members, b >= 1 integer, a prime power
    auto pt = sieve(2, 10);
    double r1 = 0;
    u64 rt = 0;
    for (auto [a, la] : pt.prime_powers)
        for (u64 b = 1; b * b + a * a <= 100; ++b)
            if (is_member(a * a + b * b, ds)) {
                r1 += la;
                if (pt.lambda(a) > 0 &&
                    std::find(pt.primes.begin(), pt.primes.end(), a) != pt.primes.end())
                    ++rt;
            }
    CHECK(led.r1_sum == doctest::Approx(r1).epsilon(1e-12));
    CHECK(led.rtilde_sum == rt);
    CHECK_THROWS_AS(build_ledger(1000000000ull, ds, true), BudgetExceeded);
}

TEST_CASE("collision list and gaussian split") {
    auto cols = collision_list(100000, trivial());
    REQUIRE(!cols.empty());
    CHECK(cols.front().n == 338);
    REQUIRE(cols.front().reps.size() == 2);

    Representation r1{7, 17, 338}, r2{13, 13, 338};
    auto quad = gaussian_factor_collision(r1, r2);
    CHECK_FALSE(quad.degenerate);
    CHECK(quad.z * quad.w == Gaussian{7, 17});
    CHECK(kUnits[quad.unit_power] * (quad.z * quad.w.conj()) == Gaussian{13, 13});
    CHECK(quad.z.norm() * quad.w.norm() == 338);

    // the worked identities: 1+i is a common factor, 7+17i=(1+i)(12+5i), 13+13i=13(1+i)
    CHECK(Gaussian{1, 1} * Gaussian{12, 5} == Gaussian{7, 17});
    CHECK(Gaussian{13, 0} * Gaussian{1, 1} == Gaussian{13, 13});
    Gaussian q;
    CHECK(gaussian_div_exact(quad.z, Gaussian{1, 1}, q));  // gcd is divisible by 1+i

    CHECK_THROWS_AS(gaussian_factor_collision(Representation{2, 7, 53},
                                              Representation{7, 2, 53}),
                    ConfigError);
    CHECK_THROWS_AS(gaussian_factor_collision(r1, Representation{2, 7, 53}), ConfigError);

    // every collision up to 10^6 splits and round-trips
    for (const auto& c : collision_list(1000000, trivial()))
        for (size_t i = 0; i < c.reps.size(); ++i)
            for (size_t j = i + 1; j < c.reps.size(); ++j) {
                auto g = gaussian_factor_collision(c.reps[i], c.reps[j]);
                REQUIRE_FALSE(g.degenerate);
                Gaussian z1{static_cast<i64>(c.reps[i].p), static_cast<i64>(c.reps[i].q)};
                Gaussian z2{static_cast<i64>(c.reps[j].p), static_cast<i64>(c.reps[j].q)};
                REQUIRE(g.z * g.w == z1);
                REQUIRE(kUnits[g.unit_power] * (g.z * g.w.conj()) == z2);
            }
}

TEST_CASE("short intervals") {
    auto iv = short_interval_r2(0, 1000000);
    CHECK(iv.sum / iv.main_term > 0.9);
    CHECK(iv.sum / iv.main_term < 1.1);
    CHECK(short_interval_r2(2, 1).sum == 0.0);  // 3 is not a sum of two prime powers squared
    // consistency with the ledger total at the same bound
    auto led = build_ledger(10000, trivial());
    CHECK(short_interval_r2(0, 10000).sum == doctest::Approx(led.r2_sum).epsilon(1e-9));
}

TEST_CASE("lattice counts") {
    auto lc = lattice_count_ap(1000000, 1, 1, 1);
    CHECK(std::fabs(static_cast<double>(lc.count) - kPi / 4 * 1e6) < 4000);

    // brute force at x=100, q=10, (u,v)=(3,4)
    u64 brute = 0;
    for (u64 a = 3; a * a <= 100; a += 10)
        for (u64 b = 4; a * a + b * b <= 100; b += 10) ++brute;
    CHECK(lattice_count_ap(100, 10, 3, 4).count == brute);
    CHECK(lattice_count_ap(20, 10, 3, 4).count == 0);  // x < u^2 + v^2
    CHECK_THROWS_AS(lattice_count_ap(100, 10, 0, 4), ConfigError);
    CHECK_THROWS_AS(lattice_count_ap(100, 10, 11, 4), ConfigError);
}

TEST_CASE("bias table consistency") {
    const u64 X = 100000;
    auto rows = bias_table(X, 10);
    REQUIRE(rows.size() == 10);
    for (unsigned b = 0; b < 10; ++b) {
        auto ds = DigitSet::make(10, {b});
        auto led = build_ledger(X, ds);
        CHECK(rows[b].member_count == led.member_count);
        CHECK(rows[b].rstar_sum == led.rstar_sum);
        CHECK(rows[b].r2_sum == doctest::Approx(led.r2_sum).epsilon(1e-9));
    }
}

TEST_CASE("ledger budget guard") {
    CHECK_THROWS_AS(build_ledger(200000000000ull, trivial()), BudgetExceeded);
}
