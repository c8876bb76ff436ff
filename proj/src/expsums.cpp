#include "mdsq/expsums.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mdsq/primes.hpp"

namespace mdsq {

namespace {

u64 pow2_at_least(double x) {
    u64 p = 1;
    while (static_cast<double>(p) < x) p <<= 1;
    return p;
}

// alpha * m mod 1 for integer m, via the mod-1 residue of alpha scaled in two
// steps so the argument never grows past ~m.
double frac_times(long double alpha_frac, u64 m) {
    long double v = std::fmod(alpha_frac * static_cast<long double>(m), 1.0L);
    if (v < 0) v += 1.0L;
    return static_cast<double>(v);
}

}  // namespace

RationalApprox dirichlet_approx(double alpha, u64 Q) {
    if (Q < 2) throw ConfigError("Dirichlet bound Q must be >= 2");
    if (alpha < 0 || alpha >= 1) throw ConfigError("alpha must lie in [0,1)");
    RationalApprox best;
    best.alpha = alpha;
    best.Q = Q;
    best.r = 0;
    best.s = 1;
    best.xi = alpha;

    // continued-fraction convergents p/q of alpha
    u64 p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;  // 0/1 is the first convergent
    double x = alpha;
    bool found = std::fabs(alpha) <= 1.0 / static_cast<double>(Q);
    for (int it = 0; it < 64 && !found; ++it) {
        if (x < 1e-15) break;
        x = 1.0 / x;
        double a = std::floor(x);
        if (a > 1e18) break;
        x -= a;
        u64 ai = static_cast<u64>(a);
        u64 p_next = ai * p_cur + p_prev;
        u64 q_next = ai * q_cur + q_prev;
        if (q_next > Q) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        double xi = alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur);
        if (std::fabs(xi) <= 1.0 / (static_cast<double>(q_cur) * static_cast<double>(Q))) {
            best.r = p_cur;
            best.s = q_cur;
            best.xi = xi;
            found = true;
        }
    }
    if (!found) {
        // the final convergent with q <= Q always qualifies
        best.r = p_cur;
        best.s = q_cur;
        best.xi = alpha - static_cast<double>(p_cur) / static_cast<double>(q_cur);
    }
    return best;
}

double ArcPartition::denom_bound() const {
    double lx = std::log(static_cast<double>(X));
    return mode == ArcMode::section3 ? std::pow(lx, B) : std::exp(eta_g * std::sqrt(lx));
}

double ArcPartition::half_width() const {
    return denom_bound() / static_cast<double>(X);
}

ArcClass classify_arc(u64 a, const ArcPartition& part) {
    if (part.X < 3) throw ConfigError("arc partition needs X >= 3");
    if (a >= part.X) throw ConfigError("need 0 <= a < X");
    const u64 X = part.X;
    const double bound = part.denom_bound();
    const double width = part.half_width();
    const double alpha = static_cast<double>(a) / static_cast<double>(X);

    ArcClass out;
    for (u64 s = 1; static_cast<double>(s) <= bound; ++s) {
        u64 r = (a * s + X / 2) / X;  // nearest integer to alpha*s
        if (r > 0 && gcd_u64(r, s) != 1) continue;
        if (r == 0 && s != 1) continue;
        double diff = alpha - static_cast<double>(r) / static_cast<double>(s);
        if (std::fabs(diff) <= width) {
            out.major = true;
            out.r = r;
            out.s = s;
            out.eta = diff * static_cast<double>(X);
            return out;
        }
    }
    auto ap = dirichlet_approx(alpha, std::max<u64>(2, isqrt_u64(X)));
    out.major = false;
    out.r = ap.r;
    out.s = ap.s;
    out.eta = ap.xi * static_cast<double>(X);
    out.S = pow2_at_least(static_cast<double>(ap.s));
    out.D = pow2_at_least(std::max(1.0, std::fabs(out.eta)));
    return out;
}

PrimeSquareSum prime_square_sum(double alpha, u64 x) {
    if (x > 10000000) throw BudgetExceeded("prime-square sum limited to x <= 10^7");
    PrimeSquareSum out;
    double af = alpha - std::floor(alpha);
    out.value.theta = af;
    if (x >= 2) {
        auto pt = sieve(2, x);
        long double alf = af;
        cplx acc = 0;
        double triv = 0;
        for (auto [n, l] : pt.prime_powers) {
            double arg = frac_times(frac_times(alf, n), n);  // alpha n^2 mod 1
            acc += l * cis(arg);
            triv += l;
            ++out.value.terms;
        }
        out.value.value = acc;
        out.value.trivial_bound = triv;
    }
    out.approx = dirichlet_approx(af, std::max<u64>(2, isqrt_u64(std::max<u64>(x, 4))));
    double xd = static_cast<double>(x);
    out.envelope = std::pow(xd, 0.8) + xd / std::sqrt(static_cast<double>(out.approx.s)) +
                   xd * std::sqrt(static_cast<double>(out.approx.s) * std::fabs(out.approx.xi));
    out.fitted_const = std::abs(out.value.value) / out.envelope;
    return out;
}

namespace {

template <typename Phase>
ExpSumValue r2_exp_sum_impl(double theta, u64 N, Phase e_at) {
    if (N > 1000000000ull) throw BudgetExceeded("r2 exponential sum limited to N <= 10^9");
    ExpSumValue out;
    out.theta = theta;
    if (N < 8) return out;
    auto pt = sieve(2, isqrt_u64(N));
    const auto& pp = pt.prime_powers;
    cplx acc = 0;
    double triv = 0;
    for (size_t i = 0; i < pp.size(); ++i) {
        auto [a, la] = pp[i];
        u64 a2 = a * a;
        if (a2 + a2 > N) break;
        for (size_t j = i; j < pp.size(); ++j) {
            auto [b, lb] = pp[j];
            u64 n = a2 + b * b;
            if (n > N) break;
            double w = (i == j ? 1.0 : 2.0) * la * lb;
            acc += w * e_at(n);
            triv += w;
            out.terms += (i == j) ? 1 : 2;
        }
    }
    out.value = acc;
    out.trivial_bound = triv;
    return out;
}

}  // namespace

ExpSumValue r2_exp_sum(double theta, u64 N) {
    long double tf = theta - std::floor(theta);
    return r2_exp_sum_impl(static_cast<double>(tf), N,
                           [tf](u64 n) { return cis(frac_times(tf, n)); });
}

ExpSumValue r2_exp_sum_frac(u64 num, u64 den, u64 N) {
    num %= den;
    return r2_exp_sum_impl(static_cast<double>(num) / den, N,
                           [num, den](u64 n) { return cis_frac(mulmod(num, n % den, den), den); });
}

ExpSumValue double_quadratic_sum(double alpha, const std::vector<double>& a_n, u64 M1,
                                 u64 M2, u64 h, u64 u, u64 v) {
    if (h < 1) throw ConfigError("modulus h must be >= 1");
    const u64 N = a_n.size();
    double work = static_cast<double>(N) * (static_cast<double>(M1) / h + 1) *
                  (static_cast<double>(M2) / h + 1);
    if (work > 2e8) throw BudgetExceeded("double quadratic sum too large");
    for (u64 n = 1; n <= N; ++n) {
        u64 tau = 0;
        for (u64 d = 1; d * d <= n; ++d)
            if (n % d == 0) tau += (d * d == n) ? 1 : 2;
        if (std::fabs(a_n[n - 1]) > static_cast<double>(tau) + 1e-12)
            throw ConfigError("weight exceeds divisor bound at n=" + std::to_string(n));
    }
    u %= h;
    v %= h;
    const u64 m1_0 = (u == 0) ? h : u;
    const u64 m2_0 = (v == 0) ? h : v;

    ExpSumValue out;
    long double af = alpha - std::floor(alpha);
    out.theta = static_cast<double>(af);
    cplx acc = 0;
    double triv = 0;
    for (u64 n = 1; n <= N; ++n) {
        if (a_n[n - 1] == 0.0) continue;
        long double tn = std::fmod(af * static_cast<long double>(n), 1.0L);
        cplx inner = 0;
        for (u64 m1 = m1_0; m1 <= M1; m1 += h)
            for (u64 m2 = m2_0; m2 <= M2; m2 += h) {
                inner += cis(frac_times(tn, m1 * m1 + m2 * m2));
                ++out.terms;
                triv += std::fabs(a_n[n - 1]);
            }
        acc += a_n[n - 1] * inner;
    }
    out.value = acc;
    out.trivial_bound = triv;
    return out;
}

MainTermReport reconstruct_main_term(unsigned k, const DigitSet& ds, double B) {
    StringModel sm{ds, k};
    const u64 X = sm.X();
    if (k < 2 || X > 2000000) throw BudgetExceeded("reconstruction needs 2 <= k, g^k <= 2*10^6");

    MainTermReport rep;
    rep.X = X;

    // r2 array on [1, X], index mod X (n = X lands on 0, matching e(aX/X) = 1)
    std::vector<double> r2arr(X, 0.0);
    auto pt = sieve(2, isqrt_u64(X));
    const auto& pp = pt.prime_powers;
    for (size_t i = 0; i < pp.size(); ++i) {
        auto [a, la] = pp[i];
        u64 a2 = a * a;
        if (a2 + a2 > X) break;
        for (size_t j = i; j < pp.size(); ++j) {
            auto [b, lb] = pp[j];
            u64 n = a2 + b * b;
            if (n > X) break;
            double w = (i == j ? 1.0 : 2.0) * la * lb;
            r2arr[n % X] += w;
            if (is_member(n, ds)) rep.exact += w;
        }
    }

    // S(-a/X) for all a in one forward transform
    std::vector<cplx> in(X), spec(X);
    for (u64 n = 0; n < X; ++n) in[n] = r2arr[n];
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(X),
                                      reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(spec.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    ArcPartition part{X, ArcMode::section3, B};
    std::map<std::pair<u64, u64>, double> major_rows;
    std::map<std::pair<u64, u64>, double> minor_rows;
    cplx total = 0, major = 0, minor = 0;
    for (u64 a = 0; a < X; ++a) {
        cplx contrib = transform_ax_frac(a, X, sm) * spec[a] / static_cast<double>(X);
        total += contrib;
        auto cls = classify_arc(a, part);
        if (cls.major) {
            major += contrib;
            ++rep.major_points;
            major_rows[{cls.r, cls.s}] += std::abs(contrib);
        } else {
            minor += contrib;
            ++rep.minor_points;
            minor_rows[{cls.S, cls.D}] += std::abs(contrib);
        }
    }
    rep.total = total.real();
    rep.major = major.real();
    rep.minor = minor.real();
    for (auto& [rs, c] : major_rows) rep.arcs.push_back({true, rs.first, rs.second, 0, 0, c});
    for (auto& [sd, c] : minor_rows) rep.arcs.push_back({false, 0, 0, sd.first, sd.second, c});
    return rep;
}

}  // namespace mdsq
