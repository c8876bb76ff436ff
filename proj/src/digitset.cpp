#include "mdsq/digitset.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mdsq {

std::vector<unsigned> DigitSet::allowed_digits() const {
    std::vector<unsigned> out;
    for (unsigned d = 0; d < g; ++d)
        if (allowed(d)) out.push_back(d);
    return out;
}

std::vector<unsigned> DigitSet::forbidden_digits() const {
    std::vector<unsigned> out;
    for (unsigned d = 0; d < g; ++d)
        if (forbidden(d)) out.push_back(d);
    return out;
}

unsigned DigitSet::min_allowed() const {
    for (unsigned d = 0; d < g; ++d)
        if (allowed(d)) return d;
    throw ConfigError("digit set has no allowed digit");
}

unsigned DigitSet::min_allowed_nonzero() const {
    for (unsigned d = 1; d < g; ++d)
        if (allowed(d)) return d;
    throw ConfigError("digit set has no allowed nonzero digit");
}

DigitSet DigitSet::make(unsigned g, const std::vector<unsigned>& forbidden,
                        std::string label) {
    if (g < 2) throw ConfigError("base must be >= 2");
    if (g > 32) throw ConfigError("base larger than 32 is not supported");
    DigitSet ds;
    ds.g = g;
    for (unsigned d : forbidden) {
        if (d >= g) throw ConfigError("forbidden digit out of range for base");
        ds.forbidden_mask |= (1u << d);
    }
    // Two allowed digits in general; the binary set {1} (forbidden 0) is the
    // one useful exception and keeps nontrivial members 1, 11, 111, ...
    if (ds.num_allowed() < 2 && !(ds.num_allowed() == 1 && ds.allowed(1) && g == 2))
        throw ConfigError("at least two digits must remain allowed");
    ds.label = label.empty() ? ds.text() : std::move(label);
    return ds;
}

DigitSet DigitSet::parse(const std::string& text) {
    unsigned g = 0;
    std::vector<unsigned> forb;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("bad digit set text: " + text);
        std::string key = part.substr(0, eq), val = part.substr(eq + 1);
        if (key == "g") {
            g = static_cast<unsigned>(std::stoul(val));
        } else if (key == "forbidden") {
            std::stringstream vs(val);
            std::string tok;
            while (std::getline(vs, tok, ','))
                if (!tok.empty()) forb.push_back(static_cast<unsigned>(std::stoul(tok)));
        } else {
            throw ConfigError("unknown digit set key: " + key);
        }
    }
    if (g == 0) throw ConfigError("digit set text missing base: " + text);
    return make(g, forb);
}

std::string DigitSet::text() const {
    std::ostringstream os;
    os << "g=" << g << ";forbidden=";
    bool first = true;
    for (unsigned d : forbidden_digits()) {
        if (!first) os << ',';
        os << d;
        first = false;
    }
    return os.str();
}

bool is_member(u64 n, const DigitSet& ds) {
    if (n == 0) return ds.allowed(0);
    while (n) {
        if (ds.forbidden(static_cast<unsigned>(n % ds.g))) return false;
        n /= ds.g;
    }
    return true;
}

u64 count_leq(u64 X, const DigitSet& ds) {
    if (X == 0) return 0;
    const unsigned g = ds.g;
    std::vector<unsigned> digits;  // most significant first
    for (u64 x = X; x; x /= g) digits.push_back(static_cast<unsigned>(x % g));
    std::reverse(digits.begin(), digits.end());
    const u64 L = digits.size();
    const u64 A = ds.num_allowed();
    u64 A1 = A;  // allowed digits excluding 0
    if (ds.allowed(0)) --A1;

    // powers A^j for j < L
    std::vector<u64> powA(L, 1);
    for (u64 j = 1; j < L; ++j) powA[j] = powA[j - 1] * A;

    u64 count = 0;
    for (u64 j = 1; j < L; ++j) count += A1 * powA[j - 1];  // shorter members
    for (u64 i = 0; i < L; ++i) {
        unsigned d = digits[i];
        for (unsigned c = (i == 0 ? 1u : 0u); c < d; ++c)
            if (ds.allowed(c)) count += powA[L - 1 - i];
        if (ds.forbidden(d)) return count;
    }
    return count + 1;  // X itself is a member
}

std::optional<u64> next_member_geq(u64 n, const DigitSet& ds) {
    const unsigned g = ds.g;
    if (n == 0) n = 1;
    std::vector<unsigned> d;  // least significant first
    for (u64 x = n; x; x /= g) d.push_back(static_cast<unsigned>(x % g));

    // most significant forbidden position, if any
    int bad = -1;
    for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i)
        if (ds.forbidden(d[i])) {
            bad = i;
            break;
        }
    if (bad < 0) return n;

    const unsigned lo = ds.min_allowed();
    for (int j = 0; j < bad; ++j) d[j] = lo;
    // bump position `bad` to the next allowed digit, carrying upward
    int i = bad;
    while (true) {
        if (i == static_cast<int>(d.size())) {
            d.push_back(ds.min_allowed_nonzero());
            break;
        }
        unsigned next = g;
        for (unsigned c = d[i] + 1; c < g; ++c)
            if (ds.allowed(c)) {
                next = c;
                break;
            }
        if (next < g) {
            d[i] = next;
            break;
        }
        d[i] = lo;
        ++i;
    }
    // leading digit must be nonzero; min_allowed 0 in lower positions is fine
    u64 out = 0;
    for (int j = static_cast<int>(d.size()) - 1; j >= 0; --j) {
        if (out > (std::numeric_limits<u64>::max() - d[j]) / g) return std::nullopt;
        out = out * g + d[j];
    }
    return out;
}

void for_each_member(u64 lo, u64 hi, const DigitSet& ds,
                     const std::function<void(u64)>& fn) {
    if (lo == 0) lo = 1;
    u64 n = lo;
    while (n <= hi) {
        auto m = next_member_geq(n, ds);
        if (!m || *m > hi) return;
        fn(*m);
        if (*m == std::numeric_limits<u64>::max()) return;
        n = *m + 1;
    }
}

std::vector<u64> members(u64 lo, u64 hi, const DigitSet& ds) {
    std::vector<u64> out;
    for_each_member(lo, hi, ds, [&](u64 n) { out.push_back(n); });
    return out;
}

u64 StringModel::X() const {
    u64 x = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (x > std::numeric_limits<u64>::max() / ds.g)
            throw BudgetExceeded("g^k exceeds 64-bit range");
        x *= ds.g;
    }
    return x;
}

u64 StringModel::cardinality() const {
    u64 c = 1;
    for (unsigned i = 0; i < k; ++i) c *= ds.num_allowed();
    return c;
}

FourierValue fourier_product(double theta, const StringModel& sm) {
    const auto digits = sm.ds.allowed_digits();
    cplx prod = 1.0;
    // theta * g^j mod 1, iterated to avoid forming huge arguments
    double tj = theta - std::floor(theta);
    for (unsigned j = 0; j < sm.k; ++j) {
        cplx sigma = 0.0;
        for (unsigned a : digits) sigma += cis(tj * a);
        prod *= sigma;
        tj = tj * sm.ds.g;
        tj -= std::floor(tj);
    }
    return {theta, prod, sm.k};
}

FourierValue fourier_product_frac(u64 num, u64 den, const StringModel& sm) {
    const auto digits = sm.ds.allowed_digits();
    cplx prod = 1.0;
    u64 nj = num % den;  // num * g^j mod den
    for (unsigned j = 0; j < sm.k; ++j) {
        cplx sigma = 0.0;
        for (unsigned a : digits) sigma += cis_frac(nj * a % den, den);
        prod *= sigma;
        nj = mulmod(nj, sm.ds.g, den);
    }
    return {static_cast<double>(num % den) / den, prod, sm.k};
}

FourierCorrection fourier_correction(const StringModel& sm) {
    FourierCorrection c;
    c.product_form_valid = sm.ds.allowed(0);
    c.subtract_zero_string = sm.ds.allowed(0);
    c.add_gk = sm.ds.allowed(0) && sm.ds.allowed(1);
    return c;
}

namespace {

// Shared shape of the corrected transform: when 0 is allowed the length-k
// string model covers [0, g^k) with zero padding, so the transform of A(X) is
// the product minus the zero string plus the right endpoint when g^k is a
// member.  When 0 is forbidden, members of length j < k are not length-k
// strings; they form their own product over the low j positions, so the
// transform is the sum of the prefix products P_1 + ... + P_k.
template <typename SigmaAt>
cplx corrected_transform(const StringModel& sm, SigmaAt sigma_at, cplx e_at_gk) {
    const bool zero_ok = sm.ds.allowed(0);
    cplx prod = 1.0, sum_prefix = 0.0;
    for (unsigned j = 0; j < sm.k; ++j) {
        prod *= sigma_at(j);
        sum_prefix += prod;
    }
    if (!zero_ok) return sum_prefix;
    cplx out = prod - 1.0;
    if (sm.ds.allowed(1)) out += e_at_gk;
    return out;
}

}  // namespace

cplx transform_ax(double theta, const StringModel& sm) {
    const auto digits = sm.ds.allowed_digits();
    double t0 = theta - std::floor(theta);
    std::vector<double> tj(sm.k);
    for (unsigned j = 0; j < sm.k; ++j) {
        tj[j] = t0;
        t0 = t0 * sm.ds.g;
        t0 -= std::floor(t0);
    }
    const double t_gk = t0;  // theta * g^k mod 1
    return corrected_transform(
        sm,
        [&](unsigned j) {
            cplx s = 0.0;
            for (unsigned a : digits) s += cis(tj[j] * a);
            return s;
        },
        cis(t_gk));
}

cplx transform_ax_frac(u64 num, u64 den, const StringModel& sm) {
    const auto digits = sm.ds.allowed_digits();
    std::vector<u64> nj(sm.k);
    u64 cur = num % den;
    for (unsigned j = 0; j < sm.k; ++j) {
        nj[j] = cur;
        cur = mulmod(cur, sm.ds.g, den);
    }
    return corrected_transform(
        sm,
        [&](unsigned j) {
            cplx s = 0.0;
            for (unsigned a : digits) s += cis_frac(nj[j] * a % den, den);
            return s;
        },
        cis_frac(cur, den));
}

double alpha_g_from_C(double C_g, unsigned g) {
    return std::log(C_g * (static_cast<double>(g) / (g - 1)) * std::log(static_cast<double>(g))) /
           std::log(static_cast<double>(g));
}

namespace {

double grid_sum(const StringModel& sm, u64 theta_num, u64 theta_den, u64 X) {
    // sum_{0 <= a < X} |1hat_A(theta + a/X)| with theta = theta_num/theta_den
    // and theta_den a multiple of X, so every grid point stays exactly rational.
    const u64 step = theta_den / X;
    double total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (u64 a = 0; a < X; ++a) {
        cplx v = transform_ax_frac((theta_num + a * step) % theta_den, theta_den, sm);
        total += std::abs(v);
    }
    return total;
}

}  // namespace

FourierDecayReport measure_l1_constant(const StringModel& sm, unsigned theta_samples) {
    if (sm.k < 2) throw ConfigError("measure_l1_constant needs k >= 2");
    if (theta_samples < 1) throw ConfigError("need at least one theta sample");
    const u64 X = sm.X();
    if (X > (1ull << 26)) throw BudgetExceeded("grid too large for L1 measurement");

    FourierDecayReport rep;
    // M(theta) has period 1/X, so sample theta in [0, 1/X).
    u64 den = theta_samples * X;
    u64 best_num = 0;
    for (unsigned j = 0; j < theta_samples; ++j) {
        double m = grid_sum(sm, j, den, X);
        rep.samples.emplace_back(static_cast<double>(j) / den, m);
        if (m > rep.max_grid_sum) {
            rep.max_grid_sum = m;
            best_num = j;
        }
    }
    // one refinement pass around the grid maximizer
    u64 den2 = den * theta_samples;
    for (unsigned j = 0; j < 2 * theta_samples; ++j) {
        u64 num2 = best_num * theta_samples + j;
        if (num2 < theta_samples) continue;
        num2 -= theta_samples;  // centered window
        double m = grid_sum(sm, num2, den2, X);
        rep.samples.emplace_back(static_cast<double>(num2) / den2, m);
        rep.max_grid_sum = std::max(rep.max_grid_sum, m);
    }

    const double glogg = sm.ds.g * std::log(static_cast<double>(sm.ds.g));
    rep.C_g_estimate = std::pow(rep.max_grid_sum / std::pow(glogg, sm.k), 1.0 / sm.k);
    rep.alpha_g = alpha_g_from_C(rep.C_g_estimate, sm.ds.g);

    // fitted L-infinity decay at the smallest prime denominator coprime to g
    for (u64 s = 2; s * s * s < X; ++s) {
        bool coprime = gcd_u64(s, sm.ds.g) == 1;
        if (!coprime) continue;
        bool prime = true;
        for (u64 p = 2; p * p <= s; ++p)
            if (s % p == 0) prime = false;
        if (!prime) continue;
        rep.c_g_estimate = decay_at_rational(1, s, sm).fitted_exponent;
        break;
    }
    return rep;
}

RationalDecay decay_at_rational(u64 r, u64 s, const StringModel& sm) {
    const u64 X = sm.X();
    if (s < 2 || r < 1 || r >= s || gcd_u64(r, s) != 1)
        throw ConfigError("need coprime 1 <= r < s");
    if (static_cast<double>(s) * s * s >= static_cast<double>(X))
        throw ConfigError("denominator too large: need s < X^(1/3)");
    // s must have a nontrivial divisor coprime to g
    u64 rest = s;
    for (u64 p = 2; p * p <= rest; ++p)
        while (rest % p == 0 && sm.ds.g % p == 0) rest /= p;
    while (rest > 1) {
        u64 p = rest;
        for (u64 q = 2; q * q <= rest; ++q)
            if (rest % q == 0) {
                p = q;
                break;
            }
        if (sm.ds.g % p == 0)
            while (rest % p == 0) rest /= p;
        else
            break;
    }
    if (rest == 1) throw std::domain_error("major-arc-type denominator");

    RationalDecay out;
    double mag = std::abs(transform_ax_frac(r, s, sm));
    double card = static_cast<double>(count_leq(X, sm.ds));
    out.ratio = mag / card;
    out.fitted_exponent =
        -std::log(out.ratio) * std::log(static_cast<double>(s)) / std::log(static_cast<double>(X));
    return out;
}

}  // namespace mdsq
