#include "mdsq/betasieve.hpp"

#include <algorithm>
#include <cmath>

#include "mdsq/localfactors.hpp"
#include "mdsq/primes.hpp"

namespace mdsq {

namespace {

constexpr double kEps = 1e-9;  // slack for log-domain <= comparisons

struct Chain {
    const std::vector<u64>& pd;  // primes descending
    const std::vector<double>& logp;
    double logD;
    unsigned beta;
};

}  // namespace

SieveConfig SieveConfig::make(u64 z, double s_exponent, double kappa, u64 coprime_to) {
    if (z < 2) throw ConfigError("sifting limit z must be >= 2");
    if (s_exponent <= 0 || kappa <= 0) throw ConfigError("need positive s and kappa");
    SieveConfig cfg;
    cfg.z = z;
    cfg.s_exponent = s_exponent;
    cfg.kappa = kappa;
    cfg.beta = static_cast<unsigned>(9 * kappa + 1 + 0.5);
    cfg.coprime_to = coprime_to;
    cfg.guarantee = s_exponent >= 9 * kappa + 2;
    return cfg;
}

SieveWeights build_weights(const SieveConfig& cfg) {
    if (cfg.z > 1000) throw BudgetExceeded("sifting limit capped at 10^3 for exhaustive tests");
    SieveWeights w;
    w.cfg = cfg;
    if (cfg.z > 2)
        w.sieve_primes = primes_coprime_to(cfg.coprime_to, 2, cfg.z - 1);
    return w;
}

int SieveWeights::lambda(u64 d) const {
    if (d == 0) return 0;
    if (d == 1) return 1;
    const double logD = cfg.log_D();
    std::vector<u64> fac;  // descending after reverse
    double logd = 0;
    for (u64 p : sieve_primes) {
        if (d % p) continue;
        d /= p;
        if (d % p == 0) return 0;  // not squarefree
        fac.push_back(p);
        logd += std::log(static_cast<double>(p));
    }
    if (d != 1) return 0;  // factor outside P(z)
    if (logd > logD + kEps) return 0;
    std::reverse(fac.begin(), fac.end());
    double prefix = 0;
    for (size_t m = 0; m < fac.size(); ++m) {
        double lp = std::log(static_cast<double>(fac[m]));
        if (m % 2 == 0 && prefix + (cfg.beta + 1) * lp > logD + kEps) return 0;
        prefix += lp;
    }
    return fac.size() % 2 == 0 ? 1 : -1;
}

namespace {

bool subtree_untruncated(const Chain& ch, size_t idx, double L,
                         const std::vector<double>& suffix_logsum) {
    if (idx == ch.pd.size()) return true;
    return L + suffix_logsum[idx] + ch.beta * ch.logp[idx] <= ch.logD + kEps;
}

u64 count_support(const Chain& ch, size_t idx, unsigned depth, double L,
                  const std::vector<double>& suffix_logsum) {
    if (subtree_untruncated(ch, idx, L, suffix_logsum)) {
        if (ch.pd.size() - idx >= 63) throw BudgetExceeded("sieve support too large to count");
        return 1ull << (ch.pd.size() - idx);
    }
    u64 total = 1;  // the prefix itself
    for (size_t j = idx; j < ch.pd.size(); ++j) {
        double newL = L + ch.logp[j];
        if (newL > ch.logD + kEps) continue;
        if ((depth + 1) % 2 == 1 && L + (ch.beta + 1) * ch.logp[j] > ch.logD + kEps) continue;
        total += count_support(ch, j + 1, depth + 1, newL, suffix_logsum);
    }
    return total;
}

void enumerate(const Chain& ch, size_t idx, unsigned depth, double L, u128 d, int sign,
               u64 cap, u64& seen, const std::function<void(u64, int)>& fn) {
    if (++seen > cap) throw BudgetExceeded("sieve support enumeration exceeds cap");
    if (d > static_cast<u128>(~0ull)) throw BudgetExceeded("sieve support value exceeds 64-bit range");
    fn(static_cast<u64>(d), sign);
    for (size_t j = idx; j < ch.pd.size(); ++j) {
        double newL = L + ch.logp[j];
        if (newL > ch.logD + kEps) continue;
        if ((depth + 1) % 2 == 1 && L + (ch.beta + 1) * ch.logp[j] > ch.logD + kEps) continue;
        enumerate(ch, j + 1, depth + 1, newL, d * ch.pd[j], -sign, cap, seen, fn);
    }
}

Chain make_chain(const SieveWeights& w, std::vector<u64>& pd, std::vector<double>& logp) {
    pd.assign(w.sieve_primes.rbegin(), w.sieve_primes.rend());
    logp.resize(pd.size());
    for (size_t i = 0; i < pd.size(); ++i) logp[i] = std::log(static_cast<double>(pd[i]));
    return Chain{pd, logp, w.cfg.log_D(), w.cfg.beta};
}

std::vector<double> suffix_logsums(const std::vector<double>& logp) {
    std::vector<double> out(logp.size() + 1, 0.0);
    for (size_t i = logp.size(); i-- > 0;) out[i] = out[i + 1] + logp[i];
    return out;
}

}  // namespace

u64 SieveWeights::support_size() const {
    std::vector<u64> pd;
    std::vector<double> logp;
    Chain ch = make_chain(*this, pd, logp);
    auto sls = suffix_logsums(logp);
    return count_support(ch, 0, 0, 0.0, sls);
}

void SieveWeights::for_each_entry(const std::function<void(u64, int)>& fn, u64 cap) const {
    std::vector<u64> pd;
    std::vector<double> logp;
    Chain ch = make_chain(*this, pd, logp);
    u64 seen = 0;
    enumerate(ch, 0, 0, 0.0, 1, 1, cap, seen, fn);
}

namespace {

// sum_{d | n, d in support} lambda_d over the distinct sieve primes of n
i64 divisor_lambda_sum(const Chain& ch, const std::vector<double>& unused, size_t idx,
                       unsigned depth, double L, int sign) {
    i64 total = sign;
    for (size_t j = idx; j < ch.pd.size(); ++j) {
        double newL = L + ch.logp[j];
        if (newL > ch.logD + kEps) continue;
        if ((depth + 1) % 2 == 1 && L + (ch.beta + 1) * ch.logp[j] > ch.logD + kEps) continue;
        total += divisor_lambda_sum(ch, unused, j + 1, depth + 1, newL, -sign);
    }
    return total;
}

i64 lambda_sum_at(u64 n, const SieveWeights& w) {
    std::vector<u64> divs;  // descending distinct sieve primes dividing n
    for (auto it = w.sieve_primes.rbegin(); it != w.sieve_primes.rend(); ++it)
        if (n % *it == 0) divs.push_back(*it);
    std::vector<double> logp(divs.size());
    for (size_t i = 0; i < divs.size(); ++i) logp[i] = std::log(static_cast<double>(divs[i]));
    Chain ch{divs, logp, w.cfg.log_D(), w.cfg.beta};
    return divisor_lambda_sum(ch, logp, 0, 0, 0.0, 1);
}

}  // namespace

bool upper_bound_check(u64 n, const SieveWeights& w) {
    if (n < 1) throw ConfigError("n must be >= 1");
    bool rough = true;
    for (u64 p : w.sieve_primes)
        if (n % p == 0) {
            rough = false;
            break;
        }
    return lambda_sum_at(n, w) >= (rough ? 1 : 0);
}

u64 count_violations(const SieveWeights& w, u64 n_max) {
    u64 bad = 0;
#pragma omp parallel for schedule(static) reduction(+ : bad)
    for (u64 n = 1; n <= n_max; ++n)
        if (!upper_bound_check(n, w)) ++bad;
    return bad;
}

namespace {

double density_sum_dbl(const Chain& ch, const std::vector<double>& g, size_t idx,
                       unsigned depth, double L, double gpre, int sign,
                       const std::vector<double>& suffix_logsum,
                       const std::vector<double>& suffix_prod) {
    if (subtree_untruncated(ch, idx, L, suffix_logsum)) return sign * gpre * suffix_prod[idx];
    double total = sign * gpre;
    for (size_t j = idx; j < ch.pd.size(); ++j) {
        double newL = L + ch.logp[j];
        if (newL > ch.logD + kEps) continue;
        if ((depth + 1) % 2 == 1 && L + (ch.beta + 1) * ch.logp[j] > ch.logD + kEps) continue;
        total += density_sum_dbl(ch, g, j + 1, depth + 1, newL, gpre * g[j], -sign,
                                 suffix_logsum, suffix_prod);
    }
    return total;
}

Rational density_sum_exact(const Chain& ch, const std::vector<Rational>& g, size_t idx,
                           unsigned depth, double L, const Rational& gpre, int sign) {
    Rational total = sign > 0 ? gpre : -gpre;
    for (size_t j = idx; j < ch.pd.size(); ++j) {
        double newL = L + ch.logp[j];
        if (newL > ch.logD + kEps) continue;
        if ((depth + 1) % 2 == 1 && L + (ch.beta + 1) * ch.logp[j] > ch.logD + kEps) continue;
        total += density_sum_exact(ch, g, j + 1, depth + 1, newL, gpre * g[j], -sign);
    }
    return total;
}

}  // namespace

DensitySum weighted_density_sum(const SieveWeights& w,
                                const std::function<Rational(u64)>& g_at_prime) {
    std::vector<u64> pd;
    std::vector<double> logp;
    Chain ch = make_chain(w, pd, logp);
    auto sls = suffix_logsums(logp);

    std::vector<Rational> gq(pd.size());
    std::vector<double> gd(pd.size());
    for (size_t i = 0; i < pd.size(); ++i) {
        gq[i] = g_at_prime(pd[i]);
        if (gq[i] < 0 || gq[i] >= 1)
            throw ConfigError("sieve density must satisfy 0 <= g(p) < 1");
        gd[i] = gq[i].convert_to<double>();
    }
    std::vector<double> sprod(pd.size() + 1, 1.0);
    for (size_t i = pd.size(); i-- > 0;) sprod[i] = sprod[i + 1] * (1.0 - gd[i]);

    DensitySum out;
    out.value = density_sum_dbl(ch, gd, 0, 0, 0.0, 1.0, 1, sls, sprod);
    out.product = sprod[0];
    out.ratio = out.product != 0 ? out.value / out.product : 0;
    if (pd.size() <= 14) {
        out.exact = true;
        out.value_exact = density_sum_exact(ch, gq, 0, 0, 0.0, Rational(1), 1);
        out.product_exact = 1;
        for (const auto& g : gq) out.product_exact *= (Rational(1) - g);
    }
    return out;
}

DensitySum weighted_density_sum_quad(const SieveWeights& w, u64 a, u64 b) {
    return weighted_density_sum(
        w, [&](u64 p) { return Rational(BigInt(rho_quad(p, a, b)), BigInt(p) * p); });
}

}  // namespace mdsq
