#include "mdsq/localfactors.hpp"

#include <map>
#include <mutex>

namespace mdsq {

std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

u64 euler_phi(u64 n) {
    u64 phi = 1;
    for (auto [p, e] : factorize(n)) {
        u64 pe = 1;
        for (unsigned i = 1; i < e; ++i) pe *= p;
        phi *= pe * (p - 1);
    }
    return phi;
}

int legendre_symbol(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    u64 e = powmod(a, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

int chi4(u64 p) { return p % 4 == 1 ? 1 : -1; }

std::vector<u64> rho_table_bruteforce(u64 q) {
    if (q > 1000000) throw BudgetExceeded("rho brute force limited to q <= 10^6");
    if (q * q > 100000000ull) throw BudgetExceeded("rho brute force table too costly");
    std::vector<u64> t(q, 0);
    for (u64 u = 0; u < q; ++u) {
        if (gcd_u64(u, q) != 1) continue;
        for (u64 v = 0; v < q; ++v) {
            if (gcd_u64(v, q) != 1) continue;
            ++t[(u * u + v * v) % q];
        }
    }
    return t;
}

std::vector<u64> rho_tilde_table_bruteforce(u64 q) {
    if (q * q > 100000000ull) throw BudgetExceeded("rho_tilde brute force table too costly");
    std::vector<u64> t(q, 0);
    for (u64 u = 0; u < q; ++u) {
        if (gcd_u64(u, q) != 1) continue;
        for (u64 v = 0; v < q; ++v) ++t[(u * u + v * v) % q];
    }
    return t;
}

std::vector<u64> r_unrestricted_table_bruteforce(u64 s) {
    if (s > 100000) throw BudgetExceeded("r brute force limited to s <= 10^5");
    // histogram of squares, then one convolution pass
    std::vector<u64> sq(s, 0), t(s, 0);
    for (u64 x = 0; x < s; ++x) ++sq[x * x % s];
    for (u64 z = 0; z < s; ++z) {
        if (!sq[z]) continue;
        for (u64 w = 0; w < s; ++w) {
            if (!sq[w]) continue;
            t[(z + w) % s] += sq[z] * sq[w];
        }
    }
    return t;
}

u64 rho_bruteforce(u64 a, u64 q) { return rho_table_bruteforce(q)[a % q]; }
u64 rho_tilde_bruteforce(u64 a, u64 q) { return rho_tilde_table_bruteforce(q)[a % q]; }

u64 rho_quad_bruteforce(u64 h, u64 a, u64 b) {
    if (h > 20000) throw BudgetExceeded("rho_quad brute force limited to h <= 2*10^4");
    a %= h;
    b %= h;
    u64 count = 0;
    for (u64 v1 = 0; v1 < h; ++v1)
        for (u64 v2 = 0; v2 < h; ++v2) {
            u64 f1 = (a * v1 + h * h - b * v2) % h;
            u64 f2 = (a * v1 + b * v2) % h;
            u64 f3 = (a * v2 + b * v1) % h;
            u64 f4 = (a * v2 + h * h - b * v1) % h;
            if (mulmod(mulmod(f1, f2, h), mulmod(f3, f4, h), h) == 0) ++count;
        }
    return count;
}

namespace {

// rho at an odd prime.  The closed form is derived from the full-plane count
// p - chi4(p) minus the axis solutions 2(1 + (nu/p)); the mass identity
// sum_nu rho(nu;p) = (p-1)^2 pins it down and the brute-force oracle gates it
// in the tests.
u64 rho_odd_prime(u64 nu, u64 p) {
    nu %= p;
    if (nu == 0) return static_cast<u64>((1 + chi4(p)) * static_cast<i64>(p - 1));
    i64 val = static_cast<i64>(p) - 2 - chi4(p) - 2 * legendre_symbol(nu, p);
    return static_cast<u64>(val);
}

u64 pow_u64(u64 b, unsigned e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

// rho at a prime power, via the lifting rules: p^{a-1} rho(nu;p) for odd p,
// and the dyadic table 1_{nu=0(2)}, 4*1_{nu=2(4)}, 2^{a+1}*1_{nu=2(8)}.
u64 rho_prime_power(u64 nu, u64 p, unsigned e) {
    u64 pe = pow_u64(p, e);
    nu %= pe;
    if (p == 2) {
        if (e == 1) return nu % 2 == 0 ? 1 : 0;
        if (e == 2) return nu % 4 == 2 ? 4 : 0;
        return nu % 8 == 2 ? (1ull << (e + 1)) : 0;
    }
    return pow_u64(p, e - 1) * rho_odd_prime(nu % p, p);
}

std::mutex memo_mutex;

const std::vector<u64>& memo_table(char kind, u64 modulus) {
    static std::map<std::pair<char, u64>, std::vector<u64>> memo;
    std::lock_guard<std::mutex> lock(memo_mutex);
    auto key = std::make_pair(kind, modulus);
    auto it = memo.find(key);
    if (it == memo.end()) {
        std::vector<u64> t = kind == 't' ? rho_tilde_table_bruteforce(modulus)
                                         : r_unrestricted_table_bruteforce(modulus);
        it = memo.emplace(key, std::move(t)).first;
    }
    return it->second;
}

}  // namespace

u64 rho(u64 a, u64 q) {
    if (q == 1) return 1;
    a %= q;
    u64 out = 1;
    for (auto [p, e] : factorize(q)) out *= rho_prime_power(a, p, e);
    return out;
}

u64 rho_tilde(u64 a, u64 q) {
    if (q == 1) return 1;
    a %= q;
    u64 out = 1;
    for (auto [p, e] : factorize(q)) {
        u64 pe = pow_u64(p, e);
        out *= memo_table('t', pe)[a % pe];
    }
    return out;
}

u64 r_unrestricted(u64 nu, u64 s) {
    if (s == 1) return 1;
    nu %= s;
    u64 out = 1;
    for (auto [p, e] : factorize(s)) {
        u64 pe = pow_u64(p, e);
        out *= memo_table('r', pe)[nu % pe];
    }
    return out;
}

u64 rho_quad(u64 h, u64 a, u64 b) {
    if (h == 1) return 1;
    u64 out = 1;
    for (auto [p, e] : factorize(h)) {
        u64 pe = pow_u64(p, e);
        if (e == 1 && p > 2) {
            // four lines through the origin mod p; they collapse in pairs
            // exactly when a^4 = b^4 (each line has p points, shared origin)
            u64 A = a % p, B = b % p;
            if (A == 0 && B == 0)
                out *= p * p;
            else if (A == 0 || B == 0)
                out *= 2 * p - 1;
            else
                out *= powmod(A, 4, p) == powmod(B, 4, p) ? 2 * p - 1 : 4 * p - 3;
        } else {
            out *= rho_quad_bruteforce(pe, a % pe, b % pe);
        }
    }
    return out;
}

SingularSeries singular_series(const DigitSet& ds, SeriesVariant variant) {
    const u64 g = ds.g;
    const u64 t = ds.num_forbidden();
    const u64 phi = euler_phi(g);
    Rational local(0);
    for (unsigned d : ds.forbidden_digits()) {
        if (variant == SeriesVariant::STilde)
            local += Rational(rho_tilde(d, g), g * phi);
        else
            local += Rational(rho(d, g), phi * phi);
    }
    SingularSeries out{ds, Rational(g, g - t) * (Rational(1) - local), variant};
    return out;
}

bool admissible_string(u64 f, const DigitSet& ds, unsigned J) {
    for (unsigned i = 0; i < J; ++i) {
        if (ds.forbidden(static_cast<unsigned>(f % ds.g))) return false;
        f /= ds.g;
    }
    return true;
}

namespace {

template <typename Density>
Rational finite_j_sum(const DigitSet& ds, unsigned J, Density density) {
    const u64 g = ds.g;
    const u64 t = ds.num_forbidden();
    u64 gJ = 1;
    for (unsigned i = 0; i < J; ++i) {
        if (gJ > (1ull << 40)) throw BudgetExceeded("g^J out of range");
        gJ *= g;
    }
    Rational sum(0);
    for (u64 nu = 0; nu < gJ; ++nu)
        if (admissible_string(nu, ds, J)) sum += density(nu);
    Rational scale(BigInt(gJ), BigInt(pow_u64(g - t, J)));
    return scale * sum;
}

}  // namespace

FiniteJSum singular_series_J(const DigitSet& ds, unsigned J) {
    const u64 g = ds.g;
    const u64 phi2 = euler_phi(g) * euler_phi(g);
    u64 gJm1 = 1;
    for (unsigned i = 1; i < J; ++i) gJm1 *= g;
    // density at nu: rho(nu;g^J)/phi^2(g^J) with the last-digit reduction,
    // i.e. g^{J-1} rho(nu mod g; g) / (g^{J-1} phi(g))^2 = rho(nu mod g; g)/(g^{J-1} phi(g)^2)
    BigInt den = BigInt(gJm1) * phi2;
    auto density = [&](u64 nu) { return Rational(BigInt(rho(nu % g, g)), den); };
    return {ds, J, finite_j_sum(ds, J, density)};
}

FiniteJSum singular_series_J_direct(const DigitSet& ds, unsigned J) {
    const u64 g = ds.g;
    u64 gJ = 1;
    for (unsigned i = 0; i < J; ++i) gJ *= g;
    const u64 phiJ = euler_phi(gJ);
    Rational den = Rational(BigInt(phiJ)) * BigInt(phiJ);
    auto density = [&](u64 nu) { return Rational(BigInt(rho(nu, gJ))) / den; };
    return {ds, J, finite_j_sum(ds, J, density)};
}

FiniteJSum singular_series_limit(const DigitSet& ds) {
    FiniteJSum prev = singular_series_J_direct(ds, 1);
    u64 gJ = ds.g;
    for (unsigned J = 2; J <= 8; ++J) {
        if (gJ > 2000000 / ds.g) break;
        gJ *= ds.g;
        FiniteJSum cur = singular_series_J_direct(ds, J);
        if (cur.value == prev.value) return cur;
        prev = cur;
    }
    return prev;
}

Rational local_second_moment_J(const DigitSet& ds, unsigned J) {
    const u64 g = ds.g;
    const u64 t = ds.num_forbidden();
    u64 gJ = 1;
    for (unsigned i = 0; i < J; ++i) {
        if (gJ > 100000) throw BudgetExceeded("g^{2J} out of range at desk scale");
        gJ *= g;
    }
    std::vector<u64> rtab(gJ);
    for (u64 nu = 0; nu < gJ; ++nu) rtab[nu] = r_unrestricted(nu, gJ);
    std::vector<char> adm(gJ);
    for (u64 f = 0; f < gJ; ++f) adm[f] = admissible_string(f, ds, J) ? 1 : 0;

    BigInt acc = 0;
    for (u64 v = 0; v < gJ; ++v) {
        if (rtab[v] == 0) continue;
        for (u64 mu = 0; mu < gJ; ++mu) {
            if (!adm[mulmod(v, mu, gJ)]) continue;
            acc += BigInt(rtab[v]) * rtab[mu];
        }
    }
    BigInt g4J = BigInt(gJ);
    g4J = g4J * g4J * g4J * g4J;
    Rational scale(BigInt(gJ), BigInt(pow_u64(g - t, J)));
    return scale * Rational(acc, g4J);
}

}  // namespace mdsq
