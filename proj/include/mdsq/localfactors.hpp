#pragma once

#include <vector>

#include "mdsq/common.hpp"
#include "mdsq/digitset.hpp"

namespace mdsq {

// Local densities for sums of two squares mod q:
//   rho(a;q)       = #{(u,v) : (uv,q)=1, u^2+v^2 = a mod q}
//   rho_tilde(a;q) = #{(u,v) : (u,q)=1,  u^2+v^2 = a mod q}
//   r(nu;s)        = #{(l1,l2) mod s : l1^2+l2^2 = nu mod s}   (no coprimality)
//   rho_quad(h;a,b)= #{(v1,v2) mod h : (av1-bv2)(av1+bv2)(av2+bv1)(av2-bv1) = 0}
// All values exact; brute-force double loops are the oracles, the fast paths
// go through CRT, prime-power lifting and memoized tables.

std::vector<std::pair<u64, unsigned>> factorize(u64 n);
u64 euler_phi(u64 n);
int legendre_symbol(u64 a, u64 p);
int chi4(u64 p);  // +1 if p = 1 mod 4, -1 if p = 3 mod 4

// Oracles: one full residue table per call, O(q^2).  Guarded at q <= 10^6
// worth of work.
std::vector<u64> rho_table_bruteforce(u64 q);
std::vector<u64> rho_tilde_table_bruteforce(u64 q);
std::vector<u64> r_unrestricted_table_bruteforce(u64 s);
u64 rho_bruteforce(u64 a, u64 q);
u64 rho_tilde_bruteforce(u64 a, u64 q);
u64 rho_quad_bruteforce(u64 h, u64 a, u64 b);

// Fast paths.
u64 rho(u64 a, u64 q);
u64 rho_tilde(u64 a, u64 q);
u64 r_unrestricted(u64 nu, u64 s);
u64 rho_quad(u64 h, u64 a, u64 b);

enum class SeriesVariant { S, STilde, SVector };

struct SingularSeries {
    DigitSet ds;
    Rational value;
    SeriesVariant variant = SeriesVariant::S;
};

// Closed forms:
//   S / SVector:  g/(g-t) (1 - sum_i rho(b_i;g)/phi(g)^2)
//   STilde:       g/(g-t) (1 - sum_i rho_tilde(b_i;g)/(g phi(g)))
SingularSeries singular_series(const DigitSet& ds, SeriesVariant variant = SeriesVariant::S);

struct FiniteJSum {
    DigitSet ds;
    unsigned J = 1;
    Rational value;
};

// Truncated major-arc sum over moduli dividing g^J, evaluated through the
// last-digit reduction (g^J rho(nu;g^J)/phi^2(g^J) -> g rho(nu mod g;g)/phi^2(g)),
// which makes the value independent of J and equal to the closed form.
FiniteJSum singular_series_J(const DigitSet& ds, unsigned J);

// The same sum with the density taken at modulus g^J directly.  For even g
// this deviates from the closed form at J >= 2 because the dyadic lifting
// rules break the power-independence; kept as a documented reference path.
FiniteJSum singular_series_J_direct(const DigitSet& ds, unsigned J);

// J -> infinity limit of the direct path; this is the constant the empirical
// averages converge to.  The odd part of g is J-independent and the dyadic
// factor freezes once g^J determines the residue mod 8, so the sequence is
// eventually constant: iterate until two consecutive values agree.
FiniteJSum singular_series_limit(const DigitSet& ds);

// Second-moment local constant:
//   g^J/(g-t)^J sum_{f admissible mod g^J} g^{-4J}
//       sum_{v mu = f mod g^J} r(mu;g^J) r(v;g^J)
Rational local_second_moment_J(const DigitSet& ds, unsigned J);

// True iff the J-digit base-g string of f (with leading zeros) avoids every
// forbidden digit.
bool admissible_string(u64 f, const DigitSet& ds, unsigned J);

}  // namespace mdsq
