#pragma once

#include <vector>

#include "mdsq/common.hpp"
#include "mdsq/digitset.hpp"

namespace mdsq {

// Dirichlet approximation alpha = r/s + xi with (r,s)=1, s <= Q,
// |xi| <= 1/(sQ); smallest valid s among the continued-fraction convergents.
struct RationalApprox {
    double alpha = 0;
    u64 r = 0, s = 1;
    double xi = 0;
    u64 Q = 2;
};

RationalApprox dirichlet_approx(double alpha, u64 Q);

enum class ArcMode { section3, section4 };

// Major arcs are |alpha - r/s| <= width/X with s below the denominator bound;
// the two modes parameterize the width differently.
struct ArcPartition {
    u64 X = 0;
    ArcMode mode = ArcMode::section3;
    double B = 2.0;      // section3: s <= (log X)^B, half-width (log X)^B / X
    double eta_g = 0.1;  // section4: half-width exp(eta_g sqrt(log X)) / X

    double denom_bound() const;
    double half_width() const;  // absolute width in alpha
};

struct ArcClass {
    bool major = false;
    u64 r = 0, s = 1;
    double eta = 0;    // X * (alpha - r/s)
    u64 S = 0, D = 0;  // minor-arc dyadic buckets: S >= s, D >= max(1,|eta|)
};

ArcClass classify_arc(u64 a, const ArcPartition& part);

struct ExpSumValue {
    double theta = 0;
    cplx value;
    u64 terms = 0;
    double trivial_bound = 0;  // sum of |weights|
};

// sum_{n <= x} Lambda(n) e(alpha n^2), plus a fitted diagnostic against the
// envelope x^{4/5} + x/sqrt(s) + x sqrt(s |xi|) from the Dirichlet data.
struct PrimeSquareSum {
    ExpSumValue value;
    RationalApprox approx;
    double envelope = 0;
    double fitted_const = 0;  // |value| / envelope
};

PrimeSquareSum prime_square_sum(double alpha, u64 x);

// S(theta) = sum_{n <= N} r2(n) e(theta n), opened up as the double sum over
// prime powers a^2 + b^2 <= N.
ExpSumValue r2_exp_sum(double theta, u64 N);
ExpSumValue r2_exp_sum_frac(u64 num, u64 den, u64 N);

// sum_{n <= N} a_n sum_{m1 <= M1, m2 <= M2, (m1,m2)=(u,v) mod h} e(alpha n (m1^2+m2^2)).
// Weights must satisfy |a_n| <= tau(n).
ExpSumValue double_quadratic_sum(double alpha, const std::vector<double>& a_n, u64 M1,
                                 u64 M2, u64 h, u64 u, u64 v);

struct ArcRow {
    bool major = false;
    u64 r = 0, s = 1;  // arc center (major rows)
    u64 S = 0, D = 0;  // dyadic bucket (minor rows)
    double abs_contribution = 0;
};

// Discrete Plancherel split of sum_{n in A(X)} r2(n), X = g^k:
//   total = (1/X) sum_{0 <= a < X} 1hat_A(a/X) S(-a/X)
// with S evaluated on the full grid by one FFT of the r2 array.  total is an
// identity with the exact ledger sum; major/minor follow classify_arc.
struct MainTermReport {
    u64 X = 0;
    double exact = 0;  // ledger sum
    double total = 0;
    double major = 0, minor = 0;
    u64 major_points = 0, minor_points = 0;
    std::vector<ArcRow> arcs;  // major arcs individually, minors by (S,D) bucket
};

MainTermReport reconstruct_main_term(unsigned k, const DigitSet& ds, double B = 2.0);

}  // namespace mdsq
