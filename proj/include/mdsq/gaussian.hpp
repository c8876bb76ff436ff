#pragma once

#include "mdsq/common.hpp"

namespace mdsq {

// Z[i] arithmetic, enough for Euclidean gcd and exact division.
struct Gaussian {
    i64 re = 0, im = 0;

    friend Gaussian operator+(Gaussian a, Gaussian b) { return {a.re + b.re, a.im + b.im}; }
    friend Gaussian operator-(Gaussian a, Gaussian b) { return {a.re - b.re, a.im - b.im}; }
    friend Gaussian operator*(Gaussian a, Gaussian b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(Gaussian a, Gaussian b) { return a.re == b.re && a.im == b.im; }

    Gaussian conj() const { return {re, -im}; }
    u64 norm() const {
        return static_cast<u64>((i128)re * re + (i128)im * im);
    }
    bool is_zero() const { return re == 0 && im == 0; }
    bool is_unit() const { return norm() == 1; }
};

inline const Gaussian kUnits[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// quotient rounded to the nearest Gaussian integer; remainder has norm < norm(b)
inline Gaussian gaussian_div_round(Gaussian a, Gaussian b) {
    i128 den = (i128)b.re * b.re + (i128)b.im * b.im;
    i128 nre = (i128)a.re * b.re + (i128)a.im * b.im;
    i128 nim = (i128)a.im * b.re - (i128)a.re * b.im;
    auto round_div = [](i128 n, i128 d) -> i64 {
        i128 q = n / d, r = n % d;
        if (2 * (r >= 0 ? r : -r) > d) q += (n >= 0) == (d >= 0) ? 1 : -1;
        return static_cast<i64>(q);
    };
    return {round_div(nre, den), round_div(nim, den)};
}

// exact division; returns false if b does not divide a
inline bool gaussian_div_exact(Gaussian a, Gaussian b, Gaussian& q) {
    q = gaussian_div_round(a, b);
    return q * b == a;
}

inline Gaussian gaussian_gcd(Gaussian a, Gaussian b) {
    while (!b.is_zero()) {
        Gaussian q = gaussian_div_round(a, b);
        Gaussian r = a - q * b;
        a = b;
        b = r;
    }
    return a;
}

}  // namespace mdsq
