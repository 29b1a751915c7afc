// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/bessel.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace floqmap {

namespace {

// Ascending series J_n(x) = sum_k (-1)^k (x/2)^(n+2k) / (k! (n+k)!);
// used for small |x| where it converges in a few terms.
double series_jn(int n, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= h / k;  // (x/2)^n / n!
    double sum = term;
    const double h2 = -h * h;
    for (int k = 1; k <= 60; ++k) {
        term *= h2 / (static_cast<double>(k) * (n + k));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// Miller's algorithm: downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}
// from a start order well above max(n, x), normalized with
// J_0 + 2 sum_{k>=1} J_{2k} = 1. Fills out[0..nmax].
void miller_jn(int nmax, double x, std::vector<double>& out) {
    const int start0 = nmax + static_cast<int>(std::ceil(std::sqrt(40.0 * (nmax + 1)))) + 22;
    const int xstart = static_cast<int>(std::ceil(std::abs(x))) + 40;
    int m = std::max(start0, xstart);
    if (m % 2) ++m;  // even start keeps the normalization sum aligned

    double jp = 0.0;   // J_{k+1}
    double jc = 1e-30; // J_k (arbitrary seed; normalization fixes the scale)
    double norm = 0.0; // accumulates J_0 + 2 sum J_{2k}
    for (int k = m; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) {  // renormalize to avoid overflow
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for (auto& v : out)
                if (v != 0.0) v *= 1e-250;
        }
        const int order = k - 1;  // jc now holds J_{order}
        if (order <= nmax) out[order] = jc;
        if (order >= 2 && order % 2 == 0) norm += 2.0 * jc;
    }
    norm += jc;  // jc = J_0
    for (auto& v : out) v /= norm;
}

}  // namespace

std::vector<double> bessel_jn(int nmax, double x) {
    if (nmax < 0) throw std::invalid_argument("bessel_jn: nmax must be >= 0");
    std::vector<double> out(nmax + 1, 0.0);
    const double ax = std::abs(x);
    if (ax == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (ax < 1.0) {
        for (int n = 0; n <= nmax; ++n) out[n] = series_jn(n, ax);
    } else {
        miller_jn(nmax, ax, out);
    }
    if (x < 0.0)  // J_n(-x) = (-1)^n J_n(x)
        for (int n = 1; n <= nmax; n += 2) out[n] = -out[n];
    return out;
}

double bessel_j(int n, double x) {
    int an = std::abs(n);
    double sign = 1.0;
    if (n < 0 && (an % 2)) sign = -sign;  // J_{-n} = (-1)^n J_n
    const double ax = std::abs(x);
    if (ax == 0.0) return an == 0 ? 1.0 : 0.0;
    if (ax < 1.0) {
        double v = series_jn(an, ax);
        if (x < 0.0 && (an % 2)) v = -v;
        return sign * v;
    }
    std::vector<double> out(an + 1, 0.0);
    miller_jn(an, ax, out);
    double v = out[an];
    if (x < 0.0 && (an % 2)) v = -v;
    return sign * v;
}

}  // namespace floqmap
