// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/fdweights.hpp"

#include <cmath>
#include <stdexcept>

namespace floqmap {

Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& x, int max_order) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("fornberg_weights: empty grid");
    if (max_order >= n)
        throw std::invalid_argument("fornberg_weights: need more points than derivative order");

    // Fornberg (1988), generation of finite difference formulas on
    // arbitrarily spaced grids; c(i, m) accumulated point by point.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, max_order + 1);
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            if (c3 == 0.0) throw std::invalid_argument("fornberg_weights: repeated grid point");
            c2 *= c3;
            if (j == i - 1) {
                for (int m = mn; m >= 1; --m)
                    c(i, m) = c1 * (m * c(i - 1, m - 1) - c5 * c(i - 1, m)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int m = mn; m >= 1; --m)
                c(j, m) = (c4 * c(j, m) - m * c(j, m - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c;
}

namespace {

double stencil_eval(const std::function<double(double)>& f, double x0, int n, double h,
                    int half_width) {
    std::vector<double> x;
    x.reserve(2 * half_width + 1);
    for (int k = -half_width; k <= half_width; ++k) x.push_back(x0 + k * h);
    const Eigen::MatrixXd w = fornberg_weights(x0, x, n);
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) acc += w(i, n) * f(x[i]);
    return acc;
}

}  // namespace

DerivativeResult central_derivative(const std::function<double(double)>& f, double x0,
                                    int n, double h, int accuracy_order) {
    if (n < 1) throw std::invalid_argument("central_derivative: order must be >= 1");
    if (h <= 0.0) throw std::invalid_argument("central_derivative: step must be > 0");
    int acc = accuracy_order + (accuracy_order % 2);  // round up to even
    if (acc < 2) acc = 2;
    // A symmetric stencil with 2*hw+1 points differentiates order n with
    // accuracy 2*hw + 1 - n (odd n) or 2*hw + 2 - n (even n); pick hw so the
    // requested accuracy is met.
    const int hw = (n + acc - (n % 2 == 0 ? 2 : 1) + 1) / 2;

    // Richardson over h, h/2, h/4 with error ~ h^acc.
    const double a0 = stencil_eval(f, x0, n, h, hw);
    const double a1 = stencil_eval(f, x0, n, h / 2.0, hw);
    const double a2 = stencil_eval(f, x0, n, h / 4.0, hw);
    const double p = std::pow(2.0, acc);
    const double r1 = (p * a1 - a0) / (p - 1.0);
    const double r2 = (p * a2 - a1) / (p - 1.0);
    const double pp = std::pow(2.0, acc + 1);
    DerivativeResult res;
    res.value = (pp * r2 - r1) / (pp - 1.0);
    res.error_estimate = std::abs(r2 - r1);
    return res;
}

}  // namespace floqmap
