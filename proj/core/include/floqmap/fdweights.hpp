// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Finite-difference machinery for the coupler-modulation Taylor coefficients:
// Fornberg's algorithm for weights of arbitrary derivative order on arbitrary
// grids, plus a central-difference driver with Richardson refinement used to
// differentiate effective-coupling curves J~(omega_c) up to sixth order.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace floqmap {

// Weights w(i, m) such that f^(m)(x0) ~= sum_i w(i, m) f(x[i]) for
// m = 0..max_order. Grid points must be distinct.
Eigen::MatrixXd fornberg_weights(double x0, const std::vector<double>& x, int max_order);

struct DerivativeResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |change| under the final Richardson halving
};

// n-th derivative of f at x0 from a symmetric central stencil of the given
// accuracy order (rounded up to even), refined by Richardson extrapolation
// over step halvings h, h/2, h/4.
DerivativeResult central_derivative(const std::function<double(double)>& f, double x0,
                                    int n, double h, int accuracy_order);

}  // namespace floqmap
