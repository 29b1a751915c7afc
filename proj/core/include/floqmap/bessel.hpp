// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Bessel functions of the first kind J_n for integer order: power series for
// small arguments, Miller's normalized downward recurrence otherwise.
// Sideband strengths are proportional to J_n(eps_p/omega_p), and error
// budgets sum harmonics up to |n| = 15, so the evaluator targets 1e-12
// accuracy for |x| <= 20, |n| <= 40.

#pragma once

#include <vector>

namespace floqmap {

// J_n(x) for any integer n and real x (symmetry-reduced internally).
double bessel_j(int n, double x);

// J_0(x) .. J_nmax(x) in one downward pass; nmax >= 0.
std::vector<double> bessel_jn(int nmax, double x);

}  // namespace floqmap
