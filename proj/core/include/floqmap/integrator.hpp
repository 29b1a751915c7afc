// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Time-dependent Schrodinger propagation for one parametrically modulated
// mode. The stiff diagonal is removed analytically: in the interaction
// picture of H_diag(t) = E + eps cos(omega_p t + phi) A (A = number operator
// of the driven mode), the state obeys i dU/dt = V~(t) U with
// V~(t) = diag(u) V diag(conj(u)), u_j = exp(-i [E_j t + chi(t) A_j]),
// chi(t) = (eps/omega_p)(sin(omega_p t + phi) - sin phi).
// Lab-frame propagators are recovered as U(t, 0) = D(t) U_I(t, 0) with
// D(t) = diag(exp(-i [E t + chi(t) A])), D(0) = 1.
//
// Stepping: adaptive Runge-Kutta-Fehlberg 7(8) (boost::odeint) driven by a
// manual try_step loop that clamps to requested sample times and treats a
// long run of rejected steps as stiffness failure.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floqmap/model.hpp"

namespace floqmap {

struct IntegratorOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_consecutive_rejections = 60;
};

// Lab-frame propagator U(t1, t0) for the driven system.
Eigen::MatrixXcd propagate(const System& system, const DriveSpec& drive, double t0, double t1,
                           const IntegratorOptions& opts = {});

// U(T, 0) over one drive period.
Eigen::MatrixXcd propagate_period(const System& system, const DriveSpec& drive,
                                  const IntegratorOptions& opts = {});

// Lab-frame state at the given (ascending, >= 0) sample times.
// observer(k, psi) is called once per sample in order.
void propagate_state(const System& system, const DriveSpec& drive,
                     const Eigen::VectorXcd& psi0, const std::vector<double>& times,
                     const std::function<void(size_t, const Eigen::VectorXcd&)>& observer,
                     const IntegratorOptions& opts = {});

// Frobenius norm of U^dag U - 1.
double unitarity_defect(const Eigen::MatrixXcd& u);

}  // namespace floqmap
