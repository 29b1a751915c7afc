// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Floquet analysis of the periodically modulated system. Quasienergies come
// from the one-period propagator, epsilon_a = -arg(lambda_a)/T folded to
// [-omega_p/2, omega_p/2); branches are labeled against the static dressed
// states by maximum-overlap assignment. An independent extended-space
// (Sambe) diagonalization of the same drive serves as a structural
// cross-check: every labeled propagator quasienergy must sit within
// 1e-6 omega_p of an extended-space eigenvalue.
//
// Two-level reductions: the propagator projected onto a dressed pair is
// polar-decomposed to the nearest unitary, whose eigensystem yields the
// effective gap 2g, effective detuning delta, and collision angle
// theta = arctan|2g/delta|.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floqmap/integrator.hpp"
#include "floqmap/model.hpp"

namespace floqmap {

// Fold x into [-omega_p/2, omega_p/2).
double fold(double x, double omega_p);

struct FloquetResult {
    double omega_p = 0.0;
    double period = 0.0;
    Eigen::VectorXd quasienergies;  // folded, one per mode column
    Eigen::MatrixXcd modes;         // Floquet modes at t = 0, in columns
    std::vector<int> label;         // label[bare index] -> mode column
    double unitarity = 0.0;         // Frobenius defect of U(T, 0)
    double orthonormality = 0.0;    // Frobenius defect of the mode frame

    double quasienergy_of(int bare_state) const { return quasienergies[label.at(bare_state)]; }
    Eigen::VectorXcd mode_of(int bare_state) const { return modes.col(label.at(bare_state)); }
};

FloquetResult floquet_spectrum(const System& system, const DriveSpec& drive,
                               const IntegratorOptions& opts = {});

// |fold(eps_a - eps_b)| between two labeled branches.
double folded_gap(const FloquetResult& fr, int bare_a, int bare_b);

// --- extended-space cross-check ---

// Truncation adapted to the modulation index: ceil(eps/omega_p) + 6,
// rounded up to a multiple of 4, capped at 40.
int sambe_default_harmonics(const DriveSpec& drive);

// All folded eigenvalues of the truncated extended-space Hamiltonian,
// sorted ascending. harmonics <= 0 selects the default truncation.
Eigen::VectorXd sambe_quasienergies(const System& system, const DriveSpec& drive,
                                    int harmonics = 0);

// max over labeled branches of the circle distance (mod omega_p) to the
// nearest extended-space eigenvalue.
double sambe_agreement(const FloquetResult& fr, const Eigen::VectorXd& sambe_folded);

// --- two-level reductions ---

struct PairEffective {
    double two_g = 0.0;     // effective gap (>= 0), rad/s
    double delta = 0.0;     // effective detuning, signed, rad/s
    double sigma_min = 0.0; // smallest singular value of the projected block
};

// Projected one-period propagator: columns of `pair` are the two (dressed)
// basis vectors; delta > 0 means the first column is the upper branch.
// Throws when sigma_min < 0.5 (pair subspace no longer isolated).
PairEffective ueff_pair(const Eigen::MatrixXcd& u_period, const Eigen::MatrixXcd& pair,
                        double period, double omega_p);

// Convenience: propagate, project onto the tracked dressed vectors of two
// bare anchors, reduce.
PairEffective pair_effective(const System& system, const DriveSpec& drive, int bare_a,
                             int bare_b, const IntegratorOptions& opts = {});

// arctan(|2g| / |delta|), in [0, pi/2].
double collision_angle(double two_g, double delta);

// --- anticrossing location ---

struct Anticrossing {
    double omega_p = 0.0;  // location of the minimum folded gap
    double gap = 0.0;      // the minimum folded gap, rad/s
};

// Minimize the folded quasienergy gap between two labeled branches over
// omega_p in [wp_lo, wp_hi]: coarse scan then golden-section refinement to
// wp_tol. drive_at(omega_p) supplies the full drive at each frequency
// (fixed amplitude or fixed eps/omega_p ratio, as the caller chooses).
Anticrossing find_anticrossing(const System& system,
                               const std::function<DriveSpec(double)>& drive_at, int bare_a,
                               int bare_b, double wp_lo, double wp_hi, int coarse_points = 33,
                               double wp_tol = 0.0, const IntegratorOptions& opts = {});

// --- driven ZZ ---

// zeta_d = eps(11) - eps(01) - eps(10) + eps(00) over modes (i, j), all other
// modes empty, from labeled folded quasienergies, unfolded by continuity
// along an amplitude ramp 0 -> drive.amplitude (ramp_steps points, with the
// static zeta as the seed).
double dynamic_zz(const System& system, const DriveSpec& drive, int mode_i, int mode_j,
                  int ramp_steps = 12, const IntegratorOptions& opts = {});

}  // namespace floqmap
