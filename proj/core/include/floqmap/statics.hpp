// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Static (undriven) spectra and effective parameters: dressed-state labeling
// by adiabatic continuation, Rayleigh-Schrodinger energies through 4th order,
// static ZZ, and the Schrieffer-Wolff effective qubit frequencies and
// couplings of the qubit-coupler-qubit circuit (with the analytic derivative
// ladder in the coupler frequency used by coupler-modulation strengths).

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "floqmap/model.hpp"

namespace floqmap {

struct DressedSpectrum {
    Eigen::VectorXd energies;   // ascending eigenvalues, rad/s
    Eigen::MatrixXd vectors;    // eigenvectors in columns
    std::vector<int> label;     // label[bare index] -> eigencolumn
    double energy_of(int bare_state) const { return energies[label.at(bare_state)]; }
    Eigen::VectorXd vector_of(int bare_state) const { return vectors.col(label.at(bare_state)); }
};

// One-shot diagonalization with maximum-overlap labeling.
DressedSpectrum dressed_spectrum(const System& system);

// Adiabatic continuation H0 + lambda V, lambda: 0 -> 1, with step halving
// when branch overlap degrades; robust for (near-)degenerate bare anchors,
// where the first infinitesimal step resolves symmetric/antisymmetric pairs.
DressedSpectrum tracked_spectrum(const System& system);

// zeta = E(1_i 1_j) + E(0) - E(1_i) - E(1_j), all other modes in 0.
double static_zz(const System& system, int mode_i, int mode_j);

// Rayleigh-Schrodinger corrections for one bare state: orders 2..4 of the
// energy in the coupling V (order 1 vanishes, V has no diagonal).
// Throws std::domain_error when a vanishing denominator makes the
// nondegenerate series invalid.
struct RsOrders {
    double e0 = 0.0;
    double e2 = 0.0;
    double e3 = 0.0;
    double e4 = 0.0;
    double through(int order) const;
};
RsOrders rs_orders(const System& system, int bare_state);

// Cumulative perturbative ZZ through the given order (2..4).
double pert_zz(const System& system, int mode_i, int mode_j, int order);

// --- Schrieffer-Wolff effective parameters (qubit-coupler-qubit) ---

struct QcqLayout {
    int q1 = -1, c = -1, q2 = -1;
    double j1c = 0.0, j2c = 0.0, j12 = 0.0;
};
// Requires exactly one coupler mode ('c' label prefix) coupled to both
// qubits; direct qubit-qubit coupling optional.
QcqLayout resolve_qcq(const System& system);

struct SwParams {
    double wt1 = 0.0;        // effective (Lamb-shifted) qubit frequencies
    double wt2 = 0.0;
    double jt12 = 0.0;       // effective |001> <-> |100> coupling
    double jt_101_002 = 0.0; // effective |101> <-> |002| coupling
    double jt_101_200 = 0.0; // effective |101> <-> |200| coupling
};
SwParams sw_effective_params(const System& system);

enum class JtVariant { j12, j101_002, j101_200 };

// Closed-form J~(omega_c) for a variant, evaluated at an arbitrary coupler
// frequency (the system's own frequency is not modified).
double jt_value(const System& system, JtVariant variant, double omega_c);
// d^n J~ / d omega_c^n at the system's coupler frequency, exact.
double jt_derivative_analytic(const System& system, JtVariant variant, int n);
// d^n (omega~_1 - omega~_2) / d omega_c^n at the coupler frequency, exact.
double lamb_split_derivative_analytic(const System& system, int n);

}  // namespace floqmap
