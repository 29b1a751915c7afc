// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Catalog of parametric sideband transitions and their effective strengths.
//
// Under frequency modulation of one mode, every pair of coupled product
// states (a, b) acquires sideband channels at detuning_(ab) + n omega_p with
// strength sqrt(C) J |J_n(arg)|, where arg = |occupation change of the driven
// mode| * eps_p/omega_p (Jacobi-Anger expansion of the modulated phase).
// For coupler modulation the qubit-channel strengths instead follow from the
// Taylor expansion of the effective coupling J~(omega_c(t)) in the drive:
// g^(m) = sum_n D_n binom(n, (n-|m|)/2) over n >= |m| of matching parity,
// with D_n = (eps^n / 2^n n!) d^n J~ / d omega_c^n.
//
// The catalog is generated, not hard-coded: sources are product states with
// total excitation <= 2 and empty couplers; a row is any source connected by
// one quantum exchange (co-rotating) or pair creation/annihilation
// (counter-rotating) along an interaction edge. For qubit-coupler-qubit
// systems the effective qubit-qubit edge is included even when no direct
// coupling is declared.

#pragma once

#include <string>
#include <vector>

#include "floqmap/model.hpp"
#include "floqmap/statics.hpp"

namespace floqmap {

enum class Rotating { co, counter };
enum class Channel { qubit, coupler };

struct TransitionEntry {
    int bra = 0, ket = 0;          // canonical orientation (see catalog())
    std::string bra_label, ket_label;
    Rotating rotating = Rotating::co;
    Channel channel = Channel::qubit;
    int edge_a = 0, edge_b = 0;    // modes of the mediating interaction edge
    double level_coefficient = 1;  // C = max(n_a) * max(n_b) over the pair
    double detuning = 0.0;         // signed E_bra - E_ket, rad/s
    double base_strength = 0.0;    // sqrt(C) J (or SW effective), rad/s
};

// Full catalog; detunings from bare energies or from the tracked dressed
// spectrum. Rows are ordered co-rotating first, then by (bra, ket) index.
std::vector<TransitionEntry> catalog(const System& system, bool dressed_detunings);

// Paper-facing wrappers: 2-mode catalogs use bare detunings (closed forms),
// 3-mode qubit-coupler-qubit catalogs use dressed energies.
std::vector<TransitionEntry> catalog_qq(const System& system);
std::vector<TransitionEntry> catalog_qcq(const System& system);

// Find a row by state labels (either orientation); throws if absent.
const TransitionEntry& find_entry(const std::vector<TransitionEntry>& rows,
                                  std::string_view a, std::string_view b);

// |occupation change| of `mode` across the transition (0 for spectators).
int drive_occupation_change(const System& system, const TransitionEntry& e, int mode);

// g_eff^(n) = base * J_n(eps_p/omega_p) for a directly modulated mode.
double qubit_mod_strength(double base_strength, int n, double eps_p, double omega_p);

// Bessel-argument dispatch for an arbitrary driven mode:
// base * J_n(|dn_drive| * eps_p/omega_p); spectator rows vanish for n != 0.
double sideband_strength(const System& system, const TransitionEntry& e, int drive_mode,
                         int n, double eps_p, double omega_p);

// Coupler-modulated qubit-channel strength g_eff^(m) for m >= 1, Taylor
// truncation N (default in callers: |m| + 2). Derivatives of the chosen
// J~ variant by central finite differences (analytic forms cross-check).
double coupler_mod_strength(const System& system, JtVariant variant, int m, double eps_p,
                            int taylor_order);

// Even-order DC shift of the effective coupling under coupler modulation.
double coupler_dc_coupling_shift(const System& system, double eps_p, int taylor_order);

// Stark-shifted qubit frequency difference Delta_12(eps_p): even Taylor
// orders of omega~_1 - omega~_2, truncated at the same order as strengths.
double stark_shifted_detuning(const System& system, double eps_p, int taylor_order);

// d^n J~ / d omega_c^n by finite differences (the default path used by
// coupler_mod_strength; jt_derivative_analytic is the cross-check).
double jt_derivative_fd(const System& system, JtVariant variant, int n);

// omega_p solving |detuning + n omega_p| = 0: omega_p = |detuning| / |n|.
double resonance_frequency(const TransitionEntry& e, int n);

// Sideband phase beta_n = n (phi_p + pi) + (eps_p/omega_p) sin(phi_p).
double beta_phase(int n, double eps_p, double omega_p, double phi_p);

}  // namespace floqmap
