// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Frequency-collision error budgets. Every catalogued transition contributes
// sidebands at detunings d0 + n omega_p with strength 2g_n; an off-resonant
// channel bounds the population it can steal by the Rabi envelope
// w = (2g)^2 / ((2g)^2 + delta^2), and over a gate of duration t_g the
// transferred population is w sin^2(Omega t_g / 2) <= w, Omega^2 =
// (2g)^2 + delta^2. The budget sums both forms over all channels except the
// intended target harmonic, split into co- and counter-rotating classes.
//
// Strength dispatch: for a directly modulated mode the Jacobi-Anger factor
// J_n(|dn| eps/omega_p) applies to every row; for coupler modulation,
// coupler-channel rows keep the same factor, co-rotating qubit-channel rows
// take the Taylor envelope g^(m) of the matched effective coupling (with the
// even-order DC shift at m = 0), and counter-rotating qubit-channel rows keep
// their bare strength at m = 0 only (their parametric sidebands are both
// suppressed and ~100 qubit linewidths detuned).

#pragma once

#include <string_view>
#include <vector>

#include "floqmap/model.hpp"
#include "floqmap/sidebands.hpp"

namespace floqmap {

enum class PulseConvention { pi_pulse, half_pi, two_pi };

// Duration of one pulse at target splitting 2g_t: pi / (2g_t) for a full
// transfer, half / double that for the other conventions.
double gate_time(double target_two_g, PulseConvention pc = PulseConvention::pi_pulse);

// One off-resonant channel: transferred population at time t, and its
// all-time worst case.
double rabi_transfer(double two_g, double detuning, double t);
double rabi_bound(double two_g, double detuning);

struct BudgetOptions {
    int harmonic_range = 15;  // n in [-range, range]
    bool stark = true;        // Stark-shift qubit-channel detunings (coupler drive)
    PulseConvention pulse = PulseConvention::pi_pulse;
    int taylor_order = 0;     // coupler-drive Taylor truncation; 0 = |m| + 2
};

struct BudgetTerm {
    int row = 0;               // index into the catalog passed in
    int harmonic = 0;          // n
    double two_g = 0.0;        // sideband strength, rad/s, >= 0
    double detuning = 0.0;     // d0 + n omega_p, rad/s, signed
    double weight = 0.0;       // (2g)^2 / ((2g)^2 + detuning^2)
    double pulse_error = 0.0;  // weight * sin^2(Omega t_gate / 2)
};

struct ErrorBudget {
    std::vector<BudgetTerm> terms;  // descending by weight
    double co_total = 0.0;
    double counter_total = 0.0;
    double total = 0.0;        // co + counter
    double pulse_total = 0.0;  // sum of pulse_error
    double target_two_g = 0.0;
    double gate = 0.0;         // seconds
};

// Strength of one (row, n) sideband channel under the dispatch rules above;
// drive.frequency must be positive. This is the single source of truth used
// by the budget, the amplitude re-solver, and the spectral audit.
double channel_strength(const System& system, const TransitionEntry& e, const DriveSpec& drive,
                        int n, const BudgetOptions& opts = {});

// Budget around the intended (target_row, target_harmonic) channel, which is
// excluded from the sums. Rows must come from catalog()/catalog_qq()/
// catalog_qcq() on the same system.
ErrorBudget error_budget(const System& system, const std::vector<TransitionEntry>& rows,
                         const DriveSpec& drive, int target_row, int target_harmonic,
                         const BudgetOptions& opts = {});

struct ResonanceSweepPoint {
    double move_freq = 0.0;      // swept mode frequency, rad/s
    double omega_p = 0.0;        // resonance drive frequency at this point, rad/s
    double eps = 0.0;            // re-solved drive amplitude, rad/s
    double target_two_g = 0.0;   // achieved target strength (within 0.1%)
    double qubit_total = 0.0;    // pulse-error sum over qubit-channel rows
    double coupler_total = 0.0;  // pulse-error sum over coupler-channel rows
    double pulse_total = 0.0;
};

// Error budget as a function of the operating resonance: one mode frequency
// is stepped over a grid, the drive frequency follows the resonance of the
// (target_bra, target_ket) transition at |target_order|, and at every grid
// point the drive amplitude is re-solved by bisection on the rising branch
// so the target strength stays at target_two_g to 0.1%. Per-channel
// pulse-error totals expose the competing trends (a farther resonance costs
// amplitude on one channel family and buys detuning on the other).
std::vector<ResonanceSweepPoint> error_vs_resonance_sweep(
    const System& system, const DriveSpec& drive, int move_mode,
    const std::vector<double>& move_freqs, std::string_view target_bra,
    std::string_view target_ket, int target_order, double target_two_g,
    const BudgetOptions& opts = {});

}  // namespace floqmap
