// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "floqmap/statics.hpp"
#include "floqmap/units.hpp"

namespace floqmap {

double gate_time(double target_two_g, PulseConvention pc) {
    if (!(target_two_g > 0.0)) throw std::invalid_argument("gate_time: need 2g > 0");
    const double t_pi = units::pi / target_two_g;
    switch (pc) {
        case PulseConvention::pi_pulse: return t_pi;
        case PulseConvention::half_pi: return 0.5 * t_pi;
        case PulseConvention::two_pi: return 2.0 * t_pi;
    }
    throw std::logic_error("gate_time: unknown convention");
}

double rabi_bound(double two_g, double detuning) {
    const double g2 = two_g * two_g;
    const double o2 = g2 + detuning * detuning;
    return o2 > 0.0 ? g2 / o2 : 1.0;
}

double rabi_transfer(double two_g, double detuning, double t) {
    const double omega = std::hypot(two_g, detuning);
    const double s = std::sin(0.5 * omega * t);
    return rabi_bound(two_g, detuning) * s * s;
}

namespace {

// g^(0) of a variant: the DC value J~ plus the even-order drive-induced
// shift, sum over even n of (eps^n / 2^n n!) d^n J~ binom(n, n/2).
double variant_dc(const System& sys, JtVariant variant, double eps, int order) {
    double g = jt_derivative_fd(sys, variant, 0);
    for (int n = 2; n <= order; n += 2) {
        double coeff = 1.0;
        for (int k = 1; k <= n; ++k) coeff *= eps / (2.0 * k);
        double binom = 1.0;
        for (int k = 1; k <= n / 2; ++k) binom = binom * (n / 2 + k) / k;
        g += coeff * binom * jt_derivative_fd(sys, variant, n);
    }
    return g;
}

// Match a co-rotating qubit-channel row of a qubit-coupler-qubit system to
// its effective-coupling variant by the occupations of the two qubits.
JtVariant match_variant(const System& sys, const QcqLayout& lay, const TransitionEntry& e) {
    const auto has = [&](int x1, int x2) {
        return (sys.occupation(e.bra, lay.q1) == x1 && sys.occupation(e.bra, lay.q2) == x2) ||
               (sys.occupation(e.ket, lay.q1) == x1 && sys.occupation(e.ket, lay.q2) == x2);
    };
    if (has(1, 1) && has(0, 2)) return JtVariant::j101_002;
    if (has(1, 1) && has(2, 0)) return JtVariant::j101_200;
    return JtVariant::j12;
}

}  // namespace

double channel_strength(const System& system, const TransitionEntry& e, const DriveSpec& drive,
                        int n, const BudgetOptions& opts) {
    if (!(drive.frequency > 0.0))
        throw std::invalid_argument("channel_strength: drive frequency must be > 0");
    const bool coupler_drive = system.is_coupler(drive.mode);
    if (!coupler_drive || e.channel == Channel::coupler)
        return std::abs(
            sideband_strength(system, e, drive.mode, n, drive.amplitude, drive.frequency));
    if (e.rotating == Rotating::counter) return n == 0 ? e.base_strength : 0.0;
    const QcqLayout lay = resolve_qcq(system);
    const JtVariant variant = match_variant(system, lay, e);
    const int order =
        opts.taylor_order > 0 ? std::max(opts.taylor_order, std::abs(n)) : std::abs(n) + 2;
    if (n == 0) return std::abs(variant_dc(system, variant, drive.amplitude, std::max(order, 2)));
    return std::abs(coupler_mod_strength(system, variant, n, drive.amplitude, order));
}

ErrorBudget error_budget(const System& system, const std::vector<TransitionEntry>& rows,
                         const DriveSpec& drive, int target_row, int target_harmonic,
                         const BudgetOptions& opts) {
    if (target_row < 0 || target_row >= static_cast<int>(rows.size()))
        throw std::out_of_range("error_budget: target row out of range");
    const double wp = drive.frequency;
    const double eps = drive.amplitude;
    if (!(wp > 0.0)) throw std::invalid_argument("error_budget: drive frequency must be > 0");

    const bool coupler_drive = system.is_coupler(drive.mode);
    QcqLayout lay;
    double stark_eta = 0.0;
    if (coupler_drive) {
        lay = resolve_qcq(system);
        if (opts.stark && eps != 0.0) {
            const int order = opts.taylor_order > 0 ? opts.taylor_order : 4;
            stark_eta =
                stark_shifted_detuning(system, eps, order) - stark_shifted_detuning(system, 0.0, order);
        }
    }

    const auto strength = [&](const TransitionEntry& e, int n) -> double {
        return channel_strength(system, e, drive, n, opts);
    };

    // Stark adjustment of the signed detuning (qubit-channel exchange rows
    // shift with +-(delta12(eps) - delta12(0)) by orientation).
    const auto adjusted_d0 = [&](const TransitionEntry& e) -> double {
        if (!coupler_drive || stark_eta == 0.0 || e.channel != Channel::qubit ||
            e.rotating != Rotating::co)
            return e.detuning;
        const int c = system.occupation(e.bra, lay.q1) - system.occupation(e.ket, lay.q1);
        return e.detuning + c * stark_eta;
    };

    ErrorBudget out;
    {
        const TransitionEntry& tgt = rows[target_row];
        out.target_two_g = 2.0 * strength(tgt, target_harmonic);
        if (!(out.target_two_g > 0.0))
            throw std::domain_error("error_budget: target channel has zero strength");
        out.gate = gate_time(out.target_two_g, opts.pulse);
    }

    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        const TransitionEntry& e = rows[r];
        const double d0 = adjusted_d0(e);
        for (int n = -opts.harmonic_range; n <= opts.harmonic_range; ++n) {
            if (r == target_row && n == target_harmonic) continue;
            const double two_g = 2.0 * strength(e, n);
            if (two_g == 0.0) continue;
            BudgetTerm t;
            t.row = r;
            t.harmonic = n;
            t.two_g = two_g;
            t.detuning = d0 + n * wp;
            t.weight = rabi_bound(two_g, t.detuning);
            t.pulse_error = rabi_transfer(two_g, t.detuning, out.gate);
            (e.rotating == Rotating::co ? out.co_total : out.counter_total) += t.weight;
            out.pulse_total += t.pulse_error;
            out.terms.push_back(t);
        }
    }
    out.total = out.co_total + out.counter_total;
    std::stable_sort(out.terms.begin(), out.terms.end(),
                     [](const BudgetTerm& a, const BudgetTerm& b) { return a.weight > b.weight; });
    return out;
}

std::vector<ResonanceSweepPoint> error_vs_resonance_sweep(
    const System& system, const DriveSpec& drive, int move_mode,
    const std::vector<double>& move_freqs, std::string_view target_bra,
    std::string_view target_ket, int target_order, double target_two_g,
    const BudgetOptions& opts) {
    if (move_freqs.empty())
        throw std::invalid_argument("error_vs_resonance_sweep: empty frequency grid");
    if (!(target_two_g > 0.0))
        throw std::invalid_argument("error_vs_resonance_sweep: need target strength > 0");
    const int an = std::abs(target_order);
    if (an == 0) throw std::invalid_argument("error_vs_resonance_sweep: order must be nonzero");

    bool has_coupler = false;
    for (int m = 0; m < system.num_modes(); ++m) has_coupler = has_coupler || system.is_coupler(m);

    std::vector<ResonanceSweepPoint> out;
    out.reserve(move_freqs.size());
    for (const double f : move_freqs) {
        const System sys = system.with_mode_freq(move_mode, f);
        const auto rows = catalog(sys, /*dressed_detunings=*/has_coupler);
        const TransitionEntry& tgt = find_entry(rows, target_bra, target_ket);
        const int target_row = static_cast<int>(&tgt - rows.data());
        if (tgt.detuning == 0.0)
            throw std::domain_error("error_vs_resonance_sweep: zero detuning at a grid point");
        const double wp = std::abs(tgt.detuning) / an;
        const int n_signed = tgt.detuning > 0.0 ? -an : an;

        const auto budget_at = [&](double eps) {
            DriveSpec d = drive;
            d.amplitude = eps;
            d.frequency = wp;
            return error_budget(sys, rows, d, target_row, n_signed, opts);
        };

        // bracket on the rising branch of strength vs amplitude
        double e_hi = drive.amplitude > 0.0 ? drive.amplitude : 0.1 * wp;
        ErrorBudget bh = budget_at(e_hi);
        double prev = bh.target_two_g;
        int guard = 0;
        while (bh.target_two_g < target_two_g) {
            if (++guard > 60)
                throw std::domain_error(
                    "error_vs_resonance_sweep: target strength unreachable at this resonance");
            e_hi *= 1.5;
            bh = budget_at(e_hi);
            if (bh.target_two_g <= prev)
                throw std::domain_error(
                    "error_vs_resonance_sweep: target strength unreachable on the rising branch");
            prev = bh.target_two_g;
        }

        double e_lo = 0.0, e_best = e_hi;
        ErrorBudget best = std::move(bh);
        for (int it = 0;
             it < 80 && std::abs(best.target_two_g - target_two_g) > 1e-3 * target_two_g; ++it) {
            const double e_mid = 0.5 * (e_lo + e_hi);
            ErrorBudget bm = budget_at(e_mid);
            if (std::abs(bm.target_two_g - target_two_g) <
                std::abs(best.target_two_g - target_two_g)) {
                e_best = e_mid;
                best = bm;
            }
            (bm.target_two_g < target_two_g ? e_lo : e_hi) = e_mid;
        }

        ResonanceSweepPoint pt;
        pt.move_freq = f;
        pt.omega_p = wp;
        pt.eps = e_best;
        pt.target_two_g = best.target_two_g;
        for (const auto& t : best.terms)
            (rows[t.row].channel == Channel::qubit ? pt.qubit_total : pt.coupler_total) +=
                t.pulse_error;
        pt.pulse_total = best.pulse_total;
        out.push_back(pt);
    }
    return out;
}

}  // namespace floqmap
