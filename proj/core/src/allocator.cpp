// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "floqmap/bessel.hpp"
#include "floqmap/io.hpp"
#include "floqmap/sidebands.hpp"
#include "floqmap/statics.hpp"
#include "floqmap/units.hpp"

namespace floqmap {

namespace {

constexpr double kMinBoxWidth = 2.0 * units::pi * 10e3;   // 2 pi x 10 kHz
constexpr double kResonanceTol = 2.0 * units::pi * 1e3;   // 2 pi x 1 kHz
constexpr double kDefaultTrust = 2.0 * units::pi * 50e6;  // 2 pi x 50 MHz

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string kind_name(Constraint::Kind k) {
    switch (k) {
        case Constraint::Kind::resonance_equality: return "resonance-equality";
        case Constraint::Kind::parametric_limit: return "parametric-limit";
        case Constraint::Kind::detuning_margin: return "detuning-margin";
        case Constraint::Kind::zz_cap: return "zz-cap";
        case Constraint::Kind::box_bound: return "box-bound";
    }
    return "?";
}

enum class BoxStatus { violated, satisfied, unknown };

// Max/min of |J_m| over a (positive) argument interval, by dense sampling;
// rigor is not required because accepted points are re-checked exactly.
Interval bessel_abs_range(int m, Interval arg) {
    const int samples = 17;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double x = arg.lo + (arg.hi - arg.lo) * k / (samples - 1);
        const double v = std::abs(bessel_j(m, x));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

}  // namespace

// A catalog row linearized over the decision variables: the bare detuning is
// sum_m cf[m] freq_m + ca[m] anharm_m; the strength rule is recoverable from
// the stored structure. Rows are enumerated per coupling cell (a coupler with
// its two qubits, or a directly coupled pair) with every other mode grounded,
// so spectator-shifted copies of a process never enter the constraint set.
struct Allocator::Row {
    int bra = 0, ket = 0;
    std::string bra_label, ket_label;
    Rotating rotating = Rotating::co;
    Channel channel = Channel::qubit;
    int edge_a = 0, edge_b = 0;
    double edge_j = 0.0;  // bare J along the mediating edge (0 if purely effective)
    double sqrt_c = 1.0;
    std::vector<double> cf, ca;
    std::vector<int> occ_bra, occ_ket;
    std::vector<int> cell;   // global mode indices of the originating cell
    int cell_coupler = -1;   // global index of the cell's coupler, if any
};

namespace {

// Reference system at box centers (structure only; J values are fixed).
System reference_system(const AllocationProblem& p) {
    std::vector<ModeSpec> modes = p.modes;
    for (size_t m = 0; m < modes.size(); ++m) {
        modes[m].freq = p.freq_box[m].mid();
        modes[m].anharm = p.anharm_box[m].mid();
    }
    return System(modes, p.couplings);
}

bool label_is_coupler(const ModeSpec& m) { return !m.label.empty() && m.label[0] == 'c'; }

System system_at(const AllocationProblem& p, const std::vector<double>& freqs,
                 const std::vector<double>& anharms) {
    std::vector<ModeSpec> modes = p.modes;
    for (size_t k = 0; k < modes.size(); ++k) {
        modes[k].freq = freqs[k];
        modes[k].anharm = anharms[k];
    }
    return System(modes, p.couplings);
}

// Sub-system spanning one coupling cell, at the given assignment.
System cell_system_at(const AllocationProblem& p, const std::vector<double>& freqs,
                      const std::vector<double>& anharms, const std::vector<int>& cell) {
    std::vector<ModeSpec> modes;
    modes.reserve(cell.size());
    std::vector<int> local(p.modes.size(), -1);
    for (size_t k = 0; k < cell.size(); ++k) {
        ModeSpec m = p.modes[cell[k]];
        m.freq = freqs[cell[k]];
        m.anharm = anharms[cell[k]];
        modes.push_back(std::move(m));
        local[cell[k]] = static_cast<int>(k);
    }
    std::vector<CouplingSpec> couplings;
    for (const auto& c : p.couplings)
        if (local[c.a] >= 0 && local[c.b] >= 0)
            couplings.push_back({local[c.a], local[c.b], c.strength});
    return System(std::move(modes), std::move(couplings));
}

// Decompose the coupling graph into cells: one (qubit, coupler, qubit)
// triple per coupler, one two-mode cell per remaining direct edge.
std::vector<std::vector<int>> coupling_cells(const AllocationProblem& p) {
    const int nm = static_cast<int>(p.modes.size());
    std::vector<std::vector<int>> cells;
    std::vector<char> edge_done(p.couplings.size(), 0);
    for (int m = 0; m < nm; ++m) {
        if (!label_is_coupler(p.modes[m])) continue;
        std::vector<int> attached;
        for (size_t e = 0; e < p.couplings.size(); ++e) {
            const auto& c = p.couplings[e];
            if (c.a != m && c.b != m) continue;
            const int other = c.a == m ? c.b : c.a;
            if (label_is_coupler(p.modes[other]))
                throw std::invalid_argument("allocator: coupler-coupler edges are unsupported (" +
                                            p.modes[m].label + "-" + p.modes[other].label + ")");
            attached.push_back(other);
            edge_done[e] = 1;
        }
        if (attached.size() != 2)
            throw std::invalid_argument("allocator: coupler " + p.modes[m].label +
                                        " must couple exactly two qubits");
        std::sort(attached.begin(), attached.end());
        // the direct qubit-qubit edge, if any, belongs to the same cell
        for (size_t e = 0; e < p.couplings.size(); ++e) {
            const auto& c = p.couplings[e];
            if (std::min(c.a, c.b) == attached[0] && std::max(c.a, c.b) == attached[1])
                edge_done[e] = 1;
        }
        cells.push_back({attached[0], m, attached[1]});
    }
    for (size_t e = 0; e < p.couplings.size(); ++e) {
        if (edge_done[e]) continue;
        const auto& c = p.couplings[e];
        cells.push_back({std::min(c.a, c.b), std::max(c.a, c.b)});
    }
    return cells;
}

}  // namespace

Allocator::~Allocator() = default;
Allocator::Allocator(Allocator&&) noexcept = default;
Allocator& Allocator::operator=(Allocator&&) noexcept = default;

Allocator::Allocator(AllocationProblem problem) : problem_(std::move(problem)) {
    const size_t nm = problem_.modes.size();
    if (problem_.freq_box.size() != nm || problem_.anharm_box.size() != nm)
        throw std::invalid_argument("allocator: one freq/anharm box per mode required");
    for (const auto& b : problem_.freq_box)
        if (b.empty() || !std::isfinite(b.lo) || !std::isfinite(b.hi))
            throw std::invalid_argument("allocator: freq boxes must be finite and nonempty");
    for (const auto& b : problem_.anharm_box)
        if (b.empty() || !std::isfinite(b.lo) || !std::isfinite(b.hi))
            throw std::invalid_argument("allocator: anharm boxes must be finite and nonempty");
    if (problem_.margin <= 1.0 || problem_.parametric_margin <= 1.0)
        throw std::invalid_argument("allocator: margins must be > 1");

    const System ref = reference_system(problem_);
    std::vector<double> mid_f(nm), mid_a(nm);
    for (size_t k = 0; k < nm; ++k) {
        mid_f[k] = problem_.freq_box[k].mid();
        mid_a[k] = problem_.anharm_box[k].mid();
    }

    for (const auto& cell : coupling_cells(problem_)) {
        const System sub = cell_system_at(problem_, mid_f, mid_a, cell);
        int coupler = -1;
        for (int g : cell)
            if (label_is_coupler(problem_.modes[g])) coupler = g;
        for (const auto& e : catalog(sub, /*dressed_detunings=*/false)) {
            Row r;
            std::vector<int> occ(nm, 0);
            for (size_t k = 0; k < cell.size(); ++k)
                occ[cell[k]] = sub.occupation(e.bra, static_cast<int>(k));
            r.bra = ref.state_index(occ);
            r.occ_bra = occ;
            for (size_t k = 0; k < cell.size(); ++k)
                occ[cell[k]] = sub.occupation(e.ket, static_cast<int>(k));
            r.ket = ref.state_index(occ);
            r.occ_ket = occ;
            r.bra_label = ref.state_label(r.bra);
            r.ket_label = ref.state_label(r.ket);
            r.rotating = e.rotating;
            r.channel = e.channel;
            r.edge_a = cell[e.edge_a];
            r.edge_b = cell[e.edge_b];
            r.sqrt_c = std::sqrt(e.level_coefficient);
            for (const auto& c : problem_.couplings)
                if (std::min(c.a, c.b) == std::min(r.edge_a, r.edge_b) &&
                    std::max(c.a, c.b) == std::max(r.edge_a, r.edge_b))
                    r.edge_j = c.strength;
            r.cell = cell;
            r.cell_coupler = coupler;
            r.cf.resize(nm);
            r.ca.resize(nm);
            for (size_t m = 0; m < nm; ++m) {
                const int nb = r.occ_bra[m], nk = r.occ_ket[m];
                r.cf[m] = nb - nk;
                r.ca[m] = 0.5 * (nb * (nb - 1) - nk * (nk - 1));
            }
            rows_.push_back(std::move(r));
        }
    }

    // resolve targets to catalog rows
    target_row_.resize(problem_.targets.size(), -1);
    for (size_t t = 0; t < problem_.targets.size(); ++t) {
        const auto& tgt = problem_.targets[t];
        if (tgt.order == 0) throw std::invalid_argument("allocator: target order must be nonzero");
        if (tgt.drive_mode < 0 || tgt.drive_mode >= ref.num_modes())
            throw std::invalid_argument("allocator: target drive mode out of range");
        if (!(tgt.eps > 0.0))
            throw std::invalid_argument("allocator: target drive amplitude must be positive");
        const int sb = ref.parse_state(tgt.bra);
        const int sk = ref.parse_state(tgt.ket);
        for (size_t r = 0; r < rows_.size(); ++r) {
            if (std::minmax(rows_[r].bra, rows_[r].ket) == std::minmax(sb, sk))
                target_row_[t] = static_cast<int>(r);
        }
        if (target_row_[t] < 0)
            throw std::invalid_argument("allocator: target transition " + tgt.bra + "<->" +
                                        tgt.ket + " is not a catalogued channel");
    }

    // encode the constraint set
    const int range = std::max(1, problem_.harmonic_range);
    for (size_t t = 0; t < problem_.targets.size(); ++t) {
        const auto& tgt = problem_.targets[t];
        const Row& trow = rows_[target_row_[t]];
        const std::string tag =
            "[" + ref.mode(tgt.drive_mode).label + " " + trow.bra_label + "<->" +
            trow.ket_label + " n'=" + std::to_string(std::abs(tgt.order)) + "]";

        Constraint res;
        res.kind = Constraint::Kind::resonance_equality;
        res.target = static_cast<int>(t);
        res.row = target_row_[t];
        res.harmonic = std::abs(tgt.order);
        res.name = tag + " resonance";
        constraints_.push_back(res);

        Constraint par;
        par.kind = Constraint::Kind::parametric_limit;
        par.target = static_cast<int>(t);
        par.row = target_row_[t];
        par.margin = problem_.parametric_margin;
        par.name = tag + " parametric limit";
        constraints_.push_back(par);

        for (size_t r = 0; r < rows_.size(); ++r) {
            const Row& row = rows_[r];
            const bool is_target_row = static_cast<int>(r) == target_row_[t];
            const int dn = std::abs(row.occ_bra[tgt.drive_mode] - row.occ_ket[tgt.drive_mode]);
            // the drive modulates a row through swap engineering only when it
            // is the row's own cell coupler
            const bool sw_drive =
                row.cell_coupler == tgt.drive_mode && row.channel == Channel::qubit;
            for (int m = -range; m <= range; ++m) {
                if (is_target_row && std::abs(m) == std::abs(tgt.order)) continue;
                // skip channels whose strength is structurally zero
                if (sw_drive) {
                    if (row.rotating == Rotating::counter && m != 0) continue;
                } else {
                    if (dn == 0 && m != 0) continue;
                }
                Constraint dm;
                dm.kind = Constraint::Kind::detuning_margin;
                dm.target = static_cast<int>(t);
                dm.row = static_cast<int>(r);
                dm.harmonic = m;
                dm.margin = problem_.margin;
                dm.name = tag + " " + row.bra_label + "<->" + row.ket_label +
                          " m=" + std::to_string(m);
                constraints_.push_back(dm);
            }
        }

        // mirror of the intended harmonic: the same pair, detuned by 2 |d0|
        Constraint mir;
        mir.kind = Constraint::Kind::detuning_margin;
        mir.target = static_cast<int>(t);
        mir.row = target_row_[t];
        mir.harmonic = std::abs(tgt.order);
        mir.margin = problem_.margin;
        mir.name = tag + " " + trow.bra_label + "<->" + trow.ket_label + " mirror m=" +
                   std::to_string(std::abs(tgt.order));
        constraints_.push_back(mir);
    }

    if (problem_.zz_cap > 0.0) {
        for (const auto& c : ref.couplings()) {
            if (ref.is_coupler(c.a) || ref.is_coupler(c.b)) continue;
            Constraint zz;
            zz.kind = Constraint::Kind::zz_cap;
            zz.row = static_cast<int>(zz_pairs_.size());
            zz.margin = problem_.zz_cap;
            zz.name = "zz " + ref.mode(c.a).label + "-" + ref.mode(c.b).label;
            constraints_.push_back(zz);
            zz_pairs_.emplace_back(c.a, c.b);
        }
    }

    for (size_t m = 0; m < nm; ++m) {
        Constraint bf;
        bf.kind = Constraint::Kind::box_bound;
        bf.row = static_cast<int>(m);
        bf.name = "box " + problem_.modes[m].label + " freq";
        constraints_.push_back(bf);
        Constraint ba;
        ba.kind = Constraint::Kind::box_bound;
        ba.row = static_cast<int>(nm + m);
        ba.name = "box " + problem_.modes[m].label + " anharm";
        constraints_.push_back(ba);
    }
}

Interval Allocator::row_detuning(const Row& row, const std::vector<Interval>& freqs,
                                 const std::vector<Interval>& anharms) const {
    Interval d(0.0);
    for (size_t m = 0; m < freqs.size(); ++m) {
        if (row.cf[m] != 0.0) d = d + row.cf[m] * freqs[m];
        if (row.ca[m] != 0.0) d = d + row.ca[m] * anharms[m];
    }
    return d;
}

// Static (no-drive) strength scale of a row: sqrt(C) J for direct edges, the
// matched effective coupling for qubit-channel rows of a coupler-mediated
// system.
double Allocator::static_base_at(const Row& row, const std::vector<double>& freqs,
                                 const std::vector<double>& anharms) const {
    if (row.cell_coupler < 0 || row.channel == Channel::coupler ||
        row.rotating == Rotating::counter)
        return row.sqrt_c * std::abs(row.edge_j);
    // co-rotating qubit-channel row in a coupler cell: effective coupling
    const System sub = cell_system_at(problem_, freqs, anharms, row.cell);
    const auto lay = resolve_qcq(sub);
    const int g1 = row.cell[lay.q1], g2 = row.cell[lay.q2];
    const auto has = [&](int x1, int x2) {
        return (row.occ_bra[g1] == x1 && row.occ_bra[g2] == x2) ||
               (row.occ_ket[g1] == x1 && row.occ_ket[g2] == x2);
    };
    JtVariant variant = JtVariant::j12;
    double scale = row.sqrt_c;
    if (has(1, 1) && has(0, 2)) {
        variant = JtVariant::j101_002;
        scale = 1.0;  // sqrt(2) folded into the closed form
    } else if (has(1, 1) && has(2, 0)) {
        variant = JtVariant::j101_200;
        scale = 1.0;
    }
    return scale * std::abs(jt_value(sub, variant, sub.mode(lay.c).freq));
}

double Allocator::strength_at(int target, const Row& row, int m, double omega_p,
                              const std::vector<double>& freqs,
                              const std::vector<double>& anharms) const {
    const auto& tgt = problem_.targets[target];

    if (row.cell_coupler == tgt.drive_mode && row.channel == Channel::qubit) {
        if (row.rotating == Rotating::counter)
            return m == 0 ? row.sqrt_c * std::abs(row.edge_j) : 0.0;
        const System sub = cell_system_at(problem_, freqs, anharms, row.cell);
        const auto lay = resolve_qcq(sub);
        const int g1 = row.cell[lay.q1], g2 = row.cell[lay.q2];
        const auto has = [&](int x1, int x2) {
            return (row.occ_bra[g1] == x1 && row.occ_bra[g2] == x2) ||
                   (row.occ_ket[g1] == x1 && row.occ_ket[g2] == x2);
        };
        JtVariant variant = JtVariant::j12;
        double scale = row.sqrt_c;
        if (has(1, 1) && has(0, 2)) {
            variant = JtVariant::j101_002;
            scale = 1.0;
        } else if (has(1, 1) && has(2, 0)) {
            variant = JtVariant::j101_200;
            scale = 1.0;
        }
        if (m == 0)
            return scale * std::abs(jt_value(sub, variant, sub.mode(lay.c).freq) +
                                    coupler_dc_coupling_shift(sub, tgt.eps, 4));
        return scale * std::abs(coupler_mod_strength(sub, variant, m, tgt.eps, std::abs(m) + 2));
    }

    const int dn = std::abs(row.occ_bra[tgt.drive_mode] - row.occ_ket[tgt.drive_mode]);
    return static_base_at(row, freqs, anharms) * std::abs(bessel_j(m, dn * tgt.eps / omega_p));
}

Interval Allocator::strength_envelope(int target, const Row& row, int m, Interval omega_p,
                                      const std::vector<double>& mid_freqs,
                                      const std::vector<double>& mid_anharms) const {
    const auto& tgt = problem_.targets[target];
    const int dn = std::abs(row.occ_bra[tgt.drive_mode] - row.occ_ket[tgt.drive_mode]);

    // rows whose base strength is box-constant admit an exact envelope
    const bool constant_base = row.cell_coupler < 0 || row.channel == Channel::coupler ||
                               row.rotating == Rotating::counter;
    if (constant_base) {
        const double base = row.sqrt_c * std::abs(row.edge_j);
        if (dn == 0) return m == 0 ? Interval(base) : Interval(0.0);
        const double wlo = std::max(omega_p.lo, 1.0);
        const double whi = std::max(omega_p.hi, wlo);
        const Interval arg(dn * tgt.eps / whi, dn * tgt.eps / wlo);
        const Interval j = bessel_abs_range(std::abs(m), arg);
        return {base * j.lo, base * j.hi};
    }
    // Effective-coupling rows: frozen at the box-center assignment. Accepted
    // points are re-checked exactly, so this only steers the search.
    try {
        const double v =
            strength_at(target, row, m, std::max(omega_p.mid(), 1.0), mid_freqs, mid_anharms);
        return Interval(v);
    } catch (const std::exception&) {
        return Interval(0.0, std::numeric_limits<double>::infinity());
    }
}

std::vector<double> Allocator::implied_omega_p(const std::vector<double>& freqs,
                                               const std::vector<double>& anharms) const {
    std::vector<Interval> fi(freqs.begin(), freqs.end());
    std::vector<Interval> ai(anharms.begin(), anharms.end());
    std::vector<double> wp(problem_.targets.size(), 0.0);
    for (size_t t = 0; t < problem_.targets.size(); ++t) {
        const double d0 = row_detuning(rows_[target_row_[t]], fi, ai).mid();
        wp[t] = std::abs(d0) / std::abs(problem_.targets[t].order);
    }
    return wp;
}

CheckResult Allocator::check(const std::vector<double>& freqs,
                             const std::vector<double>& anharms,
                             const std::vector<double>& omega_p) const {
    const size_t nm = problem_.modes.size();
    if (freqs.size() != nm || anharms.size() != nm ||
        omega_p.size() != problem_.targets.size())
        throw std::invalid_argument("allocator check: assignment size mismatch");

    std::vector<Interval> fi(freqs.begin(), freqs.end());
    std::vector<Interval> ai(anharms.begin(), anharms.end());

    // signed target detunings fix the effective harmonic orientation
    std::vector<double> d0(problem_.targets.size());
    std::vector<int> n_eff(problem_.targets.size());
    for (size_t t = 0; t < problem_.targets.size(); ++t) {
        d0[t] = row_detuning(rows_[target_row_[t]], fi, ai).mid();
        const int an = std::abs(problem_.targets[t].order);
        n_eff[t] = d0[t] > 0.0 ? -an : an;
    }

    CheckResult out;
    out.worst_margin = std::numeric_limits<double>::infinity();
    bool all_pass = true;

    std::optional<System> sys;  // built on demand for zz rows

    for (const auto& c : constraints_) {
        ConstraintReport rep;
        rep.name = c.name;
        rep.kind = c.kind;
        switch (c.kind) {
            case Constraint::Kind::resonance_equality: {
                const double wp = omega_p[c.target];
                const double residual = std::abs(d0[c.target] + n_eff[c.target] * wp);
                rep.achieved = residual;
                rep.required = kResonanceTol;
                rep.pass = wp > 0.0 && residual <= kResonanceTol;
                break;
            }
            case Constraint::Kind::parametric_limit: {
                const double wp = omega_p[c.target];
                rep.required = c.margin;
                try {
                    const double base = 2.0 * static_base_at(rows_[c.row], freqs, anharms);
                    rep.achieved = base > 0.0 ? wp / base : std::numeric_limits<double>::infinity();
                    rep.pass = rep.achieved >= rep.required;
                } catch (const std::exception&) {
                    rep.singular = true;
                    rep.pass = false;
                }
                break;
            }
            case Constraint::Kind::detuning_margin: {
                const double wp = omega_p[c.target];
                const bool mirror = c.row == target_row_[c.target] &&
                                    c.name.find("mirror") != std::string::npos;
                const int m = mirror ? -n_eff[c.target] : c.harmonic;
                const double det = mirror
                                       ? 2.0 * d0[c.target]
                                       : row_detuning(rows_[c.row], fi, ai).mid() + m * wp;
                rep.required = c.margin;
                double s = 0.0;
                try {
                    s = strength_at(c.target, rows_[c.row], m, std::max(wp, 1.0), freqs,
                                    anharms);
                } catch (const std::exception&) {
                    rep.singular = true;
                }
                if (rep.singular) {
                    rep.achieved = 0.0;
                    rep.pass = false;
                } else if (s == 0.0) {
                    rep.achieved = std::numeric_limits<double>::infinity();
                    rep.pass = true;
                } else {
                    rep.achieved = std::abs(det) / (2.0 * s);
                    rep.pass = rep.achieved >= rep.required;
                }
                break;
            }
            case Constraint::Kind::zz_cap: {
                if (!sys) sys.emplace(system_at(problem_, freqs, anharms));
                const auto [qa, qb] = zz_pairs_[c.row];
                rep.required = c.margin;
                try {
                    rep.achieved = std::abs(pert_zz(*sys, qa, qb, 2));
                    rep.pass = rep.achieved <= rep.required;
                } catch (const std::exception&) {
                    rep.singular = true;
                    rep.pass = false;
                }
                break;
            }
            case Constraint::Kind::box_bound: {
                const size_t v = static_cast<size_t>(c.row);
                const double x = v < nm ? freqs[v] : anharms[v - nm];
                const Interval box =
                    v < nm ? problem_.freq_box[v] : problem_.anharm_box[v - nm];
                rep.achieved = x;
                rep.required = 0.0;
                rep.pass = box.contains(x);
                break;
            }
        }
        all_pass = all_pass && rep.pass;
        if (!rep.singular && rep.required > 0.0 && std::isfinite(rep.achieved) &&
            (c.kind == Constraint::Kind::parametric_limit ||
             c.kind == Constraint::Kind::detuning_margin))
            out.worst_margin = std::min(out.worst_margin, rep.achieved / rep.required);
        if (c.kind == Constraint::Kind::zz_cap && rep.achieved > 0.0 &&
            std::isfinite(rep.achieved))
            out.worst_margin = std::min(out.worst_margin, rep.required / rep.achieved);
        out.rows.push_back(std::move(rep));
    }
    out.satisfiable = all_pass;
    if (!std::isfinite(out.worst_margin)) out.worst_margin = 0.0;
    return out;
}

namespace {
struct SearchBox {
    std::vector<Interval> dims;  // freqs then anharms
    int depth = 0;
};
}  // namespace

AllocationSolution Allocator::solve() const {
    AllocationSolution first = solve_first_feasible();
    if (problem_.objective == AllocObjective::first_feasible || !first.satisfiable)
        return first;

    // Maximize the worst margin by monotone bisection on a scale factor
    // applied to every ratio margin: feasibility is monotone in the scale.
    const auto feasible_at = [&](double scale) -> AllocationSolution {
        AllocationProblem scaled = problem_;
        scaled.objective = AllocObjective::first_feasible;
        scaled.margin = problem_.margin * scale;
        scaled.parametric_margin = problem_.parametric_margin * scale;
        return Allocator(scaled).solve();
    };

    AllocationSolution best = first;
    std::uint64_t nodes = first.nodes_explored;
    double lo = 1.0, hi = 2.0;
    for (int it = 0; it < 6; ++it) {
        AllocationSolution s = feasible_at(hi);
        nodes += s.nodes_explored;
        if (!s.satisfiable) break;
        best = std::move(s);
        lo = hi;
        hi *= 2.0;
    }
    for (int it = 0; it < 12 && hi - lo > 0.02 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        AllocationSolution s = feasible_at(mid);
        nodes += s.nodes_explored;
        if (s.satisfiable) {
            best = std::move(s);
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // restate the winning point against the original margins
    const CheckResult cr = check(best.freqs, best.anharms, best.omega_p);
    best.report = cr.rows;
    best.worst_margin = cr.worst_margin;
    best.satisfiable = cr.satisfiable;
    best.nodes_explored = nodes;
    return best;
}

AllocationSolution Allocator::solve_first_feasible() const {
    const size_t nm = problem_.modes.size();
    const size_t nd = 2 * nm;

    SearchBox root;
    root.dims.reserve(nd);
    for (const auto& b : problem_.freq_box) root.dims.push_back(b);
    for (const auto& b : problem_.anharm_box) root.dims.push_back(b);

    std::vector<std::uint64_t> violations(constraints_.size(), 0);
    std::uint64_t nodes = 0;

    const auto box_pruned = [&](const SearchBox& box) -> bool {
        std::vector<Interval> fi(box.dims.begin(), box.dims.begin() + nm);
        std::vector<Interval> ai(box.dims.begin() + nm, box.dims.end());
        std::vector<double> mid_f(nm), mid_a(nm);
        for (size_t k = 0; k < nm; ++k) {
            mid_f[k] = fi[k].mid();
            mid_a[k] = ai[k].mid();
        }
        std::vector<Interval> wp(problem_.targets.size());
        for (size_t t = 0; t < problem_.targets.size(); ++t) {
            const Interval a = abs(row_detuning(rows_[target_row_[t]], fi, ai));
            const double n = std::abs(problem_.targets[t].order);
            wp[t] = Interval(a.lo / n, a.hi / n);
        }

        for (size_t ci = 0; ci < constraints_.size(); ++ci) {
            const Constraint& c = constraints_[ci];
            BoxStatus st = BoxStatus::unknown;
            switch (c.kind) {
                case Constraint::Kind::resonance_equality:
                    st = wp[c.target].hi > 0.0 ? BoxStatus::unknown : BoxStatus::violated;
                    break;
                case Constraint::Kind::parametric_limit: {
                    // the target row's base strength is box-constant exactly when
                    // its cell carries no coupler
                    if (rows_[c.row].cell_coupler < 0) {
                        const double base = 2.0 * rows_[c.row].sqrt_c *
                                            std::abs(rows_[c.row].edge_j);
                        if (wp[c.target].lo >= c.margin * base)
                            st = BoxStatus::satisfied;
                        else if (wp[c.target].hi < c.margin * base)
                            st = BoxStatus::violated;
                    }
                    break;
                }
                case Constraint::Kind::detuning_margin: {
                    const bool mirror = c.row == target_row_[c.target] &&
                                        c.name.find("mirror") != std::string::npos;
                    const Row& row = rows_[c.row];
                    const Interval det =
                        mirror ? 2.0 * row_detuning(row, fi, ai)
                               : row_detuning(row, fi, ai) +
                                     Interval(static_cast<double>(c.harmonic)) * wp[c.target];
                    const Interval env = strength_envelope(
                        c.target, row, std::abs(c.harmonic), wp[c.target], mid_f, mid_a);
                    if (!std::isfinite(env.hi))
                        st = BoxStatus::unknown;
                    else if (det.mig() >= c.margin * 2.0 * env.hi)
                        st = BoxStatus::satisfied;
                    else if (det.mag() < c.margin * 2.0 * env.lo)
                        st = BoxStatus::violated;
                    break;
                }
                case Constraint::Kind::zz_cap:
                case Constraint::Kind::box_bound:
                    st = BoxStatus::unknown;  // decided at point checks
                    break;
            }
            if (st == BoxStatus::violated) {
                ++violations[ci];
                return true;
            }
        }
        return false;
    };

    const auto try_point = [&](const SearchBox& box, AllocationSolution& sol) -> bool {
        std::vector<double> f(nm), a(nm);
        for (size_t k = 0; k < nm; ++k) {
            f[k] = box.dims[k].mid();
            a[k] = box.dims[nm + k].mid();
        }
        const auto wp = implied_omega_p(f, a);
        for (double w : wp)
            if (!(w > 0.0)) return false;
        const CheckResult cr = check(f, a, wp);
        if (!cr.satisfiable) return false;
        sol.satisfiable = true;
        sol.stage = "bare";
        sol.freqs = f;
        sol.anharms = a;
        sol.omega_p = wp;
        sol.worst_margin = cr.worst_margin;
        sol.report = cr.rows;
        return true;
    };

    AllocationSolution sol;
    std::vector<SearchBox> stack{root};
    bool budget_hit = false;
    while (!stack.empty()) {
        if (++nodes > problem_.max_nodes) {
            budget_hit = true;
            break;
        }
        SearchBox box = std::move(stack.back());
        stack.pop_back();

        if (box_pruned(box)) continue;
        if (try_point(box, sol)) {
            sol.nodes_explored = nodes;
            return sol;
        }

        int widest = -1;
        double w = kMinBoxWidth;
        for (size_t k = 0; k < nd; ++k) {
            if (box.dims[k].width() > w) {
                w = box.dims[k].width();
                widest = static_cast<int>(k);
            }
        }
        if (widest < 0) continue;  // below resolution everywhere

        SearchBox left = box, right = box;
        const double mid = box.dims[widest].mid();
        left.dims[widest] = Interval(box.dims[widest].lo, mid);
        right.dims[widest] = Interval(mid, box.dims[widest].hi);
        left.depth = right.depth = box.depth + 1;
        if ((splitmix64(problem_.seed ^ static_cast<std::uint64_t>(box.depth)) & 1u) == 0) {
            stack.push_back(std::move(right));
            stack.push_back(std::move(left));
        } else {
            stack.push_back(std::move(left));
            stack.push_back(std::move(right));
        }
    }

    sol.satisfiable = false;
    sol.stage = "bare";
    sol.nodes_explored = nodes;
    sol.message = budget_hit ? "search budget exhausted before a feasible point was found"
                             : "unsatisfiable within bounds and resolution";
    std::vector<size_t> order(constraints_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return violations[a] > violations[b]; });
    std::string tight;
    for (size_t i = 0; i < order.size() && i < 3; ++i) {
        if (violations[order[i]] == 0) break;
        if (!tight.empty()) tight += "; ";
        tight += constraints_[order[i]].name;
    }
    if (!tight.empty()) sol.message += " (tightest: " + tight + ")";
    return sol;
}

AllocationSolution Allocator::refine_with_dressed(const AllocationSolution& bare,
                                                  double trust_radius, bool move_modes) const {
    if (!bare.satisfiable)
        throw std::invalid_argument("refine_with_dressed: needs a satisfiable bare solution");
    if (trust_radius <= 0.0) trust_radius = kDefaultTrust;
    const size_t nm = problem_.modes.size();

    // Evaluate the constraint set with dressed row detunings and dressed
    // omega_p (clamped to the trust radius around the bare omega_p).
    const auto evaluate = [&](const std::vector<double>& freqs,
                              const std::vector<double>& anharms)
        -> std::pair<CheckResult, std::vector<double>> {
        const System sys = system_at(problem_, freqs, anharms);
        const DressedSpectrum ds = tracked_spectrum(sys);

        std::vector<double> d0(problem_.targets.size());
        std::vector<int> n_eff(problem_.targets.size());
        std::vector<double> wp(problem_.targets.size());
        for (size_t t = 0; t < problem_.targets.size(); ++t) {
            const Row& trow = rows_[target_row_[t]];
            d0[t] = ds.energy_of(trow.bra) - ds.energy_of(trow.ket);
            const int an = std::abs(problem_.targets[t].order);
            n_eff[t] = d0[t] > 0.0 ? -an : an;
            double w = std::abs(d0[t]) / an;
            wp[t] = std::clamp(w, bare.omega_p[t] - trust_radius,
                               bare.omega_p[t] + trust_radius);
        }

        CheckResult cr = check(freqs, anharms, wp);
        bool all = true;
        double worst = std::numeric_limits<double>::infinity();
        for (size_t ci = 0; ci < constraints_.size(); ++ci) {
            const Constraint& c = constraints_[ci];
            ConstraintReport& rep = cr.rows[ci];
            if (c.kind == Constraint::Kind::resonance_equality) {
                const double residual =
                    std::abs(d0[c.target] + n_eff[c.target] * wp[c.target]);
                rep.achieved = residual;
                rep.pass = wp[c.target] > 0.0 && residual <= kResonanceTol;
            } else if (c.kind == Constraint::Kind::detuning_margin && !rep.singular) {
                const bool mirror = c.row == target_row_[c.target] &&
                                    c.name.find("mirror") != std::string::npos;
                const Row& row = rows_[c.row];
                const double dd = ds.energy_of(row.bra) - ds.energy_of(row.ket);
                const int m = mirror ? -n_eff[c.target] : c.harmonic;
                const double det = mirror ? 2.0 * dd : dd + m * wp[c.target];
                try {
                    const double s = strength_at(c.target, row, m,
                                                 std::max(wp[c.target], 1.0), freqs, anharms);
                    rep.achieved = s == 0.0 ? std::numeric_limits<double>::infinity()
                                            : std::abs(det) / (2.0 * s);
                    rep.pass = rep.achieved >= rep.required;
                } catch (const std::exception&) {
                    rep.singular = true;
                    rep.pass = false;
                }
            }
            all = all && rep.pass;
            if (!rep.singular && rep.required > 0.0 && std::isfinite(rep.achieved) &&
                (c.kind == Constraint::Kind::parametric_limit ||
                 c.kind == Constraint::Kind::detuning_margin))
                worst = std::min(worst, rep.achieved / rep.required);
        }
        cr.satisfiable = all;
        cr.worst_margin = std::isfinite(worst) ? worst : 0.0;
        return {cr, wp};
    };

    std::vector<double> freqs = bare.freqs, anharms = bare.anharms;
    auto [cr, wp] = evaluate(freqs, anharms);

    if (move_modes) {
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        for (size_t mmode = 0; mmode < nm; ++mmode) {
            if (problem_.freq_box[mmode].width() <= 0.0) continue;
            double lo = std::max(problem_.freq_box[mmode].lo, bare.freqs[mmode] - trust_radius);
            double hi = std::min(problem_.freq_box[mmode].hi, bare.freqs[mmode] + trust_radius);
            if (!(hi > lo)) continue;
            const auto score = [&](double f) {
                std::vector<double> fx = freqs;
                fx[mmode] = f;
                return evaluate(fx, anharms).first.satisfiable
                           ? evaluate(fx, anharms).first.worst_margin
                           : -1.0;
            };
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = score(x1), f2 = score(x2);
            for (int it = 0; it < 20; ++it) {
                if (f1 >= f2) {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - invphi * (hi - lo);
                    f1 = score(x1);
                } else {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + invphi * (hi - lo);
                    f2 = score(x2);
                }
            }
            const double cand = f1 >= f2 ? x1 : x2;
            if (std::max(f1, f2) > cr.worst_margin) {
                freqs[mmode] = cand;
                std::tie(cr, wp) = evaluate(freqs, anharms);
            }
        }
    }

    AllocationSolution out;
    out.satisfiable = cr.satisfiable;
    out.stage = "refined";
    out.freqs = freqs;
    out.anharms = anharms;
    out.omega_p = wp;
    out.worst_margin = cr.worst_margin;
    out.report = cr.rows;
    if (!cr.satisfiable) {
        out.message = "refinement could not restore feasibility within the trust radius";
        std::string bad;
        for (const auto& rep : cr.rows)
            if (!rep.pass) {
                if (!bad.empty()) bad += "; ";
                bad += rep.name;
                if (bad.size() > 160) break;
            }
        if (!bad.empty()) out.message += " (violated: " + bad + ")";
    }
    return out;
}

std::string Allocator::export_smt() const {
    const size_t nm = problem_.modes.size();
    std::vector<Interval> fi(problem_.freq_box);
    std::vector<Interval> ai(problem_.anharm_box);
    std::vector<double> mid_f(nm), mid_a(nm);
    for (size_t k = 0; k < nm; ++k) {
        mid_f[k] = fi[k].mid();
        mid_a[k] = ai[k].mid();
    }
    const auto wp_mid = implied_omega_p(mid_f, mid_a);

    const auto mhz = [](double w) { return format_number(w / units::MHz); };
    std::ostringstream s;
    s << "; floqmap constraint export (frequencies in MHz; strength envelopes\n"
         "; frozen at box-center values -- re-derive them when moving boxes)\n"
         "(set-logic QF_NRA)\n";
    for (size_t k = 0; k < nm; ++k) {
        const std::string fl = "f_" + problem_.modes[k].label;
        const std::string al = "a_" + problem_.modes[k].label;
        s << "(declare-const " << fl << " Real)\n";
        s << "(declare-const " << al << " Real)\n";
        s << "(assert (and (<= " << mhz(fi[k].lo) << " " << fl << ") (<= " << fl << " "
          << mhz(fi[k].hi) << ")))\n";
        s << "(assert (and (<= " << mhz(ai[k].lo) << " " << al << ") (<= " << al << " "
          << mhz(ai[k].hi) << ")))\n";
    }

    const auto detuning_expr = [&](const Row& row) {
        std::ostringstream e;
        e << "(+";
        for (size_t k = 0; k < nm; ++k) {
            if (row.cf[k] != 0.0)
                e << " (* " << format_number(row.cf[k]) << " f_" << problem_.modes[k].label
                  << ")";
            if (row.ca[k] != 0.0)
                e << " (* " << format_number(row.ca[k]) << " a_" << problem_.modes[k].label
                  << ")";
        }
        e << " 0)";
        return e.str();
    };

    for (size_t t = 0; t < problem_.targets.size(); ++t) {
        const std::string wpv = "wp_" + std::to_string(t);
        s << "(declare-const " << wpv << " Real)\n";
        s << "(assert (= " << wpv << " (/ (abs " << detuning_expr(rows_[target_row_[t]])
          << ") " << std::abs(problem_.targets[t].order) << ")))\n";
    }

    for (const auto& c : constraints_) {
        switch (c.kind) {
            case Constraint::Kind::resonance_equality:
                s << "(assert (> wp_" << c.target << " 0)) ; " << c.name << "\n";
                break;
            case Constraint::Kind::parametric_limit: {
                double base = 0.0;
                try {
                    base = 2.0 * static_base_at(rows_[c.row], mid_f, mid_a);
                } catch (const std::exception&) {
                }
                s << "(assert (>= wp_" << c.target << " (* " << format_number(c.margin) << " "
                  << mhz(base) << "))) ; " << c.name << "\n";
                break;
            }
            case Constraint::Kind::detuning_margin: {
                const bool mirror = c.row == target_row_[c.target] &&
                                    c.name.find("mirror") != std::string::npos;
                double env = 0.0;
                try {
                    env = strength_at(c.target, rows_[c.row], c.harmonic,
                                      std::max(wp_mid[c.target], 1.0), mid_f, mid_a);
                } catch (const std::exception&) {
                }
                if (mirror)
                    s << "(assert (>= (abs (* 2 " << detuning_expr(rows_[c.row]) << ")) (* "
                      << format_number(c.margin) << " " << mhz(2.0 * env) << "))) ; " << c.name
                      << "\n";
                else
                    s << "(assert (>= (abs (+ " << detuning_expr(rows_[c.row]) << " (* "
                      << c.harmonic << " wp_" << c.target << "))) (* "
                      << format_number(c.margin) << " " << mhz(2.0 * env) << "))) ; " << c.name
                      << "\n";
                break;
            }
            case Constraint::Kind::zz_cap:
                s << "; " << c.name << ": |static zz| <= " << mhz(c.margin)
                  << " (nonlinear; checked outside the export)\n";
                break;
            case Constraint::Kind::box_bound:
                break;  // already asserted with the declarations
        }
    }
    s << "(check-sat)\n(get-model)\n";
    return s.str();
}

// --- JSON front end ---

namespace {

[[noreturn]] void fail_at(const std::string& where, const std::string& what) {
    throw std::runtime_error("allocation problem error at " + where + ": " + what);
}

double num_at(const nlohmann::json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) fail_at(where, std::string("missing field '") + key + "'");
    if (!j[key].is_number()) fail_at(where + "." + key, "expected a number");
    return j[key].get<double>();
}

}  // namespace

AllocationProblem parse_allocation_problem(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("allocation problem error: ") + e.what());
    }
    if (!j.is_object()) fail_at("$", "top level must be an object");
    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
        fail_at("$.modes", "expected a nonempty array");
    if (!j.contains("targets") || !j["targets"].is_array() || j["targets"].empty())
        fail_at("$.targets", "expected a nonempty array");

    AllocationProblem p;
    std::vector<std::string> labels;
    for (size_t i = 0; i < j["modes"].size(); ++i) {
        const auto& jm = j["modes"][i];
        const std::string where = "$.modes[" + std::to_string(i) + "]";
        ModeSpec m;
        if (!jm.contains("label") || !jm["label"].is_string())
            fail_at(where + ".label", "expected a string");
        m.label = jm["label"].get<std::string>();
        m.levels = jm.value("levels", 4);
        m.tunable = jm.value("tunable", false);

        Interval fb, ab;
        if (jm.contains("freq_box_GHz")) {
            const auto& b = jm["freq_box_GHz"];
            if (!b.is_array() || b.size() != 2) fail_at(where + ".freq_box_GHz", "expected [lo, hi]");
            fb = Interval(b[0].get<double>() * units::GHz, b[1].get<double>() * units::GHz);
        } else {
            fb = Interval(num_at(jm, where, "freq_GHz") * units::GHz);
        }
        if (jm.contains("anharm_box_MHz")) {
            const auto& b = jm["anharm_box_MHz"];
            if (!b.is_array() || b.size() != 2)
                fail_at(where + ".anharm_box_MHz", "expected [lo, hi]");
            ab = Interval(b[0].get<double>() * units::MHz, b[1].get<double>() * units::MHz);
        } else {
            ab = Interval(num_at(jm, where, "anharm_MHz") * units::MHz);
        }
        if (fb.empty()) fail_at(where + ".freq_box_GHz", "lo must not exceed hi");
        if (ab.empty()) fail_at(where + ".anharm_box_MHz", "lo must not exceed hi");
        m.freq = fb.mid();
        m.anharm = ab.mid();
        p.modes.push_back(m);
        p.freq_box.push_back(fb);
        p.anharm_box.push_back(ab);
        labels.push_back(m.label);
    }

    const auto mode_of = [&](const std::string& where, const std::string& label) {
        for (size_t k = 0; k < labels.size(); ++k)
            if (labels[k] == label) return static_cast<int>(k);
        fail_at(where, "unknown mode label '" + label + "'");
    };

    if (j.contains("couplings")) {
        if (!j["couplings"].is_array()) fail_at("$.couplings", "expected an array");
        for (size_t i = 0; i < j["couplings"].size(); ++i) {
            const auto& jc = j["couplings"][i];
            const std::string where = "$.couplings[" + std::to_string(i) + "]";
            CouplingSpec c;
            if (!jc.contains("a") || !jc["a"].is_string())
                fail_at(where + ".a", "expected a mode label");
            if (!jc.contains("b") || !jc["b"].is_string())
                fail_at(where + ".b", "expected a mode label");
            c.a = mode_of(where + ".a", jc["a"].get<std::string>());
            c.b = mode_of(where + ".b", jc["b"].get<std::string>());
            c.strength = num_at(jc, where, "J_MHz") * units::MHz;
            p.couplings.push_back(c);
        }
    }

    for (size_t i = 0; i < j["targets"].size(); ++i) {
        const auto& jt = j["targets"][i];
        const std::string where = "$.targets[" + std::to_string(i) + "]";
        AllocTarget t;
        if (!jt.contains("drive") || !jt["drive"].is_string())
            fail_at(where + ".drive", "expected a mode label");
        t.drive_mode = mode_of(where + ".drive", jt["drive"].get<std::string>());
        if (!jt.contains("bra") || !jt["bra"].is_string())
            fail_at(where + ".bra", "expected an occupation label");
        if (!jt.contains("ket") || !jt["ket"].is_string())
            fail_at(where + ".ket", "expected an occupation label");
        t.bra = jt["bra"].get<std::string>();
        t.ket = jt["ket"].get<std::string>();
        t.order = jt.value("order", 1);
        t.eps = num_at(jt, where, "eps_MHz") * units::MHz;
        p.targets.push_back(t);
    }

    p.margin = j.value("margin", 10.0);
    p.parametric_margin = j.value("parametric_margin", p.margin);
    p.harmonic_range = j.value("harmonic_range", 5);
    p.zz_cap = j.value("zz_cap_kHz", 0.0) * units::kHz;
    p.seed = j.value("seed", 0);
    p.max_nodes = j.value("max_nodes", 200000);
    const std::string obj = j.value("objective", "first_feasible");
    if (obj == "first_feasible")
        p.objective = AllocObjective::first_feasible;
    else if (obj == "maximize_worst_margin")
        p.objective = AllocObjective::maximize_worst_margin;
    else
        fail_at("$.objective", "expected 'first_feasible' or 'maximize_worst_margin'");
    return p;
}

AllocationProblem load_allocation_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open allocation problem file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_allocation_problem(ss.str());
}

std::string solution_to_json(const Allocator& alloc, const AllocationSolution& sol) {
    nlohmann::json j;
    j["satisfiable"] = sol.satisfiable;
    j["stage"] = sol.stage;
    j["worst_margin"] = sol.worst_margin;
    j["nodes_explored"] = sol.nodes_explored;
    if (!sol.message.empty()) j["message"] = sol.message;
    if (sol.satisfiable) {
        nlohmann::json assign;
        const auto& modes = alloc.problem().modes;
        for (size_t k = 0; k < modes.size(); ++k) {
            assign[modes[k].label + "_freq_GHz"] = sol.freqs[k] / units::GHz;
            assign[modes[k].label + "_anharm_MHz"] = sol.anharms[k] / units::MHz;
        }
        for (size_t t = 0; t < sol.omega_p.size(); ++t)
            assign["target_" + std::to_string(t) + "_fp_MHz"] = sol.omega_p[t] / units::MHz;
        j["assignment"] = assign;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : sol.report) {
        nlohmann::json row;
        row["name"] = r.name;
        row["kind"] = kind_name(r.kind);
        row["achieved"] = std::isfinite(r.achieved) ? r.achieved : -1.0;
        row["required"] = r.required;
        row["pass"] = r.pass;
        if (r.singular) row["singular"] = true;
        rows.push_back(row);
    }
    j["report"] = rows;
    return j.dump(2);
}

}  // namespace floqmap
