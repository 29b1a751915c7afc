// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/sidebands.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "floqmap/bessel.hpp"
#include "floqmap/fdweights.hpp"
#include "floqmap/units.hpp"

namespace floqmap {

namespace {

bool is_computational(const System& sys, int state) {
    for (int m = 0; m < sys.num_modes(); ++m) {
        const int n = sys.occupation(state, m);
        if (sys.is_coupler(m) ? (n != 0) : (n > 1)) return false;
    }
    return true;
}

int coupler_quanta(const System& sys, int state) {
    int q = 0;
    for (int m = 0; m < sys.num_modes(); ++m)
        if (sys.is_coupler(m)) q += sys.occupation(state, m);
    return q;
}

// Canonical orientation: fewer excitations first, then computational states,
// then fewer coupler quanta, then smaller basis index.
bool canonical_before(const System& sys, int a, int b) {
    const int ea = sys.total_excitation(a), eb = sys.total_excitation(b);
    if (ea != eb) return ea < eb;
    const bool ca = is_computational(sys, a), cb = is_computational(sys, b);
    if (ca != cb) return ca;
    const int qa = coupler_quanta(sys, a), qb = coupler_quanta(sys, b);
    if (qa != qb) return qa < qb;
    return a < b;
}

struct Edge {
    int a = 0, b = 0;
    double strength = 0.0;  // bare J along this edge
    Channel channel = Channel::qubit;
    bool effective = false;  // coupler-mediated qubit-qubit edge
};

std::vector<Edge> interaction_edges(const System& sys) {
    std::vector<Edge> edges;
    for (const auto& c : sys.couplings()) {
        Edge e{c.a, c.b, c.strength,
               (sys.is_coupler(c.a) || sys.is_coupler(c.b)) ? Channel::coupler : Channel::qubit,
               false};
        edges.push_back(e);
    }
    // Coupler-mediated qubit-qubit edges: qubit pairs sharing a coupler give
    // an effective exchange even without a direct coupling term.
    for (int c = 0; c < sys.num_modes(); ++c) {
        if (!sys.is_coupler(c)) continue;
        std::vector<int> nbrs;
        for (const auto& cp : sys.couplings()) {
            if (cp.a == c && !sys.is_coupler(cp.b)) nbrs.push_back(cp.b);
            if (cp.b == c && !sys.is_coupler(cp.a)) nbrs.push_back(cp.a);
        }
        for (size_t i = 0; i < nbrs.size(); ++i) {
            for (size_t j = i + 1; j < nbrs.size(); ++j) {
                const auto [qa, qb] = std::minmax(nbrs[i], nbrs[j]);
                auto match = [&](const Edge& e) {
                    return std::min(e.a, e.b) == qa && std::max(e.a, e.b) == qb;
                };
                auto it = std::find_if(edges.begin(), edges.end(), match);
                if (it == edges.end()) {
                    edges.push_back({qa, qb, 0.0, Channel::qubit, true});
                } else if (it->channel == Channel::qubit) {
                    it->effective = true;  // direct + mediated share the edge
                }
            }
        }
    }
    return edges;
}

// Base strength for a qubit-channel row of a qubit-coupler-qubit system:
// co-rotating rows take the Schrieffer-Wolff effective coupling matched to
// the pair; counter-rotating rows keep the bare direct coupling.
double qcq_qubit_base(const System& sys, const Edge& edge, int bra, int ket, double sqrt_c,
                      Rotating rot) {
    if (rot == Rotating::counter || !edge.effective) return sqrt_c * std::abs(edge.strength);
    const auto lay = resolve_qcq(sys);
    const int n1b = sys.occupation(bra, lay.q1), n1k = sys.occupation(ket, lay.q1);
    const int n2b = sys.occupation(bra, lay.q2), n2k = sys.occupation(ket, lay.q2);
    const auto has = [&](int x1, int x2) {
        return (n1b == x1 && n2b == x2) || (n1k == x1 && n2k == x2);
    };
    const SwParams p = sw_effective_params(sys);
    if (has(1, 1) && has(0, 2)) return std::abs(p.jt_101_002);  // sqrt(2) folded in
    if (has(1, 1) && has(2, 0)) return std::abs(p.jt_101_200);
    return sqrt_c * std::abs(p.jt12);
}

}  // namespace

std::vector<TransitionEntry> catalog(const System& system, bool dressed_detunings) {
    const int nm = system.num_modes();
    const auto edges = interaction_edges(system);

    std::optional<DressedSpectrum> dressed;
    if (dressed_detunings) dressed = tracked_spectrum(system);
    auto energy = [&](int s) {
        return dressed ? dressed->energy_of(s) : system.bare_energies()[s];
    };

    const bool qcq = [&] {
        int nc = 0;
        for (int m = 0; m < nm; ++m) nc += system.is_coupler(m);
        return nm == 3 && nc == 1;
    }();

    std::map<std::pair<int, int>, TransitionEntry> rows;
    for (int a = 0; a < system.dim(); ++a) {
        if (system.total_excitation(a) > 2 || coupler_quanta(system, a) != 0) continue;
        for (const auto& edge : edges) {
            for (int sa : {+1, -1}) {
                for (int sb : {+1, -1}) {
                    auto occ = system.occupations(a);
                    occ[edge.a] += sa;
                    occ[edge.b] += sb;
                    if (occ[edge.a] < 0 || occ[edge.a] >= system.mode(edge.a).levels) continue;
                    if (occ[edge.b] < 0 || occ[edge.b] >= system.mode(edge.b).levels) continue;
                    const int b = system.state_index(occ);
                    const int bra = canonical_before(system, a, b) ? a : b;
                    const int ket = (bra == a) ? b : a;
                    const auto key = std::minmax(bra, ket);
                    if (rows.count(key)) continue;

                    TransitionEntry e;
                    e.bra = bra;
                    e.ket = ket;
                    e.bra_label = system.state_label(bra);
                    e.ket_label = system.state_label(ket);
                    e.rotating = (sa != sb) ? Rotating::co : Rotating::counter;
                    e.channel = edge.channel;
                    e.edge_a = edge.a;
                    e.edge_b = edge.b;
                    const double ca = std::max(system.occupation(bra, edge.a),
                                               system.occupation(ket, edge.a));
                    const double cb = std::max(system.occupation(bra, edge.b),
                                               system.occupation(ket, edge.b));
                    e.level_coefficient = ca * cb;
                    e.detuning = energy(bra) - energy(ket);
                    const double sqrt_c = std::sqrt(e.level_coefficient);
                    if (qcq && edge.channel == Channel::qubit)
                        e.base_strength = qcq_qubit_base(system, edge, bra, ket, sqrt_c,
                                                         e.rotating);
                    else
                        e.base_strength = sqrt_c * std::abs(edge.strength);
                    rows.emplace(key, std::move(e));
                }
            }
        }
    }

    std::vector<TransitionEntry> out;
    out.reserve(rows.size());
    for (auto& [key, e] : rows) out.push_back(std::move(e));
    std::stable_sort(out.begin(), out.end(), [](const TransitionEntry& x, const TransitionEntry& y) {
        if (x.rotating != y.rotating) return x.rotating == Rotating::co;
        if (x.bra != y.bra) return x.bra < y.bra;
        return x.ket < y.ket;
    });
    return out;
}

std::vector<TransitionEntry> catalog_qq(const System& system) {
    if (system.num_modes() != 2)
        throw std::invalid_argument("catalog_qq expects a 2-mode system");
    return catalog(system, /*dressed_detunings=*/false);
}

std::vector<TransitionEntry> catalog_qcq(const System& system) {
    resolve_qcq(system);  // validates the topology
    return catalog(system, /*dressed_detunings=*/true);
}

const TransitionEntry& find_entry(const std::vector<TransitionEntry>& rows,
                                  std::string_view a, std::string_view b) {
    for (const auto& e : rows) {
        if ((e.bra_label == a && e.ket_label == b) || (e.bra_label == b && e.ket_label == a))
            return e;
    }
    throw std::out_of_range("no catalogued transition (" + std::string(a) + "," +
                            std::string(b) + ")");
}

int drive_occupation_change(const System& system, const TransitionEntry& e, int mode) {
    return std::abs(system.occupation(e.bra, mode) - system.occupation(e.ket, mode));
}

double qubit_mod_strength(double base_strength, int n, double eps_p, double omega_p) {
    if (omega_p <= 0.0) throw std::invalid_argument("omega_p must be > 0");
    return base_strength * bessel_j(n, eps_p / omega_p);
}

double sideband_strength(const System& system, const TransitionEntry& e, int drive_mode,
                         int n, double eps_p, double omega_p) {
    const int dn = drive_occupation_change(system, e, drive_mode);
    return qubit_mod_strength(e.base_strength, n, dn * eps_p, omega_p);
}

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

// Guard against the SW form becoming singular inside the drive excursion
// omega_c +- eps_p (denominator sign change = formula invalid).
void check_excursion(const System& sys, double eps_p) {
    const auto lay = resolve_qcq(sys);
    const double wc = sys.mode(lay.c).freq;
    for (int q : {lay.q1, lay.q2}) {
        const double w = sys.mode(q).freq;
        const double a = sys.mode(q).anharm;
        for (double shift : {0.0, a}) {
            const double lo = w - (wc + eps_p) + shift;
            const double hi = w - (wc - eps_p) + shift;
            if (lo == 0.0 || hi == 0.0 || (lo < 0.0) != (hi < 0.0))
                throw std::domain_error(
                    "coupler drive excursion crosses a Schrieffer-Wolff resonance");
        }
    }
}

}  // namespace

double jt_derivative_fd(const System& system, JtVariant variant, int n) {
    if (n == 0) {
        const auto lay = resolve_qcq(system);
        return jt_value(system, variant, system.mode(lay.c).freq);
    }
    const auto lay = resolve_qcq(system);
    const double wc = system.mode(lay.c).freq;
    // Larger steps for higher orders keep roundoff out of the h^-n weights;
    // the denominators vary on a ~GHz scale, so truncation stays negligible.
    const double h = units::MHz * std::max(1.0, n - 1.0);
    const int acc = 2 * ((n + 1) / 2) + 2;
    auto f = [&](double w) { return jt_value(system, variant, w); };
    return central_derivative(f, wc, n, h, acc).value;
}

double coupler_mod_strength(const System& system, JtVariant variant, int m, double eps_p,
                            int taylor_order) {
    const int am = std::abs(m);
    if (am < 1) throw std::invalid_argument("coupler_mod_strength: |m| must be >= 1");
    if (taylor_order < am)
        throw std::invalid_argument("coupler_mod_strength: taylor_order must be >= |m|");
    if (eps_p == 0.0) return 0.0;
    check_excursion(system, eps_p);
    double g = 0.0;
    for (int n = am; n <= taylor_order; n += 2) {
        const double dn = jt_derivative_fd(system, variant, n);
        const double coeff = std::pow(eps_p, n) / (std::pow(2.0, n) * factorial(n));
        g += coeff * dn * binom(n, (n - am) / 2);
    }
    return g;
}

double coupler_dc_coupling_shift(const System& system, double eps_p, int taylor_order) {
    if (eps_p == 0.0) return 0.0;
    check_excursion(system, eps_p);
    double s = 0.0;
    for (int n = 2; n <= taylor_order; n += 2) {
        const double dn = jt_derivative_fd(system, JtVariant::j12, n);
        s += std::pow(eps_p, n) / (std::pow(2.0, n) * factorial(n)) * dn * binom(n, n / 2);
    }
    return s;
}

double stark_shifted_detuning(const System& system, double eps_p, int taylor_order) {
    const SwParams p = sw_effective_params(system);
    double d12 = p.wt1 - p.wt2;
    if (eps_p == 0.0) return d12;
    check_excursion(system, eps_p);
    const auto lay = resolve_qcq(system);
    const double wc = system.mode(lay.c).freq;
    const double w1 = system.mode(lay.q1).freq;
    const double w2 = system.mode(lay.q2).freq;
    auto split = [&](double w) {
        auto lamb = [&](double wq, double j) {
            return wq + j * j * (1.0 / (wq - w) - 1.0 / (wq + w));
        };
        return lamb(w1, lay.j1c) - lamb(w2, lay.j2c);
    };
    for (int n = 2; n <= taylor_order; n += 2) {
        const double h = units::MHz * std::max(1.0, n - 1.0);
        const double dn = central_derivative(split, wc, n, h, 2 * ((n + 1) / 2) + 2).value;
        d12 += std::pow(eps_p, n) / (std::pow(2.0, n) * factorial(n)) * dn * binom(n, n / 2);
    }
    return d12;
}

double resonance_frequency(const TransitionEntry& e, int n) {
    if (n == 0) throw std::invalid_argument("resonance_frequency: n must be nonzero");
    if (e.detuning == 0.0) throw std::domain_error("resonance_frequency: zero detuning");
    return std::abs(e.detuning) / std::abs(n);
}

double beta_phase(int n, double eps_p, double omega_p, double phi_p) {
    return n * (phi_p + units::pi) + (eps_p / omega_p) * std::sin(phi_p);
}

}  // namespace floqmap
