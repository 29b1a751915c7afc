// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/statics.hpp"

#include <cmath>
#include <stdexcept>

#include "floqmap/assignment.hpp"

namespace floqmap {

namespace {

struct EigResult {
    Eigen::VectorXd energies;
    Eigen::MatrixXd vectors;
};

EigResult eig_at(const System& system, double lambda) {
    Eigen::MatrixXd h = lambda * system.coupling_matrix();
    h.diagonal() += system.bare_energies();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

std::vector<int> overlap_labels(const Eigen::MatrixXd& references,
                                const Eigen::MatrixXd& vectors) {
    const Eigen::MatrixXd ov = references.transpose() * vectors;
    return hungarian(-ov.cwiseAbs2());
}

}  // namespace

DressedSpectrum dressed_spectrum(const System& system) {
    auto [energies, vectors] = eig_at(system, 1.0);
    DressedSpectrum out;
    out.energies = std::move(energies);
    out.vectors = std::move(vectors);
    // references = bare basis: cost from the eigenvector components directly.
    out.label = hungarian(-out.vectors.cwiseAbs2());
    return out;
}

DressedSpectrum tracked_spectrum(const System& system) {
    const int d = system.dim();
    Eigen::MatrixXd prev = Eigen::MatrixXd::Identity(d, d);
    std::vector<int> label(d);
    for (int k = 0; k < d; ++k) label[k] = k;

    constexpr double good_overlap = 0.8;   // |<prev|new>|^2 above which a step is accepted
    constexpr double floor_overlap = 0.45; // accept at minimal step (degenerate anchors give 0.5)
    constexpr double min_step = 1e-3;

    double lambda = 0.0;
    double step = 1.0 / 20.0;
    EigResult cur;
    while (lambda < 1.0) {
        const double next = std::min(1.0, lambda + step);
        cur = eig_at(system, next);
        const auto perm = overlap_labels(prev, cur.vectors);
        double worst = 1.0;
        for (int k = 0; k < d; ++k) {
            const double ov = std::abs(prev.col(k).dot(cur.vectors.col(perm[k])));
            worst = std::min(worst, ov * ov);
        }
        if (worst < good_overlap && step > min_step) {
            step *= 0.5;
            continue;
        }
        if (worst < floor_overlap)
            throw std::runtime_error("dressed-state tracking lost a branch (overlap " +
                                     std::to_string(worst) + ")");
        // prev.col(k) is branch k's vector, so perm[k] is directly the
        // eigencolumn branch k continues into.
        Eigen::MatrixXd reordered(d, d);
        for (int k = 0; k < d; ++k) reordered.col(k) = cur.vectors.col(perm[k]);
        prev = std::move(reordered);
        label = perm;
        lambda = next;
        if (worst > 0.95 && step < 1.0 / 20.0) step *= 2.0;
    }

    DressedSpectrum out;
    out.energies = cur.energies;
    out.vectors = cur.vectors;
    out.label = label;
    return out;
}

double static_zz(const System& system, int mode_i, int mode_j) {
    if (mode_i == mode_j) throw std::invalid_argument("static_zz: need two distinct modes");
    const auto sp = tracked_spectrum(system);
    std::vector<int> occ(system.num_modes(), 0);
    const int s00 = system.state_index(occ);
    occ[mode_i] = 1;
    const int s10 = system.state_index(occ);
    occ[mode_j] = 1;
    const int s11 = system.state_index(occ);
    occ[mode_i] = 0;
    const int s01 = system.state_index(occ);
    return sp.energy_of(s11) + sp.energy_of(s00) - sp.energy_of(s10) - sp.energy_of(s01);
}

double RsOrders::through(int order) const {
    if (order < 2 || order > 4) throw std::invalid_argument("rs order must be 2..4");
    double v = e2;
    if (order >= 3) v += e3;
    if (order >= 4) v += e4;
    return v;
}

RsOrders rs_orders(const System& system, int bare_state) {
    const int d = system.dim();
    const int s = bare_state;
    const Eigen::VectorXd& e = system.bare_energies();
    const Eigen::MatrixXd& v = system.coupling_matrix();

    const double scale = v.cwiseAbs().maxCoeff();
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);  // 1/(E_s - E_j), 0 at j = s
    for (int j = 0; j < d; ++j) {
        if (j == s) continue;
        const double den = e[s] - e[j];
        if (std::abs(den) < 1e-6 * std::max(scale, 1.0))
            throw std::domain_error("rs_orders: (near-)degenerate denominator for state " +
                                    system.state_label(s));
        g[j] = 1.0 / den;
    }

    const Eigen::VectorXd w = v.col(s);
    const Eigen::VectorXd wg = w.cwiseProduct(g);

    RsOrders out;
    out.e0 = e[s];
    out.e2 = w.dot(wg);
    out.e3 = wg.dot(v * wg);

    Eigen::VectorXd t = v * wg;
    t[s] = 0.0;  // intermediate sums exclude the reference state
    t = t.cwiseProduct(g);
    Eigen::VectorXd u = v * t;
    u[s] = 0.0;
    u = u.cwiseProduct(g);
    const double quad = w.dot(u);
    const double norm2 = w.cwiseProduct(g).cwiseProduct(g).dot(w);  // sum |V_sj|^2 / E_sj^2
    out.e4 = quad - out.e2 * norm2;
    return out;
}

double pert_zz(const System& system, int mode_i, int mode_j, int order) {
    std::vector<int> occ(system.num_modes(), 0);
    const int s00 = system.state_index(occ);
    occ[mode_i] = 1;
    const int s10 = system.state_index(occ);
    occ[mode_j] = 1;
    const int s11 = system.state_index(occ);
    occ[mode_i] = 0;
    const int s01 = system.state_index(occ);
    double z = 0.0;
    for (int s : {s11, s00}) z += rs_orders(system, s).through(order);
    for (int s : {s10, s01}) z -= rs_orders(system, s).through(order);
    return z;
}

QcqLayout resolve_qcq(const System& system) {
    if (system.num_modes() != 3)
        throw std::invalid_argument("qubit-coupler-qubit layout needs exactly 3 modes");
    QcqLayout lay;
    for (int m = 0; m < 3; ++m) {
        if (system.is_coupler(m)) {
            if (lay.c >= 0) throw std::invalid_argument("more than one coupler mode");
            lay.c = m;
        } else if (lay.q1 < 0) {
            lay.q1 = m;
        } else {
            lay.q2 = m;
        }
    }
    if (lay.c < 0 || lay.q2 < 0)
        throw std::invalid_argument("need one coupler ('c...') and two qubit modes");
    for (const auto& cp : system.couplings()) {
        auto is = [&](int a, int b) {
            return (cp.a == a && cp.b == b) || (cp.a == b && cp.b == a);
        };
        if (is(lay.q1, lay.c)) lay.j1c = cp.strength;
        else if (is(lay.q2, lay.c)) lay.j2c = cp.strength;
        else if (is(lay.q1, lay.q2)) lay.j12 = cp.strength;
    }
    if (lay.j1c == 0.0 || lay.j2c == 0.0)
        throw std::invalid_argument("both qubits must couple to the coupler");
    return lay;
}

namespace {

// J~ variants share the structure
//   base + pre * sum_k [ s_k / D_k(omega_c) - s_k / S_k(omega_c) ],
// with difference denominators D = omega - omega_c + shift (derivative
// n!/D^{n+1} up to sign) and sum denominators S = omega + omega_c + shift
// (derivative (-1)^n n!/S^{n+1}).
struct JtForm {
    double base = 0.0;
    double pre = 0.0;
    double w1 = 0.0, w2 = 0.0;        // qubit frequencies entering denominators
    double shift1 = 0.0, shift2 = 0.0;  // anharmonicity shifts per qubit term
};

JtForm jt_form(const System& system, JtVariant variant) {
    const auto lay = resolve_qcq(system);
    const double a1 = system.mode(lay.q1).anharm;
    const double a2 = system.mode(lay.q2).anharm;
    JtForm f;
    f.w1 = system.mode(lay.q1).freq;
    f.w2 = system.mode(lay.q2).freq;
    switch (variant) {
        case JtVariant::j12:
            f.base = lay.j12;
            f.pre = lay.j1c * lay.j2c / 2.0;
            break;
        case JtVariant::j101_002:
            f.base = std::sqrt(2.0) * lay.j12;
            f.pre = lay.j1c * lay.j2c / std::sqrt(2.0);
            f.shift2 = a2;
            break;
        case JtVariant::j101_200:
            f.base = std::sqrt(2.0) * lay.j12;
            f.pre = lay.j1c * lay.j2c / std::sqrt(2.0);
            f.shift1 = a1;
            break;
    }
    return f;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

double jt_value(const System& system, JtVariant variant, double omega_c) {
    const JtForm f = jt_form(system, variant);
    const double d1 = f.w1 - omega_c + f.shift1;
    const double d2 = f.w2 - omega_c + f.shift2;
    const double s1 = f.w1 + omega_c + f.shift1;
    const double s2 = f.w2 + omega_c + f.shift2;
    return f.base + f.pre * (1.0 / d1 + 1.0 / d2 - 1.0 / s1 - 1.0 / s2);
}

double jt_derivative_analytic(const System& system, JtVariant variant, int n) {
    if (n < 0) throw std::invalid_argument("derivative order must be >= 0");
    const auto lay = resolve_qcq(system);
    const double wc = system.mode(lay.c).freq;
    if (n == 0) return jt_value(system, variant, wc);
    const JtForm f = jt_form(system, variant);
    const double d1 = f.w1 - wc + f.shift1;
    const double d2 = f.w2 - wc + f.shift2;
    const double s1 = f.w1 + wc + f.shift1;
    const double s2 = f.w2 + wc + f.shift2;
    const double sgn = (n % 2) ? -1.0 : 1.0;  // (-1)^n from the sum denominators
    const double fact = factorial(n);
    // d/d omega_c (1/(w - omega_c)) = +1/(w - omega_c)^2, so difference terms
    // carry n!/D^(n+1); sum terms carry -(-1)^n n!/S^(n+1).
    return f.pre * fact *
           (1.0 / std::pow(d1, n + 1) + 1.0 / std::pow(d2, n + 1) -
            sgn / std::pow(s1, n + 1) - sgn / std::pow(s2, n + 1));
}

double lamb_split_derivative_analytic(const System& system, int n) {
    if (n < 0) throw std::invalid_argument("derivative order must be >= 0");
    const auto lay = resolve_qcq(system);
    const double wc = system.mode(lay.c).freq;
    const double sgn = (n % 2) ? -1.0 : 1.0;
    const double fact = factorial(n);
    auto dterm = [&](double w, double j) {
        const double d = w - wc;
        const double s = w + wc;
        if (n == 0) return w + j * j * (1.0 / d - 1.0 / s);
        return j * j * fact * (1.0 / std::pow(d, n + 1) - sgn / std::pow(s, n + 1));
    };
    return dterm(system.mode(lay.q1).freq, lay.j1c) - dterm(system.mode(lay.q2).freq, lay.j2c);
}

SwParams sw_effective_params(const System& system) {
    const auto lay = resolve_qcq(system);
    const double w1 = system.mode(lay.q1).freq;
    const double w2 = system.mode(lay.q2).freq;
    const double wc = system.mode(lay.c).freq;
    SwParams p;
    p.wt1 = w1 + lay.j1c * lay.j1c * (1.0 / (w1 - wc) - 1.0 / (w1 + wc));
    p.wt2 = w2 + lay.j2c * lay.j2c * (1.0 / (w2 - wc) - 1.0 / (w2 + wc));
    p.jt12 = jt_value(system, JtVariant::j12, wc);
    p.jt_101_002 = jt_value(system, JtVariant::j101_002, wc);
    p.jt_101_200 = jt_value(system, JtVariant::j101_200, wc);
    return p;
}

}  // namespace floqmap
