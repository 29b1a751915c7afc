// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "floqmap/assignment.hpp"
#include "floqmap/statics.hpp"
#include "floqmap/units.hpp"

namespace floqmap {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

double fold(double x, double omega_p) {
    double y = std::remainder(x, omega_p);      // in [-wp/2, +wp/2]
    if (y >= 0.5 * omega_p) y -= omega_p;       // half-open on the right
    return y;
}

FloquetResult floquet_spectrum(const System& system, const DriveSpec& drive,
                               const IntegratorOptions& opts) {
    const Eigen::MatrixXcd u = propagate_period(system, drive, opts);
    const double period = drive.period();

    // U is normal, so the Schur form is diagonal and the Schur frame is the
    // (orthonormal-by-construction) eigenvector frame.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw std::runtime_error("Schur decomposition of the period propagator failed");

    FloquetResult fr;
    fr.omega_p = drive.frequency;
    fr.period = period;
    fr.modes = schur.matrixU();
    const Eigen::Index d = system.dim();
    fr.quasienergies.resize(d);
    for (Eigen::Index k = 0; k < d; ++k)
        fr.quasienergies[k] = fold(-std::arg(schur.matrixT()(k, k)) / period, fr.omega_p);

    const DressedSpectrum ds = tracked_spectrum(system);
    Eigen::MatrixXcd refs(d, d);
    for (int b = 0; b < d; ++b) refs.col(b) = ds.vector_of(b).cast<std::complex<double>>();
    fr.label = max_overlap_assignment(refs, fr.modes);

    fr.unitarity = unitarity_defect(u);
    fr.orthonormality =
        (fr.modes.adjoint() * fr.modes - Eigen::MatrixXcd::Identity(d, d)).norm();
    return fr;
}

double folded_gap(const FloquetResult& fr, int bare_a, int bare_b) {
    return std::abs(fold(fr.quasienergy_of(bare_a) - fr.quasienergy_of(bare_b), fr.omega_p));
}

int sambe_default_harmonics(const DriveSpec& drive) {
    const int base = static_cast<int>(std::ceil(std::abs(drive.amplitude) / drive.frequency)) + 6;
    const int rounded = ((base + 3) / 4) * 4;
    return std::min(rounded, 40);
}

Eigen::VectorXd sambe_quasienergies(const System& system, const DriveSpec& drive,
                                    int harmonics) {
    const int kmax = harmonics > 0 ? harmonics : sambe_default_harmonics(drive);
    const Eigen::Index d = system.dim();
    const Eigen::Index blocks = 2 * kmax + 1;
    const Eigen::Index n = d * blocks;

    const Eigen::VectorXd h0 = system.bare_energies();
    const Eigen::MatrixXd& v = system.coupling_matrix();
    const Eigen::VectorXd& a = system.mode_occupation(drive.mode);
    const std::complex<double> hplus =
        0.5 * drive.amplitude * std::exp(kI * drive.phase);  // e^{+i phi} block

    Eigen::MatrixXcd hf = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index b = 0; b < blocks; ++b) {
        const double m = static_cast<double>(b - kmax);
        const Eigen::Index r = b * d;
        hf.block(r, r, d, d) = v.cast<std::complex<double>>();
        for (Eigen::Index j = 0; j < d; ++j)
            hf(r + j, r + j) += h0[j] + m * drive.frequency;
        if (b + 1 < blocks) {
            for (Eigen::Index j = 0; j < d; ++j) {
                hf(r + j, r + d + j) = hplus * a[j];
                hf(r + d + j, r + j) = std::conj(hplus) * a[j];
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hf, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("extended-space diagonalization failed");

    Eigen::VectorXd folded(n);
    for (Eigen::Index k = 0; k < n; ++k) folded[k] = fold(es.eigenvalues()[k], drive.frequency);
    std::sort(folded.data(), folded.data() + n);
    return folded;
}

double sambe_agreement(const FloquetResult& fr, const Eigen::VectorXd& sambe_folded) {
    double worst = 0.0;
    for (int b = 0; b < static_cast<int>(fr.label.size()); ++b) {
        const double q = fr.quasienergy_of(b);
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < sambe_folded.size(); ++k)
            best = std::min(best, std::abs(fold(q - sambe_folded[k], fr.omega_p)));
        worst = std::max(worst, best);
    }
    return worst;
}

PairEffective ueff_pair(const Eigen::MatrixXcd& u_period, const Eigen::MatrixXcd& pair,
                        double period, double omega_p) {
    if (pair.cols() != 2) throw std::invalid_argument("ueff_pair: projector must have 2 columns");
    const Eigen::Matrix2cd m = pair.adjoint() * u_period * pair;

    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    PairEffective pe;
    pe.sigma_min = svd.singularValues()(1);
    if (pe.sigma_min < 0.5)
        throw std::runtime_error(
            "ueff_pair: pair subspace is not isolated (singular value < 0.5)");
    const Eigen::Matrix2cd mu = svd.matrixU() * svd.matrixV().adjoint();  // polar unitary

    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(mu, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) throw std::runtime_error("ueff_pair: eigensolve failed");

    double e0 = -std::arg(es.eigenvalues()(0)) / period;
    double e1 = -std::arg(es.eigenvalues()(1)) / period;
    Eigen::Vector2cd v0 = es.eigenvectors().col(0);
    Eigen::Vector2cd v1 = es.eigenvectors().col(1);
    double df = fold(e0 - e1, omega_p);
    if (df < 0.0) {
        std::swap(e0, e1);
        std::swap(v0, v1);
        df = -df;
    }
    // v0 belongs to the upper branch; for H_eff = [[d/2, g], [g*, -d/2]]:
    // |v0_1|^2 - |v0_2|^2 = delta/Omega, 2 |v0_1||v0_2| = 2|g|/Omega.
    v0.normalize();
    const double p = std::norm(v0(0));
    pe.two_g = df * 2.0 * std::sqrt(p * (1.0 - p));
    pe.delta = df * (2.0 * p - 1.0);
    return pe;
}

PairEffective pair_effective(const System& system, const DriveSpec& drive, int bare_a,
                             int bare_b, const IntegratorOptions& opts) {
    const DressedSpectrum ds = tracked_spectrum(system);
    Eigen::MatrixXcd pair(system.dim(), 2);
    pair.col(0) = ds.vector_of(bare_a).cast<std::complex<double>>();
    pair.col(1) = ds.vector_of(bare_b).cast<std::complex<double>>();
    const Eigen::MatrixXcd u = propagate_period(system, drive, opts);
    return ueff_pair(u, pair, drive.period(), drive.frequency);
}

double collision_angle(double two_g, double delta) {
    return std::atan2(std::abs(two_g), std::abs(delta));
}

Anticrossing find_anticrossing(const System& system,
                               const std::function<DriveSpec(double)>& drive_at, int bare_a,
                               int bare_b, double wp_lo, double wp_hi, int coarse_points,
                               double wp_tol, const IntegratorOptions& opts) {
    if (!(wp_hi > wp_lo) || wp_lo <= 0.0)
        throw std::invalid_argument("find_anticrossing: need 0 < wp_lo < wp_hi");
    if (coarse_points < 3) coarse_points = 3;
    if (wp_tol <= 0.0) wp_tol = std::max(1e-9 * wp_lo, 2.0 * units::pi * 1e3);  // 1 kHz floor

    const auto gap_at = [&](double wp) {
        const FloquetResult fr = floquet_spectrum(system, drive_at(wp), opts);
        return folded_gap(fr, bare_a, bare_b);
    };

    // coarse bracket of the global minimum
    std::vector<double> wps(coarse_points), gaps(coarse_points);
    int best = 0;
    for (int i = 0; i < coarse_points; ++i) {
        wps[i] = wp_lo + (wp_hi - wp_lo) * i / (coarse_points - 1);
        gaps[i] = gap_at(wps[i]);
        if (gaps[i] < gaps[best]) best = i;
    }
    double lo = wps[std::max(0, best - 1)];
    double hi = wps[std::min(coarse_points - 1, best + 1)];

    // golden-section refinement
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = gap_at(x1);
    double f2 = gap_at(x2);
    while (hi - lo > wp_tol) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = gap_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = gap_at(x2);
        }
    }

    Anticrossing out;
    out.omega_p = 0.5 * (lo + hi);
    out.gap = gap_at(out.omega_p);
    if (f1 < out.gap) {
        out.gap = f1;
        out.omega_p = x1;
    }
    if (f2 < out.gap) {
        out.gap = f2;
        out.omega_p = x2;
    }
    return out;
}

double dynamic_zz(const System& system, const DriveSpec& drive, int mode_i, int mode_j,
                  int ramp_steps, const IntegratorOptions& opts) {
    if (ramp_steps < 1) throw std::invalid_argument("dynamic_zz: ramp_steps must be >= 1");
    std::vector<int> occ(system.num_modes(), 0);
    const int s00 = system.state_index(occ);
    occ[mode_j] = 1;
    const int s01 = system.state_index(occ);
    occ[mode_i] = 1;
    const int s11 = system.state_index(occ);
    occ[mode_j] = 0;
    const int s10 = system.state_index(occ);

    double prev = static_zz(system, mode_i, mode_j);  // eps = 0 seed
    const double wp = drive.frequency;
    for (int k = 1; k <= ramp_steps; ++k) {
        DriveSpec d = drive;
        d.amplitude = drive.amplitude * k / ramp_steps;
        const FloquetResult fr = floquet_spectrum(system, d, opts);
        const double raw = fold(fr.quasienergy_of(s11) - fr.quasienergy_of(s01) -
                                    fr.quasienergy_of(s10) + fr.quasienergy_of(s00),
                                wp);
        // unfold to the branch nearest the previous ramp point
        double value = raw;
        for (int w = -4; w <= 4; ++w) {
            const double cand = raw + w * wp;
            if (std::abs(cand - prev) < std::abs(value - prev)) value = cand;
        }
        prev = value;
    }
    return prev;
}

}  // namespace floqmap
