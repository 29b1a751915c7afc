// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "floqmap/statics.hpp"
#include "floqmap/units.hpp"

namespace floqmap {

std::vector<double> uniform_times(double t_end, int samples) {
    if (!(t_end > 0.0) || samples < 2)
        throw std::invalid_argument("uniform_times: need t_end > 0 and samples >= 2");
    std::vector<double> t(samples);
    const double dt = t_end / samples;
    for (int k = 0; k < samples; ++k) t[k] = k * dt;
    return t;
}

std::vector<double> tracked_population(const System& system, const DriveSpec& drive,
                                       const Eigen::VectorXcd& psi0,
                                       const Eigen::VectorXcd& track,
                                       const std::vector<double>& times,
                                       const IntegratorOptions& opts) {
    if (track.size() != system.dim())
        throw std::invalid_argument("tracked_population: tracker dimension mismatch");
    std::vector<double> pop(times.size(), 0.0);
    propagate_state(system, drive, psi0, times,
                    [&](size_t k, const Eigen::VectorXcd& psi) {
                        pop[k] = std::norm(track.dot(psi));  // dot conjugates the first arg
                    },
                    opts);
    return pop;
}

namespace {
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Eigen::VectorXd power_spectrum(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n < 4) throw std::invalid_argument("power_spectrum: series too short");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;

    std::vector<double> in(n);
    for (int k = 0; k < n; ++k) in[k] = x[k] - mean;
    const int nbins = n / 2 + 1;
    std::vector<fftw_complex> out(nbins);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("power_spectrum: FFT plan creation failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }

    Eigen::VectorXd mag(nbins);
    for (int k = 0; k < nbins; ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    return mag;
}

std::vector<SpectrumPeak> find_peaks(const Eigen::VectorXd& magnitude, double dt,
                                     double rel_threshold) {
    const int nbins = static_cast<int>(magnitude.size());
    if (nbins < 3) return {};
    const int n = 2 * (nbins - 1);  // original series length (even)
    const double dw = units::two_pi / (n * dt);
    const double top = magnitude.maxCoeff();
    if (!(top > 0.0)) return {};

    std::vector<SpectrumPeak> peaks;
    for (int k = 1; k + 1 < nbins; ++k) {
        if (magnitude[k] <= magnitude[k - 1] || magnitude[k] < magnitude[k + 1]) continue;
        if (magnitude[k] < rel_threshold * top) continue;
        peaks.push_back({k * dw, magnitude[k] / top, k});
    }
    std::stable_sort(peaks.begin(), peaks.end(),
                     [](const SpectrumPeak& a, const SpectrumPeak& b) {
                         return a.height > b.height;
                     });
    return peaks;
}

namespace {

// Exact least squares of a + b cos(w t) + c sin(w t); returns rms residual
// and the coefficients.
struct ToneFit {
    double a = 0.0, b = 0.0, c = 0.0, rms = 0.0;
};

ToneFit tone_fit(const std::vector<double>& t, const std::vector<double>& p, double w) {
    const int n = static_cast<int>(t.size());
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int k = 0; k < n; ++k) {
        const Eigen::Vector3d row(1.0, std::cos(w * t[k]), std::sin(w * t[k]));
        m += row * row.transpose();
        rhs += row * p[k];
    }
    const Eigen::Vector3d sol = m.ldlt().solve(rhs);
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        const double fit = sol[0] + sol[1] * std::cos(w * t[k]) + sol[2] * std::sin(w * t[k]);
        ss += (p[k] - fit) * (p[k] - fit);
    }
    return {sol[0], sol[1], sol[2], std::sqrt(ss / n)};
}

}  // namespace

RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& pop,
                 double omega_lo, double omega_hi) {
    if (times.size() != pop.size() || times.size() < 8)
        throw std::invalid_argument("fit_rabi: need >= 8 matching samples");
    if (!(omega_hi > omega_lo) || omega_lo <= 0.0)
        throw std::invalid_argument("fit_rabi: need 0 < omega_lo < omega_hi");

    const auto rms_at = [&](double w) { return tone_fit(times, pop, w).rms; };

    // grid scan
    const int grid = 96;
    double best_w = omega_lo, best_r = rms_at(omega_lo);
    for (int i = 1; i <= grid; ++i) {
        const double w = omega_lo + (omega_hi - omega_lo) * i / grid;
        const double r = rms_at(w);
        if (r < best_r) {
            best_r = r;
            best_w = w;
        }
    }

    // golden-section refinement around the best grid cell
    const double cell = (omega_hi - omega_lo) / grid;
    double lo = std::max(omega_lo, best_w - cell);
    double hi = std::min(omega_hi, best_w + cell);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = rms_at(x1), f2 = rms_at(x2);
    const double tol = 1e-10 * omega_hi + 1e-6 * cell;
    while (hi - lo > tol) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = rms_at(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = rms_at(x2);
        }
    }
    const double w = 0.5 * (lo + hi);
    const ToneFit tf = tone_fit(times, pop, w);

    RabiFit out;
    out.omega = w;
    out.amplitude = std::hypot(tf.b, tf.c);
    out.offset = tf.a;
    out.residual = tf.rms;
    return out;
}

Eigen::MatrixXd chevron_map(const System& system,
                            const std::function<DriveSpec(double)>& drive_at, int bare_from,
                            int bare_to, const std::vector<double>& omega_p,
                            const std::vector<double>& times, const IntegratorOptions& opts) {
    const DressedSpectrum ds = tracked_spectrum(system);
    const Eigen::VectorXcd psi0 = ds.vector_of(bare_from).cast<std::complex<double>>();
    const Eigen::VectorXcd track = ds.vector_of(bare_to).cast<std::complex<double>>();

    Eigen::MatrixXd map(omega_p.size(), times.size());
    for (size_t r = 0; r < omega_p.size(); ++r) {
        const auto pop = tracked_population(system, drive_at(omega_p[r]), psi0, track, times, opts);
        for (size_t c = 0; c < times.size(); ++c) map(r, c) = pop[c];
    }
    return map;
}

}  // namespace floqmap
