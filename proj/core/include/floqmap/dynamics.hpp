// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Time-domain protocols and their analysis: uniformly sampled population
// traces, discrete Fourier spectra with peak extraction (used to audit that
// every observed oscillation line is a catalogued sideband), single-tone
// Rabi fits (linear least squares in cos/sin at fixed frequency, scanned and
// refined over frequency), and chevron maps.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floqmap/integrator.hpp"
#include "floqmap/model.hpp"

namespace floqmap {

// k * dt for k = 0..samples-1 (dt = t_end / samples, FFT bin 2pi/t_end).
std::vector<double> uniform_times(double t_end, int samples);

// |<track|psi(t)>|^2 at the given times.
std::vector<double> tracked_population(const System& system, const DriveSpec& drive,
                                       const Eigen::VectorXcd& psi0,
                                       const Eigen::VectorXcd& track,
                                       const std::vector<double>& times,
                                       const IntegratorOptions& opts = {});

// Magnitude of the real-input DFT of (x - mean), bins 0..N/2; bin k sits at
// angular frequency 2 pi k / (N dt).
Eigen::VectorXd power_spectrum(const std::vector<double>& x);

struct SpectrumPeak {
    double freq = 0.0;    // angular frequency, rad/s
    double height = 0.0;  // magnitude relative to the strongest peak
    int bin = 0;
};

// Local maxima of a magnitude spectrum above rel_threshold * max, sorted by
// height descending. dt is the sample spacing of the time series.
std::vector<SpectrumPeak> find_peaks(const Eigen::VectorXd& magnitude, double dt,
                                     double rel_threshold);

struct RabiFit {
    double omega = 0.0;      // fitted angular frequency, rad/s
    double amplitude = 0.0;  // sqrt(b^2 + c^2) of the cos/sin quadratures
    double offset = 0.0;
    double residual = 0.0;   // rms residual of the fit
};

// Fit p(t) ~= a + b cos(w t) + c sin(w t): the quadratures are solved
// exactly at each trial w, and w is minimized over [omega_lo, omega_hi]
// (grid scan + golden-section).
RabiFit fit_rabi(const std::vector<double>& times, const std::vector<double>& pop,
                 double omega_lo, double omega_hi);

// Transfer map |<to|psi(t)>|^2, one row per omega_p, one column per time.
// psi0 / track are rebuilt per column from the dressed anchors.
Eigen::MatrixXd chevron_map(const System& system,
                            const std::function<DriveSpec(double)>& drive_at, int bare_from,
                            int bare_to, const std::vector<double>& omega_p,
                            const std::vector<double>& times,
                            const IntegratorOptions& opts = {});

}  // namespace floqmap
