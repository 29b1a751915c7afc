// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// floqmap command-line tool: catalog, landscape, chevron, micromotion,
// strength-sweep, zz, error-budget, allocate. Exit codes: 0 success,
// 1 computation failure (or unsatisfiable allocation), 2 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "floqmap/allocator.hpp"
#include "floqmap/dynamics.hpp"
#include "floqmap/errors.hpp"
#include "floqmap/floquet.hpp"
#include "floqmap/integrator.hpp"
#include "floqmap/io.hpp"
#include "floqmap/parallel.hpp"
#include "floqmap/sidebands.hpp"
#include "floqmap/statics.hpp"
#include "floqmap/units.hpp"
#include "floqmap/version.hpp"

namespace {

using namespace floqmap;

// ---------- small utilities ----------

struct OutputStream {
    std::ofstream file;
    std::ostream* os = &std::cout;
};

OutputStream open_output(const std::string& path) {
    OutputStream out;
    if (!path.empty() && path != "-") {
        out.file.open(path);
        if (!out.file) throw std::runtime_error("cannot open output file: " + path);
        out.os = &out.file;
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw std::runtime_error("grid needs at least 2 points");
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) xs[k] = lo + (hi - lo) * k / (n - 1);
    return xs;
}

std::pair<std::string, std::string> split_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == s.size())
        throw CLI::ValidationError("expected a comma-separated pair, got '" + s + "'");
    return {s.substr(0, comma), s.substr(comma + 1)};
}

bool has_coupler(const System& sys) {
    for (int m = 0; m < sys.num_modes(); ++m)
        if (sys.is_coupler(m)) return true;
    return false;
}

DriveSpec require_drive(const LoadedConfig& cfg, const char* sub) {
    if (!cfg.drive)
        throw std::runtime_error(std::string(sub) +
                                 ": the config needs a \"drive\" block (target, eps_MHz)");
    return *cfg.drive;
}

// ---------- minimal SVG output ----------

struct Series {
    std::string name;
    std::vector<double> x, y;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

void svg_lineplot(std::ostream& os, const std::string& title, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<Series>& series) {
    const double W = 720, H = 480, L = 80, R = 24, T = 40, B = 56;
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]); xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]); yhi = std::max(yhi, s.y[i]);
        }
    if (!(xhi > xlo)) { xhi = xlo + 1; }
    if (!(yhi > ylo)) { yhi = ylo + 1; }
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad; yhi += pad;
    const auto X = [&](double x) { return L + (x - xlo) / (xhi - xlo) * (W - L - R); };
    const auto Y = [&](double y) { return H - B - (y - ylo) / (yhi - ylo) * (H - T - B); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
          "text-anchor=\"middle\">" << title << "</text>\n";
    // axes + ticks
    os << "<g stroke=\"#333\" stroke-width=\"1\">"
       << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\""
       << H - B << "\"/>"
       << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
       << "\"/></g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = xlo + (xhi - xlo) * k / 5, yv = ylo + (yhi - ylo) * k / 5;
        os << "<line x1=\"" << X(xv) << "\" y1=\"" << H - B << "\" x2=\"" << X(xv) << "\" y2=\""
           << H - B + 5 << "\" stroke=\"#333\"/>"
           << "<text x=\"" << X(xv) << "\" y=\"" << H - B + 18
           << "\" text-anchor=\"middle\">" << format_number(xv) << "</text>\n";
        os << "<line x1=\"" << L - 5 << "\" y1=\"" << Y(yv) << "\" x2=\"" << L << "\" y2=\""
           << Y(yv) << "\" stroke=\"#333\"/>"
           << "<text x=\"" << L - 8 << "\" y=\"" << Y(yv) + 4
           << "\" text-anchor=\"end\">" << format_number(yv) << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n"
       << "<text x=\"18\" y=\"" << (T + H - B) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n</g>\n";
    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        os << "<polyline fill=\"none\" stroke=\"" << kPalette[si % 8]
           << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
                os << X(s.x[i]) << "," << Y(s.y[i]) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - R - 8 << "\" y=\"" << T + 16 + 16 * si
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" fill=\""
           << kPalette[si % 8] << "\">" << s.name << "</text>\n";
    }
    os << "</svg>\n";
}

void svg_heatmap(std::ostream& os, const std::string& title, const std::string& xlabel,
                 const std::string& ylabel, const std::vector<double>& xs,
                 const std::vector<double>& ys, const Eigen::MatrixXd& vals) {
    const double W = 720, H = 520, L = 80, R = 24, T = 40, B = 56;
    const int nx = static_cast<int>(xs.size()), ny = static_cast<int>(ys.size());
    const double cw = (W - L - R) / nx, ch = (H - T - B) / ny;
    double vmax = 1e-12;
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
            if (std::isfinite(vals(r, c))) vmax = std::max(vmax, vals(r, c));
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << W / 2 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
          "text-anchor=\"middle\">" << title << "</text>\n";
    for (int r = 0; r < ny; ++r) {
        for (int c = 0; c < nx; ++c) {
            const double v = std::isfinite(vals(r, c)) ? std::clamp(vals(r, c) / vmax, 0.0, 1.0) : 0.0;
            // white -> deep blue ramp
            const int cr = static_cast<int>(255 - 225 * v);
            const int cg = static_cast<int>(255 - 205 * v);
            const int cb = static_cast<int>(255 - 95 * v);
            os << "<rect x=\"" << L + c * cw << "\" y=\"" << H - B - (r + 1) * ch
               << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"rgb("
               << cr << "," << cg << "," << cb << ")\"/>\n";
        }
    }
    os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n"
       << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\">" << format_number(xs.front())
       << "</text>\n"
       << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\">"
       << format_number(xs.back()) << "</text>\n"
       << "<text x=\"" << L - 8 << "\" y=\"" << H - B << "\" text-anchor=\"end\">"
       << format_number(ys.front()) << "</text>\n"
       << "<text x=\"" << L - 8 << "\" y=\"" << T + 10 << "\" text-anchor=\"end\">"
       << format_number(ys.back()) << "</text>\n"
       << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n"
       << "<text x=\"18\" y=\"" << (T + H - B) / 2
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
       << (T + H - B) / 2 << ")\">" << ylabel << "</text>\n</g>\n</svg>\n";
}

// ---------- subcommands ----------

int run_catalog(const std::string& config_path, int dressing, const std::string& out_path) {
    const LoadedConfig cfg = load_config(config_path);
    const bool dressed = dressing == 0 ? has_coupler(cfg.system) : dressing > 0;
    const auto rows = catalog(cfg.system, dressed);
    auto out = open_output(out_path);
    CsvWriter csv(*out.os, {"bra", "ket", "class", "channel", "C", "detuning_MHz",
                            "base_strength_MHz"});
    for (const auto& e : rows) {
        csv.row({e.bra_label, e.ket_label, e.rotating == Rotating::co ? "co" : "counter",
                 e.channel == Channel::qubit ? "qubit" : "coupler",
                 CsvWriter::cell(e.level_coefficient), CsvWriter::cell(units::to_MHz(e.detuning)),
                 CsvWriter::cell(units::to_MHz(e.base_strength))});
    }
    return 0;
}

int run_landscape(const std::string& config_path, double fp_lo_MHz, double fp_hi_MHz,
                  int points, double eps_MHz, double ratio, int workers,
                  const std::string& out_path, const std::string& svg_path) {
    const LoadedConfig cfg = load_config(config_path);
    DriveSpec base = require_drive(cfg, "landscape");
    if (eps_MHz > 0.0) base.amplitude = eps_MHz * units::MHz;
    const auto fps = linspace(fp_lo_MHz * units::MHz, fp_hi_MHz * units::MHz, points);

    const DressedSpectrum ds = tracked_spectrum(cfg.system);
    const auto rows = catalog(cfg.system, has_coupler(cfg.system));

    struct Point {
        double theta = 0.0;
        int argmax = -1;
    };
    std::vector<Point> result(fps.size());

    parallel_for_index(fps.size(), workers, [&](std::size_t k) {
        DriveSpec d = base;
        d.frequency = fps[k];
        if (ratio > 0.0) d.amplitude = ratio * fps[k];
        const Eigen::MatrixXcd u = propagate_period(cfg.system, d);
        Point best;
        for (size_t r = 0; r < rows.size(); ++r) {
            Eigen::MatrixXcd pair(cfg.system.dim(), 2);
            pair.col(0) = ds.vector_of(rows[r].bra).cast<std::complex<double>>();
            pair.col(1) = ds.vector_of(rows[r].ket).cast<std::complex<double>>();
            double theta;
            try {
                const PairEffective pe = ueff_pair(u, pair, d.period(), d.frequency);
                theta = collision_angle(pe.two_g, pe.delta);
            } catch (const std::exception&) {
                theta = 0.5 * units::pi;  // reduction failed: fully collided
            }
            if (theta > best.theta) {
                best.theta = theta;
                best.argmax = static_cast<int>(r);
            }
        }
        result[k] = best;
    });

    auto out = open_output(out_path);
    CsvWriter csv(*out.os, {"fp_MHz", "max_theta_rad", "argmax_bra", "argmax_ket"});
    for (size_t k = 0; k < fps.size(); ++k) {
        const auto& p = result[k];
        csv.row({CsvWriter::cell(units::to_MHz(fps[k])), CsvWriter::cell(p.theta),
                 p.argmax >= 0 ? rows[p.argmax].bra_label : "",
                 p.argmax >= 0 ? rows[p.argmax].ket_label : ""});
    }
    if (!svg_path.empty()) {
        Series s{"max collision angle", {}, {}};
        for (size_t k = 0; k < fps.size(); ++k) {
            s.x.push_back(units::to_MHz(fps[k]));
            s.y.push_back(result[k].theta);
        }
        auto svg = open_output(svg_path);
        svg_lineplot(*svg.os, "collision landscape", "drive frequency (MHz)",
                     "max theta (rad)", {s});
    }
    return 0;
}

int run_chevron(const std::string& config_path, const std::string& from,
                const std::string& to, double fp_lo_MHz, double fp_hi_MHz, int points,
                double eps_MHz, double ratio, double t_end_us, int samples, int workers,
                const std::string& out_path, const std::string& svg_path) {
    const LoadedConfig cfg = load_config(config_path);
    DriveSpec base = require_drive(cfg, "chevron");
    if (eps_MHz > 0.0) base.amplitude = eps_MHz * units::MHz;
    const auto fps = linspace(fp_lo_MHz * units::MHz, fp_hi_MHz * units::MHz, points);
    const auto times = uniform_times(t_end_us * units::us, samples);

    const DressedSpectrum ds = tracked_spectrum(cfg.system);
    const Eigen::VectorXcd psi0 =
        ds.vector_of(cfg.system.parse_state(from)).cast<std::complex<double>>();
    const Eigen::VectorXcd track =
        ds.vector_of(cfg.system.parse_state(to)).cast<std::complex<double>>();

    Eigen::MatrixXd map(fps.size(), times.size());
    parallel_for_index(fps.size(), workers, [&](std::size_t k) {
        DriveSpec d = base;
        d.frequency = fps[k];
        if (ratio > 0.0) d.amplitude = ratio * fps[k];
        const auto pop = tracked_population(cfg.system, d, psi0, track, times);
        for (size_t i = 0; i < pop.size(); ++i) map(k, i) = pop[i];
    });

    auto out = open_output(out_path);
    CsvWriter csv(*out.os, {"fp_MHz", "t_us", "population"});
    for (size_t k = 0; k < fps.size(); ++k)
        for (size_t i = 0; i < times.size(); ++i)
            csv.row({CsvWriter::cell(units::to_MHz(fps[k])),
                     CsvWriter::cell(times[i] / units::us), CsvWriter::cell(map(k, i))});
    if (!svg_path.empty()) {
        std::vector<double> t_us(times.size()), fp_MHz(fps.size());
        for (size_t i = 0; i < times.size(); ++i) t_us[i] = times[i] / units::us;
        for (size_t k = 0; k < fps.size(); ++k) fp_MHz[k] = units::to_MHz(fps[k]);
        auto svg = open_output(svg_path);
        svg_heatmap(*svg.os, "chevron " + from + " to " + to, "time (us)",
                    "drive frequency (MHz)", t_us, fp_MHz, map);
    }
    return 0;
}

int run_micromotion(const std::string& config_path, const std::string& pair_arg,
                    double fp_MHz, double t_end_us, int samples, double threshold,
                    int harmonics, const std::string& out_path) {
    const LoadedConfig cfg = load_config(config_path);
    DriveSpec d = require_drive(cfg, "micromotion");
    if (fp_MHz > 0.0) d.frequency = fp_MHz * units::MHz;
    if (!(d.frequency > 0.0))
        throw std::runtime_error("micromotion: drive frequency missing (config fp_MHz or --fp-MHz)");

    const auto [a_label, b_label] = split_pair(pair_arg);
    const DressedSpectrum ds = tracked_spectrum(cfg.system);
    const int sa = cfg.system.parse_state(a_label);
    const int sb = cfg.system.parse_state(b_label);
    Eigen::VectorXcd psi0 = (ds.vector_of(sa) + ds.vector_of(sb)).cast<std::complex<double>>();
    psi0.normalize();
    const Eigen::VectorXcd track = ds.vector_of(sa).cast<std::complex<double>>();

    const auto times = uniform_times(t_end_us * units::us, samples);
    const auto pop = tracked_population(cfg.system, d, psi0, track, times);
    const auto mag = power_spectrum(pop);
    const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    const auto peaks = find_peaks(mag, dt, threshold);

    // candidate lines: generalized Rabi of every catalogued sideband channel,
    // plus pure drive harmonics
    const auto rows = catalog(cfg.system, has_coupler(cfg.system));
    struct Line {
        double freq;
        std::string name;
    };
    std::vector<Line> lines;
    const BudgetOptions bopt;
    for (const auto& e : rows) {
        for (int n = -harmonics; n <= harmonics; ++n) {
            const double two_g = 2.0 * channel_strength(cfg.system, e, d, n, bopt);
            if (two_g == 0.0) continue;
            const double det = e.detuning + n * d.frequency;
            lines.push_back({std::hypot(two_g, det),
                             e.bra_label + "<->" + e.ket_label + " n=" + std::to_string(n)});
        }
    }
    for (int k = 1; k <= std::max(1, harmonics); ++k)
        lines.push_back({k * d.frequency, "drive harmonic " + std::to_string(k)});

    auto out = open_output(out_path);
    CsvWriter csv(*out.os, {"freq_MHz", "height_rel", "nearest_line", "mismatch_MHz"});
    for (const auto& p : peaks) {
        const Line* best = nullptr;
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& l : lines) {
            const double e = std::abs(l.freq - p.freq);
            if (e < dist) {
                dist = e;
                best = &l;
            }
        }
        csv.row({CsvWriter::cell(units::to_MHz(p.freq)), CsvWriter::cell(p.height),
                 best ? best->name : "", CsvWriter::cell(units::to_MHz(dist))});
    }
    return 0;
}

int run_strength_sweep(const std::string& config_path, const std::string& pair_arg,
                       double fp_MHz, int n_min, int n_max, double eps_lo_MHz,
                       double eps_hi_MHz, int points, int workers,
                       const std::string& out_path, const std::string& svg_path) {
    const LoadedConfig cfg = load_config(config_path);
    DriveSpec d = require_drive(cfg, "strength-sweep");
    if (fp_MHz > 0.0) d.frequency = fp_MHz * units::MHz;
    if (!(d.frequency > 0.0))
        throw std::runtime_error(
            "strength-sweep: drive frequency missing (config fp_MHz or --fp-MHz)");
    if (n_min > n_max) throw std::runtime_error("strength-sweep: need n-min <= n-max");

    const auto [a_label, b_label] = split_pair(pair_arg);
    const auto rows = catalog(cfg.system, has_coupler(cfg.system));
    const TransitionEntry& entry = find_entry(rows, a_label, b_label);
    const auto eps = linspace(eps_lo_MHz * units::MHz, eps_hi_MHz * units::MHz, points);

    const int nn = n_max - n_min + 1;
    Eigen::MatrixXd g(points, nn);
    const BudgetOptions bopt;
    parallel_for_index(static_cast<std::size_t>(points), workers, [&](std::size_t k) {
        DriveSpec dk = d;
        dk.amplitude = eps[k];
        for (int n = n_min; n <= n_max; ++n)
            g(k, n - n_min) = channel_strength(cfg.system, entry, dk, n, bopt);
    });

    auto out = open_output(out_path);
    CsvWriter csv(*out.os, {"eps_MHz", "n", "strength_MHz"});
    for (int k = 0; k < points; ++k)
        for (int n = n_min; n <= n_max; ++n)
            csv.row({CsvWriter::cell(units::to_MHz(eps[k])), std::to_string(n),
                     CsvWriter::cell(units::to_MHz(g(k, n - n_min)))});
    if (!svg_path.empty()) {
        std::vector<Series> series;
        for (int n = n_min; n <= n_max; ++n) {
            Series s{"n=" + std::to_string(n), {}, {}};
            for (int k = 0; k < points; ++k) {
                s.x.push_back(units::to_MHz(eps[k]));
                s.y.push_back(units::to_MHz(g(k, n - n_min)));
            }
            series.push_back(std::move(s));
        }
        auto svg = open_output(svg_path);
        svg_lineplot(*svg.os, "sideband strength " + a_label + "<->" + b_label,
                     "drive amplitude (MHz)", "strength (MHz)", series);
    }
    return 0;
}

int run_zz(const std::string& config_path, const std::string& pair_arg, double fc_lo_GHz,
           double fc_hi_GHz, int points, int workers, const std::string& out_path,
           const std::string& svg_path) {
    const LoadedConfig cfg = load_config(config_path);
    int coupler = -1;
    for (int m = 0; m < cfg.system.num_modes(); ++m)
        if (cfg.system.is_coupler(m)) {
            if (coupler >= 0) throw std::runtime_error("zz: multiple coupler modes; not supported");
            coupler = m;
        }
    if (coupler < 0) throw std::runtime_error("zz: the sweep needs a coupler mode ('c' label)");

    int qa = -1, qb = -1;
    if (!pair_arg.empty()) {
        const auto [a_label, b_label] = split_pair(pair_arg);
        qa = cfg.system.mode_index(a_label);
        qb = cfg.system.mode_index(b_label);
    } else {
        for (int m = 0; m < cfg.system.num_modes(); ++m) {
            if (cfg.system.is_coupler(m)) continue;
            (qa < 0 ? qa : qb) = m;
        }
        if (qb < 0) throw std::runtime_error("zz: pass --pair to pick the two qubits");
    }

    const auto fcs = linspace(fc_lo_GHz * units::GHz, fc_hi_GHz * units::GHz, points);
    struct RowOut {
        double exact = std::numeric_limits<double>::quiet_NaN();
        double p2 = std::numeric_limits<double>::quiet_NaN();
        double p3 = std::numeric_limits<double>::quiet_NaN();
        double p4 = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<RowOut> result(fcs.size());
    parallel_for_index(fcs.size(), workers, [&](std::size_t k) {
        const System sys = cfg.system.with_mode_freq(coupler, fcs[k]);
        RowOut r;
        try {
            r.exact = static_zz(sys, qa, qb);
        } catch (const std::exception&) {
        }
        try {
            r.p2 = pert_zz(sys, qa, qb, 2);
            r.p3 = pert_zz(sys, qa, qb, 3);
            r.p4 = pert_zz(sys, qa, qb, 4);
        } catch (const std::exception&) {
        }
        result[k] = r;
    });

    auto out = open_output(out_path);
    CsvWriter csv(*out.os,
                  {"omega_c_GHz", "zz_exact_kHz", "zz_pert2_kHz", "zz_pert3_kHz", "zz_pert4_kHz"});
    for (size_t k = 0; k < fcs.size(); ++k)
        csv.row({CsvWriter::cell(units::to_GHz(fcs[k])),
                 CsvWriter::cell(units::to_kHz(result[k].exact)),
                 CsvWriter::cell(units::to_kHz(result[k].p2)),
                 CsvWriter::cell(units::to_kHz(result[k].p3)),
                 CsvWriter::cell(units::to_kHz(result[k].p4))});
    if (!svg_path.empty()) {
        std::vector<Series> series(4);
        series[0].name = "exact";
        series[1].name = "order 2";
        series[2].name = "order 3";
        series[3].name = "order 4";
        for (size_t k = 0; k < fcs.size(); ++k) {
            const double x = units::to_GHz(fcs[k]);
            const double ys[4] = {result[k].exact, result[k].p2, result[k].p3, result[k].p4};
            for (int s = 0; s < 4; ++s) {
                series[s].x.push_back(x);
                series[s].y.push_back(units::to_kHz(ys[s]));
            }
        }
        auto svg = open_output(svg_path);
        svg_lineplot(*svg.os, "static zz vs coupler frequency", "coupler frequency (GHz)",
                     "zz (kHz)", series);
    }
    return 0;
}

int run_error_budget(const std::string& config_path, const std::string& target_arg, int order,
                     double fp_MHz, double eps_MHz, int harmonics, const std::string& pulse,
                     bool no_stark, int taylor_order, bool as_json, const std::string& terms_path,
                     const std::string& out_path,
                     // resonance sweep mode
                     const std::string& sweep_move, double sweep_lo_GHz, double sweep_hi_GHz,
                     int sweep_points, double hold_two_g_MHz, const std::string& svg_path) {
    const LoadedConfig cfg = load_config(config_path);
    DriveSpec d = require_drive(cfg, "error-budget");
    if (eps_MHz > 0.0) d.amplitude = eps_MHz * units::MHz;
    if (order == 0) throw std::runtime_error("error-budget: --order must be nonzero");

    BudgetOptions opts;
    opts.harmonic_range = harmonics;
    opts.stark = !no_stark;
    opts.taylor_order = taylor_order;
    if (pulse == "pi")
        opts.pulse = PulseConvention::pi_pulse;
    else if (pulse == "pi2")
        opts.pulse = PulseConvention::half_pi;
    else if (pulse == "2pi")
        opts.pulse = PulseConvention::two_pi;
    else
        throw std::runtime_error("error-budget: --pulse must be pi, pi2 or 2pi");

    const auto [a_label, b_label] = split_pair(target_arg);

    if (!sweep_move.empty()) {
        if (!(hold_two_g_MHz > 0.0))
            throw std::runtime_error("error-budget: resonance sweep needs --hold-two-g-MHz > 0");
        const int move = cfg.system.mode_index(sweep_move);
        const auto grid = linspace(sweep_lo_GHz * units::GHz, sweep_hi_GHz * units::GHz,
                                   sweep_points);
        const auto sweep = error_vs_resonance_sweep(cfg.system, d, move, grid, a_label, b_label,
                                                    order, hold_two_g_MHz * units::MHz, opts);
        auto out = open_output(out_path);
        CsvWriter csv(*out.os, {"move_freq_GHz", "fp_MHz", "eps_MHz", "qubit_total",
                                "coupler_total", "pulse_total"});
        for (const auto& p : sweep)
            csv.row({CsvWriter::cell(units::to_GHz(p.move_freq)),
                     CsvWriter::cell(units::to_MHz(p.omega_p)),
                     CsvWriter::cell(units::to_MHz(p.eps)), CsvWriter::cell(p.qubit_total),
                     CsvWriter::cell(p.coupler_total), CsvWriter::cell(p.pulse_total)});
        if (!svg_path.empty()) {
            Series sq{"qubit channels", {}, {}}, sc{"coupler channels", {}, {}};
            for (const auto& p : sweep) {
                sq.x.push_back(units::to_GHz(p.move_freq));
                sq.y.push_back(p.qubit_total);
                sc.x.push_back(units::to_GHz(p.move_freq));
                sc.y.push_back(p.coupler_total);
            }
            auto svg = open_output(svg_path);
            svg_lineplot(*svg.os, "pulse error vs resonance", sweep_move + " frequency (GHz)",
                         "transferred population", {sq, sc});
        }
        return 0;
    }

    const auto rows = catalog(cfg.system, has_coupler(cfg.system));
    const TransitionEntry& tgt = find_entry(rows, a_label, b_label);
    const int target_row = static_cast<int>(&tgt - rows.data());
    if (fp_MHz > 0.0)
        d.frequency = fp_MHz * units::MHz;
    else if (!(d.frequency > 0.0))
        d.frequency = resonance_frequency(tgt, order);
    // harmonic orientation that best matches the resonance condition
    const int n_signed = std::abs(tgt.detuning + std::abs(order) * d.frequency) <
                                 std::abs(tgt.detuning - std::abs(order) * d.frequency)
                             ? std::abs(order)
                             : -std::abs(order);

    const ErrorBudget b = error_budget(cfg.system, rows, d, target_row, n_signed, opts);

    auto out = open_output(out_path);
    if (as_json) {
        std::ostringstream js;
        js << "{\n"
           << "  \"target\": \"" << tgt.bra_label << "<->" << tgt.ket_label << "\",\n"
           << "  \"harmonic\": " << n_signed << ",\n"
           << "  \"fp_MHz\": " << format_number(units::to_MHz(d.frequency)) << ",\n"
           << "  \"eps_MHz\": " << format_number(units::to_MHz(d.amplitude)) << ",\n"
           << "  \"target_two_g_MHz\": " << format_number(units::to_MHz(b.target_two_g)) << ",\n"
           << "  \"gate_us\": " << format_number(b.gate / units::us) << ",\n"
           << "  \"co_total\": " << format_number(b.co_total) << ",\n"
           << "  \"counter_total\": " << format_number(b.counter_total) << ",\n"
           << "  \"total\": " << format_number(b.total) << ",\n"
           << "  \"pulse_total\": " << format_number(b.pulse_total) << "\n"
           << "}\n";
        *out.os << js.str();
    } else {
        *out.os << "target " << tgt.bra_label << "<->" << tgt.ket_label << " n=" << n_signed
                << " fp=" << format_number(units::to_MHz(d.frequency)) << " MHz eps="
                << format_number(units::to_MHz(d.amplitude)) << " MHz\n"
                << "target_two_g = " << format_number(units::to_MHz(b.target_two_g))
                << " MHz, gate = " << format_number(b.gate / units::us) << " us\n"
                << "weight totals: co = " << format_number(b.co_total)
                << ", counter = " << format_number(b.counter_total)
                << ", total = " << format_number(b.total)
                << ", pulse = " << format_number(b.pulse_total) << "\n";
    }
    if (!terms_path.empty()) {
        auto terms = open_output(terms_path);
        CsvWriter csv(*terms.os, {"bra", "ket", "class", "channel", "n", "two_g_MHz",
                                  "detuning_MHz", "weight", "pulse_error"});
        for (const auto& t : b.terms) {
            const auto& e = rows[t.row];
            csv.row({e.bra_label, e.ket_label, e.rotating == Rotating::co ? "co" : "counter",
                     e.channel == Channel::qubit ? "qubit" : "coupler", std::to_string(t.harmonic),
                     CsvWriter::cell(units::to_MHz(t.two_g)),
                     CsvWriter::cell(units::to_MHz(t.detuning)), CsvWriter::cell(t.weight),
                     CsvWriter::cell(t.pulse_error)});
        }
    }
    return 0;
}

int run_allocate(const std::string& problem_path, bool refine, bool move_modes,
                 double trust_MHz, const std::string& smt_path, const std::string& out_path,
                 std::optional<std::uint64_t> seed_override) {
    AllocationProblem problem = load_allocation_problem(problem_path);
    if (seed_override) problem.seed = *seed_override;
    const Allocator alloc(problem);

    if (!smt_path.empty()) {
        auto smt = open_output(smt_path);
        *smt.os << alloc.export_smt();
    }

    AllocationSolution sol = alloc.solve();
    if (refine && sol.satisfiable)
        sol = alloc.refine_with_dressed(sol, trust_MHz * units::MHz, move_modes);

    auto out = open_output(out_path);
    *out.os << solution_to_json(alloc, sol) << "\n";
    return sol.satisfiable ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sideband interaction mapping for parametrically modulated circuits"};
    app.set_version_flag("--version", std::string("floqmap ") + floqmap::version_string);
    app.require_subcommand(1);
    // let --workers/--seed appear after the subcommand as well
    app.fallthrough();

    int workers = 1;
    app.add_option("--workers", workers, "worker threads for grid sweeps (results identical)")
        ->capture_default_str();
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "override the branch-order seed (allocate)");

    std::string config, out_path, svg_path;

    // catalog
    auto* sc_catalog = app.add_subcommand("catalog", "list sideband transition channels");
    std::string cat_out;
    int cat_dressing = 0;
    sc_catalog->add_option("--config", config, "system config JSON")->required();
    auto* flag_dressed = sc_catalog->add_flag_callback(
        "--dressed", [&] { cat_dressing = 1; }, "use dressed detunings");
    sc_catalog
        ->add_flag_callback("--bare", [&] { cat_dressing = -1; }, "use bare detunings")
        ->excludes(flag_dressed);
    sc_catalog->add_option("-o,--output", cat_out, "CSV output path (default stdout)");

    // landscape
    auto* sc_land = app.add_subcommand("landscape", "max collision angle vs drive frequency");
    double fp_lo = 0, fp_hi = 0, eps_MHz = 0, ratio = 0;
    int points = 81;
    sc_land->add_option("--config", config, "system config JSON")->required();
    sc_land->add_option("--fp-min-MHz", fp_lo, "grid start")->required();
    sc_land->add_option("--fp-max-MHz", fp_hi, "grid end")->required();
    sc_land->add_option("--points", points, "grid points")->capture_default_str();
    sc_land->add_option("--eps-MHz", eps_MHz, "drive amplitude (default: config)");
    sc_land->add_option("--ratio", ratio, "hold eps/omega_p fixed at this ratio");
    sc_land->add_option("-o,--output", out_path, "CSV output path (default stdout)");
    sc_land->add_option("--svg", svg_path, "also write an SVG line plot");

    // chevron
    auto* sc_chev = app.add_subcommand("chevron", "population transfer map vs (fp, t)");
    std::string chev_from, chev_to;
    double t_end_us = 1.0;
    int samples = 201;
    sc_chev->add_option("--config", config, "system config JSON")->required();
    sc_chev->add_option("--from", chev_from, "initial occupation label")->required();
    sc_chev->add_option("--to", chev_to, "tracked occupation label")->required();
    sc_chev->add_option("--fp-min-MHz", fp_lo, "grid start")->required();
    sc_chev->add_option("--fp-max-MHz", fp_hi, "grid end")->required();
    sc_chev->add_option("--points", points, "frequency grid points")->capture_default_str();
    sc_chev->add_option("--eps-MHz", eps_MHz, "drive amplitude (default: config)");
    sc_chev->add_option("--ratio", ratio, "hold eps/omega_p fixed at this ratio");
    sc_chev->add_option("--t-end-us", t_end_us, "trace duration")->capture_default_str();
    sc_chev->add_option("--samples", samples, "samples per trace")->capture_default_str();
    sc_chev->add_option("-o,--output", out_path, "CSV output path (default stdout)");
    sc_chev->add_option("--svg", svg_path, "also write an SVG heatmap");

    // micromotion
    auto* sc_micro =
        app.add_subcommand("micromotion", "audit spectral peaks against catalogued lines");
    std::string micro_pair;
    double micro_fp = 0, micro_t = 0.5, micro_thresh = 1e-3;
    int micro_samples = 65536, micro_harm = 15;
    sc_micro->add_option("--config", config, "system config JSON")->required();
    sc_micro->add_option("--pair", micro_pair, "superposed pair, e.g. 01,11")->required();
    sc_micro->add_option("--fp-MHz", micro_fp, "drive frequency (default: config)");
    sc_micro->add_option("--t-end-us", micro_t, "trace duration")->capture_default_str();
    sc_micro->add_option("--samples", micro_samples, "trace samples")->capture_default_str();
    sc_micro->add_option("--threshold", micro_thresh, "relative peak threshold")
        ->capture_default_str();
    sc_micro->add_option("--harmonics", micro_harm, "harmonic range for line matching")
        ->capture_default_str();
    sc_micro->add_option("-o,--output", out_path, "CSV output path (default stdout)");

    // strength-sweep
    auto* sc_str = app.add_subcommand("strength-sweep", "sideband strengths vs drive amplitude");
    std::string str_pair;
    int n_min = -3, n_max = 3;
    double eps_lo = 0, eps_hi = 0, str_fp = 0;
    sc_str->add_option("--config", config, "system config JSON")->required();
    sc_str->add_option("--pair", str_pair, "transition, e.g. 01,10")->required();
    sc_str->add_option("--fp-MHz", str_fp, "drive frequency (default: config)");
    sc_str->add_option("--n-min", n_min, "lowest harmonic")->capture_default_str();
    sc_str->add_option("--n-max", n_max, "highest harmonic")->capture_default_str();
    sc_str->add_option("--eps-min-MHz", eps_lo, "amplitude grid start")->required();
    sc_str->add_option("--eps-max-MHz", eps_hi, "amplitude grid end")->required();
    sc_str->add_option("--points", points, "grid points")->capture_default_str();
    sc_str->add_option("-o,--output", out_path, "CSV output path (default stdout)");
    sc_str->add_option("--svg", svg_path, "also write an SVG line plot");

    // zz
    auto* sc_zz = app.add_subcommand("zz", "static zz vs coupler frequency");
    std::string zz_pair;
    double fc_lo = 0, fc_hi = 0;
    sc_zz->add_option("--config", config, "system config JSON")->required();
    sc_zz->add_option("--pair", zz_pair, "qubit pair labels (default: the two non-couplers)");
    sc_zz->add_option("--fc-min-GHz", fc_lo, "coupler grid start")->required();
    sc_zz->add_option("--fc-max-GHz", fc_hi, "coupler grid end")->required();
    sc_zz->add_option("--points", points, "grid points")->capture_default_str();
    sc_zz->add_option("-o,--output", out_path, "CSV output path (default stdout)");
    sc_zz->add_option("--svg", svg_path, "also write an SVG line plot");

    // error-budget
    auto* sc_err = app.add_subcommand("error-budget", "frequency-collision error budget");
    std::string err_target, err_pulse = "pi", err_terms, err_move;
    int err_order = 1, err_harm = 15, err_taylor = 0;
    double err_fp = 0, err_eps = 0, sweep_lo = 0, sweep_hi = 0, hold_two_g = 0;
    int sweep_points = 21;
    bool err_json = false, err_nostark = false;
    sc_err->add_option("--config", config, "system config JSON")->required();
    sc_err->add_option("--target", err_target, "target transition, e.g. 01,10")->required();
    sc_err->add_option("--order", err_order, "intended harmonic magnitude")
        ->capture_default_str();
    sc_err->add_option("--fp-MHz", err_fp, "drive frequency (default: config, else resonance)");
    sc_err->add_option("--eps-MHz", err_eps, "drive amplitude (default: config)");
    sc_err->add_option("--harmonics", err_harm, "harmonic range")->capture_default_str();
    sc_err->add_option("--pulse", err_pulse, "pulse convention: pi, pi2, 2pi")
        ->capture_default_str();
    sc_err->add_flag("--no-stark", err_nostark, "disable Stark-shifted detunings");
    sc_err->add_option("--taylor-order", err_taylor, "coupler-drive Taylor truncation (0=auto)");
    sc_err->add_flag("--json", err_json, "print a JSON summary instead of text");
    sc_err->add_option("--terms", err_terms, "write per-channel terms CSV here");
    sc_err->add_option("--sweep-move", err_move, "resonance sweep: mode label to move");
    sc_err->add_option("--sweep-min-GHz", sweep_lo, "resonance sweep grid start");
    sc_err->add_option("--sweep-max-GHz", sweep_hi, "resonance sweep grid end");
    sc_err->add_option("--sweep-points", sweep_points, "resonance sweep points")
        ->capture_default_str();
    sc_err->add_option("--hold-two-g-MHz", hold_two_g, "hold the target strength at this value");
    sc_err->add_option("-o,--output", out_path, "output path (default stdout)");
    sc_err->add_option("--svg", svg_path, "SVG line plot (sweep mode)");

    // allocate
    auto* sc_alloc = app.add_subcommand("allocate", "solve a frequency-allocation problem");
    std::string alloc_problem, alloc_smt;
    bool alloc_refine = false, alloc_move = false;
    double alloc_trust = 50.0;
    sc_alloc->add_option("--problem", alloc_problem, "allocation problem JSON")->required();
    sc_alloc->add_flag("--refine", alloc_refine, "refine against exact dressed energies");
    sc_alloc->add_flag("--move-modes", alloc_move, "allow bounded mode moves during refinement");
    sc_alloc->add_option("--trust-MHz", alloc_trust, "refinement trust radius")
        ->capture_default_str();
    sc_alloc->add_option("--export-smt", alloc_smt, "write the constraint system as s-expressions");
    sc_alloc->add_option("-o,--output", out_path, "solution JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sc_catalog->parsed()) return run_catalog(config, cat_dressing, cat_out);
        if (sc_land->parsed())
            return run_landscape(config, fp_lo, fp_hi, points, eps_MHz, ratio, workers, out_path,
                                 svg_path);
        if (sc_chev->parsed())
            return run_chevron(config, chev_from, chev_to, fp_lo, fp_hi, points, eps_MHz, ratio,
                               t_end_us, samples, workers, out_path, svg_path);
        if (sc_micro->parsed())
            return run_micromotion(config, micro_pair, micro_fp, micro_t, micro_samples,
                                   micro_thresh, micro_harm, out_path);
        if (sc_str->parsed())
            return run_strength_sweep(config, str_pair, str_fp, n_min, n_max, eps_lo, eps_hi,
                                      points, workers, out_path, svg_path);
        if (sc_zz->parsed())
            return run_zz(config, zz_pair, fc_lo, fc_hi, points, workers, out_path, svg_path);
        if (sc_err->parsed())
            return run_error_budget(config, err_target, err_order, err_fp, err_eps, err_harm,
                                    err_pulse, err_nostark, err_taylor, err_json, err_terms,
                                    out_path, err_move, sweep_lo, sweep_hi, sweep_points,
                                    hold_two_g, svg_path);
        if (sc_alloc->parsed())
            return run_allocate(alloc_problem, alloc_refine, alloc_move, alloc_trust, alloc_smt,
                                out_path, seed);
    } catch (const std::exception& e) {
        std::cerr << "floqmap: error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "floqmap: no subcommand\n";
    return 2;
}
