// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/integrator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

// The stock Eigen bindings report the infinity norm of a complex state in
// the state's (complex) scalar type, which the error controller cannot
// consume, and route state copies through range iterators that Eigen only
// defines for vectors. The exact-type specializations below outrank the
// stock ones and restore both operations for the complex matrix and vector
// states used here.
namespace boost::numeric::odeint {

template <>
struct vector_space_norm_inf<Eigen::MatrixXcd> {
    typedef double result_type;
    double operator()(const Eigen::MatrixXcd& m) const { return m.lpNorm<Eigen::Infinity>(); }
};

template <>
struct vector_space_norm_inf<Eigen::VectorXcd> {
    typedef double result_type;
    double operator()(const Eigen::VectorXcd& v) const { return v.lpNorm<Eigen::Infinity>(); }
};

template <typename Scalar, int R, int C, int O, int MR, int MC>
struct copy_impl<Eigen::Matrix<Scalar, R, C, O, MR, MC>, Eigen::Matrix<Scalar, R, C, O, MR, MC>> {
    static void copy(const Eigen::Matrix<Scalar, R, C, O, MR, MC>& from,
                     Eigen::Matrix<Scalar, R, C, O, MR, MC>& to) {
        to = from;
    }
};

}  // namespace boost::numeric::odeint

namespace floqmap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Interaction-picture phases phi_j(t) = E_j t + chi(t) A_j.
struct Frame {
    Eigen::VectorXd energy;      // bare diagonal E_j
    Eigen::VectorXd drive_occ;   // A_j: occupation of the driven mode
    double eps = 0.0;
    double wp = 0.0;
    double phase = 0.0;

    Frame(const System& system, const DriveSpec& drive)
        : energy(system.bare_energies()),
          drive_occ(system.mode_occupation(drive.mode)),
          eps(drive.amplitude),
          wp(drive.frequency),
          phase(drive.phase) {
        if (!(wp > 0.0)) throw std::invalid_argument("drive frequency must be positive");
    }

    double chi(double t) const { return eps / wp * (std::sin(wp * t + phase) - std::sin(phase)); }

    // D(t) = diag(exp(-i phi(t))) as a vector of diagonal entries.
    Eigen::VectorXcd rotation(double t) const {
        const double c = chi(t);
        return (-kI * (energy.array() * t + drive_occ.array() * c)).exp().matrix();
    }
};

// With U = D(t) X the interaction equation is i dX/dt = V~(t) X where
// V~ = D^dag V D, i.e. V~_jk = conj(u_j) V_jk u_k for D = diag(u).
template <typename State>
struct InteractionRhs {
    const Frame* frame;
    Eigen::MatrixXcd coupling;  // V, promoted to complex once

    InteractionRhs(const Frame& f, const Eigen::MatrixXd& v)
        : frame(&f), coupling(v.cast<std::complex<double>>()) {}

    void operator()(const State& x, State& dxdt, double t) const {
        const Eigen::VectorXcd u = frame->rotation(t);
        Eigen::MatrixXcd w = coupling.cwiseProduct(u.conjugate() * u.transpose());
        dxdt.noalias() = (-kI) * (w * x);
    }
};

template <typename State>
using Rkf78Controlled = boost::numeric::odeint::controlled_runge_kutta<
    boost::numeric::odeint::runge_kutta_fehlberg78<State, double, State, double,
                                                   boost::numeric::odeint::vector_space_algebra>>;

template <typename State>
Rkf78Controlled<State> make_stepper(const IntegratorOptions& opts) {
    namespace ode = boost::numeric::odeint;
    using stepper_t =
        ode::runge_kutta_fehlberg78<State, double, State, double, ode::vector_space_algebra>;
    return ode::make_controlled(opts.abs_tol, opts.rel_tol, stepper_t());
}

template <typename State, typename Rhs>
void integrate_to(Rkf78Controlled<State>& controlled, const Rhs& rhs, State& x, double& t,
                  double& dt, double t_end, const IntegratorOptions& opts) {
    namespace ode = boost::numeric::odeint;
    const double span = std::abs(t_end - t);
    const double t_eps = 1e-14 * std::max({std::abs(t), std::abs(t_end), 1e-30});
    if (span <= t_eps) {
        t = t_end;
        return;
    }
    if (!(dt > 0.0)) dt = span / 64.0;
    int rejections = 0;
    while (t < t_end - t_eps) {
        const bool clamped = t + dt >= t_end;
        double dt_try = clamped ? t_end - t : dt;
        const auto result = controlled.try_step(rhs, x, t, dt_try);
        if (result == ode::fail) {
            if (++rejections > opts.max_consecutive_rejections)
                throw std::runtime_error(
                    "integrator stalled: too many consecutive step rejections");
        } else {
            rejections = 0;
        }
        if (!clamped || result == ode::fail) dt = dt_try;
        // else: keep the pre-clamp dt as the guess for the next segment
    }
    t = t_end;
}

}  // namespace

Eigen::MatrixXcd propagate(const System& system, const DriveSpec& drive, double t0, double t1,
                           const IntegratorOptions& opts) {
    if (t1 < t0) throw std::invalid_argument("propagate: t1 must be >= t0");
    const Frame frame(system, drive);
    const InteractionRhs<Eigen::MatrixXcd> rhs(frame, system.coupling_matrix());

    const Eigen::Index d = system.dim();
    Eigen::MatrixXcd u_int = Eigen::MatrixXcd::Identity(d, d);
    auto stepper = make_stepper<Eigen::MatrixXcd>(opts);
    double t = t0;
    double dt = drive.period() / 64.0;
    integrate_to(stepper, rhs, u_int, t, dt, t1, opts);

    // back to the lab frame: U(t1, t0) = D(t1) U_I D(t0)^dag
    const Eigen::VectorXcd d1 = frame.rotation(t1);
    const Eigen::VectorXcd d0 = frame.rotation(t0);
    return d1.asDiagonal() * u_int * d0.conjugate().asDiagonal();
}

Eigen::MatrixXcd propagate_period(const System& system, const DriveSpec& drive,
                                  const IntegratorOptions& opts) {
    return propagate(system, drive, 0.0, drive.period(), opts);
}

void propagate_state(const System& system, const DriveSpec& drive,
                     const Eigen::VectorXcd& psi0, const std::vector<double>& times,
                     const std::function<void(size_t, const Eigen::VectorXcd&)>& observer,
                     const IntegratorOptions& opts) {
    if (psi0.size() != system.dim())
        throw std::invalid_argument("propagate_state: state dimension mismatch");
    const Frame frame(system, drive);
    const InteractionRhs<Eigen::VectorXcd> rhs(frame, system.coupling_matrix());

    // psi_I(0) = D(0)^dag psi0 = psi0 since chi(0) = 0.
    Eigen::VectorXcd psi = psi0;
    auto stepper = make_stepper<Eigen::VectorXcd>(opts);
    double t = 0.0;
    double dt = drive.period() / 64.0;
    double prev = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
        const double tk = times[k];
        if (tk < prev) throw std::invalid_argument("propagate_state: times must be ascending");
        if (tk < 0.0) throw std::invalid_argument("propagate_state: times must be nonnegative");
        integrate_to(stepper, rhs, psi, t, dt, tk, opts);
        observer(k, frame.rotation(tk).asDiagonal() * psi);
        prev = tk;
    }
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
    const Eigen::Index d = u.cols();
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).norm();
}

}  // namespace floqmap
