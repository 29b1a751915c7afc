// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Circuit model: a register of Duffing modes (transmon-like oscillators with
// negative anharmonicity) with pairwise exchange couplings
// J (b_i + b_i^dag)(b_j + b_j^dag), truncated to a small number of levels per
// mode. Parametric drives modulate one mode's frequency:
// omega(t) = omega_bar + eps * cos(omega_p t + phase), which adds
// eps * cos(omega_p t + phase) * n_hat on the driven mode.
//
// Basis: lexicographic product states in declaration order, the last declared
// mode varying fastest; state labels are occupation digit strings ("101").

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace floqmap {

struct ModeSpec {
    std::string label;
    double freq = 0.0;    // bare 0->1 angular frequency, rad/s
    double anharm = 0.0;  // signed anharmonicity alpha, rad/s (< 0 for transmons)
    int levels = 4;       // truncation dimension, 2..9
    bool tunable = false; // frequency can be parametrically modulated
};

struct CouplingSpec {
    int a = 0;
    int b = 0;
    double strength = 0.0;  // J, rad/s
};

struct DriveSpec {
    int mode = 0;            // driven mode index
    double amplitude = 0.0;  // eps, rad/s
    double frequency = 0.0;  // omega_p, rad/s (> 0)
    double phase = 0.0;      // phi_p, rad

    double period() const;   // 2 pi / omega_p
};

class System {
  public:
    System(std::vector<ModeSpec> modes, std::vector<CouplingSpec> couplings);

    int num_modes() const { return static_cast<int>(modes_.size()); }
    int dim() const { return dim_; }
    const ModeSpec& mode(int m) const { return modes_.at(m); }
    const std::vector<ModeSpec>& modes() const { return modes_; }
    const std::vector<CouplingSpec>& couplings() const { return couplings_; }

    // Index of the mode with the given label; throws std::out_of_range.
    int mode_index(std::string_view label) const;
    // Couplers are marked by a label starting with 'c'.
    bool is_coupler(int m) const { return !modes_[m].label.empty() && modes_[m].label[0] == 'c'; }

    int state_index(std::span<const int> occ) const;
    int occupation(int state, int m) const { return occ_[state][m]; }
    const std::vector<int>& occupations(int state) const { return occ_[state]; }
    int total_excitation(int state) const;
    std::string state_label(int state) const;
    int parse_state(std::string_view label) const;  // throws std::invalid_argument

    // Diagonal of H0 = sum_i omega_i n_i + (alpha_i/2) n_i (n_i - 1), rad/s.
    const Eigen::VectorXd& bare_energies() const { return h0_; }
    // Dense coupling operator V = sum_<ij> J_ij (b_i + b_i^dag)(b_j + b_j^dag).
    const Eigen::MatrixXd& coupling_matrix() const { return v_; }
    // Diagonal of the number operator of mode m.
    const Eigen::VectorXd& mode_occupation(int m) const { return nops_.at(m); }

    // Copy with one mode frequency replaced (used by sweeps and derivatives).
    System with_mode_freq(int m, double freq) const;
    // Copy with every coupling scaled by lambda (perturbative order tests).
    System with_scaled_couplings(double lambda) const;

  private:
    void build();

    std::vector<ModeSpec> modes_;
    std::vector<CouplingSpec> couplings_;
    int dim_ = 0;
    std::vector<std::vector<int>> occ_;
    Eigen::VectorXd h0_;
    Eigen::MatrixXd v_;
    std::vector<Eigen::VectorXd> nops_;
};

}  // namespace floqmap
