// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "floqmap/units.hpp"

namespace floqmap {

double DriveSpec::period() const {
    if (frequency <= 0.0) throw std::invalid_argument("drive frequency must be > 0");
    return units::two_pi / frequency;
}

System::System(std::vector<ModeSpec> modes, std::vector<CouplingSpec> couplings)
    : modes_(std::move(modes)), couplings_(std::move(couplings)) {
    if (modes_.empty()) throw std::invalid_argument("system needs at least one mode");
    std::set<std::string> labels;
    for (const auto& m : modes_) {
        if (m.levels < 2 || m.levels > 9)
            throw std::invalid_argument("mode '" + m.label + "': levels must be in [2, 9]");
        if (m.label.empty()) throw std::invalid_argument("mode labels must be non-empty");
        if (!labels.insert(m.label).second)
            throw std::invalid_argument("duplicate mode label '" + m.label + "'");
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : couplings_) {
        if (c.a < 0 || c.b < 0 || c.a >= num_modes() || c.b >= num_modes() || c.a == c.b)
            throw std::invalid_argument("coupling references invalid mode pair");
        auto key = std::minmax(c.a, c.b);
        if (!pairs.insert(key).second)
            throw std::invalid_argument("duplicate coupling between modes " +
                                        modes_[c.a].label + " and " + modes_[c.b].label);
    }
    build();
}

void System::build() {
    dim_ = 1;
    for (const auto& m : modes_) dim_ *= m.levels;
    if (dim_ > 4096) throw std::invalid_argument("truncated Hilbert space too large");

    const int nm = num_modes();
    occ_.assign(dim_, std::vector<int>(nm, 0));
    for (int k = 0; k < dim_; ++k) {
        int r = k;
        for (int m = nm - 1; m >= 0; --m) {
            occ_[k][m] = r % modes_[m].levels;
            r /= modes_[m].levels;
        }
    }

    h0_ = Eigen::VectorXd::Zero(dim_);
    nops_.assign(nm, Eigen::VectorXd::Zero(dim_));
    for (int k = 0; k < dim_; ++k) {
        double e = 0.0;
        for (int m = 0; m < nm; ++m) {
            const double n = occ_[k][m];
            e += modes_[m].freq * n + 0.5 * modes_[m].anharm * n * (n - 1.0);
            nops_[m][k] = n;
        }
        h0_[k] = e;
    }

    // V couples states differing by one quantum on each of two coupled modes;
    // matrix elements follow from ladder operators on the product basis.
    v_ = Eigen::MatrixXd::Zero(dim_, dim_);
    std::vector<int> tmp;
    for (const auto& c : couplings_) {
        for (int k = 0; k < dim_; ++k) {
            for (int sa : {+1, -1}) {
                for (int sb : {+1, -1}) {
                    tmp = occ_[k];
                    const int na = tmp[c.a] + sa;
                    const int nb = tmp[c.b] + sb;
                    if (na < 0 || na >= modes_[c.a].levels) continue;
                    if (nb < 0 || nb >= modes_[c.b].levels) continue;
                    tmp[c.a] = na;
                    tmp[c.b] = nb;
                    const int j = state_index(tmp);
                    const double amp_a = (sa > 0) ? std::sqrt(double(na)) : std::sqrt(double(na + 1));
                    const double amp_b = (sb > 0) ? std::sqrt(double(nb)) : std::sqrt(double(nb + 1));
                    v_(j, k) += c.strength * amp_a * amp_b;
                }
            }
        }
    }
}

int System::mode_index(std::string_view label) const {
    for (int m = 0; m < num_modes(); ++m)
        if (modes_[m].label == label) return m;
    throw std::out_of_range("no mode labeled '" + std::string(label) + "'");
}

int System::state_index(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != num_modes())
        throw std::invalid_argument("occupation vector has wrong length");
    int idx = 0;
    for (int m = 0; m < num_modes(); ++m) {
        if (occ[m] < 0 || occ[m] >= modes_[m].levels)
            throw std::invalid_argument("occupation out of range for mode " + modes_[m].label);
        idx = idx * modes_[m].levels + occ[m];
    }
    return idx;
}

int System::total_excitation(int state) const {
    const auto& o = occ_.at(state);
    return std::accumulate(o.begin(), o.end(), 0);
}

std::string System::state_label(int state) const {
    const auto& o = occ_.at(state);
    std::string s(o.size(), '0');
    for (size_t m = 0; m < o.size(); ++m) s[m] = static_cast<char>('0' + o[m]);
    return s;
}

int System::parse_state(std::string_view label) const {
    if (static_cast<int>(label.size()) != num_modes())
        throw std::invalid_argument("state label '" + std::string(label) +
                                    "' must have one digit per mode");
    std::vector<int> o(num_modes());
    for (int m = 0; m < num_modes(); ++m) {
        if (label[m] < '0' || label[m] > '9')
            throw std::invalid_argument("state label must be occupation digits");
        o[m] = label[m] - '0';
        if (o[m] >= modes_[m].levels)
            throw std::invalid_argument("state label exceeds truncation of mode " +
                                        modes_[m].label);
    }
    return state_index(o);
}

System System::with_mode_freq(int m, double freq) const {
    auto modes = modes_;
    modes.at(m).freq = freq;
    return System(std::move(modes), couplings_);
}

System System::with_scaled_couplings(double lambda) const {
    auto couplings = couplings_;
    for (auto& c : couplings) c.strength *= lambda;
    return System(modes_, std::move(couplings));
}

}  // namespace floqmap
