// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT

#include "floqmap/assignment.hpp"

#include <limits>
#include <stdexcept>

namespace floqmap {

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n) throw std::invalid_argument("hungarian: cost matrix must be square");
    if (n == 0) return {};

    // Shortest-augmenting-path Hungarian with row/column potentials;
    // 1-based scratch arrays, O(n^3).
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> perm(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) perm[p[j] - 1] = j - 1;
    return perm;
}

std::vector<int> max_overlap_assignment(const Eigen::MatrixXcd& references,
                                        const Eigen::MatrixXcd& vectors) {
    if (references.rows() != vectors.rows() || references.cols() != vectors.cols())
        throw std::invalid_argument("max_overlap_assignment: shape mismatch");
    const Eigen::MatrixXcd ov = references.adjoint() * vectors;
    return hungarian(-ov.cwiseAbs2());
}

}  // namespace floqmap
