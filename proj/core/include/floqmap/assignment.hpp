// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Minimum-cost perfect matching on square cost matrices (Hungarian method,
// shortest-augmenting-path form). Used for maximum-overlap labeling of
// eigenvectors: assign bare/reference states to eigenvectors by minimizing
// the total of -|<ref|vec>|^2.

#pragma once

#include <vector>

#include <Eigen/Dense>

namespace floqmap {

// Returns perm with perm[row] = assigned column, minimizing total cost.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

// Convenience: perm[k] = index of the column of `vectors` with maximal
// |<references.col(k), vectors.col(perm[k])>|^2 under a one-to-one constraint.
std::vector<int> max_overlap_assignment(const Eigen::MatrixXcd& references,
                                        const Eigen::MatrixXcd& vectors);

}  // namespace floqmap
