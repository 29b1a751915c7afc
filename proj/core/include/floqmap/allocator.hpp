// Copyright (c) 2026 the floqmap authors
// SPDX-License-Identifier: MIT
//
// Frequency allocation: the design criteria for parametrically modulated
// circuits (one resonance equality, a parametric limit, and a family of
// detuning-margin inequalities per target, plus optional static-ZZ caps)
// encoded as machine-checkable constraints over per-mode frequency and
// anharmonicity boxes, solved by deterministic branch-and-prune with
// interval arithmetic, then refined against exact dressed energies.
//
// The drive frequency of each target is never a free variable: the
// resonance equality omega_p = -detuning / n' eliminates it by substitution.
// Strength expressions are conservative envelopes evaluated at the operating
// drive amplitude. No external solver is required; the constraint system can
// be exported as SMT-LIB-style s-expressions for use with one.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "floqmap/interval.hpp"
#include "floqmap/model.hpp"

namespace floqmap {

struct AllocTarget {
    int drive_mode = 0;     // modulated mode
    std::string bra, ket;   // transition, occupation labels ("01", "10")
    int order = 1;          // intended harmonic n' (nonzero)
    double eps = 0.0;       // operating drive amplitude, rad/s
};

enum class AllocObjective { first_feasible, maximize_worst_margin };

struct AllocationProblem {
    std::vector<ModeSpec> modes;          // freq/anharm fields give box centers
    std::vector<CouplingSpec> couplings;  // fixed structure
    std::vector<Interval> freq_box;       // per mode, rad/s (may be degenerate)
    std::vector<Interval> anharm_box;     // per mode, rad/s (may be degenerate)
    std::vector<AllocTarget> targets;

    double margin = 10.0;             // detuning-margin ratio (">>")
    double parametric_margin = 10.0;  // omega_p >= this x static strength
    int harmonic_range = 5;           // parasitic harmonics m in [-range, range]
    double zz_cap = 0.0;              // |static zz| cap, rad/s; 0 disables
    AllocObjective objective = AllocObjective::first_feasible;
    std::uint64_t seed = 0;           // branch order tie-breaking
    std::uint64_t max_nodes = 200000; // search budget
};

struct Constraint {
    enum class Kind { resonance_equality, parametric_limit, detuning_margin, zz_cap, box_bound };
    Kind kind = Kind::detuning_margin;
    std::string name;      // stable human-readable identifier
    int target = -1;       // owning target (defines omega_p); -1 for zz/box rows
    int row = -1;          // catalog row (detuning_margin) / mode (box_bound)
    int harmonic = 0;      // m (detuning_margin only)
    double margin = 0.0;   // required ratio, or absolute cap for zz rows
};

struct ConstraintReport {
    std::string name;
    Constraint::Kind kind = Constraint::Kind::detuning_margin;
    double achieved = 0.0;  // achieved ratio (>= required passes); residual for
                            // resonance rows; |zz| for cap rows
    double required = 0.0;
    bool pass = false;
    bool singular = false;  // evaluation hit a domain error (reported, not fatal)
};

struct CheckResult {
    std::vector<ConstraintReport> rows;
    double worst_margin = 0.0;  // min over ratio rows of achieved/required
    bool satisfiable = false;
};

struct AllocationSolution {
    bool satisfiable = false;
    std::string stage = "bare";        // "bare" | "refined"
    std::vector<double> freqs;         // per mode, rad/s
    std::vector<double> anharms;       // per mode, rad/s
    std::vector<double> omega_p;       // per target, rad/s
    double worst_margin = 0.0;
    std::vector<ConstraintReport> report;
    std::string message;               // diagnostics (e.g. tightest violated rows)
    std::uint64_t nodes_explored = 0;
};

class Allocator {
  public:
    explicit Allocator(AllocationProblem problem);
    ~Allocator();  // out of line: Row is incomplete here
    Allocator(const Allocator&) = delete;
    Allocator& operator=(const Allocator&) = delete;
    Allocator(Allocator&&) noexcept;
    Allocator& operator=(Allocator&&) noexcept;

    const AllocationProblem& problem() const { return problem_; }
    // The encoded constraint set (structure only; evaluation is point-wise).
    const std::vector<Constraint>& constraints() const { return constraints_; }

    // omega_p implied by the resonance equality of each target at a point;
    // entries <= 0 mark an unsatisfiable resonance orientation.
    std::vector<double> implied_omega_p(const std::vector<double>& freqs,
                                        const std::vector<double>& anharms) const;

    // Evaluate every constraint at a full assignment. Deterministic; domain
    // errors in strength expressions mark the row singular instead of
    // throwing.
    CheckResult check(const std::vector<double>& freqs, const std::vector<double>& anharms,
                      const std::vector<double>& omega_p) const;

    // Branch-and-prune search (stage "bare").
    AllocationSolution solve() const;

    // Re-evaluate with exact dressed energies; bounded omega_p adjustment
    // (and optional mode-frequency improvement) within the trust radius.
    AllocationSolution refine_with_dressed(const AllocationSolution& bare,
                                           double trust_radius = 0.0,  // 0 = default
                                           bool move_modes = false) const;

    // SMT-LIB-style s-expression dump of the constraint system (strength
    // envelopes frozen at box-center values).
    std::string export_smt() const;

  private:
    struct Row;  // linearized catalog row (detuning coefficients + strength rule)

    AllocationSolution solve_first_feasible() const;
    Interval row_detuning(const Row& row, const std::vector<Interval>& freqs,
                          const std::vector<Interval>& anharms) const;
    double static_base_at(const Row& row, const std::vector<double>& freqs,
                          const std::vector<double>& anharms) const;
    double strength_at(int target, const Row& row, int m, double omega_p,
                       const std::vector<double>& freqs,
                       const std::vector<double>& anharms) const;
    Interval strength_envelope(int target, const Row& row, int m, Interval omega_p,
                               const std::vector<double>& mid_freqs,
                               const std::vector<double>& mid_anharms) const;

    AllocationProblem problem_;
    std::vector<Constraint> constraints_;
    std::vector<Row> rows_;
    std::vector<int> target_row_;            // catalog row index per target
    std::vector<std::pair<int, int>> zz_pairs_;  // coupled qubit pairs under a cap
};

// JSON front end (schema documented in the README):
// in: topology, boxes, targets, margins, objective; out: assignment,
// margins, per-constraint report.
AllocationProblem parse_allocation_problem(const std::string& json_text);
AllocationProblem load_allocation_problem(const std::string& path);
std::string solution_to_json(const Allocator& alloc, const AllocationSolution& sol);

}  // namespace floqmap
