#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "fluidruin/model.hpp"

namespace fluidruin {

/// One-dimensional step probabilities of a coordinate started in its
/// initial state:
///   p1(ell)   ruin first observed at step ell, no switch yet (ell >= 2),
///   p2(ell,n) ruin first observed at step n given the switch at step ell,
///             1 <= ell <= n (n == ell uses the pre-switch down-states).
struct StepPmfTable {
    long n_max = 0;
    std::vector<double> p1;               // indexed by ell, size n_max + 1
    std::vector<std::vector<double>> p2;  // p2[ell][n], size (n_max + 1)^2

    double p1_at(long ell) const;
    double p2_at(long ell, long n) const;
};

std::array<StepPmfTable, 2> step_pmf_table(const ModelSpec& spec, double gamma, long n_max,
                                           unsigned threads = 1);

struct JointLawRequest {
    ModelSpec spec;
    double gamma = 0.0;
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    long n_max = 2;
    bool allow_truncation = false;
    unsigned threads = 1;
};

/// Approximate joint CDF of the two ruin times on x_grid x y_grid.
/// order1(i, j) = P(tau1 <= x_i, tau2 <= y_j, coordinate 1 ruins first).
struct JointLawResult {
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    Matrix order1;
    Matrix order2;
    Matrix total;
    Vector marginal_tau1;
    /// Upper bound on the mass dropped by cutting step sums at n_max; zero
    /// for cells whose step ranges fit within n_max.
    Matrix truncation_defect;
};

/// floor(gamma * t), with products within 1e-9 (relative) below an integer
/// snapped up to it.
long observation_steps(double gamma, double t);

/// Smallest n_max covering every grid point (at least 2).
long required_n_max(double gamma, const std::vector<double>& x_grid,
                    const std::vector<double>& y_grid);

JointLawResult joint_cdf(const JointLawRequest& req);
/// Same, reusing precomputed tables (tables[k] for coordinate k, n_max taken
/// from the tables).
JointLawResult joint_cdf(const JointLawRequest& req, const std::array<StepPmfTable, 2>& tables);

/// Columns x, y, order1, order2, total, defect; one row per grid cell.
void write_joint_csv(std::ostream& out, const JointLawResult& result);

}  // namespace fluidruin
