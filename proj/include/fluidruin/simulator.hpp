#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "fluidruin/model.hpp"

namespace fluidruin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SegmentEnd { jump, regime_switch, stop };

/// Linear piece of one level trajectory on [t0, t1).
struct Segment {
    double t0 = 0.0;
    double t1 = kInf;
    double level0 = 0.0;
    std::size_t state = 0;  // index into pre_states or post_states
    bool post = false;
    double slope = 0.0;
    SegmentEnd end = SegmentEnd::stop;
};

struct PathSample {
    std::uint64_t seed = 0;
    double horizon = 0.0;
    /// Per coordinate, contiguous from 0 to tau2 (or the horizon).
    std::array<std::vector<Segment>, 2> segments;
    double tau1 = kInf;
    double tau2 = kInf;
    int first_ruiner = 0;  // 1 or 2; 0 when tau1 was not reached
    /// States drawn through the switch matrices at tau1 (post_states index).
    std::array<std::size_t, 2> switched_to{0, 0};
    bool censored = true;
    /// The surviving coordinate was also at (or below) zero at tau1.
    bool double_hit = false;

    /// Level of coordinate k (0-based) at time t within the simulated range.
    double level(int k, double t) const;
};

/// Censoring horizon used when none is given: 50 / |drift| for the steepest
/// pre-ruin drift of the two coordinates, 1000 when both drifts vanish.
double default_horizon(const ModelSpec& spec);

/// Exact path by competing exponentials, stopped at tau2 or the horizon.
PathSample sample_exact_path(const ModelSpec& spec, std::uint64_t seed, double horizon);

enum class GridSource { jump, phantom, extra };

struct GridPoint {
    double time;
    GridSource source;  // jump/phantom: in the rate-gamma0 grid; extra: rate gamma - gamma0
};

/// Exact path plus its Poissonian observation scheme at rate gamma.
/// Quantities indexed by ruin order use 0 for [1] (first ruiner) and 1 for
/// [2]; grids are indexed by coordinate.
struct PastingSample {
    PathSample base;
    double gamma = 0.0;
    /// Observation grids theta~_1, theta~_2, ... (theta~_0 = 0 is implicit),
    /// generated as far as the scans needed.
    std::array<std::vector<GridPoint>, 2> grids;
    long ell_star = -1;
    long n_star = -1;
    double sigma1_star = kInf;
    double sigma2_star = kInf;
    double sigma1 = kInf;
    double sigma2 = kInf;
    double tilde_tau1 = kInf;
    double tilde_tau2 = kInf;
    bool compat_ok = false;
    /// r(J(tau1-)) - rho(J(tau1)) per ruin order.
    std::array<double, 2> slope_gap{0.0, 0.0};
    std::array<double, 2> sup_distance{0.0, 0.0};
    /// |sigma - tau1| (max r + max rho), as printed, and with absolute values.
    std::array<double, 2> bound_printed{0.0, 0.0};
    std::array<double, 2> bound_abs{0.0, 0.0};

    /// F~ of ruin order m at time t (t within the base path's range).
    double pasted_level(int m, double t) const;
};

PastingSample sample_pasting(const ModelSpec& spec, double gamma, std::uint64_t seed, double horizon);

/// Summary of one exact path.
struct RuinTimes {
    double tau1 = kInf;
    double tau2 = kInf;
    int first_ruiner = 0;
    bool censored = true;
};

RuinTimes ruin_times(const PathSample& path);

/// M exact paths with seeds sample_seed(root, i), i < M.
std::vector<RuinTimes> simulate_ruin_times(const ModelSpec& spec, std::size_t m, std::uint64_t root,
                                           double horizon, unsigned threads = 1);
std::vector<PastingSample> simulate_pastings(const ModelSpec& spec, double gamma, std::size_t m,
                                             std::uint64_t root, double horizon, unsigned threads = 1);

struct EmpiricalJointCdf {
    std::vector<double> x_grid;
    std::vector<double> y_grid;
    Matrix order1;
    Matrix order2;
    Matrix total;
    Matrix se_order1;
    Matrix se_order2;
    Matrix se_total;
    std::size_t samples = 0;
    double censored_fraction = 0.0;
};

/// Frequencies of {tau1 <= x, tau2 <= y} split by first ruiner, binomial
/// standard errors. Censored samples count as non-events.
EmpiricalJointCdf empirical_joint_cdf(const std::vector<RuinTimes>& samples,
                                      const std::vector<double>& x_grid,
                                      const std::vector<double>& y_grid);

struct ConvergenceBudget {
    double epsilon = 0.5;
    double q = 1.0;
    std::vector<double> gammas;

    /// (log gamma) gamma^(-1/2 + epsilon/2), unit constant.
    double delta(double gamma) const;
    /// gamma^epsilon, unit constant.
    double k(double gamma) const;
};

struct Quantiles {
    double median = kInf;
    double q90 = kInf;
    std::size_t count = 0;
};

struct ConvergenceRow {
    double gamma = 0.0;
    std::size_t samples = 0;
    std::size_t ruined = 0;  // tau1 reached
    double delta = 0.0;
    double k = 0.0;
    Quantiles sigma1_gap;   // |tau1 - sigma1*|
    Quantiles sigma2_gap;   // |tau1 - sigma2*|
    Quantiles tilde_tau1_gap;
    Quantiles tilde_tau2_gap;
    Quantiles ell_gap;      // |ell*/gamma - tau1|
    Quantiles n_gap;        // |n*/gamma - tau2|
    double compat_fail = 0.0;          // among samples with tau1 reached
    double violations_printed = 0.0;   // among compat samples
    double violations_abs = 0.0;
    double overshoot_mean = 0.0;       // mean of sigma1* - tau1
    double overshoot_se = 0.0;
    /// Fraction of samples with |tau1 - sigma_k*| > delta and tau1 <= K.
    std::array<double, 2> beyond_delta{0.0, 0.0};
};

/// Paired samples: sample i uses the same seed for every gamma.
std::vector<ConvergenceRow> convergence_report(const ModelSpec& spec, const ConvergenceBudget& budget,
                                               std::size_t m, std::uint64_t root, double horizon,
                                               unsigned threads = 1);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Columns seed, tau1, tau2, first_ruiner, censored, ell_star, n_star, sigma1,
/// sigma2, sup_dist1, sup_dist2, compat_ok.
void write_sample_csv(std::ostream& out, const std::vector<PastingSample>& samples);
/// Exact paths only; the pasting columns are left empty.
void write_sample_csv(std::ostream& out, const std::vector<PathSample>& samples);

}  // namespace fluidruin
