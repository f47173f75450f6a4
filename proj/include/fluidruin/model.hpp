#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fluidruin/errors.hpp"

namespace fluidruin {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Tolerance used for generator and stochastic-matrix row sums.
inline constexpr double kRowSumTolerance = 1e-12;

/// One fluid coordinate: a pre-ruin regime (E, A_EE, r), a post-ruin regime
/// (S, A_SS, rho) and the switch matrix P applied to both coordinates at the
/// first ruin time.
struct CoordinateModel {
    std::vector<std::string> pre_states;
    std::vector<std::string> post_states;
    Matrix pre_generator;
    Matrix post_generator;
    Vector pre_rewards;
    Vector post_rewards;
    Matrix switch_matrix;  // pre_states x post_states
    std::string initial_state;

    /// Position of initial_state within pre_states; throws DomainError if absent.
    std::size_t initial_index() const;
};

struct ModelSpec {
    std::array<CoordinateModel, 2> coord;
};

/// Indices of states split by the sign of their reward, each list in
/// declared order.
struct SignPartition {
    std::vector<std::size_t> plus_pre;
    std::vector<std::size_t> minus_pre;
    std::vector<std::size_t> plus_post;
    std::vector<std::size_t> minus_post;
};

enum class Severity { warning, error };

struct Issue {
    Severity severity;
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Issue> issues;

    bool ok() const;
    /// One line per issue: "SEVERITY field: message".
    std::string to_string() const;
};

ModelSpec parse_model(std::string_view document);
std::string serialize_model(const ModelSpec& spec);
ModelSpec load_model(const std::filesystem::path& path);

ValidationReport validate(const ModelSpec& spec);
ValidationReport validate(const CoordinateModel& coord, const std::string& prefix);

SignPartition partition_signs(const CoordinateModel& coord);

/// Largest |A_ii| over the generators of one coordinate.
double gamma_zero(const CoordinateModel& coord);
/// Largest |A_ii| over both coordinates and both regimes; the smallest
/// admissible uniformization rate.
double gamma_zero(const ModelSpec& spec);

/// Rescales generator diagonals and switch-matrix rows so every row sums
/// exactly to 0 (resp. 1). Only applied on explicit request.
void renormalize(ModelSpec& spec);

/// Long-run mean slope of the pre-ruin regime of a coordinate (stationary
/// law of the generator dotted with the rewards).
double pre_regime_drift(const CoordinateModel& coord);

/// The documented two-state toy model used throughout tests and docs.
ModelSpec toy_model();

}  // namespace fluidruin
