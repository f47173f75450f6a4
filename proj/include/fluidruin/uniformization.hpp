#pragma once

#include <array>
#include <string>
#include <vector>

#include "fluidruin/model.hpp"

namespace fluidruin {

/// Thrown when the observation rate does not strictly dominate every
/// generator diagonal.
class GammaTooSmall : public DomainError {
public:
    GammaTooSmall(double gamma, double minimal);

    double gamma() const noexcept { return gamma_; }
    /// Admissible rates are strictly greater than this value.
    double minimal() const noexcept { return minimal_; }

private:
    double gamma_;
    double minimal_;
};

/// Sign pattern of a partitioned block matrix: which states index the rows
/// and the columns. Rows/columns always list pre-ruin states first.
enum class BlockKind { plus_minus, plus_plus, minus_minus, minus_plus };

/// Per-coordinate discrete-step machinery at observation rate gamma.
///
/// Row blocks of every (+,-) matrix are E+ followed by S+, column blocks are
/// E- followed by S-. The lower-left (S to E) block of every assembled matrix
/// is zero: the switch is one-way.
class UniformizedKernel {
public:
    UniformizedKernel(const CoordinateModel& coord, double gamma);

    double gamma() const noexcept { return gamma_; }
    const SignPartition& partition() const noexcept { return partition_; }

    const Matrix& b_pre() const noexcept { return b_pre_; }
    const Matrix& b_post() const noexcept { return b_post_; }
    const Matrix& b_switch() const noexcept { return b_switch_; }
    const Matrix& h_plus_minus() const noexcept { return h_plus_minus_; }
    /// Diagonal of R+: r on E+, rho on S+.
    const Vector& r_plus() const noexcept { return r_plus_; }
    /// Diagonal of R-: |r| on E-, |rho| on S-.
    const Vector& r_minus() const noexcept { return r_minus_; }

    Eigen::Index plus_size() const noexcept { return r_plus_.size(); }
    Eigen::Index minus_size() const noexcept { return r_minus_.size(); }
    Eigen::Index plus_pre_size() const noexcept {
        return static_cast<Eigen::Index>(partition_.plus_pre.size());
    }
    Eigen::Index minus_pre_size() const noexcept {
        return static_cast<Eigen::Index>(partition_.minus_pre.size());
    }

    /// Labels of the row (E+ then S+) and column (E- then S-) index sets.
    const std::vector<std::string>& plus_labels() const noexcept { return plus_labels_; }
    const std::vector<std::string>& minus_labels() const noexcept { return minus_labels_; }

    /// Block matrix of the given kind for a transition observed at step
    /// `threshold` when the switch happens at step `ell`: the pre-ruin block
    /// if ell > threshold, the switch block if ell == threshold and the
    /// post-ruin block otherwise.
    const Matrix& transition_block(BlockKind kind, long ell, long threshold) const;

private:
    double gamma_;
    SignPartition partition_;
    Matrix b_pre_;
    Matrix b_post_;
    Matrix b_switch_;
    Matrix h_plus_minus_;
    Vector r_plus_;
    Vector r_minus_;
    std::vector<std::string> plus_labels_;
    std::vector<std::string> minus_labels_;
    // [kind][0 = pre, 1 = switch, 2 = post]
    std::array<std::array<Matrix, 3>, 4> blocks_;
};

UniformizedKernel build_kernel(const CoordinateModel& coord, double gamma);

/// Assembled indicator blocks for one (ell, n, w) triple.
struct IndicatorBlocks {
    Matrix b_pp;  // (+ x +), transition at step 1
    Matrix b_mm;  // (- x -), transition at step n-1
    Matrix b_mp;  // (- x +), transition at step w
    Matrix b_pm;  // (+ x -), transition at step 1 (two-step bridge)
};

/// Requires n >= 2 and 1 <= w <= n-1.
IndicatorBlocks indicator_blocks(const UniformizedKernel& kernel, long ell, long n, long w);

}  // namespace fluidruin
