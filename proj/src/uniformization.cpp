#include "fluidruin/uniformization.hpp"

#include <sstream>

namespace fluidruin {

namespace {

using Index = std::vector<std::size_t>;

Matrix sub_block(const Matrix& m, const Index& rows, const Index& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
        }
    }
    return out;
}

std::string describe(double gamma, double minimal) {
    std::ostringstream os;
    os.precision(12);
    os << "gamma = " << gamma << " is too small; it must be strictly greater than " << minimal;
    return os.str();
}

}  // namespace

GammaTooSmall::GammaTooSmall(double gamma, double minimal)
    : DomainError(describe(gamma, minimal)), gamma_(gamma), minimal_(minimal) {}

UniformizedKernel::UniformizedKernel(const CoordinateModel& coord, double gamma)
    : gamma_(gamma), partition_(partition_signs(coord)) {
    const double g0 = gamma_zero(coord);
    if (!(gamma > g0)) throw GammaTooSmall(gamma, g0);

    const auto ne = coord.pre_generator.rows();
    const auto ns = coord.post_generator.rows();
    b_pre_ = Matrix::Identity(ne, ne) + coord.pre_generator / gamma;
    b_post_ = Matrix::Identity(ns, ns) + coord.post_generator / gamma;
    b_switch_ = coord.switch_matrix;

    const auto& p = partition_;
    const auto ep = static_cast<Eigen::Index>(p.plus_pre.size());
    const auto em = static_cast<Eigen::Index>(p.minus_pre.size());
    const auto sp = static_cast<Eigen::Index>(p.plus_post.size());
    const auto sm = static_cast<Eigen::Index>(p.minus_post.size());

    r_plus_.resize(ep + sp);
    r_minus_.resize(em + sm);
    for (Eigen::Index i = 0; i < ep; ++i) {
        r_plus_(i) = coord.pre_rewards(static_cast<Eigen::Index>(p.plus_pre[i]));
        plus_labels_.push_back(coord.pre_states[p.plus_pre[i]]);
    }
    for (Eigen::Index i = 0; i < sp; ++i) {
        r_plus_(ep + i) = coord.post_rewards(static_cast<Eigen::Index>(p.plus_post[i]));
        plus_labels_.push_back(coord.post_states[p.plus_post[i]]);
    }
    for (Eigen::Index j = 0; j < em; ++j) {
        r_minus_(j) = -coord.pre_rewards(static_cast<Eigen::Index>(p.minus_pre[j]));
        minus_labels_.push_back(coord.pre_states[p.minus_pre[j]]);
    }
    for (Eigen::Index j = 0; j < sm; ++j) {
        r_minus_(em + j) = -coord.post_rewards(static_cast<Eigen::Index>(p.minus_post[j]));
        minus_labels_.push_back(coord.post_states[p.minus_post[j]]);
    }

    h_plus_minus_ = Matrix::Zero(ep + sp, em + sm);
    for (Eigen::Index i = 0; i < ep + sp; ++i) {
        for (Eigen::Index j = 0; j < em + sm; ++j) {
            const bool lower_left = i >= ep && j < em;
            if (!lower_left) h_plus_minus_(i, j) = 1.0 / (r_plus_(i) + r_minus_(j));
        }
    }

    // Row/column index sets per sign, pre then post.
    const std::array<const Index*, 2> pre_sets = {&p.plus_pre, &p.minus_pre};
    const std::array<const Index*, 2> post_sets = {&p.plus_post, &p.minus_post};
    // kind -> (row sign, col sign), 0 = plus, 1 = minus
    const std::array<std::pair<int, int>, 4> signs = {{{0, 1}, {0, 0}, {1, 1}, {1, 0}}};
    for (std::size_t k = 0; k < 4; ++k) {
        const auto [rs, cs] = signs[k];
        const Index& row_pre = *pre_sets[rs];
        const Index& row_post = *post_sets[rs];
        const Index& col_pre = *pre_sets[cs];
        const Index& col_post = *post_sets[cs];
        const auto rows = static_cast<Eigen::Index>(row_pre.size() + row_post.size());
        const auto cols = static_cast<Eigen::Index>(col_pre.size() + col_post.size());
        const auto r0 = static_cast<Eigen::Index>(row_pre.size());
        const auto c0 = static_cast<Eigen::Index>(col_pre.size());

        Matrix pre = Matrix::Zero(rows, cols);
        pre.topLeftCorner(r0, c0) = sub_block(b_pre_, row_pre, col_pre);
        Matrix sw = Matrix::Zero(rows, cols);
        sw.topRightCorner(r0, cols - c0) = sub_block(b_switch_, row_pre, col_post);
        Matrix post = Matrix::Zero(rows, cols);
        post.bottomRightCorner(rows - r0, cols - c0) = sub_block(b_post_, row_post, col_post);
        blocks_[k] = {std::move(pre), std::move(sw), std::move(post)};
    }
}

const Matrix& UniformizedKernel::transition_block(BlockKind kind, long ell, long threshold) const {
    const auto& variants = blocks_[static_cast<std::size_t>(kind)];
    if (ell > threshold) return variants[0];
    if (ell == threshold) return variants[1];
    return variants[2];
}

UniformizedKernel build_kernel(const CoordinateModel& coord, double gamma) {
    return UniformizedKernel(coord, gamma);
}

IndicatorBlocks indicator_blocks(const UniformizedKernel& kernel, long ell, long n, long w) {
    if (n < 2) throw DomainError("indicator_blocks: n must be at least 2");
    if (w < 1 || w > n - 1) throw DomainError("indicator_blocks: w must lie in {1, ..., n-1}");
    return {
        kernel.transition_block(BlockKind::plus_plus, ell, 1),
        kernel.transition_block(BlockKind::minus_minus, ell, n - 1),
        kernel.transition_block(BlockKind::minus_plus, ell, w),
        kernel.transition_block(BlockKind::plus_minus, ell, 1),
    };
}

}  // namespace fluidruin
