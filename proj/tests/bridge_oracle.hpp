#pragma once

#include <random>
#include <vector>

#include "fluidruin/model.hpp"

namespace testsupport {

// Monte Carlo over uniformized discrete paths of one coordinate: segment
// lengths Exp(gamma), transitions at observation k by B_pre (k < ell), P
// (k == ell) or B_post (k > ell). Records the first observation with a
// negative level and the state held on the final segment.
struct BridgeFrequencies {
    long samples = 0;
    // counts[n][c]: first negative observation n, final state column c
    // (down-states, pre then post, in declared order).
    std::vector<std::vector<long>> counts;
};

inline BridgeFrequencies simulate_bridges(const fluidruin::CoordinateModel& m, double gamma, long ell,
                                          long n_max, bool start_post, std::size_t start,
                                          long samples, std::uint64_t seed) {
    const auto ne = static_cast<std::size_t>(m.pre_rewards.size());
    const auto ns = static_cast<std::size_t>(m.post_rewards.size());
    std::vector<long> column(ne + ns, -1);
    long next_col = 0;
    for (std::size_t i = 0; i < ne; ++i) {
        if (m.pre_rewards(static_cast<Eigen::Index>(i)) < 0) column[i] = next_col++;
    }
    for (std::size_t i = 0; i < ns; ++i) {
        if (m.post_rewards(static_cast<Eigen::Index>(i)) < 0) column[ne + i] = next_col++;
    }

    const fluidruin::Matrix b_pre =
        fluidruin::Matrix::Identity(static_cast<Eigen::Index>(ne), static_cast<Eigen::Index>(ne)) +
        m.pre_generator / gamma;
    const fluidruin::Matrix b_post =
        fluidruin::Matrix::Identity(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ns)) +
        m.post_generator / gamma;
    auto rows = [](const fluidruin::Matrix& b) {
        std::vector<std::discrete_distribution<std::size_t>> d;
        for (Eigen::Index r = 0; r < b.rows(); ++r) {
            std::vector<double> w(static_cast<std::size_t>(b.cols()));
            for (Eigen::Index c = 0; c < b.cols(); ++c) w[static_cast<std::size_t>(c)] = b(r, c);
            d.emplace_back(w.begin(), w.end());
        }
        return d;
    };
    auto pre_rows = rows(b_pre);
    auto post_rows = rows(b_post);
    auto switch_rows = rows(m.switch_matrix);

    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> segment(gamma);
    BridgeFrequencies out;
    out.samples = samples;
    out.counts.assign(static_cast<std::size_t>(n_max + 1), std::vector<long>(static_cast<std::size_t>(next_col), 0));
    for (long s = 0; s < samples; ++s) {
        bool post = start_post;
        std::size_t state = start;
        double level = 0.0;
        for (long k = 1; k <= n_max; ++k) {
            const double rate = post ? m.post_rewards(static_cast<Eigen::Index>(state))
                                     : m.pre_rewards(static_cast<Eigen::Index>(state));
            level += rate * segment(rng);
            if (level < 0.0) {
                ++out.counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(column[post ? ne + state : state])];
                break;
            }
            if (post) {
                state = post_rows[state](rng);
            } else if (k < ell) {
                state = pre_rows[state](rng);
            } else if (k == ell) {
                state = switch_rows[state](rng);
                post = true;
            } else {
                break;  // a pre-ruin state after the switch step cannot occur
            }
        }
    }
    return out;
}

}  // namespace testsupport
