#include "fluidruin/bridge_recursion.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace fluidruin {

namespace {

void require_bridge_length(long n) {
    if (n < 2) throw DomainError("bridge length n must be at least 2 (got " + std::to_string(n) + ")");
}

}  // namespace

long canonical_switch_index(long ell, long n) {
    require_bridge_length(n);
    return std::clamp(ell, 0L, n);
}

QTable::QTable(UniformizedKernel kernel) : kernel_(std::move(kernel)) {
    levels_.resize(2);  // levels 0 and 1 are never populated
}

QTable::Entry QTable::make_entry(Matrix q) const {
    Entry e;
    e.left = kernel_.r_plus().asDiagonal() * q;
    e.psi = q * kernel_.r_minus().asDiagonal();
    e.q = std::move(q);
    return e;
}

const QTable::Entry& QTable::entry(long ell, long n) const {
    require_bridge_length(n);
    if (n > filled_to()) {
        throw DomainError("level " + std::to_string(n) + " of the Q table has not been computed");
    }
    return levels_[static_cast<std::size_t>(n)][static_cast<std::size_t>(std::clamp(ell, 0L, n))];
}

void QTable::compute_level(long n, unsigned threads) {
    const auto& h = kernel_.h_plus_minus();
    std::vector<Entry> level(static_cast<std::size_t>(n + 1));

    auto compute = [&](long ell) {
        Matrix acc;
        if (n == 2) {
            acc = kernel_.transition_block(BlockKind::plus_minus, ell, 1);
        } else {
            // First observation is the lowest interior point.
            acc = kernel_.transition_block(BlockKind::plus_plus, ell, 1) *
                  entry(ell - 1, n - 1).psi;
            // Lowest interior point at observation w (empty when n == 3).
            for (long w = 2; w <= n - 2; ++w) {
                acc.noalias() += entry(ell, w).left *
                                 kernel_.transition_block(BlockKind::minus_plus, ell, w) *
                                 entry(ell - w, n - w).psi;
            }
            // Lowest interior point at observation n-1.
            acc.noalias() += entry(ell, n - 1).left *
                             kernel_.transition_block(BlockKind::minus_minus, ell, n - 1);
        }
        Matrix q = acc.cwiseProduct(h);
        if (!q.allFinite()) {
            throw DomainError("non-finite entry in Q^(" + std::to_string(ell) + "," +
                              std::to_string(n) + ")");
        }
        level[static_cast<std::size_t>(ell)] = make_entry(std::move(q));
    };

    const unsigned workers = std::clamp<unsigned>(threads, 1U, static_cast<unsigned>(n + 1));
    if (workers == 1) {
        for (long ell = 0; ell <= n; ++ell) compute(ell);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (long ell = t; ell <= n; ell += workers) compute(ell);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }
    levels_.push_back(std::move(level));
}

void QTable::fill(long n_max, unsigned threads) {
    for (long n = filled_to() + 1; n <= n_max; ++n) compute_level(n, threads);
}

const Matrix& QTable::q(long ell, long n) {
    require_bridge_length(n);
    fill(n);
    return entry(ell, n).q;
}

const Matrix& QTable::psi(long ell, long n) {
    require_bridge_length(n);
    fill(n);
    return entry(ell, n).psi;
}

const Matrix& QTable::q(long ell, long n) const { return entry(ell, n).q; }

const Matrix& QTable::psi(long ell, long n) const { return entry(ell, n).psi; }

const Matrix& q_matrix(QTable& table, long ell, long n) { return table.q(ell, n); }

PsiMatrix psi_matrix(QTable& table, long ell, long n) {
    return {ell, n, table.psi(ell, n)};
}

LevelDensity level_density(QTable& table, long ell, long n, double s) {
    const auto& k = table.kernel();
    const Matrix& q = table.q(ell, n);
    const double g = k.gamma();
    Matrix values;
    if (s < 0.0) {
        const Vector delta = (g * s / k.r_minus().array()).exp() * g;
        values = q * delta.asDiagonal();
    } else {
        const Vector delta = (-g * s / k.r_plus().array()).exp() * g;
        values = delta.asDiagonal() * q;
    }
    return {ell, n, s, std::move(values)};
}

double ruin_step_pmf(QTable& table, Eigen::Index plus_row, long ell, long n) {
    require_bridge_length(n);
    const auto& k = table.kernel();
    if (plus_row < 0 || plus_row >= k.plus_size()) {
        throw DomainError("ruin_step_pmf: row index out of range");
    }
    const Eigen::Index em = k.minus_pre_size();
    const Eigen::Index sm = k.minus_size() - em;
    if (ell >= n) {
        return table.psi(n, n).row(plus_row).head(em).sum();
    }
    return table.psi(std::max(ell, 0L), n).row(plus_row).tail(sm).sum();
}

double ruin_step_pmf(QTable& table, std::string_view state, long ell, long n) {
    const auto& labels = table.kernel().plus_labels();
    const auto it = std::find(labels.begin(), labels.end(), state);
    if (it == labels.end()) {
        throw DomainError("ruin_step_pmf: \"" + std::string(state) + "\" is not an up-state");
    }
    return ruin_step_pmf(table, static_cast<Eigen::Index>(it - labels.begin()), ell, n);
}

}  // namespace fluidruin
