#pragma once

#include <string_view>
#include <vector>

#include "fluidruin/uniformization.hpp"

namespace fluidruin {

/// Probabilities that ruin is first observed at step n, ending in a given
/// down-state, given the behavioral switch happens at step ell.
/// Rows: E+ then S+; columns: E- then S-.
struct PsiMatrix {
    long ell;
    long n;
    Matrix values;
};

/// Level density of an n-bridge evaluated at level s (units 1/fluid).
struct LevelDensity {
    long ell;
    long n;
    double s;
    Matrix values;
};

/// Clamp of the switch index onto {0, ..., n}: a switch before the start or
/// at/after the last observation does not affect an n-step bridge.
long canonical_switch_index(long ell, long n);

/// Memoized first-return matrices Q^(ell,n), filled bottom-up in n.
///
/// Level n depends only on levels 2..n-1. Filling is single-writer; once a
/// level is complete it may be read concurrently through the const
/// accessors. Within a level, the n+1 distinct matrices are independent and
/// `fill` may spread them over worker threads; the result does not depend on
/// the worker count.
class QTable {
public:
    explicit QTable(UniformizedKernel kernel);

    const UniformizedKernel& kernel() const noexcept { return kernel_; }

    /// Highest complete level (1 when nothing has been computed).
    long filled_to() const noexcept { return static_cast<long>(levels_.size()) - 1; }

    /// Ensures every level up to n_max is computed.
    void fill(long n_max, unsigned threads = 1);

    /// Q^(ell,n) (1/fluid units). Fills missing levels first.
    const Matrix& q(long ell, long n);
    /// Q^(ell,n) R-, i.e. Psi^(ell,n). Fills missing levels first.
    const Matrix& psi(long ell, long n);

    /// Read-only accessors; throw DomainError when level n is not filled.
    const Matrix& q(long ell, long n) const;
    const Matrix& psi(long ell, long n) const;

private:
    struct Entry {
        Matrix q;
        Matrix left;  // R+ Q
        Matrix psi;   // Q R-
    };

    void compute_level(long n, unsigned threads);
    Entry make_entry(Matrix q) const;
    const Entry& entry(long ell, long n) const;

    UniformizedKernel kernel_;
    std::vector<std::vector<Entry>> levels_;  // levels_[n][ell'], ell' in 0..n
};

const Matrix& q_matrix(QTable& table, long ell, long n);
PsiMatrix psi_matrix(QTable& table, long ell, long n);
LevelDensity level_density(QTable& table, long ell, long n, double s);

/// Probability attached to one (ell, n) pair for a start in the up-state
/// `state`:
///  - ell >= n: sum over E- columns of Psi^(n,n) (ruin confirmed at n before
///    any switch),
///  - 1 <= ell < n: sum over S- columns of Psi^(ell,n),
///  - ell <= 0: sum over S- columns of Psi^(0,n).
double ruin_step_pmf(QTable& table, std::string_view state, long ell, long n);
double ruin_step_pmf(QTable& table, Eigen::Index plus_row, long ell, long n);

}  // namespace fluidruin
