#include "fluidruin/joint_law.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "fluidruin/bridge_recursion.hpp"

namespace fluidruin {

namespace {

void require_grid(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw DomainError(std::string(name) + " is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
            throw DomainError(std::string(name) + " must hold positive finite times");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw DomainError(std::string(name) + " must be strictly ascending");
        }
    }
}

void require_model(const ModelSpec& spec) {
    const auto report = validate(spec);
    if (!report.ok()) throw DomainError("invalid model:\n" + report.to_string());
}

Eigen::Index initial_plus_row(const UniformizedKernel& k, const CoordinateModel& coord) {
    const auto idx = coord.initial_index();
    const auto& plus = k.partition().plus_pre;
    const auto it = std::find(plus.begin(), plus.end(), idx);
    if (it == plus.end()) throw DomainError("initial state must have a positive reward");
    return static_cast<Eigen::Index>(it - plus.begin());
}

// Partial sums of the step tables, cut at the table size.
struct Cumulative {
    std::vector<double> p1;               // p1[L] = sum_{ell=2}^{L} p1(ell)
    std::vector<std::vector<double>> p2;  // p2[ell][N] = sum_{n=ell}^{N} p2(ell, n)
};

Cumulative cumulate(const StepPmfTable& t) {
    const auto size = static_cast<std::size_t>(t.n_max + 1);
    Cumulative c;
    c.p1.assign(size, 0.0);
    c.p2.assign(size, std::vector<double>(size, 0.0));
    for (std::size_t l = 1; l < size; ++l) c.p1[l] = c.p1[l - 1] + t.p1[l];
    for (std::size_t l = 1; l < size; ++l) {
        for (std::size_t n = l; n < size; ++n) {
            c.p2[l][n] = (n > l ? c.p2[l][n - 1] : 0.0) + t.p2[l][n];
        }
    }
    return c;
}

// sum_{ell=2}^{L} sum_{n=ell}^{N} first(ell) second(ell, n)
double ordered_mass(const StepPmfTable& first, const Cumulative& second, long big_l, long big_n) {
    double acc = 0.0;
    for (long l = 2; l <= std::min(big_l, big_n); ++l) {
        acc += first.p1[static_cast<std::size_t>(l)] *
               second.p2[static_cast<std::size_t>(l)][static_cast<std::size_t>(big_n)];
    }
    return acc;
}

double dropped_mass(const StepPmfTable& first, const Cumulative& c_first, const Cumulative& c_second) {
    const auto top = static_cast<std::size_t>(first.n_max);
    double d = 1.0 - c_first.p1[top];
    for (std::size_t l = 2; l <= top; ++l) d += first.p1[l] * (1.0 - c_second.p2[l][top]);
    return std::max(d, 0.0);
}

}  // namespace

double StepPmfTable::p1_at(long ell) const {
    if (ell < 0 || ell > n_max) return 0.0;
    return p1[static_cast<std::size_t>(ell)];
}

double StepPmfTable::p2_at(long ell, long n) const {
    if (ell < 1 || n < ell || n > n_max) return 0.0;
    return p2[static_cast<std::size_t>(ell)][static_cast<std::size_t>(n)];
}

std::array<StepPmfTable, 2> step_pmf_table(const ModelSpec& spec, double gamma, long n_max,
                                           unsigned threads) {
    if (n_max < 2) throw DomainError("n_max must be at least 2 (got " + std::to_string(n_max) + ")");
    const double g0 = gamma_zero(spec);
    if (!(gamma > g0)) throw GammaTooSmall(gamma, g0);

    std::array<StepPmfTable, 2> out;
    for (std::size_t k = 0; k < 2; ++k) {
        QTable table(UniformizedKernel(spec.coord[k], gamma));
        table.fill(n_max, threads);
        const Eigen::Index row = initial_plus_row(table.kernel(), spec.coord[k]);

        auto& t = out[k];
        const auto size = static_cast<std::size_t>(n_max + 1);
        t.n_max = n_max;
        t.p1.assign(size, 0.0);
        t.p2.assign(size, std::vector<double>(size, 0.0));
        for (long n = 2; n <= n_max; ++n) {
            t.p1[static_cast<std::size_t>(n)] = ruin_step_pmf(table, row, n, n);
            for (long l = 1; l <= n; ++l) {
                t.p2[static_cast<std::size_t>(l)][static_cast<std::size_t>(n)] =
                    ruin_step_pmf(table, row, l, n);
            }
        }
    }
    return out;
}

long observation_steps(double gamma, double t) {
    const double v = gamma * t;
    const double nearest = std::round(v);
    if (nearest > v && nearest - v <= 1e-9 * std::max(1.0, std::fabs(nearest))) {
        return static_cast<long>(nearest);
    }
    return static_cast<long>(std::floor(v));
}

long required_n_max(double gamma, const std::vector<double>& x_grid,
                    const std::vector<double>& y_grid) {
    long need = 2;
    for (double x : x_grid) need = std::max(need, observation_steps(gamma, x));
    for (double y : y_grid) need = std::max(need, observation_steps(gamma, y));
    return need;
}

JointLawResult joint_cdf(const JointLawRequest& req) {
    require_model(req.spec);
    const double g0 = gamma_zero(req.spec);
    if (!(req.gamma > g0)) throw GammaTooSmall(req.gamma, g0);
    require_grid(req.x_grid, "x grid");
    require_grid(req.y_grid, "y grid");
    if (req.n_max < 2) throw DomainError("n_max must be at least 2");
    const long need = required_n_max(req.gamma, req.x_grid, req.y_grid);
    if (req.n_max < need && !req.allow_truncation) {
        throw DomainError("n_max = " + std::to_string(req.n_max) + " truncates the grid; at least " +
                          std::to_string(need) + " steps are needed (or allow truncation)");
    }
    return joint_cdf(req, step_pmf_table(req.spec, req.gamma, req.n_max, req.threads));
}

JointLawResult joint_cdf(const JointLawRequest& req, const std::array<StepPmfTable, 2>& tables) {
    require_grid(req.x_grid, "x grid");
    require_grid(req.y_grid, "y grid");
    const long n_max = tables[0].n_max;
    if (tables[1].n_max != n_max) throw DomainError("step tables disagree on n_max");

    const std::array<Cumulative, 2> cum = {cumulate(tables[0]), cumulate(tables[1])};
    const double defect = dropped_mass(tables[0], cum[0], cum[1]) +
                          dropped_mass(tables[1], cum[1], cum[0]);

    JointLawResult res;
    res.x_grid = req.x_grid;
    res.y_grid = req.y_grid;
    const auto nx = static_cast<Eigen::Index>(req.x_grid.size());
    const auto ny = static_cast<Eigen::Index>(req.y_grid.size());
    res.order1 = Matrix::Zero(nx, ny);
    res.order2 = Matrix::Zero(nx, ny);
    res.truncation_defect = Matrix::Zero(nx, ny);
    res.marginal_tau1 = Vector::Zero(nx);

    for (Eigen::Index i = 0; i < nx; ++i) {
        const long lx = observation_steps(req.gamma, req.x_grid[static_cast<std::size_t>(i)]);
        const long big_l = std::min(lx, n_max);
        const auto li = static_cast<std::size_t>(std::max(big_l, 0L));
        res.marginal_tau1(i) = 1.0 - (1.0 - cum[0].p1[li]) * (1.0 - cum[1].p1[li]);
        for (Eigen::Index j = 0; j < ny; ++j) {
            const long ly = observation_steps(req.gamma, req.y_grid[static_cast<std::size_t>(j)]);
            const long big_n = std::min(ly, n_max);
            res.order1(i, j) = ordered_mass(tables[0], cum[1], big_l, big_n);
            res.order2(i, j) = ordered_mass(tables[1], cum[0], big_l, big_n);
            if (lx > n_max || ly > n_max) res.truncation_defect(i, j) = defect;
        }
    }
    res.total = res.order1 + res.order2;
    return res;
}

void write_joint_csv(std::ostream& out, const JointLawResult& r) {
    out << "x,y,order1,order2,total,defect\n";
    char buf[256];
    for (Eigen::Index i = 0; i < r.order1.rows(); ++i) {
        for (Eigen::Index j = 0; j < r.order1.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                          r.x_grid[static_cast<std::size_t>(i)], r.y_grid[static_cast<std::size_t>(j)],
                          r.order1(i, j), r.order2(i, j), r.total(i, j), r.truncation_defect(i, j));
            out << buf;
        }
    }
}

}  // namespace fluidruin
