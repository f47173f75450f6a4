#include "fluidruin/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "fluidruin/format.hpp"
#include "fluidruin/rng.hpp"
#include "fluidruin/uniformization.hpp"

namespace fluidruin {

namespace {

// Sub-stream tags, per coordinate k: 3k path, 3k+1 phantom points, 3k+2 extra points.
std::uint64_t path_tag(int k) { return 3U * static_cast<unsigned>(k); }
std::uint64_t phantom_tag(int k) { return 3U * static_cast<unsigned>(k) + 1U; }
std::uint64_t extra_tag(int k) { return 3U * static_cast<unsigned>(k) + 2U; }

double segment_level(const Segment& s, double t) { return s.level0 + s.slope * (t - s.t0); }

// One coordinate's environment and level, simulated event by event. The
// open segment is extended (never stopped) so that callers can continue the
// path past the sampled ruin times from the same stream.
class CoordinatePath {
public:
    CoordinatePath(const CoordinateModel& model, std::uint64_t seed) : m_(&model), rng_(seed) {
        cur_.state = model.initial_index();
        cur_.slope = reward(cur_.state, false);
        next_jump_ = rng_.exponential(exit_rate(cur_));
    }

    double exit_rate(const Segment& s) const {
        return -generator(s.post)(static_cast<Eigen::Index>(s.state), static_cast<Eigen::Index>(s.state));
    }

    const Segment& current() const { return cur_; }
    const std::vector<Segment>& closed() const { return closed_; }
    double next_jump() const { return next_jump_; }

    double level_at(double t) const { return segment_level(cur_, t); }

    double crossing() const {
        if (!(cur_.slope < 0.0)) return kInf;
        return cur_.t0 + std::max(cur_.level0, 0.0) / -cur_.slope;
    }

    void jump() {
        const double t = next_jump_;
        const Matrix& a = generator(cur_.post);
        const auto i = static_cast<Eigen::Index>(cur_.state);
        row_.resize(static_cast<std::size_t>(a.cols()));
        for (Eigen::Index j = 0; j < a.cols(); ++j) row_[static_cast<std::size_t>(j)] = a(i, j);
        const std::size_t next = rng_.categorical(row_.data(), row_.size(), cur_.state);
        reopen(t, SegmentEnd::jump, level_at(t), next, cur_.post);
    }

    void regime_switch(double t, double level) {
        const auto i = static_cast<Eigen::Index>(cur_.state);
        const Matrix& p = m_->switch_matrix;
        row_.resize(static_cast<std::size_t>(p.cols()));
        for (Eigen::Index j = 0; j < p.cols(); ++j) row_[static_cast<std::size_t>(j)] = p(i, j);
        const std::size_t next = rng_.categorical(row_.data(), row_.size(), row_.size());
        reopen(t, SegmentEnd::regime_switch, level, next, true);
    }

    /// Segment i of the full path, simulating further jumps when needed. The
    /// last segment of an absorbed path is open (t1 = inf).
    Segment segment(std::size_t i) {
        while (i >= closed_.size() && std::isfinite(next_jump_)) jump();
        if (i < closed_.size()) return closed_[i];
        return cur_;
    }

    /// Level at t, for nondecreasing t across calls sharing `idx`.
    double level_forward(std::size_t& idx, double t) {
        for (;;) {
            const Segment s = segment(idx);
            if (s.t1 <= t) {
                ++idx;
                continue;
            }
            return segment_level(s, t);
        }
    }

    /// Segments up to `stop`, the last one cut there.
    std::vector<Segment> trajectory(double stop) const {
        std::vector<Segment> out;
        for (const auto& s : closed_) {
            if (s.t0 < stop || out.empty()) out.push_back(s);
        }
        Segment last = cur_;
        last.t1 = stop;
        last.end = SegmentEnd::stop;
        out.push_back(last);
        return out;
    }

private:
    const Matrix& generator(bool post) const { return post ? m_->post_generator : m_->pre_generator; }

    double reward(std::size_t state, bool post) const {
        const auto i = static_cast<Eigen::Index>(state);
        return post ? m_->post_rewards(i) : m_->pre_rewards(i);
    }

    void reopen(double t, SegmentEnd end, double level, std::size_t state, bool post) {
        cur_.t1 = t;
        cur_.end = end;
        closed_.push_back(cur_);
        cur_ = Segment{};
        cur_.t0 = t;
        cur_.level0 = level;
        cur_.state = state;
        cur_.post = post;
        cur_.slope = reward(state, post);
        next_jump_ = t + rng_.exponential(exit_rate(cur_));
    }

    const CoordinateModel* m_;
    Stream rng_;
    std::vector<Segment> closed_;
    Segment cur_;
    double next_jump_ = kInf;
    std::vector<double> row_;
};

struct Engine {
    std::array<CoordinatePath, 2> coords;

    Engine(const ModelSpec& spec, std::uint64_t seed)
        : coords{CoordinatePath(spec.coord[0], substream_seed(seed, path_tag(0))),
                 CoordinatePath(spec.coord[1], substream_seed(seed, path_tag(1)))} {}

    PathSample run(std::uint64_t seed, double horizon) {
        PathSample out;
        out.seed = seed;
        out.horizon = horizon;
        auto& c = coords;

        int ruiner = -1;
        for (;;) {
            const double x0 = c[0].crossing();
            const double x1 = c[1].crossing();
            const double j0 = c[0].next_jump();
            const double j1 = c[1].next_jump();
            const double tc = std::min(x0, x1);
            const double tj = std::min(j0, j1);
            if (tc <= tj) {
                if (tc <= horizon) {
                    out.tau1 = tc;
                    ruiner = x1 < x0 ? 1 : 0;
                }
                break;
            }
            if (tj > horizon) break;
            c[j1 < j0 ? 1 : 0].jump();
        }
        if (ruiner < 0) return finish(out, horizon);

        const int surv = 1 - ruiner;
        double survivor_level = c[surv].level_at(out.tau1);
        if (survivor_level <= 0.0) {
            out.double_hit = true;
            survivor_level = 0.0;
        }
        c[ruiner].regime_switch(out.tau1, 0.0);
        c[surv].regime_switch(out.tau1, survivor_level);
        out.first_ruiner = ruiner + 1;
        out.switched_to = {c[0].current().state, c[1].current().state};

        for (;;) {
            const double xc = c[surv].crossing();
            const double js = c[surv].next_jump();
            const double jr = c[ruiner].next_jump();
            const double next = std::min(js, jr);
            if (xc <= next) {
                if (xc <= horizon) {
                    out.tau2 = xc;
                    out.censored = false;
                }
                break;
            }
            if (next > horizon) break;
            if (js <= jr) {
                c[surv].jump();
            } else {
                c[ruiner].jump();
            }
        }
        return finish(out, out.censored ? horizon : out.tau2);
    }

    PathSample& finish(PathSample& out, double stop) {
        for (int k = 0; k < 2; ++k) out.segments[static_cast<std::size_t>(k)] = coords[static_cast<std::size_t>(k)].trajectory(stop);
        return out;
    }
};

// Merged observation grid of one coordinate: the rate-gamma0 grid (real
// jumps plus phantom points thinned in at rate gamma0 - exit rate) and an
// independent rate gamma - gamma0 stream of extra points.
class GridCursor {
public:
    GridCursor(CoordinatePath& path, std::uint64_t phantom_seed, std::uint64_t extra_seed, double g0,
               double gamma)
        : path_(&path), phantom_(phantom_seed), extra_(extra_seed), g0_(g0), extra_rate_(gamma - g0) {
        theta_ = next_theta();
        extra_t_ = extra_.exponential(extra_rate_);
    }

    GridPoint next() {
        if (theta_.time <= extra_t_) {
            const GridPoint p = theta_;
            theta_ = next_theta();
            return p;
        }
        const GridPoint p{extra_t_, GridSource::extra};
        extra_t_ += extra_.exponential(extra_rate_);
        return p;
    }

    /// Next point of the rate-gamma0 grid not yet returned by next().
    double pending_theta() const { return theta_.time; }

private:
    GridPoint next_theta() {
        for (;;) {
            const Segment s = path_->segment(seg_);
            if (!seg_open_) {
                seg_rate_ = std::max(g0_ - path_->exit_rate(s), 0.0);
                phantom_t_ = s.t0 + phantom_.exponential(seg_rate_);
                seg_open_ = true;
            }
            if (phantom_t_ < s.t1) {
                const GridPoint p{phantom_t_, GridSource::phantom};
                phantom_t_ += phantom_.exponential(seg_rate_);
                return p;
            }
            seg_open_ = false;
            ++seg_;
            if (s.end == SegmentEnd::jump) return {s.t1, GridSource::jump};
        }
    }

    CoordinatePath* path_;
    Stream phantom_;
    Stream extra_;
    double g0_;
    double extra_rate_;
    std::size_t seg_ = 0;
    bool seg_open_ = false;
    double seg_rate_ = 0.0;
    double phantom_t_ = 0.0;
    GridPoint theta_{0.0, GridSource::jump};
    double extra_t_ = 0.0;
};

// F~ - F for one coordinate: grows linearly between tau1 and sigma, then
// stays constant.
double pasting_correction(double tau1, double sigma, double gap, double t) {
    const double a = std::min(tau1, sigma);
    const double b = std::max(tau1, sigma);
    const double sign = sigma >= tau1 ? 1.0 : -1.0;
    return sign * gap * std::clamp(t - a, 0.0, b - a);
}

double max_of(const Vector& v) { return v.maxCoeff(); }
double max_abs_of(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

void require_horizon(double horizon) {
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
}

void require_valid(const ModelSpec& spec) {
    const auto report = validate(spec);
    if (!report.ok()) throw DomainError("invalid model:\n" + report.to_string());
}

Quantiles quantiles(std::vector<double> v) {
    Quantiles q;
    q.count = v.size();
    if (v.empty()) return q;
    std::sort(v.begin(), v.end());
    auto at = [&](double p) {
        const double pos = p * static_cast<double>(v.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, v.size() - 1);
        return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
    };
    q.median = at(0.5);
    q.q90 = at(0.9);
    return q;
}

void strip(PastingSample& s) {
    for (auto& g : s.grids) std::vector<GridPoint>().swap(g);
    for (auto& seg : s.base.segments) std::vector<Segment>().swap(seg);
}

}  // namespace

double PathSample::level(int k, double t) const {
    const auto& segs = segments.at(static_cast<std::size_t>(k));
    if (segs.empty()) return 0.0;
    auto it = std::upper_bound(segs.begin(), segs.end(), t,
                               [](double v, const Segment& s) { return v < s.t0; });
    if (it != segs.begin()) --it;
    return segment_level(*it, t);
}

double default_horizon(const ModelSpec& spec) {
    const double d = std::max(std::fabs(pre_regime_drift(spec.coord[0])),
                              std::fabs(pre_regime_drift(spec.coord[1])));
    return d > 1e-9 ? 50.0 / d : 1000.0;
}

PathSample sample_exact_path(const ModelSpec& spec, std::uint64_t seed, double horizon) {
    require_horizon(horizon);
    Engine engine(spec, seed);
    return engine.run(seed, horizon);
}

double PastingSample::pasted_level(int m, double t) const {
    if (base.first_ruiner == 0) return base.level(m, t);
    const int k = m == 0 ? base.first_ruiner - 1 : 2 - base.first_ruiner;
    const double sigma = m == 0 ? sigma1 : sigma2;
    return base.level(k, t) + pasting_correction(base.tau1, sigma, slope_gap[static_cast<std::size_t>(m)], t);
}

PastingSample sample_pasting(const ModelSpec& spec, double gamma, std::uint64_t seed, double horizon) {
    require_horizon(horizon);
    const double g0 = gamma_zero(spec);
    if (!(gamma > g0)) throw GammaTooSmall(gamma, g0);

    Engine engine(spec, seed);
    PastingSample p;
    p.base = engine.run(seed, horizon);
    p.gamma = gamma;
    if (p.base.first_ruiner == 0) return p;

    const double tau1 = p.base.tau1;
    const std::array<int, 2> coord_of = {p.base.first_ruiner - 1, 2 - p.base.first_ruiner};
    std::array<GridCursor, 2> grid = {
        GridCursor(engine.coords[0], substream_seed(seed, phantom_tag(0)),
                   substream_seed(seed, extra_tag(0)), g0, gamma),
        GridCursor(engine.coords[1], substream_seed(seed, phantom_tag(1)),
                   substream_seed(seed, extra_tag(1)), g0, gamma)};
    auto take = [&](int k) {
        const GridPoint pt = grid[static_cast<std::size_t>(k)].next();
        p.grids[static_cast<std::size_t>(k)].push_back(pt);
        return pt;
    };

    // First observation of the ruiner strictly after tau1. A rate-gamma0 point
    // in (tau1, sigma] breaks compatibility.
    bool broken = false;
    long ell = 0;
    for (;;) {
        const GridPoint pt = take(coord_of[0]);
        ++ell;
        if (pt.time > tau1) {
            p.sigma1_star = pt.time;
            broken = pt.source != GridSource::extra;
            break;
        }
    }
    p.ell_star = ell;

    GridPoint pt{0.0, GridSource::extra};
    for (long i = 1; i <= ell; ++i) {
        pt = take(coord_of[1]);
        if (pt.source != GridSource::extra && pt.time > tau1) broken = true;
    }
    p.sigma2_star = pt.time;
    if (p.sigma2_star < tau1 && grid[static_cast<std::size_t>(coord_of[1])].pending_theta() <= tau1) {
        broken = true;
    }
    p.compat_ok = !broken;
    p.sigma1 = p.compat_ok ? p.sigma1_star : tau1;
    p.sigma2 = p.compat_ok ? p.sigma2_star : tau1;
    p.tilde_tau1 = p.sigma1;

    const std::array<double, 2> sigma = {p.sigma1, p.sigma2};
    for (std::size_t m = 0; m < 2; ++m) {
        const auto k = static_cast<std::size_t>(coord_of[m]);
        const CoordinateModel& cm = spec.coord[k];
        const auto& closed = engine.coords[k].closed();
        // The segment ending at tau1 carries J(tau1-).
        const auto before = std::find_if(closed.begin(), closed.end(), [](const Segment& s) {
            return s.end == SegmentEnd::regime_switch;
        });
        const double r = cm.pre_rewards(static_cast<Eigen::Index>(before->state));
        const double rho = cm.post_rewards(static_cast<Eigen::Index>(p.base.switched_to[k]));
        p.slope_gap[m] = r - rho;
        const double width = std::fabs(sigma[m] - tau1);
        p.sup_distance[m] = width * std::fabs(p.slope_gap[m]);
        p.bound_printed[m] = width * (max_of(cm.pre_rewards) + max_of(cm.post_rewards));
        p.bound_abs[m] = width * (max_abs_of(cm.pre_rewards) + max_abs_of(cm.post_rewards));
    }

    // First observation at which the pasted survivor is below zero.
    const int ks = coord_of[1];
    auto& survivor = engine.coords[static_cast<std::size_t>(ks)];
    auto& observed = p.grids[static_cast<std::size_t>(ks)];
    std::size_t seg = 0;
    for (std::size_t n = 1;; ++n) {
        const double t = n <= observed.size() ? observed[n - 1].time : take(ks).time;
        if (t > horizon) break;
        const double level = survivor.level_forward(seg, t) +
                             pasting_correction(tau1, p.sigma2, p.slope_gap[1], t);
        if (level < 0.0) {
            p.n_star = static_cast<long>(n);
            p.tilde_tau2 = t;
            break;
        }
    }
    return p;
}

RuinTimes ruin_times(const PathSample& path) {
    return {path.tau1, path.tau2, path.first_ruiner, path.censored};
}

std::vector<RuinTimes> simulate_ruin_times(const ModelSpec& spec, std::size_t m, std::uint64_t root,
                                           double horizon, unsigned threads) {
    require_valid(spec);
    require_horizon(horizon);
    std::vector<RuinTimes> out(m);
    parallel_for(m, threads, [&](std::size_t i) {
        out[i] = ruin_times(sample_exact_path(spec, sample_seed(root, i), horizon));
    });
    return out;
}

std::vector<PastingSample> simulate_pastings(const ModelSpec& spec, double gamma, std::size_t m,
                                             std::uint64_t root, double horizon, unsigned threads) {
    require_valid(spec);
    require_horizon(horizon);
    const double g0 = gamma_zero(spec);
    if (!(gamma > g0)) throw GammaTooSmall(gamma, g0);
    std::vector<PastingSample> out(m);
    parallel_for(m, threads, [&](std::size_t i) {
        out[i] = sample_pasting(spec, gamma, sample_seed(root, i), horizon);
        strip(out[i]);
    });
    return out;
}

EmpiricalJointCdf empirical_joint_cdf(const std::vector<RuinTimes>& samples,
                                      const std::vector<double>& x_grid,
                                      const std::vector<double>& y_grid) {
    if (samples.empty()) throw DomainError("empirical joint CDF needs at least one sample");
    EmpiricalJointCdf e;
    e.x_grid = x_grid;
    e.y_grid = y_grid;
    e.samples = samples.size();
    const auto nx = static_cast<Eigen::Index>(x_grid.size());
    const auto ny = static_cast<Eigen::Index>(y_grid.size());
    e.order1 = Matrix::Zero(nx, ny);
    e.order2 = Matrix::Zero(nx, ny);
    std::size_t censored = 0;
    for (const auto& s : samples) {
        if (s.censored) ++censored;
        if (s.first_ruiner == 0 || !std::isfinite(s.tau2)) continue;
        Matrix& target = s.first_ruiner == 1 ? e.order1 : e.order2;
        for (Eigen::Index i = 0; i < nx; ++i) {
            if (!(s.tau1 <= x_grid[static_cast<std::size_t>(i)])) continue;
            for (Eigen::Index j = 0; j < ny; ++j) {
                if (s.tau2 <= y_grid[static_cast<std::size_t>(j)]) target(i, j) += 1.0;
            }
        }
    }
    const double m = static_cast<double>(samples.size());
    e.order1 /= m;
    e.order2 /= m;
    e.total = e.order1 + e.order2;
    auto se = [m](const Matrix& p) {
        return Matrix(p.unaryExpr([m](double v) { return std::sqrt(v * (1.0 - v) / m); }));
    };
    e.se_order1 = se(e.order1);
    e.se_order2 = se(e.order2);
    e.se_total = se(e.total);
    e.censored_fraction = static_cast<double>(censored) / m;
    return e;
}

double ConvergenceBudget::delta(double gamma) const {
    return std::log(gamma) * std::pow(gamma, -0.5 + epsilon / 2.0);
}

double ConvergenceBudget::k(double gamma) const { return std::pow(gamma, epsilon); }

std::vector<ConvergenceRow> convergence_report(const ModelSpec& spec, const ConvergenceBudget& budget,
                                               std::size_t m, std::uint64_t root, double horizon,
                                               unsigned threads) {
    if (m < 100) throw DomainError("convergence report needs at least 100 samples");
    if (!(budget.epsilon > 0.0 && budget.epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
    if (!(budget.q > 0.0)) throw DomainError("q must be positive");
    if (budget.gammas.empty()) throw DomainError("gamma list is empty");

    std::vector<ConvergenceRow> rows;
    for (double gamma : budget.gammas) {
        const auto samples = simulate_pastings(spec, gamma, m, root, horizon, threads);
        ConvergenceRow row;
        row.gamma = gamma;
        row.samples = m;
        row.delta = budget.delta(gamma);
        row.k = budget.k(gamma);

        std::vector<double> s1, s2, t1, t2, el, en, over;
        std::size_t compat = 0, fail = 0, vp = 0, va = 0;
        std::array<std::size_t, 2> beyond{0, 0};
        for (const auto& p : samples) {
            if (p.base.first_ruiner == 0) continue;
            const double tau1 = p.base.tau1;
            ++row.ruined;
            const double g1 = std::fabs(tau1 - p.sigma1_star);
            const double g2 = std::fabs(tau1 - p.sigma2_star);
            s1.push_back(g1);
            s2.push_back(g2);
            t1.push_back(std::fabs(p.tilde_tau1 - tau1));
            el.push_back(std::fabs(static_cast<double>(p.ell_star) / gamma - tau1));
            over.push_back(p.sigma1_star - tau1);
            if (tau1 <= row.k) {
                if (g1 > row.delta) ++beyond[0];
                if (g2 > row.delta) ++beyond[1];
            }
            if (!p.base.censored && p.n_star > 0) {
                t2.push_back(std::fabs(p.tilde_tau2 - p.base.tau2));
                en.push_back(std::fabs(static_cast<double>(p.n_star) / gamma - p.base.tau2));
            }
            if (!p.compat_ok) {
                ++fail;
                continue;
            }
            ++compat;
            bool bad_printed = false, bad_abs = false;
            for (std::size_t k = 0; k < 2; ++k) {
                const double tol = 1e-9 * std::max(1.0, p.bound_abs[k]);
                bad_printed = bad_printed || p.sup_distance[k] > p.bound_printed[k] + tol;
                bad_abs = bad_abs || p.sup_distance[k] > p.bound_abs[k] + tol;
            }
            vp += bad_printed ? 1 : 0;
            va += bad_abs ? 1 : 0;
        }
        const double ruined = static_cast<double>(std::max<std::size_t>(row.ruined, 1));
        row.compat_fail = static_cast<double>(fail) / ruined;
        row.violations_printed = compat ? static_cast<double>(vp) / static_cast<double>(compat) : 0.0;
        row.violations_abs = compat ? static_cast<double>(va) / static_cast<double>(compat) : 0.0;
        if (!over.empty()) {
            const double n = static_cast<double>(over.size());
            const double mean = std::accumulate(over.begin(), over.end(), 0.0) / n;
            double ss = 0.0;
            for (double v : over) ss += (v - mean) * (v - mean);
            row.overshoot_mean = mean;
            row.overshoot_se = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
        }
        for (std::size_t k = 0; k < 2; ++k) {
            row.beyond_delta[k] = static_cast<double>(beyond[k]) / static_cast<double>(m);
        }
        row.sigma1_gap = quantiles(std::move(s1));
        row.sigma2_gap = quantiles(std::move(s2));
        row.tilde_tau1_gap = quantiles(std::move(t1));
        row.tilde_tau2_gap = quantiles(std::move(t2));
        row.ell_gap = quantiles(std::move(el));
        row.n_gap = quantiles(std::move(en));
        rows.push_back(row);
    }
    return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
    out << "gamma,samples,ruined,delta,K,compat_fail,violations_printed,violations_abs,"
           "overshoot_mean,overshoot_se,median_sigma1_gap,q90_sigma1_gap,median_sigma2_gap,"
           "q90_sigma2_gap,median_tilde_tau1_gap,q90_tilde_tau1_gap,median_tilde_tau2_gap,"
           "q90_tilde_tau2_gap,median_ell_gap,q90_ell_gap,median_n_gap,q90_n_gap,"
           "beyond_delta1,beyond_delta2\n";
    for (const auto& r : rows) {
        out << csv_number(r.gamma) << ',' << r.samples << ',' << r.ruined << ',' << csv_number(r.delta)
            << ',' << csv_number(r.k) << ',' << csv_number(r.compat_fail) << ','
            << csv_number(r.violations_printed) << ',' << csv_number(r.violations_abs) << ','
            << csv_number(r.overshoot_mean) << ',' << csv_number(r.overshoot_se);
        for (const Quantiles* q : {&r.sigma1_gap, &r.sigma2_gap, &r.tilde_tau1_gap, &r.tilde_tau2_gap,
                                   &r.ell_gap, &r.n_gap}) {
            out << ',' << csv_number(q->median) << ',' << csv_number(q->q90);
        }
        out << ',' << csv_number(r.beyond_delta[0]) << ',' << csv_number(r.beyond_delta[1]) << '\n';
    }
}

namespace {

const char* kSampleHeader =
    "seed,tau1,tau2,first_ruiner,censored,ell_star,n_star,sigma1,sigma2,sup_dist1,sup_dist2,compat_ok\n";

void write_path_columns(std::ostream& out, const PathSample& s) {
    out << s.seed << ',' << csv_number(s.tau1) << ',' << csv_number(s.tau2) << ',' << s.first_ruiner
        << ',' << (s.censored ? 1 : 0);
}

}  // namespace

void write_sample_csv(std::ostream& out, const std::vector<PastingSample>& samples) {
    out << kSampleHeader;
    for (const auto& p : samples) {
        write_path_columns(out, p.base);
        if (p.base.first_ruiner == 0) {
            out << ",,,,,,,\n";
            continue;
        }
        out << ',' << p.ell_star << ',';
        if (p.n_star > 0) out << p.n_star;
        out << ',' << csv_number(p.sigma1) << ',' << csv_number(p.sigma2) << ','
            << csv_number(p.sup_distance[0]) << ',' << csv_number(p.sup_distance[1]) << ','
            << (p.compat_ok ? 1 : 0) << '\n';
    }
}

void write_sample_csv(std::ostream& out, const std::vector<PathSample>& samples) {
    out << kSampleHeader;
    for (const auto& s : samples) {
        write_path_columns(out, s);
        out << ",,,,,,,\n";
    }
}

}  // namespace fluidruin
