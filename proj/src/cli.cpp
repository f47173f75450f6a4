#include "fluidruin/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fluidruin/format.hpp"
#include "fluidruin/joint_law.hpp"
#include "fluidruin/rng.hpp"
#include "fluidruin/simulator.hpp"
#include "fluidruin/uniformization.hpp"

namespace fluidruin {

namespace {

ModelSpec load_checked(const RunConfig& cfg, std::ostream& err) {
    if (cfg.model.empty()) throw DomainError("--model is required");
    ModelSpec spec = load_model(cfg.model);
    if (cfg.renormalize_inputs) renormalize(spec);
    const auto report = validate(spec);
    if (!report.ok()) {
        err << report.to_string();
        throw DomainError("model " + cfg.model + " is invalid");
    }
    return spec;
}

double require_gamma(const RunConfig& cfg) {
    if (!cfg.gamma) throw DomainError("--gamma is required");
    return *cfg.gamma;
}

std::size_t require_samples(const RunConfig& cfg) {
    if (!cfg.samples) throw DomainError("--samples is required");
    if (*cfg.samples < 1) throw DomainError("--samples must be at least 1");
    return static_cast<std::size_t>(*cfg.samples);
}

long n_max_for(const RunConfig& cfg, double gamma) {
    if (cfg.n_max) return *cfg.n_max;
    return required_n_max(gamma, cfg.x_grid, cfg.y_grid);
}

double horizon_for(const RunConfig& cfg, const ModelSpec& spec) {
    return cfg.horizon ? *cfg.horizon : default_horizon(spec);
}

// Runs `body` against the --out file, or against `out` when none is given.
template <class F>
void with_output(const RunConfig& cfg, std::ostream& out, F&& body) {
    if (cfg.out.empty()) {
        body(out);
        out.flush();
        return;
    }
    std::ostringstream buf;
    body(buf);
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw IoError("cannot open output file " + cfg.out);
    file << buf.str();
    file.close();
    if (!file) throw IoError("error writing output file " + cfg.out);
}

}  // namespace

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.model.empty()) throw DomainError("--model is required");
    ModelSpec spec = load_model(cfg.model);
    if (cfg.renormalize_inputs) renormalize(spec);
    const auto report = validate(spec);
    out << (report.issues.empty() ? std::string("ok\n") : report.to_string());
    return report.ok() ? 0 : 1;
}

int cmd_psi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ModelSpec spec = load_checked(cfg, err);
    const double gamma = require_gamma(cfg);
    if (!cfg.n_max) throw DomainError("--n-max is required");
    const auto tables = step_pmf_table(spec, gamma, *cfg.n_max, cfg.threads);
    with_output(cfg, out, [&](std::ostream& os) {
        os << "coord,ell,n,value\n";
        for (std::size_t k = 0; k < 2; ++k) {
            for (long n = 2; n <= *cfg.n_max; ++n) {
                for (long l = 1; l <= n; ++l) {
                    os << k + 1 << ',' << l << ',' << n << ',' << csv_number(tables[k].p2_at(l, n)) << '\n';
                }
            }
        }
    });
    return 0;
}

int cmd_joint(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    JointLawRequest req;
    req.spec = load_checked(cfg, err);
    req.gamma = require_gamma(cfg);
    req.x_grid = cfg.x_grid;
    req.y_grid = cfg.y_grid;
    req.n_max = n_max_for(cfg, req.gamma);
    req.allow_truncation = cfg.allow_truncation;
    req.threads = cfg.threads;
    const auto result = joint_cdf(req);
    with_output(cfg, out, [&](std::ostream& os) { write_joint_csv(os, result); });
    return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ModelSpec spec = load_checked(cfg, err);
    const std::size_t m = require_samples(cfg);
    const double horizon = horizon_for(cfg, spec);
    std::size_t censored = 0;
    if (cfg.gamma) {
        const auto samples = simulate_pastings(spec, *cfg.gamma, m, cfg.seed, horizon, cfg.threads);
        std::size_t compat = 0, ruined = 0;
        for (const auto& p : samples) {
            censored += p.base.censored ? 1 : 0;
            ruined += p.base.first_ruiner != 0 ? 1 : 0;
            compat += p.compat_ok ? 1 : 0;
        }
        with_output(cfg, out, [&](std::ostream& os) { write_sample_csv(os, samples); });
        err << "compatible pastings: " << compat << " of " << ruined << " first ruins\n";
    } else {
        std::vector<PathSample> paths(m);
        parallel_for(m, cfg.threads, [&](std::size_t i) {
            paths[i] = sample_exact_path(spec, sample_seed(cfg.seed, i), horizon);
            for (auto& s : paths[i].segments) std::vector<Segment>().swap(s);
        });
        for (const auto& p : paths) censored += p.censored ? 1 : 0;
        with_output(cfg, out, [&](std::ostream& os) { write_sample_csv(os, paths); });
    }
    err << "censored: " << censored << " of " << m << " samples (horizon " << csv_number(horizon)
        << ")\n";
    return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    JointLawRequest req;
    req.spec = load_checked(cfg, err);
    req.gamma = require_gamma(cfg);
    req.x_grid = cfg.x_grid;
    req.y_grid = cfg.y_grid;
    req.n_max = n_max_for(cfg, req.gamma);
    req.allow_truncation = cfg.allow_truncation;
    req.threads = cfg.threads;
    const std::size_t m = require_samples(cfg);
    if (!(cfg.tolerance >= 0.0)) throw DomainError("--tolerance must be nonnegative");

    const auto law = joint_cdf(req);
    const auto times = simulate_ruin_times(req.spec, m, cfg.seed, horizon_for(cfg, req.spec), cfg.threads);
    const auto emp = empirical_joint_cdf(times, req.x_grid, req.y_grid);

    bool all_within = true;
    with_output(cfg, out, [&](std::ostream& os) {
        os << "x,y,total,empirical,se,defect,abs_diff,band,within\n";
        for (Eigen::Index i = 0; i < law.total.rows(); ++i) {
            for (Eigen::Index j = 0; j < law.total.cols(); ++j) {
                const double diff = std::fabs(law.total(i, j) - emp.total(i, j));
                const double band = cfg.tolerance * emp.se_total(i, j) + law.truncation_defect(i, j);
                const bool within = diff <= band;
                all_within = all_within && within;
                os << csv_number(req.x_grid[static_cast<std::size_t>(i)]) << ','
                   << csv_number(req.y_grid[static_cast<std::size_t>(j)]) << ','
                   << csv_number(law.total(i, j)) << ',' << csv_number(emp.total(i, j)) << ','
                   << csv_number(emp.se_total(i, j)) << ',' << csv_number(law.truncation_defect(i, j))
                   << ',' << csv_number(diff) << ',' << csv_number(band) << ',' << (within ? 1 : 0)
                   << '\n';
            }
        }
    });
    err << "censored fraction: " << csv_number(emp.censored_fraction) << '\n';
    if (!all_within) err << "some cells fall outside the tolerance band\n";
    return all_within ? 0 : 1;
}

int cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ModelSpec spec = load_checked(cfg, err);
    ConvergenceBudget budget;
    budget.epsilon = cfg.epsilon;
    budget.q = cfg.q;
    budget.gammas = cfg.gammas;
    const auto rows = convergence_report(spec, budget, require_samples(cfg), cfg.seed,
                                         horizon_for(cfg, spec), cfg.threads);
    with_output(cfg, out, [&](std::ostream& os) { write_convergence_csv(os, rows); });
    return 0;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint law of the ruin times of a ruin-dependent bivariate fluid process"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", cfg.model, "model JSON file")->required();
        sub->add_flag("--renormalize-inputs", cfg.renormalize_inputs,
                      "rescale generator and switch rows to exact sums before use");
    };
    auto add_gamma = [&](CLI::App* sub) { sub->add_option("--gamma", cfg.gamma, "observation rate"); };
    auto add_grids = [&](CLI::App* sub) {
        sub->add_option("--x-grid", cfg.x_grid, "comma-separated times for tau1")->delimiter(',')->required();
        sub->add_option("--y-grid", cfg.y_grid, "comma-separated times for tau2")->delimiter(',')->required();
        sub->add_option("--n-max", cfg.n_max, "step truncation (default: smallest covering the grids)");
        sub->add_flag("--allow-truncation", cfg.allow_truncation, "accept n-max below the grid range");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out, "output file (default: standard output)");
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    };
    auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--samples", cfg.samples, "number of Monte Carlo samples");
        sub->add_option("--seed", cfg.seed, "root seed");
        sub->add_option("--horizon", cfg.horizon, "censoring horizon");
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a model file");
    validate_cmd->add_option("--model", cfg.model, "model JSON file")->required();
    validate_cmd->add_flag("--renormalize-inputs", cfg.renormalize_inputs);

    auto* psi_cmd = app.add_subcommand("psi", "step probability tables p1, p2");
    add_model(psi_cmd);
    add_gamma(psi_cmd);
    psi_cmd->add_option("--n-max", cfg.n_max, "largest step");
    add_common(psi_cmd);

    auto* joint_cmd = app.add_subcommand("joint", "approximate joint CDF of the ruin times");
    add_model(joint_cmd);
    add_gamma(joint_cmd);
    add_grids(joint_cmd);
    add_common(joint_cmd);

    auto* sim_cmd = app.add_subcommand("simulate", "exact paths, with pastings when --gamma is given");
    add_model(sim_cmd);
    add_gamma(sim_cmd);
    add_sampling(sim_cmd);
    add_common(sim_cmd);

    auto* cmp_cmd = app.add_subcommand("compare", "recursion against Monte Carlo on a grid");
    add_model(cmp_cmd);
    add_gamma(cmp_cmd);
    add_grids(cmp_cmd);
    add_sampling(cmp_cmd);
    add_common(cmp_cmd);
    cmp_cmd->add_option("--tolerance", cfg.tolerance, "standard errors allowed per cell");

    auto* conv_cmd = app.add_subcommand("converge", "convergence diagnostics over a list of rates");
    add_model(conv_cmd);
    add_sampling(conv_cmd);
    add_common(conv_cmd);
    conv_cmd->add_option("--gammas", cfg.gammas, "comma-separated observation rates")
        ->delimiter(',')
        ->required();
    conv_cmd->add_option("--epsilon", cfg.epsilon, "epsilon in (0, 1)");
    conv_cmd->add_option("--q", cfg.q, "q > 0");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (*validate_cmd) return cmd_validate(cfg, out, err);
        if (*psi_cmd) return cmd_psi(cfg, out, err);
        if (*joint_cmd) return cmd_joint(cfg, out, err);
        if (*sim_cmd) return cmd_simulate(cfg, out, err);
        if (*cmp_cmd) return cmd_compare(cfg, out, err);
        if (*conv_cmd) return cmd_converge(cfg, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace fluidruin
