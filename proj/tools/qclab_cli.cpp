// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line driver for epsilon sweeps, quasi-classical evolution and the
// assumption checks. Exit code 0: all checks passed, 2: a check failed,
// 1: execution error.

#include "qcl/checkpoint.hpp"
#include "qcl/harness.hpp"
#include "qcl/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("-c,--config", opts.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_option("-o,--out-dir", opts.out_dir, "output directory");
    cmd->add_option("-j,--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
}

std::string number_tag(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void print_checks(const qcl::ResultTable& table) {
    for (const auto& c : table.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) {
            std::cout << " (" << c.detail << ")";
        }
        std::cout << '\n';
    }
    for (const auto& w : table.warnings) {
        std::cout << "WARN " << w << '\n';
    }
}

int emit(const qcl::ResultTable& table, const qcl::ExperimentConfig& cfg, const std::string& command,
         const std::string& out_dir, const std::string& plot_metric) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    qcl::write_csv(table, (dir / (command + ".csv")).string());
    qcl::write_json(qcl::table_to_json(table, cfg.source, command), (dir / (command + ".json")).string());
    if (!plot_metric.empty()) {
        qcl::write_text(qcl::svg_loglog(qcl::metric_series(table, plot_metric), plot_metric + " vs epsilon", "epsilon",
                                        plot_metric),
                        (dir / (command + "_" + plot_metric + ".svg")).string());
    }
    print_checks(table);
    std::cout << "wrote " << (dir / (command + ".csv")).string() << '\n';
    return table.all_passed() ? 0 : 2;
}

int simulate_micro(const CommonOptions& opts) {
    const auto cfg = qcl::load_experiment(opts.config, opts.seed);
    qcl::ResultTable table;
    table.config_hash = cfg.hash;
    table.seed = cfg.seed;
    fs::create_directories(opts.out_dir);
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    std::vector<std::vector<qcl::ResultRow>> slots(cfg.epsilon_list.size());
    qcl::parallel_for(cfg.epsilon_list.size(), opts.threads, [&](std::size_t i) {
        const double eps = cfg.epsilon_list[i];
        const auto init = qcl::build_initial_state(cfg, eps);
        const auto h = qcl::build_nelson_hamiltonian(qcl::model_at(cfg, eps), init.basis).matrix;
        qcl::HybridState state = init.micro;
        double clock = 0.0;
        for (const double t : times) {
            qcl::KrylovStats stats;
            state = qcl::propagate_micro(h, state, t - clock, cfg.propagation.micro_dt, cfg.propagation.krylov, 1,
                                         &stats);
            clock = t;
            slots[i].push_back({eps, t, "number_moment_1", qcl::number_moment(state, init.basis, 1.0)});
            slots[i].push_back({eps, t, "krylov_steps", static_cast<double>(stats.accepted_steps)});
            const std::string name = "micro_eps" + number_tag(eps) + "_t" + number_tag(t) + ".ckpt";
            qcl::write_checkpoint((fs::path(opts.out_dir) / name).string(), {cfg.hash, eps, t}, state);
        }
    });
    for (auto& s : slots) {
        table.rows.insert(table.rows.end(), s.begin(), s.end());
    }
    return emit(table, cfg, "simulate-micro", opts.out_dir, "");
}

int simulate_qc(const CommonOptions& opts) {
    const auto cfg = qcl::load_experiment(opts.config, opts.seed);
    const auto init = qcl::build_initial_state(cfg, cfg.epsilon_list.back());
    const qcl::QCGenerator gen(qcl::model_at(cfg, cfg.epsilon_list.back()));
    std::vector<double> times = cfg.times;
    std::sort(times.begin(), times.end());
    const auto trajectory = qcl::evolve_measure_trajectory(cfg.propagation.qc, gen, init.limit, times, opts.threads);
    qcl::ResultTable table;
    table.config_hash = cfg.hash;
    table.seed = cfg.seed;
    bool mass_ok = true;
    for (std::size_t i = 0; i < times.size(); ++i) {
        table.rows.push_back({0.0, times[i], "qc_mass", trajectory[i].total_mass()});
        table.rows.push_back({0.0, times[i], "qc_moment_1", qcl::moment(trajectory[i], 1.0)});
        mass_ok = mass_ok && trajectory[i].total_mass() == init.limit.total_mass();
    }
    table.checks.push_back({"quasi-classical evolution preserves mass", mass_ok, ""});
    fs::create_directories(opts.out_dir);
    qcl::write_json(qcl::trajectory_to_json(times, trajectory),
                    (fs::path(opts.out_dir) / "qc_trajectory.json").string());
    return emit(table, cfg, "simulate-qc", opts.out_dir, "");
}

int compare(const CommonOptions& opts) {
    const auto cfg = qcl::load_experiment(opts.config, opts.seed);
    const auto start = std::chrono::steady_clock::now();
    const auto table = qcl::run_convergence_experiment(cfg, opts.threads);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::cout << "compare: " << table.rows.size() << " rows in " << elapsed.count() << " s\n";
    return emit(table, cfg, "compare", opts.out_dir, "qc_distance");
}

int heisenberg(const CommonOptions& opts) {
    const auto cfg = qcl::load_experiment(opts.config, opts.seed);
    const auto table = qcl::run_heisenberg_experiment(cfg, qcl::heisenberg_symbol(cfg),
                                                      qcl::named_observable(cfg, cfg.heisenberg.s),
                                                      qcl::named_observable(cfg, cfg.heisenberg.t), opts.threads);
    return emit(table, cfg, "heisenberg", opts.out_dir, "heisenberg_discrepancy");
}

// Static checks on the configuration that need no time propagation.
int check(const CommonOptions& opts) {
    const auto cfg = qcl::load_experiment(opts.config, opts.seed);
    qcl::ResultTable table;
    table.config_hash = cfg.hash;
    table.seed = cfg.seed;
    const auto k0 = qcl::build_K0(cfg.model);
    table.checks.push_back({"K0 self-adjoint", k0.hermiticity_defect() <= 1e-12,
                            number_tag(k0.hermiticity_defect())});
    for (const double eps : cfg.epsilon_list) {
        const auto init = qcl::build_initial_state(cfg, eps);
        const auto model = qcl::model_at(cfg, eps);
        const auto h = qcl::build_nelson_hamiltonian(model, init.basis);
        const std::string at = " (eps=" + number_tag(eps) + ")";
        table.rows.push_back({eps, 0.0, "fock_dimension", static_cast<double>(init.basis.dimension())});
        table.rows.push_back({eps, 0.0, "coherent_mass_defect", init.mass_defect});
        table.rows.push_back({eps, 0.0, "hamiltonian_hermiticity_defect", h.hermiticity_defect()});
        table.checks.push_back({"Hamiltonian self-adjoint" + at, h.hermiticity_defect() <= 1e-10,
                                number_tag(h.hermiticity_defect())});
        const double mass = init.limit.total_mass();
        const bool loses_mass = cfg.initial.kind == qcl::InitialStateSpec::Kind::loss_of_mass;
        table.checks.push_back({"limit measure mass" + at,
                                loses_mass ? mass == 0.0 : std::abs(mass - 1.0) <= 1e-6, number_tag(mass)});
        const auto pik = qcl::check_PIK(init.micro, init.basis, init.limit, cfg.pik_max_k);
        for (std::size_t k = 1; k < pik.size(); ++k) {
            table.rows.push_back({eps, 0.0, "pik_k" + std::to_string(k), pik[k]});
        }
        const double moment = qcl::number_moment(init.micro, init.basis, 2.0 * cfg.heisenberg.moment_regularity);
        table.rows.push_back({eps, 0.0, "regularity_moment", moment});
        const qcl::CMat gamma = qcl::partial_trace_field(init.micro);
        const qcl::CMat a = k0.dense() + qcl::CMat::Identity(gamma.rows(), gamma.rows());
        table.rows.push_back({eps, 0.0, "particle_energy_moment", (a * gamma).trace().real()});
        const auto lambda = model.form_factor();
        for (const auto& [amp, z] : cfg.initial.components) {
            const qcl::SymbolSpec sym{{lambda}, {}};
            for (const int levels : {5, 10, 20, 40}) {
                const auto simple = qcl::simple_approximate(sym, z, levels);
                const double err = qcl::simple_error(sym, simple, z, cfg.model.grid);
                const double bound = 4.0 * lambda.sup_norm() * z.norm() / levels;
                table.rows.push_back({eps, 0.0, "simple_error_M" + std::to_string(levels), err});
                if (err > bound * (1.0 + 1e-12)) {
                    table.checks.push_back({"simple approximation bound, M=" + std::to_string(levels), false,
                                            number_tag(err) + " > " + number_tag(bound)});
                }
            }
        }
    }
    return emit(table, cfg, "check", opts.out_dir, "");
}

int plot(const std::string& csv, const std::string& metric, const std::string& out) {
    const auto table = qcl::read_csv(csv);
    qcl::write_text(qcl::svg_loglog(qcl::metric_series(table, metric), metric + " vs epsilon", "epsilon", metric), out);
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qclab: quasi-classical limits of particle-field systems"};
    app.require_subcommand(1);
    CommonOptions opts;
    auto* micro_cmd = app.add_subcommand("simulate-micro", "propagate the microscopic state and write checkpoints");
    auto* qc_cmd = app.add_subcommand("simulate-qc", "evolve the limiting measure along the quasi-classical flow");
    auto* compare_cmd = app.add_subcommand("compare", "run the epsilon sweep and measure quasi-classical distances");
    auto* heis_cmd = app.add_subcommand("heisenberg", "compare Wick observables with their classical counterparts");
    auto* check_cmd = app.add_subcommand("check", "assumption and invariant checks on the initial data");
    for (auto* cmd : {micro_cmd, qc_cmd, compare_cmd, heis_cmd, check_cmd}) {
        add_common(cmd, opts);
    }
    std::string csv;
    std::string metric = "qc_distance";
    std::string out = "plot.svg";
    auto* plot_cmd = app.add_subcommand("plot", "log-log SVG of a metric against epsilon from a results CSV");
    plot_cmd->add_option("csv", csv, "results CSV")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("-m,--metric", metric, "metric column value to plot");
    plot_cmd->add_option("-o,--out", out, "output SVG path");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*micro_cmd) return simulate_micro(opts);
        if (*qc_cmd) return simulate_qc(opts);
        if (*compare_cmd) return compare(opts);
        if (*heis_cmd) return heisenberg(opts);
        if (*check_cmd) return check(opts);
        if (*plot_cmd) return plot(csv, metric, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
