// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/harness.hpp"

#include "qcl/checkpoint.hpp"
#include "qcl/report.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>

using namespace qcl;
using qcl::testing::max_abs_diff;

namespace {

nlohmann::json small_config() {
    return nlohmann::json::parse(R"({
      "model": {
        "grid": {"dimension": 1, "points_per_axis": 8, "box_length": 6.283185307179586, "num_particles": 1},
        "wave_numbers": [1, -1],
        "omega": [1.0, 1.0],
        "lambda0": [0.5, 0.5],
        "nu_regime": "free",
        "coupling": "nelson"
      },
      "initial_state": {
        "kind": "coherent_product",
        "particle": {"kind": "gaussian", "center": 3.0, "width": 0.6, "momentum": 1.0},
        "z0": [[0.5, 0.0], [0.0, 0.3]]
      },
      "epsilon_list": [0.4, 0.2],
      "times": [0.0, 0.25],
      "eta_test_set": {"random": 3, "scale": 1.0, "include_zero": true},
      "observables": {"projectors": 4, "include_identity": true},
      "truncation": {"min_quanta": 8, "safety_factor": 4.0},
      "propagation": {"qc_dt": 0.01, "micro_dt": 0.1},
      "seed": 7
    })");
}

}  // namespace

TEST_CASE("config parsing fills defaults and validates") {
    const ExperimentConfig cfg = experiment_from_json(small_config());
    CHECK(cfg.model.grid.size() == 8);
    CHECK(cfg.model.num_modes() == 2);
    CHECK(cfg.eta_set.size() == 4);
    CHECK(cfg.eta_set.front().norm() == 0.0);
    CHECK(cfg.seed == 7);
    CHECK(cfg.propagation.krylov.krylov_dim == 30);
    CHECK(experiment_from_json(small_config(), 9).seed == 9);
    CHECK(experiment_from_json(small_config()).hash == cfg.hash);
    CHECK(experiment_from_json(small_config(), 9).hash != cfg.hash);

    auto bad = small_config();
    bad["epsilon_list"] = {0.2, 0.4};
    CHECK_THROWS_AS(experiment_from_json(bad), PreconditionError);
    bad = small_config();
    bad["times"] = nlohmann::json::array();
    CHECK_THROWS_AS(experiment_from_json(bad), PreconditionError);
    bad = small_config();
    bad["initial_state"]["z0"] = {{0.5, 0.0}};
    CHECK_THROWS_AS(experiment_from_json(bad), DimensionError);
    bad = small_config();
    bad["observables"]["projectors"] = 9;
    CHECK_THROWS_AS(experiment_from_json(bad), PreconditionError);
    bad = small_config();
    bad["initial_state"]["kind"] = "thermal";
    CHECK_THROWS_AS(experiment_from_json(bad), PreconditionError);
    CHECK_THROWS_AS(load_experiment("/nonexistent/config.json"), Error);
}

TEST_CASE("initial states: vacuum product, loss of mass and superposition") {
    auto j = small_config();
    j["initial_state"]["z0"] = {{0.0, 0.0}, {0.0, 0.0}};
    InitialState vac = build_initial_state(experiment_from_json(j), 0.2);
    CHECK(std::abs(number_moment(vac.micro, vac.basis, 1.0) - 1.0) < 1e-14);
    CHECK(vac.limit.total_mass() == 1.0);

    j = small_config();
    j["initial_state"] = {{"kind", "loss_of_mass"}, {"n_of_epsilon", "floor_inverse"}};
    const ExperimentConfig lom = experiment_from_json(j);
    const InitialState lost = build_initial_state(lom, 0.2);
    CHECK(lost.limit.total_mass() == 0.0);
    const CMat gamma = partial_trace_field(lost.micro);
    const CVec v5 = k0_eigenvectors(lom.model).col(5);
    CHECK(std::abs(v5.dot(gamma * v5).real() - 1.0) < 1e-12);
    CHECK_THROWS_AS(build_initial_state(lom, 0.1), PreconditionError);

    j = small_config();
    j["initial_state"] = nlohmann::json::parse(R"({
      "kind": "coherent_superposition",
      "particle": {"kind": "k0_eigenstate", "index": 0},
      "components": [{"amplitude": [0.7071067811865476, 0.0], "z0": [[1.5, 0.0], [0.0, 0.0]]},
                     {"amplitude": [0.7071067811865476, 0.0], "z0": [[-1.5, 0.0], [0.0, 0.0]]}]
    })");
    j["epsilon_list"] = {0.2, 0.1};
    j["truncation"]["moment_bound"] = 1.2;
    const InitialState sup = build_initial_state(experiment_from_json(j), 0.2);
    REQUIRE(sup.limit.size() == 2);
    CHECK(std::abs(sup.limit.samples()[0].weight - 0.5) < 1e-15);
    CHECK(std::abs(sup.limit.total_mass() - 1.0) < 1e-15);
    CHECK(std::abs(sup.micro.components()[0].vector.norm() - 1.0) < 1e-14);

    j["initial_state"]["components"][1]["z0"] = {{1.4, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(build_initial_state(experiment_from_json(j), 0.2), PreconditionError);
}

TEST_CASE("qc_distance vanishes on the exact reduction") {
    const ExperimentConfig cfg = experiment_from_json(small_config());
    const InitialState init = build_initial_state(cfg, 0.4);
    const CMat gamma = partial_trace_field(init.micro);
    std::vector<CMat> transforms;
    for (const auto& eta : cfg.eta_set) {
        transforms.push_back(fourier_transform(init.limit, eta));
    }
    CHECK(qc_distance(transforms, init.limit, cfg.eta_set, observable_set(cfg, true)) == 0.0);
    // eta = 0 only: the micro transform is the reduced density matrix, the limit is the same particle state
    const std::vector<FieldVector> zero{FieldVector(2)};
    CHECK(qc_distance(init.micro, init.basis, init.limit, zero, observable_set(cfg, true)) < 1e-12);
    CHECK(max_abs_diff(gamma, init.limit.samples()[0].state) < 1e-12);
    CHECK_THROWS_AS(qc_distance(transforms, init.limit, zero, observable_set(cfg, true)), PreconditionError);
}

TEST_CASE("convergence run: rows, t = 0 and bit-exact reproducibility") {
    const ExperimentConfig cfg = experiment_from_json(small_config());
    const ResultTable a = run_convergence_experiment(cfg, 1);
    const ResultTable b = run_convergence_experiment(cfg, 2);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].metric == b.rows[i].metric);
        CHECK(a.rows[i].value == b.rows[i].value);
    }
    CHECK(a.series("qc_distance", 0.0).size() == 2);
    CHECK(a.series("qc_mass", 0.25) == std::vector<double>{1.0, 1.0});
    for (const double d : a.series("micro_norm_drift", 0.25)) {
        CHECK(d < 1e-10);
    }
    CHECK(a.config_hash == cfg.hash);
}

TEST_CASE("report CSV round trip and JSON provenance") {
    ResultTable table;
    table.config_hash = 0x1234;
    table.seed = 99;
    table.rows = {{0.4, 0.0, "qc_distance", 0.1234567890123456789}, {0.2, 0.5, "pik_k1", 1e-17}};
    table.checks = {{"demo", true, ""}};
    const std::string path = (std::filesystem::temp_directory_path() / "qclab_test_report.csv").string();
    write_csv(table, path);
    const ResultTable back = read_csv(path);
    std::filesystem::remove(path);
    CHECK(back.config_hash == table.config_hash);
    CHECK(back.seed == table.seed);
    REQUIRE(back.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.rows[i].epsilon == table.rows[i].epsilon);
        CHECK(back.rows[i].t == table.rows[i].t);
        CHECK(back.rows[i].metric == table.rows[i].metric);
        CHECK(back.rows[i].value == table.rows[i].value);
    }
    const auto j = table_to_json(table, small_config(), "simulate-qc");
    CHECK(j.at("provenance").at("config_hash") == hash_hex(0x1234));
    CHECK(j.at("provenance").at("command") == "simulate-qc");
    CHECK(j.at("all_passed") == true);
    CHECK(j.at("rows").size() == 2);
    CHECK(svg_loglog(metric_series(table, "qc_distance"), "d", "eps", "d").find("<svg") != std::string::npos);
}

TEST_CASE("Heisenberg run with zero coupling has both sides zero") {
    auto j = small_config();
    j["model"]["lambda0"] = {0.0, 0.0};
    j["times"] = {0.0, 0.5};
    const ExperimentConfig cfg = experiment_from_json(j);
    const ResultTable table = run_heisenberg_experiment(cfg, heisenberg_symbol(cfg), named_observable(cfg, "projector:0"),
                                                        named_observable(cfg, "identity"));
    for (const auto& row : table.rows) {
        CHECK(std::abs(row.value) < 1e-14);
    }
    CHECK(table.all_passed());
    CHECK_THROWS_AS(named_observable(cfg, "projector:99"), PreconditionError);
    CHECK_THROWS_AS(named_observable(cfg, "momentum"), PreconditionError);
}

TEST_CASE("strictly_decreasing") {
    CHECK(strictly_decreasing({3.0, 2.0, 1.0}));
    CHECK_FALSE(strictly_decreasing({3.0, 3.0, 1.0}));
    CHECK(strictly_decreasing({}));
}
