// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/micro_dynamics.hpp"
#include "qcl/qc_dynamics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcl {

struct ParticleStateSpec {
    enum class Kind { gaussian, k0_eigenstate };
    Kind kind = Kind::gaussian;
    /// Gaussian packet exp(-|x - center|^2 / (4 width^2) + i momentum.x), per axis.
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    /// Index into the energy-sorted eigenvectors of K0.
    int index = 0;
};

struct InitialStateSpec {
    enum class Kind { coherent_product, coherent_superposition, loss_of_mass };
    Kind kind = Kind::coherent_product;
    ParticleStateSpec particle;
    /// (amplitude, z0) pairs; a product state has exactly one.
    std::vector<std::pair<cplx, FieldVector>> components;
};

struct TruncationSpec {
    int min_quanta = 16;
    /// Target bound C on <dG_eps(1)>; defaults to max |z0|^2.
    std::optional<double> moment_bound;
    double safety_factor = 4.0;
    std::uint64_t dimension_cap = FockBasis::kDefaultDimensionCap;
};

struct PropagationSpec {
    PropagatorConfig qc;
    double micro_dt = 0.1;
    KrylovOptions krylov;
};

struct HeisenbergSpec {
    /// "nelson" (l + m = 1 terms) or "density" (<z, lambda><lambda, z>, l + m = 2).
    std::string symbol = "nelson";
    /// Observable names: "identity" or "projector:<j>" (j-th K0 eigenvector).
    std::string s = "projector:0";
    std::string t = "identity";
    /// Moment regularity delta of the initial states.
    double moment_regularity = 1.0;
};

struct ExperimentConfig {
    ModelConfig model;
    InitialStateSpec initial;
    std::vector<double> epsilon_list;
    std::vector<double> times;
    std::vector<FieldVector> eta_set;
    int projector_count = 8;
    bool include_identity = true;
    TruncationSpec truncation;
    PropagationSpec propagation;
    HeisenbergSpec heisenberg;
    std::vector<double> prop12_deltas{0.5, 1.0};
    int pik_max_k = 2;
    double superposition_overlap_max = 1e-3;
    std::uint64_t seed = 0;
    /// The parsed JSON (after seed override), the source of the config hash.
    nlohmann::json source;
    std::uint64_t hash = 0;

    void validate() const;
};

/// Parses an experiment config. Random eta sets are drawn from `seed` (or the
/// config's own seed when absent).
[[nodiscard]] ExperimentConfig experiment_from_json(const nlohmann::json& j, std::optional<std::uint64_t> seed = {});
[[nodiscard]] ExperimentConfig load_experiment(const std::string& path, std::optional<std::uint64_t> seed = {});

[[nodiscard]] ModelConfig model_from_json(const nlohmann::json& j);

/// Energy-sorted eigenvectors of K0 (columns).
[[nodiscard]] CMat k0_eigenvectors(const ModelConfig& model);

/// Particle wavefunction from a spec, normalized.
[[nodiscard]] CVec build_particle_state(const ModelConfig& model, const ParticleStateSpec& spec);

struct InitialState {
    FockBasis basis;
    HybridState micro;
    /// Known eps -> 0 limit of the initial state.
    StateValuedMeasure limit;
    double mass_defect = 0.0;
};

/// Microscopic state at `epsilon` together with its limiting measure.
[[nodiscard]] InitialState build_initial_state(const ExperimentConfig& cfg, double epsilon);

/// The model of `cfg` at a particular epsilon.
[[nodiscard]] ModelConfig model_at(const ExperimentConfig& cfg, double epsilon);

/// Rank-one projectors onto the lowest `projector_count` K0 eigenvectors, plus identity if requested.
[[nodiscard]] std::vector<CMat> observable_set(const ExperimentConfig& cfg, bool include_identity);

/// max over eta, B of |tr((micro(eta) - m_hat(eta)) B)|; micro_transforms[i] belongs to etas[i].
[[nodiscard]] double qc_distance(const std::vector<CMat>& micro_transforms, const StateValuedMeasure& m_t,
                                 const std::vector<FieldVector>& etas, const std::vector<CMat>& observables);
[[nodiscard]] double qc_distance(const HybridState& micro, const FockBasis& basis, const StateValuedMeasure& m_t,
                                 const std::vector<FieldVector>& etas, const std::vector<CMat>& observables);

struct ResultRow {
    double epsilon = 0.0;
    double t = 0.0;
    std::string metric;
    double value = 0.0;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ResultTable {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::vector<ResultRow> rows;
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;

    [[nodiscard]] bool all_passed() const;
    /// Values of `metric` at time t, in epsilon_list order.
    [[nodiscard]] std::vector<double> series(const std::string& metric, double t) const;
};

/// Micro propagation, quasi-classical evolution and distance for every (eps, t).
[[nodiscard]] ResultTable run_convergence_experiment(const ExperimentConfig& cfg, int threads = 1);

/// Tr(Gamma_eps(t) T Op(F) S) against tr(int dm_t T F(z) S) for every (eps, t).
[[nodiscard]] ResultTable run_heisenberg_experiment(const ExperimentConfig& cfg, const PolynomialSymbol& symbol,
                                                    const CMat& s, const CMat& t, int threads = 1);

/// Symbol and observables named in cfg.heisenberg.
[[nodiscard]] PolynomialSymbol heisenberg_symbol(const ExperimentConfig& cfg);
[[nodiscard]] CMat named_observable(const ExperimentConfig& cfg, const std::string& name);

/// True when the sequence decreases strictly.
[[nodiscard]] bool strictly_decreasing(const std::vector<double>& values);

}  // namespace qcl
