// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/harness.hpp"

#include "qcl/checkpoint.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace qcl {

namespace {

cplx complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

CVec complex_list_from_json(const nlohmann::json& j) {
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    }
    return v;
}

ParticleStateSpec particle_from_json(const nlohmann::json& j) {
    ParticleStateSpec p;
    const std::string kind = j.value("kind", "gaussian");
    if (kind == "gaussian") {
        p.kind = ParticleStateSpec::Kind::gaussian;
        p.center = j.value("center", 0.0);
        p.width = j.value("width", 1.0);
        p.momentum = j.value("momentum", 0.0);
    } else if (kind == "k0_eigenstate") {
        p.kind = ParticleStateSpec::Kind::k0_eigenstate;
        p.index = j.value("index", 0);
    } else {
        throw PreconditionError("unknown particle state kind '" + kind + "'");
    }
    return p;
}

std::vector<FieldVector> eta_set_from_json(const nlohmann::json& j, int modes, std::uint64_t seed) {
    std::vector<FieldVector> out;
    if (j.contains("explicit")) {
        for (const auto& e : j.at("explicit")) {
            out.emplace_back(complex_list_from_json(e));
        }
        return out;
    }
    if (j.value("include_zero", true)) {
        out.emplace_back(CVec::Zero(modes));
    }
    const int count = j.value("random", 9);
    const double scale = j.value("scale", 1.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale / std::sqrt(2.0));
    for (int i = 0; i < count; ++i) {
        CVec v(modes);
        for (int k = 0; k < modes; ++k) {
            const double re = normal(rng);
            const double im = normal(rng);
            v(k) = cplx(re, im);
        }
        out.emplace_back(std::move(v));
    }
    return out;
}

bool near(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

ModelConfig model_from_json(const nlohmann::json& j) {
    ModelConfig m;
    const auto& g = j.at("grid");
    m.grid.dimension = g.value("dimension", 1);
    m.grid.points_per_axis = g.at("points_per_axis").get<int>();
    m.grid.box_length = g.at("box_length").get<double>();
    m.grid.num_particles = g.value("num_particles", 1);
    const auto& k = j.at("wave_numbers");
    m.wave_numbers.resize(static_cast<Eigen::Index>(k.size()), m.grid.dimension);
    for (std::size_t r = 0; r < k.size(); ++r) {
        const auto& row = k[r].is_array() ? k[r] : nlohmann::json::array({k[r]});
        if (static_cast<int>(row.size()) != m.grid.dimension) {
            throw DimensionError("model: each wave number needs one entry per dimension");
        }
        for (int a = 0; a < m.grid.dimension; ++a) {
            m.wave_numbers(static_cast<Eigen::Index>(r), a) = row[static_cast<std::size_t>(a)].get<double>();
        }
    }
    const auto omega = j.at("omega").get<std::vector<double>>();
    m.omega = Eigen::Map<const RVec>(omega.data(), static_cast<Eigen::Index>(omega.size()));
    m.lambda0 = complex_list_from_json(j.at("lambda0"));
    m.nu_regime = nu_regime_from_string(j.value("nu_regime", "constant"));
    m.epsilon = j.value("epsilon", 0.1);
    m.trap_strength = j.value("trap_strength", 0.0);
    m.coupling = coupling_from_string(j.value("coupling", "nelson"));
    m.polaron_cutoff = j.value("polaron_cutoff", 1.0);
    m.polaron_alpha = j.value("polaron_alpha", 1.0);
    m.validate();
    return m;
}

void ExperimentConfig::validate() const {
    model.validate();
    if (epsilon_list.empty()) {
        throw PreconditionError("experiment: epsilon_list is empty");
    }
    for (std::size_t i = 0; i < epsilon_list.size(); ++i) {
        if (!(epsilon_list[i] > 0.0)) {
            throw PreconditionError("experiment: epsilon values must be positive");
        }
        if (i > 0 && !(epsilon_list[i] < epsilon_list[i - 1])) {
            throw PreconditionError("experiment: epsilon_list must be strictly decreasing");
        }
    }
    if (times.empty()) {
        throw PreconditionError("experiment: times is empty");
    }
    for (const double t : times) {
        if (!std::isfinite(t)) {
            throw PreconditionError("experiment: times must be finite");
        }
    }
    if (eta_set.empty()) {
        throw PreconditionError("experiment: eta test set is empty");
    }
    for (const auto& eta : eta_set) {
        if (eta.size() != model.num_modes()) {
            throw DimensionError("experiment: eta vector has the wrong mode count");
        }
    }
    if (projector_count < 0 || (projector_count == 0 && !include_identity)) {
        throw PreconditionError("experiment: observable set is empty");
    }
    if (projector_count > model.grid.size()) {
        throw PreconditionError("experiment: more projectors than particle states");
    }
    if (initial.kind != InitialStateSpec::Kind::loss_of_mass && initial.components.empty()) {
        throw PreconditionError("experiment: initial state needs at least one coherent component");
    }
    for (const auto& [amp, z] : initial.components) {
        if (z.size() != model.num_modes()) {
            throw DimensionError("experiment: z0 has the wrong mode count");
        }
    }
}

ExperimentConfig experiment_from_json(const nlohmann::json& input, std::optional<std::uint64_t> seed) {
    nlohmann::json j = input;
    if (seed) {
        j["seed"] = *seed;
    }
    ExperimentConfig cfg;
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.model = model_from_json(j.at("model"));
    const int modes = cfg.model.num_modes();

    const auto& init = j.at("initial_state");
    const std::string kind = init.at("kind").get<std::string>();
    if (init.contains("particle")) {
        cfg.initial.particle = particle_from_json(init.at("particle"));
    }
    if (kind == "coherent_product") {
        cfg.initial.kind = InitialStateSpec::Kind::coherent_product;
        cfg.initial.components.emplace_back(cplx(1.0), FieldVector(complex_list_from_json(init.at("z0"))));
    } else if (kind == "coherent_superposition") {
        cfg.initial.kind = InitialStateSpec::Kind::coherent_superposition;
        for (const auto& c : init.at("components")) {
            cfg.initial.components.emplace_back(complex_from_json(c.at("amplitude")),
                                                FieldVector(complex_list_from_json(c.at("z0"))));
        }
    } else if (kind == "loss_of_mass") {
        cfg.initial.kind = InitialStateSpec::Kind::loss_of_mass;
        const CVec z0 = init.contains("z0") ? complex_list_from_json(init.at("z0")) : CVec(CVec::Zero(modes));
        cfg.initial.components.emplace_back(cplx(1.0), FieldVector(z0));
        const std::string rule = init.value("n_of_epsilon", "floor_inverse");
        if (rule != "floor_inverse") {
            throw PreconditionError("loss_of_mass: only the floor_inverse rule n = floor(1/eps) is supported");
        }
    } else {
        throw PreconditionError("unknown initial state kind '" + kind + "'");
    }

    cfg.epsilon_list = j.at("epsilon_list").get<std::vector<double>>();
    cfg.times = j.at("times").get<std::vector<double>>();
    cfg.eta_set = eta_set_from_json(j.value("eta_test_set", nlohmann::json::object()), modes, cfg.seed);

    const auto obs = j.value("observables", nlohmann::json::object());
    cfg.projector_count = obs.value("projectors", 8);
    cfg.include_identity = obs.value("include_identity", true);

    const auto trunc = j.value("truncation", nlohmann::json::object());
    cfg.truncation.min_quanta = trunc.value("min_quanta", 16);
    if (trunc.contains("moment_bound") && !trunc.at("moment_bound").is_null()) {
        cfg.truncation.moment_bound = trunc.at("moment_bound").get<double>();
    }
    cfg.truncation.safety_factor = trunc.value("safety_factor", 4.0);
    cfg.truncation.dimension_cap = trunc.value("dimension_cap", FockBasis::kDefaultDimensionCap);

    const auto prop = j.value("propagation", nlohmann::json::object());
    cfg.propagation.qc.dt = prop.value("qc_dt", 1e-3);
    cfg.propagation.qc.integrator = integrator_from_string(prop.value("integrator", "magnus2"));
    cfg.propagation.micro_dt = prop.value("micro_dt", 0.1);
    cfg.propagation.krylov.krylov_dim = prop.value("krylov_dim", 30);
    cfg.propagation.krylov.tolerance = prop.value("krylov_tol", 1e-12);
    cfg.propagation.krylov.dt_min = prop.value("krylov_dt_min", 1e-9);

    const auto heis = j.value("heisenberg", nlohmann::json::object());
    cfg.heisenberg.symbol = heis.value("symbol", "nelson");
    cfg.heisenberg.s = heis.value("S", "projector:0");
    cfg.heisenberg.t = heis.value("T", "identity");
    cfg.heisenberg.moment_regularity = heis.value("moment_regularity", 1.0);

    cfg.prop12_deltas = j.value("prop12_deltas", std::vector<double>{0.5, 1.0});
    cfg.pik_max_k = j.value("pik_max_k", 2);
    cfg.superposition_overlap_max = j.value("superposition_overlap_max", 1e-3);
    cfg.source = j;
    cfg.hash = config_hash(j);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment(const std::string& path, std::optional<std::uint64_t> seed) {
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open config file " + path);
    }
    return experiment_from_json(nlohmann::json::parse(is), seed);
}

CMat k0_eigenvectors(const ModelConfig& model) {
    Eigen::SelfAdjointEigenSolver<CMat> solver(build_K0(model).dense());
    return solver.eigenvectors();
}

CVec build_particle_state(const ModelConfig& model, const ParticleStateSpec& spec) {
    const ParticleGrid& grid = model.grid;
    if (spec.kind == ParticleStateSpec::Kind::k0_eigenstate) {
        const CMat vectors = k0_eigenvectors(model);
        if (spec.index < 0 || spec.index >= vectors.cols()) {
            throw PreconditionError("particle state: eigenvector index out of range");
        }
        return vectors.col(spec.index);
    }
    if (!(spec.width > 0.0)) {
        throw PreconditionError("particle state: gaussian width must be positive");
    }
    CVec single(grid.single_size());
    for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
        const RVec x = grid.position(s);
        double exponent = 0.0;
        double phase = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            double dx = x(a) - spec.center;
            dx -= grid.box_length * std::round(dx / grid.box_length);
            exponent -= dx * dx / (4.0 * spec.width * spec.width);
            phase += spec.momentum * x(a);
        }
        single(s) = std::polar(std::exp(exponent), phase);
    }
    single.normalize();
    // all particles in the same packet
    CVec joint = single;
    for (int j = 1; j < grid.num_particles; ++j) {
        CVec next(joint.size() * single.size());
        for (Eigen::Index i = 0; i < joint.size(); ++i) {
            next.segment(i * single.size(), single.size()) = joint(i) * single;
        }
        joint = std::move(next);
    }
    return joint;
}

ModelConfig model_at(const ExperimentConfig& cfg, double epsilon) {
    ModelConfig m = cfg.model;
    m.epsilon = epsilon;
    return m;
}

InitialState build_initial_state(const ExperimentConfig& cfg, double epsilon) {
    const ModelConfig model = model_at(cfg, epsilon);
    double bound = 0.0;
    for (const auto& [amp, z] : cfg.initial.components) {
        bound = std::max(bound, z.squared_norm());
    }
    if (cfg.truncation.moment_bound) {
        bound = *cfg.truncation.moment_bound;
    }
    const int cap = recommended_quanta_cap(bound, epsilon, cfg.truncation.min_quanta);
    FockBasis basis(FockSpec{model.num_modes(), cap, epsilon}, cfg.truncation.dimension_cap);

    CVec particle;
    if (cfg.initial.kind == InitialStateSpec::Kind::loss_of_mass) {
        const auto n = static_cast<int>(std::floor(1.0 / epsilon));
        const CMat vectors = k0_eigenvectors(model);
        if (n >= vectors.cols()) {
            throw PreconditionError("loss_of_mass: n(eps) = " + std::to_string(n) + " exceeds the particle dimension");
        }
        particle = vectors.col(n);
    } else {
        particle = build_particle_state(model, cfg.initial.particle);
    }
    const CMat gamma = particle * particle.adjoint();

    double defect = 0.0;
    CVec field = CVec::Zero(basis.dimension());
    std::vector<Sample> atoms;
    double amplitude_mass = 0.0;
    for (const auto& [amp, z] : cfg.initial.components) {
        amplitude_mass += std::norm(amp);
    }
    if (cfg.initial.kind == InitialStateSpec::Kind::coherent_superposition) {
        const double eps_max = cfg.epsilon_list.front();
        for (std::size_t a = 0; a < cfg.initial.components.size(); ++a) {
            for (std::size_t b = a + 1; b < cfg.initial.components.size(); ++b) {
                const double gap2 = (cfg.initial.components[a].second - cfg.initial.components[b].second).squared_norm();
                if (std::exp(-gap2 / (4.0 * eps_max)) > cfg.superposition_overlap_max) {
                    throw PreconditionError("coherent_superposition: points too close for the limit measure to be identified");
                }
            }
        }
    }
    for (const auto& [amp, z] : cfg.initial.components) {
        const CoherentState cs = coherent_state(basis, z, cfg.truncation.safety_factor);
        defect = std::max(defect, cs.mass_defect);
        field += amp * cs.vector;
        if (cfg.initial.kind != InitialStateSpec::Kind::loss_of_mass) {
            atoms.push_back(Sample{std::norm(amp) / amplitude_mass, z, gamma});
        }
    }
    field.normalize();

    StateValuedMeasure limit = atoms.empty() ? StateValuedMeasure::zero(model.grid.size(), model.num_modes())
                                             : StateValuedMeasure(std::move(atoms));
    HybridState micro = HybridState::product(particle, field);
    return InitialState{std::move(basis), std::move(micro), std::move(limit), defect};
}

std::vector<CMat> observable_set(const ExperimentConfig& cfg, bool include_identity) {
    std::vector<CMat> out;
    const CMat vectors = k0_eigenvectors(cfg.model);
    for (int j = 0; j < cfg.projector_count; ++j) {
        out.push_back(vectors.col(j) * vectors.col(j).adjoint());
    }
    if (include_identity) {
        out.push_back(CMat::Identity(vectors.rows(), vectors.rows()));
    }
    return out;
}

double qc_distance(const std::vector<CMat>& micro_transforms, const StateValuedMeasure& m_t,
                   const std::vector<FieldVector>& etas, const std::vector<CMat>& observables) {
    if (micro_transforms.size() != etas.size() || etas.empty() || observables.empty()) {
        throw PreconditionError("qc_distance: need one transform per eta and nonempty test sets");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < etas.size(); ++i) {
        const CMat diff = micro_transforms[i] - fourier_transform(m_t, etas[i]);
        for (const auto& b : observables) {
            worst = std::max(worst, std::abs(diff.cwiseProduct(b.transpose()).sum()));
        }
    }
    return worst;
}

double qc_distance(const HybridState& micro, const FockBasis& basis, const StateValuedMeasure& m_t,
                   const std::vector<FieldVector>& etas, const std::vector<CMat>& observables) {
    std::vector<CMat> transforms;
    transforms.reserve(etas.size());
    for (const auto& eta : etas) {
        transforms.push_back(nc_fourier_transform(micro, basis, eta));
    }
    return qc_distance(transforms, m_t, etas, observables);
}

bool ResultTable::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<double> ResultTable::series(const std::string& metric, double t) const {
    std::vector<double> out;
    for (const auto& row : rows) {
        if (row.metric == metric && near(row.t, t)) {
            out.push_back(row.value);
        }
    }
    return out;
}

bool strictly_decreasing(const std::vector<double>& values) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] < values[i - 1])) {
            return false;
        }
    }
    return true;
}

namespace {

std::vector<double> sorted_times(const std::vector<double>& times) {
    std::vector<double> out = times;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Runs body(eps_index, rows) for each epsilon and concatenates rows in epsilon order.
std::vector<ResultRow> per_epsilon(const ExperimentConfig& cfg, int threads,
                                   const std::function<void(std::size_t, std::vector<ResultRow>&)>& body) {
    std::vector<std::vector<ResultRow>> slots(cfg.epsilon_list.size());
    parallel_for(cfg.epsilon_list.size(), threads, [&](std::size_t i) { body(i, slots[i]); });
    std::vector<ResultRow> rows;
    for (auto& s : slots) {
        rows.insert(rows.end(), s.begin(), s.end());
    }
    return rows;
}

}  // namespace

ResultTable run_convergence_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    ResultTable table;
    table.config_hash = cfg.hash;
    table.seed = cfg.seed;
    const std::vector<double> times = sorted_times(cfg.times);
    const std::vector<CMat> compact = observable_set(cfg, false);
    const std::vector<CMat> bounded = observable_set(cfg, cfg.include_identity);
    const QCGenerator gen(model_at(cfg, cfg.epsilon_list.front()));
    const CMat energy_observable =
        gen.kinetic() + CMat::Identity(gen.particle_dim(), gen.particle_dim());
    const double lambda_norm = coupling_norm(cfg.model);

    std::vector<std::string> failures;
    table.rows = per_epsilon(cfg, threads, [&](std::size_t index, std::vector<ResultRow>& rows) {
        const double eps = cfg.epsilon_list[index];
        const auto stage = [&](const std::string& name) {
            return "stage '" + name + "' (config " + hash_hex(cfg.hash) + ", eps " + format_number(eps) + ")";
        };
        InitialState init = [&] {
            try {
                return build_initial_state(cfg, eps);
            } catch (const Error& e) {
                throw Error(stage("initial state") + ": " + e.what());
            }
        }();
        const ModelConfig model = model_at(cfg, eps);
        const SpMat h = build_nelson_hamiltonian(model, init.basis).matrix;
        rows.push_back({eps, 0.0, "fock_dimension", static_cast<double>(init.basis.dimension())});
        rows.push_back({eps, 0.0, "quanta_cap", static_cast<double>(init.basis.spec().max_total_quanta)});
        rows.push_back({eps, 0.0, "coherent_mass_defect", init.mass_defect});
        rows.push_back({eps, 0.0, "limit_mass", init.limit.total_mass()});

        HybridState state = init.micro;
        double clock = 0.0;
        for (const double t : times) {
            try {
                state = propagate_micro(h, state, t - clock, cfg.propagation.micro_dt, cfg.propagation.krylov);
            } catch (const Error& e) {
                throw Error(stage("micro propagation") + ": " + e.what());
            }
            clock = t;
            StateValuedMeasure m_t;
            try {
                m_t = evolve_measure(cfg.propagation.qc, gen, init.limit, t);
            } catch (const Error& e) {
                throw Error(stage("quasi-classical evolution") + ": " + e.what());
            }
            std::vector<CMat> transforms;
            for (const auto& eta : cfg.eta_set) {
                transforms.push_back(nc_fourier_transform(state, init.basis, eta, cfg.propagation.krylov));
            }
            rows.push_back({eps, t, "qc_distance", qc_distance(transforms, m_t, cfg.eta_set, bounded)});
            if (!compact.empty()) {
                rows.push_back({eps, t, "qc_distance_compact", qc_distance(transforms, m_t, cfg.eta_set, compact)});
            }
            rows.push_back({eps, t, "qc_mass", m_t.total_mass()});
            rows.push_back({eps, t, "number_moment_1", number_moment(state, init.basis, 1.0)});
            double drift = 0.0;
            for (const auto& c : state.components()) {
                drift = std::max(drift, std::abs(c.vector.norm() - 1.0));
            }
            rows.push_back({eps, t, "micro_norm_drift", drift});
            const CMat gamma_t = partial_trace_field(state);
            rows.push_back({eps, t, "particle_energy_moment", (energy_observable * gamma_t).trace().real()});
            for (const double delta : cfg.prop12_deltas) {
                const Prop12Result r = check_prop12(init.micro, state, init.basis, model.grid.num_particles, delta, t,
                                                    lambda_norm);
                rows.push_back({eps, t, "prop12_slack_delta_" + format_number(delta), r.slack()});
                rows.push_back({eps, t, "prop12_abs_slack_delta_" + format_number(delta), r.abs_slack()});
            }
            const auto pik = check_PIK(state, init.basis, m_t, cfg.pik_max_k);
            for (std::size_t k = 1; k < pik.size(); ++k) {
                rows.push_back({eps, t, "pik_k" + std::to_string(k), pik[k]});
            }
            if (cfg.model.nu_limit() == 0.0) {
                bool frozen = m_t.size() == init.limit.size();
                for (std::size_t k = 0; frozen && k < m_t.size(); ++k) {
                    frozen = m_t.samples()[k].point == init.limit.samples()[k].point &&
                             m_t.samples()[k].weight == init.limit.samples()[k].weight;
                }
                rows.push_back({eps, t, "field_marginal_frozen", frozen ? 1.0 : 0.0});
            }
        }
    });

    const bool losing_mass = cfg.initial.kind == InitialStateSpec::Kind::loss_of_mass;
    for (const double t : times) {
        const auto d = table.series("qc_distance", t);
        if (losing_mass) {
            // the limit is the zero measure: compact tests vanish, the identity sees the lost mass
            const auto c = table.series("qc_distance_compact", t);
            table.checks.push_back({"loss of mass: compact-tested distance -> 0 at t=" + format_number(t),
                                    !c.empty() && c.back() <= 0.05, c.empty() ? "" : format_number(c.back())});
            table.checks.push_back({"loss of mass: identity-tested distance -> 1 at t=" + format_number(t),
                                    !d.empty() && std::abs(d.back() - 1.0) <= 0.05, format_number(d.back())});
        } else {
            table.checks.push_back(
                {"qc_distance strictly decreasing at t=" + format_number(t), strictly_decreasing(d), ""});
        }
        for (const auto& row : table.rows) {
            if (!near(row.t, t)) {
                continue;
            }
            if (row.metric.rfind("prop12", 0) == 0 && row.value < 0.0) {
                table.checks.push_back({"prop12 bound (" + row.metric + ", eps=" + format_number(row.epsilon) +
                                            ", t=" + format_number(t) + ")",
                                        false, "slack " + format_number(row.value)});
            }
            if (row.metric == "micro_norm_drift" && row.value > 1e-10 * std::max(1.0, std::abs(t))) {
                table.checks.push_back({"micro norm drift (eps=" + format_number(row.epsilon) + ")", false,
                                        format_number(row.value)});
            }
            if (row.metric == "field_marginal_frozen" && row.value != 1.0) {
                table.checks.push_back({"field marginal constant for nu=0", false, ""});
            }
        }
    }
    bool mass_ok = true;
    for (const auto& row : table.rows) {
        if (row.metric == "qc_mass") {
            const auto limit = std::find_if(table.rows.begin(), table.rows.end(), [&](const ResultRow& r) {
                return r.metric == "limit_mass" && r.epsilon == row.epsilon;
            });
            mass_ok = mass_ok && limit != table.rows.end() && limit->value == row.value;
        }
    }
    table.checks.push_back({"quasi-classical evolution preserves mass", mass_ok, ""});
    return table;
}

PolynomialSymbol heisenberg_symbol(const ExperimentConfig& cfg) {
    const FormFactor lambda = cfg.model.form_factor();
    if (cfg.heisenberg.symbol == "nelson") {
        return nelson_symbol(lambda);
    }
    if (cfg.heisenberg.symbol == "density") {
        return PolynomialSymbol{{SymbolSpec{{lambda}, {lambda}}}};
    }
    throw PreconditionError("unknown Heisenberg symbol '" + cfg.heisenberg.symbol + "'");
}

CMat named_observable(const ExperimentConfig& cfg, const std::string& name) {
    const Eigen::Index dim = cfg.model.grid.size();
    if (name == "identity") {
        return CMat::Identity(dim, dim);
    }
    const std::string prefix = "projector:";
    if (name.rfind(prefix, 0) == 0) {
        const int j = std::stoi(name.substr(prefix.size()));
        const CMat vectors = k0_eigenvectors(cfg.model);
        if (j < 0 || j >= vectors.cols()) {
            throw PreconditionError("observable index out of range: " + name);
        }
        return vectors.col(j) * vectors.col(j).adjoint();
    }
    throw PreconditionError("unknown observable '" + name + "'");
}

ResultTable run_heisenberg_experiment(const ExperimentConfig& cfg, const PolynomialSymbol& symbol, const CMat& s,
                                      const CMat& t_op, int threads) {
    cfg.validate();
    ResultTable table;
    table.config_hash = cfg.hash;
    table.seed = cfg.seed;
    int degree = 0;
    for (const auto& term : symbol.terms) {
        degree = std::max(degree, term.degree());
    }
    if (!(0.5 * degree < 2.0 * cfg.heisenberg.moment_regularity)) {
        table.warnings.push_back("regularity precondition (l+m)/2 < 2 delta violated; running as negative control");
    }
    const std::vector<double> times = sorted_times(cfg.times);
    const QCGenerator gen(model_at(cfg, cfg.epsilon_list.front()));

    table.rows = per_epsilon(cfg, threads, [&](std::size_t index, std::vector<ResultRow>& rows) {
        const double eps = cfg.epsilon_list[index];
        InitialState init = build_initial_state(cfg, eps);
        const ModelConfig model = model_at(cfg, eps);
        const SpMat h = build_nelson_hamiltonian(model, init.basis).matrix;
        const SpMat op = wick_quantize(symbol, init.basis, model.grid).matrix;
        HybridState state = init.micro;
        double clock = 0.0;
        for (const double t : times) {
            state = propagate_micro(h, state, t - clock, cfg.propagation.micro_dt, cfg.propagation.krylov);
            clock = t;
            cplx micro = 0.0;
            for (std::size_t i = 0; i < state.components().size(); ++i) {
                const auto x = state.columns(i);
                const CMat sx = x * s.transpose();
                const CMat tx = x * t_op.conjugate();
                const CVec op_sx = op * Eigen::Map<const CVec>(sx.data(), sx.size());
                micro += state.components()[i].probability * Eigen::Map<const CVec>(tx.data(), tx.size()).dot(op_sx);
            }
            const StateValuedMeasure m_t = evolve_measure(cfg.propagation.qc, gen, init.limit, t);
            cplx classical = 0.0;
            for (const auto& sample : m_t.samples()) {
                const CVec f = evaluate_symbol(symbol, sample.point, model.grid);
                classical += sample.weight * (sample.state * t_op * f.asDiagonal() * s).trace();
            }
            rows.push_back({eps, t, "heisenberg_micro_re", micro.real()});
            rows.push_back({eps, t, "heisenberg_qc_re", classical.real()});
            rows.push_back({eps, t, "heisenberg_discrepancy", std::abs(micro - classical)});
        }
    });

    for (const double t : times) {
        const auto d = table.series("heisenberg_discrepancy", t);
        bool ok = true;
        for (std::size_t i = 1; i < d.size(); ++i) {
            // values at the rounding floor count as converged
            ok = ok && (d[i] < d[i - 1] || d[i] <= 1e-10);
        }
        table.checks.push_back({"Heisenberg discrepancy decreasing at t=" + format_number(t), ok, ""});
    }
    return table;
}

}  // namespace qcl
