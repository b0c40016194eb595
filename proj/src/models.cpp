// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/models.hpp"

#include <cmath>

namespace qcl {

const char* to_string(NuRegime regime) noexcept {
    return regime == NuRegime::constant ? "constant" : "free";
}

NuRegime nu_regime_from_string(const std::string& name) {
    if (name == "constant") {
        return NuRegime::constant;
    }
    if (name == "free") {
        return NuRegime::free;
    }
    throw PreconditionError("unknown nu regime '" + name + "' (expected constant or free)");
}

const char* to_string(Coupling coupling) noexcept {
    switch (coupling) {
        case Coupling::nelson: return "nelson";
        case Coupling::polaron: return "polaron";
        case Coupling::pauli_fierz: return "pauli_fierz";
    }
    return "unknown";
}

Coupling coupling_from_string(const std::string& name) {
    if (name == "nelson") {
        return Coupling::nelson;
    }
    if (name == "polaron") {
        return Coupling::polaron;
    }
    if (name == "pauli_fierz") {
        return Coupling::pauli_fierz;
    }
    throw PreconditionError("unknown coupling '" + name + "'");
}

void ModelConfig::validate() const {
    grid.validate();
    const Eigen::Index m = omega.size();
    if (m < 1) {
        throw PreconditionError("ModelConfig: at least one field mode is required");
    }
    if (wave_numbers.rows() != m || wave_numbers.cols() != grid.dimension) {
        throw DimensionError("ModelConfig: wave_numbers must be modes x dimension");
    }
    if (lambda0.size() != m) {
        throw DimensionError("ModelConfig: lambda0 length must equal the mode count");
    }
    if (!(omega.array() > 0.0).all()) {
        throw PreconditionError("ModelConfig: dispersion must be strictly positive");
    }
    if (!lambda0.allFinite() || !wave_numbers.allFinite()) {
        throw PreconditionError("ModelConfig: non-finite form factor data");
    }
    if (!(epsilon > 0.0)) {
        throw PreconditionError("ModelConfig: epsilon must be positive");
    }
    if (trap_strength < 0.0) {
        throw PreconditionError("ModelConfig: trap_strength must be nonnegative");
    }
    if (!(polaron_cutoff > 0.0)) {
        throw PreconditionError("ModelConfig: polaron_cutoff must be positive");
    }
}

double ModelConfig::nu_scale() const {
    return nu_regime == NuRegime::constant ? 1.0 : 1.0 / epsilon;
}

double ModelConfig::nu_limit() const {
    return nu_regime == NuRegime::constant ? 0.0 : 1.0;
}

FormFactor ModelConfig::form_factor() const {
    return FormFactor::plane_wave(grid, wave_numbers, lambda0);
}

namespace {

// Embeds a single-particle operator as acting on particle j of N.
SpMat embed(const SpMat& single, const ParticleGrid& grid, int particle) {
    const Eigen::Index g = grid.single_size();
    Eigen::Index before = 1;
    Eigen::Index after = 1;
    for (int j = 0; j < particle; ++j) {
        before *= g;
    }
    for (int j = particle + 1; j < grid.num_particles; ++j) {
        after *= g;
    }
    SpMat out = single;
    if (before > 1) {
        out = kron(sparse_identity(before), out);
    }
    if (after > 1) {
        out = kron(out, sparse_identity(after));
    }
    return out;
}

SpMat single_laplacian(const ParticleGrid& grid, double trap) {
    const Eigen::Index g = grid.single_size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    const double centre = 0.5 * grid.box_length;
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index s = 0; s < g; ++s) {
        auto axis = grid.axis_indices(s);
        double diag = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            diag += 2.0 * inv_h2;
            for (int step : {-1, 1}) {
                auto neighbour = axis;
                neighbour[static_cast<std::size_t>(a)] += step;
                triplets.emplace_back(s, grid.site_of(neighbour), -inv_h2);
            }
        }
        if (trap > 0.0) {
            const RVec x = grid.position(s);
            diag += trap * (x.array() - centre).square().sum();
        }
        triplets.emplace_back(s, s, diag);
    }
    SpMat k(g, g);
    k.setFromTriplets(triplets.begin(), triplets.end());
    k.prune(cplx(0.0), 0.0);
    return k;
}

SpMat single_gradient(const ParticleGrid& grid, int axis_index) {
    const Eigen::Index g = grid.single_size();
    const double scale = 1.0 / (2.0 * grid.spacing());
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index s = 0; s < g; ++s) {
        auto axis = grid.axis_indices(s);
        for (int step : {-1, 1}) {
            auto neighbour = axis;
            neighbour[static_cast<std::size_t>(axis_index)] += step;
            triplets.emplace_back(s, grid.site_of(neighbour), step * scale);
        }
    }
    SpMat d(g, g);
    d.setFromTriplets(triplets.begin(), triplets.end());
    d.prune(cplx(0.0), 0.0);
    return d;
}

// Diagonal over configurations with per-site values summed over particles.
CVec site_sum(const ParticleGrid& grid, const CVec& per_site, int particle) {
    CVec out(grid.size());
    for (Eigen::Index c = 0; c < grid.size(); ++c) {
        out(c) = per_site(grid.sites(c)[static_cast<std::size_t>(particle)]);
    }
    return out;
}

}  // namespace

Operator build_K0(const ModelConfig& cfg) {
    cfg.grid.validate();
    const SpMat single = single_laplacian(cfg.grid, cfg.trap_strength);
    SpMat total(cfg.grid.size(), cfg.grid.size());
    for (int j = 0; j < cfg.grid.num_particles; ++j) {
        total += embed(single, cfg.grid, j);
    }
    return Operator{std::move(total), Space::particle, true, false};
}

SpMat gradient_matrix(const ParticleGrid& grid, int particle, int axis) {
    if (particle < 0 || particle >= grid.num_particles || axis < 0 || axis >= grid.dimension) {
        throw DimensionError("gradient_matrix: particle or axis out of range");
    }
    return embed(single_gradient(grid, axis), grid, particle);
}

Operator build_nelson_hamiltonian(const ModelConfig& cfg, const FockBasis& basis) {
    cfg.validate();
    if (basis.num_modes() != cfg.num_modes()) {
        throw DimensionError("build_nelson_hamiltonian: basis and model mode counts differ");
    }
    if (std::abs(basis.epsilon() - cfg.epsilon) > 1e-15 * cfg.epsilon) {
        throw PreconditionError("build_nelson_hamiltonian: basis and model use different epsilon");
    }
    const SpMat k0 = build_K0(cfg).matrix;
    const SpMat field = second_quantize(basis, cfg.omega).matrix;
    SpMat h = kron(k0, sparse_identity(basis.dimension()));
    h += cfg.nu_scale() * kron(sparse_identity(cfg.grid.size()), field);
    h += wick_quantize(nelson_symbol(cfg.form_factor()), basis, cfg.grid).matrix;
    h.prune(cplx(0.0), 0.0);
    return Operator{std::move(h), Space::joint, true, false};
}

FieldVector classical_field_flow(const ModelConfig& cfg, const FieldVector& z, double t) {
    if (z.size() != cfg.num_modes()) {
        throw DimensionError("classical_field_flow: field vector has the wrong mode count");
    }
    if (cfg.nu_limit() == 0.0) {
        return z;
    }
    CVec out(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        out(k) = std::exp(cplx(0.0, -t * cfg.nu_limit() * cfg.omega(k))) * z[k];
    }
    return FieldVector(std::move(out));
}

CVec effective_potential(const ModelConfig& cfg, const FieldVector& z, double t) {
    return evaluate_symbol(nelson_symbol(cfg.form_factor()), classical_field_flow(cfg, z, t), cfg.grid);
}

SpMat polaron_effective_potential(const ModelConfig& cfg, const FieldVector& z) {
    cfg.validate();
    const ParticleGrid& grid = cfg.grid;
    const int d = grid.dimension;
    const Eigen::Index modes = cfg.num_modes();
    CVec inner_part = CVec::Zero(modes);
    CVec outer_part = CVec::Zero(modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        const double knorm = cfg.wave_numbers.row(k).norm();
        if (knorm == 0.0 && d > 1) {
            throw PreconditionError("polaron_effective_potential: zero wave number in d > 1");
        }
        const cplx coefficient = cfg.polaron_alpha * cfg.lambda0(k) / std::pow(knorm, 0.5 * (d - 1));
        (knorm <= cfg.polaron_cutoff ? inner_part : outer_part)(k) = coefficient;
    }
    const FormFactor phi_r = FormFactor::plane_wave(grid, cfg.wave_numbers, inner_part);
    CVec phi_values(grid.single_size());
    for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
        phi_values(s) = 2.0 * inner(z, phi_r.at(s)).real();
    }

    SpMat v(grid.size(), grid.size());
    for (int j = 0; j < grid.num_particles; ++j) {
        v += diagonal_sparse(site_sum(grid, phi_values, j));
        for (int a = 0; a < d; ++a) {
            CVec lambda_a = CVec::Zero(modes);
            for (Eigen::Index k = 0; k < modes; ++k) {
                const double k2 = cfg.wave_numbers.row(k).squaredNorm();
                if (outer_part(k) != cplx(0.0)) {
                    lambda_a(k) = cfg.wave_numbers(k, a) / k2 * outer_part(k);
                }
            }
            const FormFactor lam = FormFactor::plane_wave(grid, cfg.wave_numbers, lambda_a);
            CVec g_values(grid.single_size());
            for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
                g_values(s) = inner(lam.at(s), z).imag();
            }
            const SpMat g = diagonal_sparse(site_sum(grid, g_values, j));
            const SpMat grad = gradient_matrix(grid, j, a);
            // [-i grad, 2i G] = 2 (grad G - G grad)
            v += 2.0 * (SpMat(grad * g) - SpMat(g * grad));
        }
    }
    v.prune(cplx(0.0), 0.0);
    return v;
}

std::vector<FormFactor> pauli_fierz_form_factors(const ModelConfig& cfg) {
    cfg.validate();
    const int d = cfg.grid.dimension;
    const Eigen::Index modes = cfg.num_modes();
    std::vector<FormFactor> out;
    if (d == 1) {
        out.push_back(cfg.form_factor());
        return out;
    }
    Eigen::MatrixXd polarization(modes, d);
    for (Eigen::Index k = 0; k < modes; ++k) {
        const Eigen::VectorXd kv = cfg.wave_numbers.row(k).transpose();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        if (d == 2) {
            e << -kv(1), kv(0);
        } else {
            Eigen::Vector3d k3 = kv.head<3>();
            Eigen::Vector3d ref = Eigen::Vector3d::UnitZ();
            if (k3.cross(ref).norm() < 1e-12 * std::max(1.0, k3.norm())) {
                ref = Eigen::Vector3d::UnitX();
            }
            e.head<3>() = k3.cross(ref);
        }
        if (e.norm() == 0.0) {
            e(0) = 1.0;
        }
        polarization.row(k) = e.normalized().transpose();
    }
    for (int a = 0; a < d; ++a) {
        const CVec profile = cfg.lambda0.cwiseProduct(polarization.col(a).cast<cplx>());
        out.push_back(FormFactor::plane_wave(cfg.grid, cfg.wave_numbers, profile));
    }
    return out;
}

SpMat pauli_fierz_effective_potential(const ParticleGrid& grid, const std::vector<FormFactor>& components,
                                      const FieldVector& z) {
    grid.validate();
    if (static_cast<int>(components.size()) != grid.dimension) {
        throw DimensionError("pauli_fierz_effective_potential: need one form factor per axis");
    }
    SpMat v(grid.size(), grid.size());
    for (int j = 0; j < grid.num_particles; ++j) {
        for (int a = 0; a < grid.dimension; ++a) {
            const FormFactor& lam = components[static_cast<std::size_t>(a)];
            if (lam.num_sites() != grid.single_size() || lam.num_modes() != z.size()) {
                throw DimensionError("pauli_fierz_effective_potential: form factor does not match grid or field");
            }
            CVec values(grid.single_size());
            for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
                values(s) = inner(z, lam.at(s)).real();
            }
            const SpMat amat = diagonal_sparse(site_sum(grid, values, j));
            const SpMat grad = gradient_matrix(grid, j, a);
            v += (-2.0 * kI) * (SpMat(amat * grad) + SpMat(grad * amat));
            v += 4.0 * SpMat(amat * amat);
        }
    }
    v.prune(cplx(0.0), 0.0);
    return v;
}

CMat effective_potential_matrix(const ModelConfig& cfg, const FieldVector& z, double t) {
    switch (cfg.coupling) {
        case Coupling::nelson: return effective_potential(cfg, z, t).asDiagonal();
        case Coupling::polaron: return CMat(polaron_effective_potential(cfg, classical_field_flow(cfg, z, t)));
        case Coupling::pauli_fierz:
            return CMat(pauli_fierz_effective_potential(cfg.grid, pauli_fierz_form_factors(cfg),
                                                        classical_field_flow(cfg, z, t)));
    }
    throw PreconditionError("effective_potential_matrix: unknown coupling");
}

double coupling_norm(const ModelConfig& cfg) {
    return cfg.form_factor().sup_norm();
}

}  // namespace qcl
