// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/symbols.hpp"

#include <string>

namespace qcl {

/// How the field energy scales with eps: nu(eps) = 1 (constant) or 1/eps
/// (free). The limit nu = lim eps * nu(eps) is 0 or 1 accordingly.
enum class NuRegime { constant, free };

[[nodiscard]] const char* to_string(NuRegime regime) noexcept;
[[nodiscard]] NuRegime nu_regime_from_string(const std::string& name);

/// Effective classical potential used by the quasi-classical generator.
enum class Coupling { nelson, polaron, pauli_fierz };

[[nodiscard]] const char* to_string(Coupling coupling) noexcept;
[[nodiscard]] Coupling coupling_from_string(const std::string& name);

struct ModelConfig {
    ParticleGrid grid;
    /// modes x dimension
    Eigen::MatrixXd wave_numbers;
    RVec omega;
    /// Form-factor profile with quadrature weights folded in.
    CVec lambda0;
    NuRegime nu_regime = NuRegime::constant;
    double epsilon = 0.1;
    /// Strength c of the confining term c * |x - L/2|^2 added to -Laplacian.
    double trap_strength = 0.0;
    Coupling coupling = Coupling::nelson;
    /// Polaron splitting radius r and coupling alpha.
    double polaron_cutoff = 1.0;
    double polaron_alpha = 1.0;

    void validate() const;
    [[nodiscard]] int num_modes() const { return static_cast<int>(omega.size()); }
    /// nu(eps)
    [[nodiscard]] double nu_scale() const;
    /// lim eps * nu(eps)
    [[nodiscard]] double nu_limit() const;
    [[nodiscard]] FormFactor form_factor() const;
};

/// Discrete -Laplacian (periodic, second order) plus optional trap, summed over particles.
[[nodiscard]] Operator build_K0(const ModelConfig& cfg);

/// K0 ⊗ 1 + nu(eps) 1 ⊗ dG_eps(omega) + sum_j phi_eps(lambda(x_j)).
[[nodiscard]] Operator build_nelson_hamiltonian(const ModelConfig& cfg, const FockBasis& basis);

/// e^{-i t nu omega} z. Returns z unchanged when nu = 0.
[[nodiscard]] FieldVector classical_field_flow(const ModelConfig& cfg, const FieldVector& z, double t);

/// Diagonal of V(e^{-i t nu omega} z) for the Nelson symbol.
[[nodiscard]] CVec effective_potential(const ModelConfig& cfg, const FieldVector& z, double t);

/// Polaron V(z) = sum_j 2 Re <z, phi_r(x_j)> + [-i grad_j, 2i Im <lambda_r(x_j), z>] on the grid,
/// with phi(x; k) = alpha e^{-ik.x} / |k|^{(d-1)/2}, phi_r its |k| <= r part and
/// lambda_r = k / |k|^2 times the |k| > r part.
[[nodiscard]] SpMat polaron_effective_potential(const ModelConfig& cfg, const FieldVector& z);

/// Pauli-Fierz V(z) = 4 sum_j [-i A(x_j).grad_j + A(x_j)^2], A_l = Re <z, lambda_l>,
/// with the first-order term symmetrized. `components` holds one form factor per axis.
[[nodiscard]] SpMat pauli_fierz_effective_potential(const ParticleGrid& grid, const std::vector<FormFactor>& components,
                                                    const FieldVector& z);

/// Transverse polarization of the model form factor: one component per axis.
[[nodiscard]] std::vector<FormFactor> pauli_fierz_form_factors(const ModelConfig& cfg);

/// Particle-space potential V_t(z) = V(e^{-i t nu omega} z) for the configured coupling.
[[nodiscard]] CMat effective_potential_matrix(const ModelConfig& cfg, const FieldVector& z, double t);

/// Central-difference derivative along `axis` for particle `particle`.
[[nodiscard]] SpMat gradient_matrix(const ParticleGrid& grid, int particle, int axis);

/// sup_x |lambda(x)| of the model form factor.
[[nodiscard]] double coupling_norm(const ModelConfig& cfg);

}  // namespace qcl
