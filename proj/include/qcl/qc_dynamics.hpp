// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/measures.hpp"
#include "qcl/models.hpp"

#include <functional>

namespace qcl {

enum class Integrator { magnus2, exponential_euler };

[[nodiscard]] const char* to_string(Integrator integrator) noexcept;
[[nodiscard]] Integrator integrator_from_string(const std::string& name);

struct PropagatorConfig {
    Integrator integrator = Integrator::magnus2;
    double dt = 1e-3;
    /// Exponentials are taken densely on the particle space, so this only
    /// matters for callers that reuse the config for Krylov actions.
    int krylov_dim = 30;
    /// Step-doubling budget per step; 0 disables error control.
    double error_budget = 0.0;
    double dt_min = 1e-9;
    /// Maximum hermiticity defect tolerated for the instantaneous generator.
    double hermiticity_tol = 1e-12;

    void validate() const;
};

/// Instantaneous generator K0 + V_t(z) of the quasi-classical particle
/// dynamics, with the model data it needs cached.
class QCGenerator {
public:
    explicit QCGenerator(ModelConfig cfg);

    [[nodiscard]] const ModelConfig& model() const noexcept { return cfg_; }
    [[nodiscard]] const CMat& kinetic() const noexcept { return k0_; }
    [[nodiscard]] Eigen::Index particle_dim() const noexcept { return k0_.rows(); }

    /// V_t(z) = V(e^{-i t nu omega} z).
    [[nodiscard]] CMat potential(const FieldVector& z, double t) const;
    /// K0 + V_t(z).
    [[nodiscard]] CMat operator()(const FieldVector& z, double t) const { return k0_ + potential(z, t); }
    /// e^{i t K0} A e^{-i t K0}
    [[nodiscard]] CMat to_interaction(const CMat& a, double t) const;

private:
    ModelConfig cfg_;
    CMat k0_;
    Eigen::MatrixXcd k0_vectors_;
    Eigen::VectorXd k0_values_;
    FormFactor lambda_;
    std::vector<FormFactor> pf_components_;
};

/// U_{t,s}(z) solving i dU/dt = (K0 + V_t(z)) U with U_{s,s} = I.
[[nodiscard]] CMat propagator(const PropagatorConfig& cfg, const QCGenerator& gen, const FieldVector& z, double s,
                              double t);

/// U_{t,s}(z) gamma U_{t,s}(z)^dagger
[[nodiscard]] CMat propagate_sample(const PropagatorConfig& cfg, const QCGenerator& gen, const FieldVector& z,
                                    const CMat& gamma, double s, double t);

/// Samples (w_k, e^{-it nu omega} z_k, U_{t,0}(z_k) gamma_k U_{t,0}(z_k)^dagger).
[[nodiscard]] StateValuedMeasure evolve_measure(const PropagatorConfig& cfg, const QCGenerator& gen,
                                                const StateValuedMeasure& m, double t, int threads = 1);

/// m_t at each of `times` (ascending, from 0), advancing every sample step by step.
[[nodiscard]] std::vector<StateValuedMeasure> evolve_measure_trajectory(const PropagatorConfig& cfg,
                                                                        const QCGenerator& gen,
                                                                        const StateValuedMeasure& m,
                                                                        const std::vector<double>& times,
                                                                        int threads = 1);

/// n_t from m_t: points e^{it nu omega} z, states e^{itK0} gamma e^{-itK0}.
[[nodiscard]] StateValuedMeasure interaction_picture_measure(const QCGenerator& gen, const StateValuedMeasure& m_t,
                                                             double t);
/// Inverse of interaction_picture_measure.
[[nodiscard]] StateValuedMeasure schrodinger_picture_measure(const QCGenerator& gen, const StateValuedMeasure& n_t,
                                                             double t);

/// n_t(eta) - n_s(eta) + i int_s^t sum_k w_k [V~_tau(e^{-i tau nu omega} z_k), gamma_k(tau)] e^{2i Re<eta, z_k>}
/// with composite Simpson quadrature on `quad_steps` (even) intervals.
/// `trajectory(tau)` returns the Schrödinger-picture measure m_tau.
[[nodiscard]] CMat transport_residual(const QCGenerator& gen,
                                      const std::function<StateValuedMeasure(double)>& trajectory,
                                      const FieldVector& eta, double s, double t, int quad_steps);

/// Composite Simpson weights for `steps` (even) intervals on [s, t].
[[nodiscard]] std::vector<double> simpson_weights(double s, double t, int steps);

}  // namespace qcl
