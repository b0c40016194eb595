// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/measures.hpp"
#include "qcl/models.hpp"

#include <functional>
#include <vector>

namespace qcl {

/// Advances every pure component by exp(-i t H) with Lanczos steps of at most dt.
[[nodiscard]] HybridState propagate_micro(const SpMat& h, const HybridState& state, double t, double dt,
                                          const KrylovOptions& options = {}, int threads = 1,
                                          KrylovStats* stats = nullptr);

/// tr_K(Gamma (1 ⊗ W_eps(eta))); entry (p, q) is sum_i p_i <psi_q | W | psi_p>.
[[nodiscard]] CMat nc_fourier_transform(const HybridState& state, const FockBasis& basis, const FieldVector& eta,
                                        const KrylovOptions& options = {});

/// Tr(Gamma (dG_eps(1) + 1)^delta)
[[nodiscard]] double number_moment(const HybridState& state, const FockBasis& basis, double delta);

/// Tr(Gamma dG_eps(1)^k)
[[nodiscard]] double number_power(const HybridState& state, const FockBasis& basis, int k);

/// c_delta(eps) = max{2 + eps, 1 + (1 + eps)^delta}
[[nodiscard]] double propagation_constant(double delta, double epsilon);

struct Prop12Result {
    /// Both forms of the bound hold.
    bool holds = false;
    /// Tr(Gamma(t) A^delta) and exp(c_{delta/2} sqrt(eps) |delta| |t| |lambda|) Tr(Gamma A^delta).
    double lhs = 0.0;
    double rhs = 0.0;
    /// Tr|Gamma(t) A^delta| and its bound with c_delta.
    double abs_lhs = 0.0;
    double abs_rhs = 0.0;
    [[nodiscard]] double slack() const { return rhs - lhs; }
    [[nodiscard]] double abs_slack() const { return abs_rhs - abs_lhs; }
};

/// Number-growth bound with A = dG_eps(1) + N^2 + eps.
[[nodiscard]] Prop12Result check_prop12(const HybridState& state0, const HybridState& state_t, const FockBasis& basis,
                                        int num_particles, double delta, double t, double lambda_norm);

/// Interaction-picture Fourier transform
/// e^{i tau K0} tr_K(Gamma~(tau) W(eta)) e^{-i tau K0}, where Gamma~ is the
/// state with the free field rotation e^{i tau nu(eps) dG_eps(omega)} undone.
[[nodiscard]] CMat interaction_fourier_transform(const ModelConfig& model, const FockBasis& basis,
                                                 const HybridState& state, const FieldVector& eta, double tau);

/// Residual of the microscopic integral equation for the interaction-picture
/// Fourier transform, with composite Simpson quadrature on `quad_steps`
/// (even) intervals. `trajectory(tau)` returns Psi(tau) = e^{-i tau H} Psi.
[[nodiscard]] CMat duhamel_residual(const std::function<HybridState(double)>& trajectory, const FockBasis& basis,
                                    const ModelConfig& model, const FieldVector& eta, double s, double t,
                                    int quad_steps);

/// |Tr(dG_eps(1)^k Gamma) - sum_j w_j |z_j|^{2k}| for k = 0..max_k.
[[nodiscard]] std::vector<double> check_PIK(const HybridState& state, const FockBasis& basis,
                                            const StateValuedMeasure& mu, int max_k);

/// max over pairs of |F(eta) - F(xi)|_1 / ((min(|eta|, |xi|)^{1/2} + 1) |eta - xi|^{1/2})
/// for the Fourier transform F of `state`.
[[nodiscard]] double equicontinuity_ratio(const HybridState& state, const FockBasis& basis,
                                          const std::vector<FieldVector>& etas);

}  // namespace qcl
