// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/types.hpp"

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qcl {

/// One atom of a state-valued measure: weight, field point and the
/// normalized particle density matrix attached to it.
struct Sample {
    double weight = 0.0;
    FieldVector point;
    CMat state;
};

/// Finite weighted ensemble {(w_k, z_k, gamma_k)}. Weights are kept apart
/// from the states so the total mass can drop below one.
class StateValuedMeasure {
public:
    StateValuedMeasure() = default;
    explicit StateValuedMeasure(std::vector<Sample> samples);

    /// The zero measure with the given shapes (no atoms).
    [[nodiscard]] static StateValuedMeasure zero(Eigen::Index particle_dim, Eigen::Index num_modes);
    /// w * delta_{z} with state gamma.
    [[nodiscard]] static StateValuedMeasure dirac(const FieldVector& z, const CMat& gamma, double weight = 1.0);

    [[nodiscard]] const std::vector<Sample>& samples() const noexcept { return samples_; }
    [[nodiscard]] std::vector<Sample>& samples() noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] Eigen::Index particle_dim() const noexcept { return particle_dim_; }
    [[nodiscard]] Eigen::Index num_modes() const noexcept { return num_modes_; }

    [[nodiscard]] double total_mass() const;
    /// Throws PreconditionError unless every gamma_k is PSD with unit trace
    /// and every weight is nonnegative, all to `tol`.
    void validate(double tol = 1e-9) const;

private:
    std::vector<Sample> samples_;
    Eigen::Index particle_dim_ = 0;
    Eigen::Index num_modes_ = 0;
};

/// sum_k w_k gamma_k exp(2i Re <eta, z_k>)
[[nodiscard]] CMat fourier_transform(const StateValuedMeasure& m, const FieldVector& eta);

/// Points mapped by the unitary mode matrix u; weights and states untouched.
[[nodiscard]] StateValuedMeasure pushforward(const StateValuedMeasure& m, const CMat& u, double tol = 1e-12);

enum class Side { left, right };

/// sum_k w_k gamma_k F(z_k) (right) or sum_k w_k F(z_k) gamma_k (left).
[[nodiscard]] CMat integrate(const StateValuedMeasure& m, const std::function<CMat(const FieldVector&)>& f, Side side);

/// Unnormalized conditional state: sum of w_k gamma_k over samples with
/// |f(z_k) - value| <= tol. Throws EmptyConditioningError if none qualifies.
[[nodiscard]] CMat condition(const StateValuedMeasure& m, const std::function<cplx(const FieldVector&)>& f, cplx value,
                             double tol);

/// sum_k w_k (|z_k|^2 + 1)^delta
[[nodiscard]] double moment(const StateValuedMeasure& m, double delta);

/// Measures JSON: {"samples": [{"weight", "point": [[re, im], ...],
/// "state": {"rows", "cols", "data": [[re, im], ...] row-major}}]}
[[nodiscard]] nlohmann::json to_json(const StateValuedMeasure& m);
[[nodiscard]] StateValuedMeasure measure_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json complex_vector_to_json(const CVec& v);
[[nodiscard]] CVec complex_vector_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json complex_matrix_to_json(const CMat& a);
[[nodiscard]] CMat complex_matrix_from_json(const nlohmann::json& j);

}  // namespace qcl
