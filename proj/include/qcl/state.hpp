// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/types.hpp"

#include <vector>

namespace qcl {

struct StateComponent {
    double probability = 1.0;
    CVec vector;
};

/// Microscopic state on particle ⊗ Fock space, stored as an ensemble of pure
/// vectors. The joint index is particle-major: p * fock_dim + f.
class HybridState {
public:
    HybridState() = default;
    HybridState(Eigen::Index particle_dim, Eigen::Index fock_dim, CVec pure);
    HybridState(Eigen::Index particle_dim, Eigen::Index fock_dim, std::vector<StateComponent> components);

    /// psi_particle ⊗ psi_field.
    [[nodiscard]] static HybridState product(const CVec& particle, const CVec& field);

    [[nodiscard]] Eigen::Index particle_dim() const noexcept { return particle_dim_; }
    [[nodiscard]] Eigen::Index fock_dim() const noexcept { return fock_dim_; }
    [[nodiscard]] Eigen::Index joint_dim() const noexcept { return particle_dim_ * fock_dim_; }
    [[nodiscard]] bool is_pure() const noexcept { return components_.size() == 1; }

    [[nodiscard]] const std::vector<StateComponent>& components() const noexcept { return components_; }
    [[nodiscard]] std::vector<StateComponent>& components() noexcept { return components_; }

    /// Fock-by-particle view of component i: column p is the field vector
    /// attached to particle basis state p.
    [[nodiscard]] Eigen::Map<const CMat> columns(std::size_t i) const;

    /// Throws PreconditionError when probabilities or norms are off by more than tol.
    void validate(double tol = 1e-12) const;

private:
    Eigen::Index particle_dim_ = 0;
    Eigen::Index fock_dim_ = 0;
    std::vector<StateComponent> components_;
};

}  // namespace qcl
