// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/state.hpp"

#include <cmath>
#include <utility>

namespace qcl {

HybridState::HybridState(Eigen::Index particle_dim, Eigen::Index fock_dim, CVec pure)
    : HybridState(particle_dim, fock_dim, std::vector<StateComponent>{{1.0, std::move(pure)}}) {}

HybridState::HybridState(Eigen::Index particle_dim, Eigen::Index fock_dim, std::vector<StateComponent> components)
    : particle_dim_(particle_dim), fock_dim_(fock_dim), components_(std::move(components)) {
    if (particle_dim_ < 1 || fock_dim_ < 1) {
        throw DimensionError("HybridState: factor dimensions must be positive");
    }
    if (components_.empty()) {
        throw PreconditionError("HybridState: empty ensemble");
    }
    for (const auto& c : components_) {
        if (c.vector.size() != joint_dim()) {
            throw DimensionError("HybridState: component length does not match particle_dim * fock_dim");
        }
    }
}

HybridState HybridState::product(const CVec& particle, const CVec& field) {
    CVec joint(particle.size() * field.size());
    for (Eigen::Index p = 0; p < particle.size(); ++p) {
        joint.segment(p * field.size(), field.size()) = particle(p) * field;
    }
    return HybridState(particle.size(), field.size(), std::move(joint));
}

Eigen::Map<const CMat> HybridState::columns(std::size_t i) const {
    return Eigen::Map<const CMat>(components_.at(i).vector.data(), fock_dim_, particle_dim_);
}

void HybridState::validate(double tol) const {
    double total = 0.0;
    for (const auto& c : components_) {
        if (c.probability < 0.0) {
            throw PreconditionError("HybridState: negative probability");
        }
        if (std::abs(c.vector.norm() - 1.0) > tol) {
            throw PreconditionError("HybridState: component not normalized");
        }
        total += c.probability;
    }
    if (std::abs(total - 1.0) > tol) {
        throw PreconditionError("HybridState: probabilities do not sum to one");
    }
}

}  // namespace qcl
