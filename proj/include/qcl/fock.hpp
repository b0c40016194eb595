// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/linalg.hpp"
#include "qcl/state.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace qcl {

struct FockSpec {
    int num_modes = 1;
    int max_total_quanta = 1;
    double epsilon = 1.0;

    void validate() const;
};

/// Number of multi-indices in `modes` modes with total at most `quanta`.
[[nodiscard]] std::uint64_t fock_dimension(int modes, int quanta);

/// Truncated symmetric Fock space with a total-quanta cap.
///
/// States are ordered by total quanta, then lexicographically, so the states
/// with at most q quanta always form a prefix of the basis.
class FockBasis {
public:
    using MultiIndex = std::vector<int>;

    static constexpr std::uint64_t kDefaultDimensionCap = 4'000'000;

    explicit FockBasis(FockSpec spec, std::uint64_t dimension_cap = kDefaultDimensionCap);

    [[nodiscard]] const FockSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] double epsilon() const noexcept { return spec_.epsilon; }
    [[nodiscard]] int num_modes() const noexcept { return spec_.num_modes; }
    [[nodiscard]] Eigen::Index dimension() const noexcept { return static_cast<Eigen::Index>(states_.size()); }

    [[nodiscard]] const MultiIndex& multi_index(Eigen::Index i) const { return states_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] std::optional<Eigen::Index> index_of(const MultiIndex& n) const;
    [[nodiscard]] int total_quanta(Eigen::Index i) const { return totals_.at(static_cast<std::size_t>(i)); }

    /// Size of the prefix holding every state with at most `quanta` quanta.
    [[nodiscard]] Eigen::Index prefix_dimension(int quanta) const;

private:
    FockSpec spec_;
    std::vector<MultiIndex> states_;
    std::vector<int> totals_;
    std::map<MultiIndex, Eigen::Index> lookup_;
};

/// Unscaled single-mode lowering operator a_k.
[[nodiscard]] SpMat mode_annihilator(const FockBasis& basis, int mode);

/// a_eps(f) = sqrt(eps) * sum_k conj(f_k) a_k.
[[nodiscard]] Operator annihilator(const FockBasis& basis, const FieldVector& f);
[[nodiscard]] Operator creator(const FockBasis& basis, const FieldVector& f);

/// dG_eps(omega): diagonal with eps * sum_k omega_k n_k.
[[nodiscard]] Operator second_quantize(const FockBasis& basis, const RVec& omega);
[[nodiscard]] Operator number_operator(const FockBasis& basis);

/// phi_eps(f) = a_eps^dagger(f) + a_eps(f).
[[nodiscard]] Operator field_operator(const FockBasis& basis, const FieldVector& f);

struct WeylOperator {
    Operator op;
    /// Max-abs entry of W^dagger W - I; nonzero only through rounding since
    /// the truncated generator is exponentiated exactly.
    double unitarity_defect = 0.0;
};

/// W_eps(eta) = exp(i phi_eps(eta)) from the dense truncated generator.
[[nodiscard]] WeylOperator weyl_operator(const FockBasis& basis, const FieldVector& eta);

/// W_eps(eta) applied to each column of `vectors`. Uses the dense exponential
/// for small bases and Lanczos actions otherwise; both exponentiate the same
/// truncated generator.
[[nodiscard]] CMat apply_weyl(const FockBasis& basis, const FieldVector& eta, const CMat& vectors,
                              const KrylovOptions& options = {});

struct CoherentState {
    CVec vector;
    /// 1 - (mass of the untruncated series captured by the basis).
    double mass_defect = 0.0;
};

/// Normalized truncated eps-coherent state with a_eps(f) psi = <f, z0> psi.
///
/// Throws TruncationError unless |z0|^2 / eps <= N_cap / safety_factor.
[[nodiscard]] CoherentState coherent_state(const FockBasis& basis, const FieldVector& z0, double safety_factor = 4.0);

/// tr over the Fock factor of the ensemble density matrix.
[[nodiscard]] CMat partial_trace_field(const HybridState& state);

/// Recommended total-quanta cap for a target bound C on <dG_eps(1)>.
[[nodiscard]] int recommended_quanta_cap(double bound, double epsilon, int min_quanta = 16);

}  // namespace qcl
