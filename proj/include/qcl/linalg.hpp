// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/types.hpp"

#include <functional>

namespace qcl {

enum class Space { particle, field, joint };

[[nodiscard]] const char* to_string(Space space) noexcept;

/// Sparse complex operator tagged with the Hilbert space it acts on.
///
/// The hermitian/unitary flags are claims made by the constructor; `verify`
/// checks them against the matrix data.
struct Operator {
    SpMat matrix;
    Space space = Space::joint;
    bool hermitian = false;
    bool unitary = false;

    [[nodiscard]] Eigen::Index rows() const noexcept { return matrix.rows(); }
    [[nodiscard]] Eigen::Index cols() const noexcept { return matrix.cols(); }

    /// Max-abs entry of A - A^dagger.
    [[nodiscard]] double hermiticity_defect() const;
    /// Max-abs entry of A^dagger A - I.
    [[nodiscard]] double unitarity_defect() const;
    /// True when every flag that is set holds to `tol`.
    [[nodiscard]] bool verify(double tol) const;

    [[nodiscard]] Operator adjoint() const;
    [[nodiscard]] CMat dense() const { return CMat(matrix); }
    [[nodiscard]] CVec apply(const CVec& v) const;
};

[[nodiscard]] SpMat sparse_identity(Eigen::Index n);
[[nodiscard]] SpMat kron(const SpMat& a, const SpMat& b);
[[nodiscard]] SpMat diagonal_sparse(const CVec& d);

/// exp(factor * H) for hermitian H through its eigendecomposition.
[[nodiscard]] CMat expm_hermitian(const CMat& h, cplx factor);

/// Sum of singular values.
[[nodiscard]] double trace_norm(const CMat& a);

/// Largest entry modulus; the entrywise sup norm used by the small checks.
[[nodiscard]] double max_abs(const CMat& a);

struct KrylovOptions {
    int krylov_dim = 30;
    /// Absolute error budget per step for the a-posteriori Lanczos estimate.
    double tolerance = 1e-12;
    /// Below this step size the propagator gives up.
    double dt_min = 1e-9;
};

/// Diagnostics collected by `krylov_expm_action`.
struct KrylovStats {
    int accepted_steps = 0;
    int rejected_steps = 0;
    double max_error_estimate = 0.0;
};

/// Applies exp(-i t H) to v for hermitian sparse H with a Lanczos basis.
///
/// The time interval is split into steps of at most |dt|; a step whose error
/// estimate exceeds the budget is halved, and halving below `dt_min` raises
/// StepControlError.
[[nodiscard]] CVec krylov_expm_action(const SpMat& h, const CVec& v, double t, double dt,
                                      const KrylovOptions& options = {},
                                      KrylovStats* stats = nullptr);

/// Runs `body(i)` for i in [0, n) on up to `threads` workers. Results must be
/// written into preallocated, index-addressed storage so the outcome does not
/// depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace qcl
