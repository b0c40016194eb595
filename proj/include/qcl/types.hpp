// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <stdexcept>
#include <string>

namespace qcl {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

inline constexpr cplx kI{0.0, 1.0};

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not line up (vector lengths, factor dimensions, grids).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A requested construction does not fit the configured Fock truncation.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// An input violates a documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Integrator or Krylov step control gave up.
class StepControlError : public Error {
public:
    using Error::Error;
};

/// Conditioning selected no sample.
class EmptyConditioningError : public Error {
public:
    using Error::Error;
};

/// A point z of the one-particle field space, stored in the mode basis.
///
/// The inner product is antilinear in its first argument:
/// <z, w> = sum_k conj(z_k) w_k.
class FieldVector {
public:
    FieldVector() = default;
    explicit FieldVector(Eigen::Index num_modes) : components_(CVec::Zero(num_modes)) {}
    explicit FieldVector(CVec components) : components_(std::move(components)) {}

    [[nodiscard]] Eigen::Index size() const noexcept { return components_.size(); }
    [[nodiscard]] const CVec& components() const noexcept { return components_; }
    [[nodiscard]] CVec& components() noexcept { return components_; }
    [[nodiscard]] cplx operator[](Eigen::Index k) const { return components_(k); }
    cplx& operator[](Eigen::Index k) { return components_(k); }

    [[nodiscard]] double norm() const { return components_.norm(); }
    [[nodiscard]] double squared_norm() const { return components_.squaredNorm(); }
    [[nodiscard]] bool is_finite() const { return components_.allFinite(); }

    friend FieldVector operator+(const FieldVector& a, const FieldVector& b) {
        return FieldVector(CVec(a.components_ + b.components_));
    }
    friend FieldVector operator-(const FieldVector& a, const FieldVector& b) {
        return FieldVector(CVec(a.components_ - b.components_));
    }
    friend FieldVector operator*(cplx s, const FieldVector& a) {
        return FieldVector(CVec(s * a.components_));
    }
    friend bool operator==(const FieldVector& a, const FieldVector& b) {
        return a.components_.size() == b.components_.size() && a.components_ == b.components_;
    }

private:
    CVec components_;
};

/// <a, b>, antilinear in a.
[[nodiscard]] inline cplx inner(const FieldVector& a, const FieldVector& b) {
    if (a.size() != b.size()) {
        throw DimensionError("inner: field vectors have different mode counts");
    }
    return a.components().dot(b.components());
}

}  // namespace qcl
