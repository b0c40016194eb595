// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qcl {

const char* to_string(Space space) noexcept {
    switch (space) {
        case Space::particle: return "particle";
        case Space::field: return "field";
        case Space::joint: return "joint";
    }
    return "unknown";
}

double Operator::hermiticity_defect() const {
    const SpMat diff = matrix - SpMat(matrix.adjoint());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
        for (SpMat::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

double Operator::unitarity_defect() const {
    const SpMat product = SpMat(matrix.adjoint()) * matrix;
    const SpMat diff = product - sparse_identity(matrix.cols());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k) {
        for (SpMat::InnerIterator it(diff, k); it; ++it) {
            worst = std::max(worst, std::abs(it.value()));
        }
    }
    return worst;
}

bool Operator::verify(double tol) const {
    if (hermitian && hermiticity_defect() > tol) {
        return false;
    }
    if (unitary && unitarity_defect() > tol) {
        return false;
    }
    return true;
}

Operator Operator::adjoint() const {
    return Operator{SpMat(matrix.adjoint()), space, hermitian, unitary};
}

CVec Operator::apply(const CVec& v) const {
    if (v.size() != matrix.cols()) {
        throw DimensionError("Operator::apply: vector length does not match operator");
    }
    return matrix * v;
}

SpMat sparse_identity(Eigen::Index n) {
    SpMat id(n, n);
    id.setIdentity();
    return id;
}

SpMat kron(const SpMat& a, const SpMat& b) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
        for (SpMat::InnerIterator ia(a, i); ia; ++ia) {
            for (Eigen::Index j = 0; j < b.outerSize(); ++j) {
                for (SpMat::InnerIterator ib(b, j); ib; ++ib) {
                    triplets.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                          ia.value() * ib.value());
                }
            }
        }
    }
    SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

SpMat diagonal_sparse(const CVec& d) {
    std::vector<Eigen::Triplet<cplx>> triplets;
    triplets.reserve(static_cast<std::size_t>(d.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (d(i) != cplx(0.0)) {
            triplets.emplace_back(i, i, d(i));
        }
    }
    SpMat out(d.size(), d.size());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

CMat expm_hermitian(const CMat& h, cplx factor) {
    Eigen::SelfAdjointEigenSolver<CMat> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("expm_hermitian: eigendecomposition failed");
    }
    const CVec phases = (factor * solver.eigenvalues().cast<cplx>()).array().exp();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

double trace_norm(const CMat& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<CMat> svd(a);
    return svd.singularValues().sum();
}

double max_abs(const CMat& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

namespace {

struct LanczosBasis {
    CMat q;                  // columns: orthonormal Krylov vectors
    Eigen::VectorXd alpha;   // diagonal of T
    Eigen::VectorXd beta;    // off-diagonal of T; beta(m-1) couples to the next vector
    int dim = 0;
    bool invariant = false;  // happy breakdown: the subspace is H-invariant
};

LanczosBasis lanczos(const SpMat& h, const CVec& start, int max_dim) {
    const Eigen::Index n = start.size();
    const int m = static_cast<int>(std::min<Eigen::Index>(max_dim, n));
    LanczosBasis basis;
    basis.q.resize(n, m);
    basis.alpha.resize(m);
    basis.beta.resize(m);
    basis.q.col(0) = start;
    double scale = 1.0;
    for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
        for (SpMat::InnerIterator it(h, k); it; ++it) {
            scale = std::max(scale, std::abs(it.value()));
        }
    }
    for (int j = 0; j < m; ++j) {
        CVec w = h * basis.q.col(j);
        basis.alpha(j) = basis.q.col(j).dot(w).real();
        // full reorthogonalization against the basis built so far
        for (int pass = 0; pass < 2; ++pass) {
            const CVec overlaps = basis.q.leftCols(j + 1).adjoint() * w;
            w.noalias() -= basis.q.leftCols(j + 1) * overlaps;
        }
        const double b = w.norm();
        basis.beta(j) = b;
        basis.dim = j + 1;
        if (b < 1e-13 * scale) {
            basis.invariant = true;
            break;
        }
        if (j + 1 < m) {
            basis.q.col(j + 1) = w / b;
        }
    }
    if (basis.dim == n) {
        basis.invariant = true;
    }
    return basis;
}

// exp(-i h T) e_1 for the tridiagonal Lanczos matrix.
CVec tridiagonal_propagate(const LanczosBasis& basis, double h) {
    const int m = basis.dim;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        t(j, j) = basis.alpha(j);
        if (j + 1 < m) {
            t(j, j + 1) = basis.beta(j);
            t(j + 1, j) = basis.beta(j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
    const Eigen::MatrixXd& s = solver.eigenvectors();
    CVec coeffs(m);
    for (int k = 0; k < m; ++k) {
        coeffs(k) = std::exp(cplx(0.0, -h * solver.eigenvalues()(k))) * s(0, k);
    }
    return s.cast<cplx>() * coeffs;
}

}  // namespace

CVec krylov_expm_action(const SpMat& h, const CVec& v, double t, double dt, const KrylovOptions& options,
                        KrylovStats* stats) {
    if (h.rows() != h.cols() || h.cols() != v.size()) {
        throw DimensionError("krylov_expm_action: operator and vector dimensions differ");
    }
    if (!(dt > 0.0)) {
        throw PreconditionError("krylov_expm_action: dt must be positive");
    }
    CVec state = v;
    double remaining = std::abs(t);
    const double direction = t < 0.0 ? -1.0 : 1.0;
    double step = std::min(dt, remaining);
    while (remaining > 0.0) {
        const double norm = state.norm();
        if (norm == 0.0) {
            return state;
        }
        const LanczosBasis basis = lanczos(h, state / norm, options.krylov_dim);
        step = std::min(step, remaining);
        while (true) {
            const CVec y = tridiagonal_propagate(basis, direction * step);
            const double error =
                basis.invariant ? 0.0 : norm * basis.beta(basis.dim - 1) * std::abs(y(basis.dim - 1));
            if (error <= options.tolerance * std::max(1.0, norm)) {
                state = norm * (basis.q.leftCols(basis.dim) * y);
                remaining -= step;
                if (remaining < 1e-15 * std::abs(t)) {
                    remaining = 0.0;
                }
                if (stats != nullptr) {
                    ++stats->accepted_steps;
                    stats->max_error_estimate = std::max(stats->max_error_estimate, error);
                }
                break;
            }
            if (stats != nullptr) {
                ++stats->rejected_steps;
            }
            step *= 0.5;
            if (step < options.dt_min) {
                throw StepControlError("krylov_expm_action: step size fell below dt_min");
            }
        }
        step = std::min(dt, 2.0 * step);
    }
    return state;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace qcl
