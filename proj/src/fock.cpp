// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qcl {

namespace {

// Dense exponentials are cheaper than Lanczos below this size.
constexpr Eigen::Index kDenseWeylLimit = 400;

void check_modes(const FockBasis& basis, const FieldVector& f, const char* who) {
    if (f.size() != basis.num_modes()) {
        throw DimensionError(std::string(who) + ": field vector has " + std::to_string(f.size()) +
                             " components, basis has " + std::to_string(basis.num_modes()) + " modes");
    }
}

// All compositions of `total` into `modes` nonnegative parts, lex ascending.
void compositions(int modes, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == modes - 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int n = 0; n <= total; ++n) {
        prefix.push_back(n);
        compositions(modes, total - n, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

void FockSpec::validate() const {
    if (num_modes < 1) {
        throw PreconditionError("FockSpec: num_modes must be at least 1");
    }
    if (max_total_quanta < 0) {
        throw PreconditionError("FockSpec: max_total_quanta must be nonnegative");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw PreconditionError("FockSpec: epsilon must be positive and finite");
    }
}

std::uint64_t fock_dimension(int modes, int quanta) {
    // C(quanta + modes, modes), saturating on overflow.
    std::uint64_t result = 1;
    for (int i = 1; i <= modes; ++i) {
        const std::uint64_t num = static_cast<std::uint64_t>(quanta) + static_cast<std::uint64_t>(i);
        if (result > std::numeric_limits<std::uint64_t>::max() / num) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result = result * num / static_cast<std::uint64_t>(i);
    }
    return result;
}

FockBasis::FockBasis(FockSpec spec, std::uint64_t dimension_cap) : spec_(spec) {
    spec_.validate();
    const std::uint64_t dim = fock_dimension(spec_.num_modes, spec_.max_total_quanta);
    if (dim > dimension_cap) {
        throw TruncationError("FockBasis: dimension " + std::to_string(dim) + " exceeds cap " +
                              std::to_string(dimension_cap));
    }
    states_.reserve(dim);
    totals_.reserve(dim);
    std::vector<int> prefix;
    for (int grade = 0; grade <= spec_.max_total_quanta; ++grade) {
        std::vector<std::vector<int>> level;
        compositions(spec_.num_modes, grade, prefix, level);
        for (auto& n : level) {
            lookup_.emplace(n, static_cast<Eigen::Index>(states_.size()));
            states_.push_back(std::move(n));
            totals_.push_back(grade);
        }
    }
}

std::optional<Eigen::Index> FockBasis::index_of(const MultiIndex& n) const {
    const auto it = lookup_.find(n);
    if (it == lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

Eigen::Index FockBasis::prefix_dimension(int quanta) const {
    if (quanta < 0) {
        return 0;
    }
    const int capped = std::min(quanta, spec_.max_total_quanta);
    return static_cast<Eigen::Index>(fock_dimension(spec_.num_modes, capped));
}

SpMat mode_annihilator(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.num_modes()) {
        throw DimensionError("mode_annihilator: mode index out of range");
    }
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        FockBasis::MultiIndex n = basis.multi_index(i);
        const int occupation = n[static_cast<std::size_t>(mode)];
        if (occupation == 0) {
            continue;
        }
        n[static_cast<std::size_t>(mode)] -= 1;
        triplets.emplace_back(*basis.index_of(n), i, std::sqrt(static_cast<double>(occupation)));
    }
    SpMat a(basis.dimension(), basis.dimension());
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

Operator annihilator(const FockBasis& basis, const FieldVector& f) {
    check_modes(basis, f, "annihilator");
    const double scale = std::sqrt(basis.epsilon());
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        FockBasis::MultiIndex n = basis.multi_index(i);
        for (int k = 0; k < basis.num_modes(); ++k) {
            const auto ku = static_cast<std::size_t>(k);
            const int occupation = n[ku];
            if (occupation == 0 || f[k] == cplx(0.0)) {
                continue;
            }
            n[ku] -= 1;
            triplets.emplace_back(*basis.index_of(n), i, scale * std::conj(f[k]) * std::sqrt(double(occupation)));
            n[ku] += 1;
        }
    }
    SpMat a(basis.dimension(), basis.dimension());
    a.setFromTriplets(triplets.begin(), triplets.end());
    return Operator{std::move(a), Space::field, false, false};
}

Operator creator(const FockBasis& basis, const FieldVector& f) {
    return annihilator(basis, f).adjoint();
}

Operator second_quantize(const FockBasis& basis, const RVec& omega) {
    if (omega.size() != basis.num_modes()) {
        throw DimensionError("second_quantize: dispersion length does not match mode count");
    }
    if ((omega.array() < 0.0).any()) {
        throw PreconditionError("second_quantize: negative dispersion entry");
    }
    CVec diag(basis.dimension());
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        const auto& n = basis.multi_index(i);
        double value = 0.0;
        for (int k = 0; k < basis.num_modes(); ++k) {
            value += omega(k) * n[static_cast<std::size_t>(k)];
        }
        diag(i) = basis.epsilon() * value;
    }
    return Operator{diagonal_sparse(diag), Space::field, true, false};
}

Operator number_operator(const FockBasis& basis) {
    return second_quantize(basis, RVec::Ones(basis.num_modes()));
}

Operator field_operator(const FockBasis& basis, const FieldVector& f) {
    const Operator a = annihilator(basis, f);
    SpMat phi = SpMat(a.matrix.adjoint()) + a.matrix;
    phi.prune(cplx(0.0));
    return Operator{std::move(phi), Space::field, true, false};
}

WeylOperator weyl_operator(const FockBasis& basis, const FieldVector& eta) {
    const CMat phi = field_operator(basis, eta).dense();
    const CMat w = expm_hermitian(phi, kI);
    WeylOperator out;
    out.op = Operator{w.sparseView(), Space::field, false, true};
    out.unitarity_defect = max_abs(w.adjoint() * w - CMat::Identity(w.rows(), w.cols()));
    return out;
}

CMat apply_weyl(const FockBasis& basis, const FieldVector& eta, const CMat& vectors, const KrylovOptions& options) {
    if (vectors.rows() != basis.dimension()) {
        throw DimensionError("apply_weyl: vectors do not live on this basis");
    }
    if (eta.norm() == 0.0) {
        return vectors;
    }
    if (basis.dimension() <= kDenseWeylLimit) {
        const CMat phi = field_operator(basis, eta).dense();
        return expm_hermitian(phi, kI) * vectors;
    }
    const SpMat phi = field_operator(basis, eta).matrix;
    CMat out(vectors.rows(), vectors.cols());
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        // exp(i phi) = exp(-i t phi) at t = -1
        out.col(c) = krylov_expm_action(phi, vectors.col(c), -1.0, 1.0, options);
    }
    return out;
}

CoherentState coherent_state(const FockBasis& basis, const FieldVector& z0, double safety_factor) {
    check_modes(basis, z0, "coherent_state");
    const double eps = basis.epsilon();
    const double mean_quanta = z0.squared_norm() / eps;
    if (mean_quanta > basis.spec().max_total_quanta / safety_factor) {
        throw TruncationError("coherent_state: |z0|^2/eps = " + std::to_string(mean_quanta) +
                              " exceeds N_cap/" + std::to_string(safety_factor));
    }
    const CVec beta = z0.components() / std::sqrt(eps);
    CVec psi = CVec::Zero(basis.dimension());
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        const auto& n = basis.multi_index(i);
        double log_mod = -0.5 * mean_quanta;
        double phase = 0.0;
        bool vanishes = false;
        for (int k = 0; k < basis.num_modes(); ++k) {
            const int nk = n[static_cast<std::size_t>(k)];
            if (nk == 0) {
                continue;
            }
            if (beta(k) == cplx(0.0)) {
                vanishes = true;
                break;
            }
            log_mod += nk * std::log(std::abs(beta(k))) - 0.5 * std::lgamma(nk + 1.0);
            phase += nk * std::arg(beta(k));
        }
        if (!vanishes) {
            psi(i) = std::polar(std::exp(log_mod), phase);
        }
    }
    const double captured = psi.squaredNorm();
    CoherentState out;
    out.mass_defect = std::max(0.0, 1.0 - captured);
    out.vector = psi / std::sqrt(captured);
    return out;
}

CMat partial_trace_field(const HybridState& state) {
    CMat gamma = CMat::Zero(state.particle_dim(), state.particle_dim());
    for (std::size_t i = 0; i < state.components().size(); ++i) {
        const auto x = state.columns(i);
        // gamma_pq = sum_f psi(p, f) conj(psi(q, f))
        gamma += state.components()[i].probability * (x.adjoint() * x).transpose();
    }
    return gamma;
}

int recommended_quanta_cap(double bound, double epsilon, int min_quanta) {
    if (!(epsilon > 0.0) || bound < 0.0) {
        throw PreconditionError("recommended_quanta_cap: need epsilon > 0 and bound >= 0");
    }
    return std::max(min_quanta, static_cast<int>(std::ceil(8.0 * bound / epsilon)));
}

}  // namespace qcl
