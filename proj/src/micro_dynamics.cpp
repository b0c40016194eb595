// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/micro_dynamics.hpp"

#include "qcl/qc_dynamics.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace qcl {

namespace {

void check_basis(const HybridState& state, const FockBasis& basis, const char* who) {
    if (state.fock_dim() != basis.dimension()) {
        throw DimensionError(std::string(who) + ": state Fock dimension does not match the basis");
    }
}

// Total quanta eps * n for each Fock basis state.
RVec scaled_quanta(const FockBasis& basis) {
    RVec n(basis.dimension());
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        n(i) = basis.epsilon() * basis.total_quanta(i);
    }
    return n;
}

// Expectation of a function of the Fock index, summed over the ensemble.
double fock_diagonal_expectation(const HybridState& state, const RVec& diag) {
    double total = 0.0;
    for (std::size_t i = 0; i < state.components().size(); ++i) {
        const auto x = state.columns(i);
        total += state.components()[i].probability * (x.cwiseAbs2().transpose() * diag).sum();
    }
    return total;
}

// Trace norm of sum_i p_i |psi_i><phi_i|.
double low_rank_trace_norm(const std::vector<double>& p, const std::vector<CVec>& psi, const std::vector<CVec>& phi) {
    if (psi.size() == 1) {
        return p.front() * psi.front().norm() * phi.front().norm();
    }
    const auto r = static_cast<Eigen::Index>(psi.size());
    const Eigen::Index n = psi.front().size();
    CMat a(n, r);
    CMat b(n, r);
    for (Eigen::Index i = 0; i < r; ++i) {
        a.col(i) = psi[static_cast<std::size_t>(i)];
        b.col(i) = phi[static_cast<std::size_t>(i)];
    }
    Eigen::HouseholderQR<CMat> qa(a);
    Eigen::HouseholderQR<CMat> qb(b);
    const Eigen::Index k = std::min(n, r);
    const CMat ra = qa.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const CMat rb = qb.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::VectorXd pv(r);
    for (Eigen::Index i = 0; i < r; ++i) {
        pv(i) = p[static_cast<std::size_t>(i)];
    }
    return trace_norm(ra * pv.cast<cplx>().asDiagonal() * rb.adjoint());
}

CMat fourier_from_columns(const CMat& w_applied, const Eigen::Ref<const CMat>& bra) {
    // entry (p, q) = <bra_q | w_applied_p>
    return (bra.adjoint() * w_applied).transpose();
}

}  // namespace

HybridState propagate_micro(const SpMat& h, const HybridState& state, double t, double dt,
                            const KrylovOptions& options, int threads, KrylovStats* stats) {
    if (h.rows() != state.joint_dim()) {
        throw DimensionError("propagate_micro: Hamiltonian does not act on the state space");
    }
    HybridState out = state;
    if (t == 0.0) {
        return out;
    }
    std::vector<KrylovStats> per_component(state.components().size());
    parallel_for(state.components().size(), threads, [&](std::size_t i) {
        out.components()[i].vector =
            krylov_expm_action(h, state.components()[i].vector, t, dt, options, &per_component[i]);
    });
    if (stats != nullptr) {
        for (const auto& s : per_component) {
            stats->accepted_steps += s.accepted_steps;
            stats->rejected_steps += s.rejected_steps;
            stats->max_error_estimate = std::max(stats->max_error_estimate, s.max_error_estimate);
        }
    }
    return out;
}

CMat nc_fourier_transform(const HybridState& state, const FockBasis& basis, const FieldVector& eta,
                          const KrylovOptions& options) {
    check_basis(state, basis, "nc_fourier_transform");
    CMat out = CMat::Zero(state.particle_dim(), state.particle_dim());
    for (std::size_t i = 0; i < state.components().size(); ++i) {
        const auto x = state.columns(i);
        const CMat wx = apply_weyl(basis, eta, CMat(x), options);
        out += state.components()[i].probability * fourier_from_columns(wx, x);
    }
    return out;
}

double number_moment(const HybridState& state, const FockBasis& basis, double delta) {
    check_basis(state, basis, "number_moment");
    const RVec diag = (scaled_quanta(basis).array() + 1.0).pow(delta).matrix();
    return fock_diagonal_expectation(state, diag);
}

double number_power(const HybridState& state, const FockBasis& basis, int k) {
    check_basis(state, basis, "number_power");
    if (k < 0) {
        throw PreconditionError("number_power: k must be nonnegative");
    }
    RVec diag = RVec::Ones(basis.dimension());
    const RVec n = scaled_quanta(basis);
    for (int i = 0; i < k; ++i) {
        diag = diag.cwiseProduct(n);
    }
    return fock_diagonal_expectation(state, diag);
}

double propagation_constant(double delta, double epsilon) {
    return std::max(2.0 + epsilon, 1.0 + std::pow(1.0 + epsilon, delta));
}

Prop12Result check_prop12(const HybridState& state0, const HybridState& state_t, const FockBasis& basis,
                          int num_particles, double delta, double t, double lambda_norm) {
    check_basis(state0, basis, "check_prop12");
    check_basis(state_t, basis, "check_prop12");
    if (state0.joint_dim() != state_t.joint_dim()) {
        throw DimensionError("check_prop12: states live on different spaces");
    }
    const double eps = basis.epsilon();
    const double n2 = static_cast<double>(num_particles) * num_particles;
    const RVec a_delta = (scaled_quanta(basis).array() + n2 + eps).pow(delta).matrix();

    const auto abs_form = [&](const HybridState& s) {
        std::vector<double> p;
        std::vector<CVec> psi;
        std::vector<CVec> phi;
        for (std::size_t i = 0; i < s.components().size(); ++i) {
            const auto x = s.columns(i);
            CMat ax = a_delta.asDiagonal() * x;
            p.push_back(s.components()[i].probability);
            psi.push_back(s.components()[i].vector);
            phi.push_back(Eigen::Map<const CVec>(ax.data(), ax.size()));
        }
        return low_rank_trace_norm(p, psi, phi);
    };

    const double growth = std::sqrt(eps) * std::abs(delta) * std::abs(t) * lambda_norm;
    Prop12Result r;
    r.lhs = fock_diagonal_expectation(state_t, a_delta);
    r.rhs = std::exp(propagation_constant(0.5 * delta, eps) * growth) * fock_diagonal_expectation(state0, a_delta);
    r.abs_lhs = abs_form(state_t);
    r.abs_rhs = std::exp(propagation_constant(delta, eps) * growth) * abs_form(state0);
    r.holds = r.lhs <= r.rhs && r.abs_lhs <= r.abs_rhs;
    return r;
}

namespace {

// Applies e^{i tau nu(eps) dG_eps(omega)} on the Fock factor: the state with
// the free field rotation removed.
HybridState unrotate_field(const ModelConfig& model, const FockBasis& basis, const HybridState& state, double tau) {
    const CVec energies = second_quantize(basis, model.omega).matrix.diagonal();
    const CVec phases = (cplx(0.0, tau * model.nu_scale()) * energies).array().exp();
    HybridState out = state;
    for (auto& c : out.components()) {
        Eigen::Map<CMat> x(c.vector.data(), state.fock_dim(), state.particle_dim());
        x = phases.asDiagonal() * x;
    }
    return out;
}

CMat conjugate_by_k0(const CMat& k0, const CMat& a, double tau) {
    const CMat u = expm_hermitian(k0, cplx(0.0, tau));
    return u * a * u.adjoint();
}

}  // namespace

CMat interaction_fourier_transform(const ModelConfig& model, const FockBasis& basis, const HybridState& state,
                                   const FieldVector& eta, double tau) {
    const HybridState chi = unrotate_field(model, basis, state, tau);
    return conjugate_by_k0(build_K0(model).dense(), nc_fourier_transform(chi, basis, eta), tau);
}

CMat duhamel_residual(const std::function<HybridState(double)>& trajectory, const FockBasis& basis,
                      const ModelConfig& model, const FieldVector& eta, double s, double t, int quad_steps) {
    const std::vector<double> weights = simpson_weights(s, t, quad_steps);
    const CMat k0 = build_K0(model).dense();
    const FormFactor lambda = model.form_factor();
    const Eigen::Index pdim = model.grid.size();
    CMat integral = CMat::Zero(pdim, pdim);
    CMat first;
    CMat last;
    for (int node = 0; node <= quad_steps; ++node) {
        const double tau = s + (t - s) * node / quad_steps;
        const HybridState chi = unrotate_field(model, basis, trajectory(tau), tau);
        check_basis(chi, basis, "duhamel_residual");

        // phi_eps(e^{i tau eps nu(eps) omega} lambda(x)) for every site
        std::vector<SpMat> blocks;
        for (Eigen::Index site = 0; site < model.grid.single_size(); ++site) {
            CVec f = lambda.at(site).components();
            for (Eigen::Index k = 0; k < f.size(); ++k) {
                f(k) *= std::exp(cplx(0.0, tau * basis.epsilon() * model.nu_scale() * model.omega(k)));
            }
            blocks.push_back(field_operator(basis, FieldVector(f)).matrix);
        }
        const SpMat b = site_sum_operator(blocks, model.grid);

        CMat commutator = CMat::Zero(pdim, pdim);
        CMat transform = CMat::Zero(pdim, pdim);
        for (std::size_t i = 0; i < chi.components().size(); ++i) {
            const double p = chi.components()[i].probability;
            const auto x = chi.columns(i);
            const CVec bchi_vec = b * chi.components()[i].vector;
            const Eigen::Map<const CMat> bx(bchi_vec.data(), chi.fock_dim(), chi.particle_dim());
            const CMat wx = apply_weyl(basis, eta, CMat(x));
            const CMat wbx = apply_weyl(basis, eta, CMat(bx));
            commutator += p * (fourier_from_columns(wbx, x) - fourier_from_columns(wx, bx));
            transform += p * fourier_from_columns(wx, x);
        }
        integral += weights[static_cast<std::size_t>(node)] * conjugate_by_k0(k0, commutator, tau);
        if (node == 0) {
            first = conjugate_by_k0(k0, transform, tau);
        }
        if (node == quad_steps) {
            last = conjugate_by_k0(k0, transform, tau);
        }
    }
    return last - first + kI * integral;
}

std::vector<double> check_PIK(const HybridState& state, const FockBasis& basis, const StateValuedMeasure& mu,
                              int max_k) {
    if (max_k < 0) {
        throw PreconditionError("check_PIK: max_k must be nonnegative");
    }
    std::vector<double> out;
    for (int k = 0; k <= max_k; ++k) {
        double classical = 0.0;
        for (const auto& sample : mu.samples()) {
            classical += sample.weight * std::pow(sample.point.squared_norm(), k);
        }
        out.push_back(std::abs(number_power(state, basis, k) - classical));
    }
    return out;
}

double equicontinuity_ratio(const HybridState& state, const FockBasis& basis, const std::vector<FieldVector>& etas) {
    std::vector<CMat> transforms;
    transforms.reserve(etas.size());
    for (const auto& eta : etas) {
        transforms.push_back(nc_fourier_transform(state, basis, eta));
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < etas.size(); ++a) {
        for (std::size_t b = a + 1; b < etas.size(); ++b) {
            const double gap = (etas[a] - etas[b]).norm();
            if (gap == 0.0) {
                continue;
            }
            const double scale = (std::sqrt(std::min(etas[a].norm(), etas[b].norm())) + 1.0) * std::sqrt(gap);
            worst = std::max(worst, trace_norm(transforms[a] - transforms[b]) / scale);
        }
    }
    return worst;
}

}  // namespace qcl
