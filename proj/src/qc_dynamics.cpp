// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/qc_dynamics.hpp"

#include "qcl/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qcl {

const char* to_string(Integrator integrator) noexcept {
    return integrator == Integrator::magnus2 ? "magnus2" : "exponential_euler";
}

Integrator integrator_from_string(const std::string& name) {
    if (name == "magnus2") {
        return Integrator::magnus2;
    }
    if (name == "exponential_euler") {
        return Integrator::exponential_euler;
    }
    throw PreconditionError("unknown integrator '" + name + "'");
}

void PropagatorConfig::validate() const {
    if (!(dt > 0.0)) {
        throw PreconditionError("PropagatorConfig: dt must be positive");
    }
    if (error_budget < 0.0 || !(dt_min > 0.0)) {
        throw PreconditionError("PropagatorConfig: error_budget must be >= 0 and dt_min > 0");
    }
}

QCGenerator::QCGenerator(ModelConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    k0_ = build_K0(cfg_).dense();
    Eigen::SelfAdjointEigenSolver<CMat> solver(k0_);
    k0_vectors_ = solver.eigenvectors();
    k0_values_ = solver.eigenvalues();
    lambda_ = cfg_.form_factor();
    if (cfg_.coupling == Coupling::pauli_fierz) {
        pf_components_ = pauli_fierz_form_factors(cfg_);
    }
}

CMat QCGenerator::potential(const FieldVector& z, double t) const {
    const FieldVector w = classical_field_flow(cfg_, z, t);
    switch (cfg_.coupling) {
        case Coupling::nelson: return evaluate_symbol(nelson_symbol(lambda_), w, cfg_.grid).asDiagonal();
        case Coupling::polaron: return CMat(polaron_effective_potential(cfg_, w));
        case Coupling::pauli_fierz: return CMat(pauli_fierz_effective_potential(cfg_.grid, pf_components_, w));
    }
    throw PreconditionError("QCGenerator: unknown coupling");
}

CMat QCGenerator::to_interaction(const CMat& a, double t) const {
    const CVec phases = (cplx(0.0, t) * k0_values_.cast<cplx>()).array().exp();
    const CMat rotate = k0_vectors_ * phases.asDiagonal() * k0_vectors_.adjoint();
    return rotate * a * rotate.adjoint();
}

namespace {

CMat step_exponential(const PropagatorConfig& cfg, const QCGenerator& gen, const FieldVector& z, double tau,
                      double h) {
    const double node = cfg.integrator == Integrator::magnus2 ? tau + 0.5 * h : tau;
    const CMat g = gen(z, node);
    const double defect = max_abs(g - g.adjoint());
    if (defect > cfg.hermiticity_tol) {
        throw PreconditionError("propagator: generator hermiticity defect " + std::to_string(defect));
    }
    return expm_hermitian(0.5 * (g + g.adjoint()), cplx(0.0, -h));
}

}  // namespace

CMat propagator(const PropagatorConfig& cfg, const QCGenerator& gen, const FieldVector& z, double s, double t) {
    cfg.validate();
    const Eigen::Index dim = gen.particle_dim();
    CMat u = CMat::Identity(dim, dim);
    const double span = t - s;
    if (span == 0.0) {
        return u;
    }
    if (cfg.error_budget == 0.0) {
        const auto steps = static_cast<long>(std::max(1.0, std::ceil(std::abs(span) / cfg.dt - 1e-9)));
        const double h = span / static_cast<double>(steps);
        for (long i = 0; i < steps; ++i) {
            u = step_exponential(cfg, gen, z, s + static_cast<double>(i) * h, h) * u;
        }
        return u;
    }
    const double direction = span > 0.0 ? 1.0 : -1.0;
    double tau = s;
    double h = std::min(cfg.dt, std::abs(span));
    while (direction * (t - tau) > 1e-14 * std::abs(span)) {
        h = std::min(h, direction * (t - tau));
        const double sh = direction * h;
        const CMat full = step_exponential(cfg, gen, z, tau, sh);
        const CMat half = step_exponential(cfg, gen, z, tau + 0.5 * sh, 0.5 * sh) *
                          step_exponential(cfg, gen, z, tau, 0.5 * sh);
        if (max_abs(full - half) > cfg.error_budget) {
            h *= 0.5;
            if (h < cfg.dt_min) {
                throw StepControlError("propagator: step size fell below dt_min");
            }
            continue;
        }
        u = half * u;
        tau += sh;
        h = std::min(cfg.dt, 2.0 * h);
    }
    return u;
}

CMat propagate_sample(const PropagatorConfig& cfg, const QCGenerator& gen, const FieldVector& z, const CMat& gamma,
                      double s, double t) {
    if (gamma.rows() != gen.particle_dim() || gamma.cols() != gen.particle_dim()) {
        throw DimensionError("propagate_sample: density matrix does not match the particle space");
    }
    const CMat u = propagator(cfg, gen, z, s, t);
    return u * gamma * u.adjoint();
}

StateValuedMeasure evolve_measure(const PropagatorConfig& cfg, const QCGenerator& gen, const StateValuedMeasure& m,
                                  double t, int threads) {
    StateValuedMeasure out = m;
    parallel_for(m.size(), threads, [&](std::size_t k) {
        const Sample& in = m.samples()[k];
        Sample& dst = out.samples()[k];
        dst.state = t == 0.0 ? in.state : propagate_sample(cfg, gen, in.point, in.state, 0.0, t);
        dst.point = classical_field_flow(gen.model(), in.point, t);
    });
    return out;
}

std::vector<StateValuedMeasure> evolve_measure_trajectory(const PropagatorConfig& cfg, const QCGenerator& gen,
                                                          const StateValuedMeasure& m,
                                                          const std::vector<double>& times, int threads) {
    std::vector<StateValuedMeasure> out(times.size(), m);
    parallel_for(m.size(), threads, [&](std::size_t k) {
        const Sample& in = m.samples()[k];
        CMat u = CMat::Identity(gen.particle_dim(), gen.particle_dim());
        double previous = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            u = propagator(cfg, gen, in.point, previous, times[i]) * u;
            previous = times[i];
            Sample& dst = out[i].samples()[k];
            dst.state = u * in.state * u.adjoint();
            dst.point = classical_field_flow(gen.model(), in.point, times[i]);
        }
    });
    return out;
}

StateValuedMeasure interaction_picture_measure(const QCGenerator& gen, const StateValuedMeasure& m_t, double t) {
    StateValuedMeasure out = m_t;
    for (auto& s : out.samples()) {
        s.point = classical_field_flow(gen.model(), s.point, -t);
        s.state = gen.to_interaction(s.state, t);
    }
    return out;
}

StateValuedMeasure schrodinger_picture_measure(const QCGenerator& gen, const StateValuedMeasure& n_t, double t) {
    StateValuedMeasure out = n_t;
    for (auto& s : out.samples()) {
        s.point = classical_field_flow(gen.model(), s.point, t);
        s.state = gen.to_interaction(s.state, -t);
    }
    return out;
}

std::vector<double> simpson_weights(double s, double t, int steps) {
    if (steps < 2 || steps % 2 != 0) {
        throw PreconditionError("simpson_weights: need an even number of at least two intervals");
    }
    const double h = (t - s) / steps;
    std::vector<double> w(static_cast<std::size_t>(steps + 1));
    for (int i = 0; i <= steps; ++i) {
        const double factor = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[static_cast<std::size_t>(i)] = factor * h / 3.0;
    }
    return w;
}

CMat transport_residual(const QCGenerator& gen, const std::function<StateValuedMeasure(double)>& trajectory,
                        const FieldVector& eta, double s, double t, int quad_steps) {
    const std::vector<double> weights = simpson_weights(s, t, quad_steps);
    const Eigen::Index dim = gen.particle_dim();
    CMat integral = CMat::Zero(dim, dim);
    CMat first;
    CMat last;
    for (int i = 0; i <= quad_steps; ++i) {
        const double tau = s + (t - s) * i / quad_steps;
        const StateValuedMeasure n_tau = interaction_picture_measure(gen, trajectory(tau), tau);
        CMat integrand = CMat::Zero(dim, dim);
        for (const auto& sample : n_tau.samples()) {
            const CMat v = gen.to_interaction(gen.potential(sample.point, tau), tau);
            const cplx phase = std::exp(cplx(0.0, 2.0 * inner(eta, sample.point).real()));
            integrand += (sample.weight * phase) * (v * sample.state - sample.state * v);
        }
        integral += weights[static_cast<std::size_t>(i)] * integrand;
        if (i == 0) {
            first = fourier_transform(n_tau, eta);
        }
        if (i == quad_steps) {
            last = fourier_transform(n_tau, eta);
        }
    }
    return last - first + kI * integral;
}

}  // namespace qcl
