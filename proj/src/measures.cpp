// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/measures.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace qcl {

StateValuedMeasure::StateValuedMeasure(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty()) {
        return;
    }
    particle_dim_ = samples_.front().state.rows();
    num_modes_ = samples_.front().point.size();
    for (const auto& s : samples_) {
        if (s.state.rows() != particle_dim_ || s.state.cols() != particle_dim_) {
            throw DimensionError("StateValuedMeasure: states have inconsistent shapes");
        }
        if (s.point.size() != num_modes_) {
            throw DimensionError("StateValuedMeasure: points have inconsistent mode counts");
        }
    }
}

StateValuedMeasure StateValuedMeasure::zero(Eigen::Index particle_dim, Eigen::Index num_modes) {
    StateValuedMeasure m;
    m.particle_dim_ = particle_dim;
    m.num_modes_ = num_modes;
    return m;
}

StateValuedMeasure StateValuedMeasure::dirac(const FieldVector& z, const CMat& gamma, double weight) {
    return StateValuedMeasure({Sample{weight, z, gamma}});
}

double StateValuedMeasure::total_mass() const {
    double mass = 0.0;
    for (const auto& s : samples_) {
        mass += s.weight;
    }
    return mass;
}

void StateValuedMeasure::validate(double tol) const {
    for (const auto& s : samples_) {
        if (s.weight < 0.0 || !std::isfinite(s.weight)) {
            throw PreconditionError("StateValuedMeasure: weights must be nonnegative and finite");
        }
        if (!s.point.is_finite()) {
            throw PreconditionError("StateValuedMeasure: non-finite field point");
        }
        if (std::abs(s.state.trace() - cplx(1.0)) > tol) {
            throw PreconditionError("StateValuedMeasure: state trace differs from one");
        }
        if ((s.state - s.state.adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw PreconditionError("StateValuedMeasure: state is not hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMat> solver(s.state, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -tol) {
            throw PreconditionError("StateValuedMeasure: state is not positive");
        }
    }
}

CMat fourier_transform(const StateValuedMeasure& m, const FieldVector& eta) {
    CMat out = CMat::Zero(m.particle_dim(), m.particle_dim());
    for (const auto& s : m.samples()) {
        const double phase = 2.0 * inner(eta, s.point).real();
        out += (s.weight * std::exp(cplx(0.0, phase))) * s.state;
    }
    return out;
}

StateValuedMeasure pushforward(const StateValuedMeasure& m, const CMat& u, double tol) {
    if (u.rows() != m.num_modes() || u.cols() != m.num_modes()) {
        throw DimensionError("pushforward: flow matrix does not match the mode count");
    }
    if ((u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > tol) {
        throw PreconditionError("pushforward: flow is not unitary");
    }
    StateValuedMeasure out = m;
    for (auto& s : out.samples()) {
        s.point = FieldVector(CVec(u * s.point.components()));
    }
    return out;
}

CMat integrate(const StateValuedMeasure& m, const std::function<CMat(const FieldVector&)>& f, Side side) {
    CMat out = CMat::Zero(m.particle_dim(), m.particle_dim());
    for (const auto& s : m.samples()) {
        const CMat value = f(s.point);
        out += s.weight * (side == Side::right ? CMat(s.state * value) : CMat(value * s.state));
    }
    return out;
}

CMat condition(const StateValuedMeasure& m, const std::function<cplx(const FieldVector&)>& f, cplx value, double tol) {
    if (!(tol > 0.0)) {
        throw PreconditionError("condition: tolerance must be positive");
    }
    CMat out = CMat::Zero(m.particle_dim(), m.particle_dim());
    bool selected = false;
    for (const auto& s : m.samples()) {
        if (std::abs(f(s.point) - value) <= tol) {
            out += s.weight * s.state;
            selected = true;
        }
    }
    if (!selected) {
        throw EmptyConditioningError("condition: no sample lies in the level set");
    }
    return out;
}

double moment(const StateValuedMeasure& m, double delta) {
    double total = 0.0;
    for (const auto& s : m.samples()) {
        total += s.weight * std::pow(s.point.squared_norm() + 1.0, delta);
    }
    return total;
}

nlohmann::json complex_vector_to_json(const CVec& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

CVec complex_vector_from_json(const nlohmann::json& j) {
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = cplx(j[i].at(0).get<double>(), j[i].at(1).get<double>());
    }
    return v;
}

nlohmann::json complex_matrix_to_json(const CMat& a) {
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            data.push_back({a(r, c).real(), a(r, c).imag()});
        }
    }
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

CMat complex_matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
        throw DimensionError("complex_matrix_from_json: data length does not match rows * cols");
    }
    CMat a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& entry = data[static_cast<std::size_t>(r * cols + c)];
            a(r, c) = cplx(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return a;
}

nlohmann::json to_json(const StateValuedMeasure& m) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : m.samples()) {
        samples.push_back({{"weight", s.weight},
                           {"point", complex_vector_to_json(s.point.components())},
                           {"state", complex_matrix_to_json(s.state)}});
    }
    return {{"particle_dim", m.particle_dim()}, {"num_modes", m.num_modes()}, {"samples", std::move(samples)}};
}

StateValuedMeasure measure_from_json(const nlohmann::json& j) {
    std::vector<Sample> samples;
    for (const auto& s : j.at("samples")) {
        samples.push_back(Sample{s.at("weight").get<double>(), FieldVector(complex_vector_from_json(s.at("point"))),
                                 complex_matrix_from_json(s.at("state"))});
    }
    if (samples.empty()) {
        return StateValuedMeasure::zero(j.value("particle_dim", Eigen::Index{0}), j.value("num_modes", Eigen::Index{0}));
    }
    return StateValuedMeasure(std::move(samples));
}

}  // namespace qcl
