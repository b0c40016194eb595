// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/measures.hpp"

#include "qcl/linalg.hpp"
#include "qcl/qc_dynamics.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace qcl;
using qcl::testing::Gen;
using qcl::testing::max_abs_diff;

namespace {

StateValuedMeasure random_measure(Gen& gen, int samples, Eigen::Index dim, int modes) {
    std::vector<Sample> out;
    for (int k = 0; k < samples; ++k) {
        out.push_back(Sample{gen.uniform(0.0, 1.0), gen.field(modes), gen.density(dim)});
    }
    return StateValuedMeasure(std::move(out));
}

CMat pauli_x() {
    CMat x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return x;
}

}  // namespace

TEST_CASE("fourier transform at zero is the total state") {
    Gen gen(1);
    const auto m = random_measure(gen, 4, 3, 2);
    CMat total = CMat::Zero(3, 3);
    for (const auto& s : m.samples()) {
        total += s.weight * s.state;
    }
    CHECK(max_abs_diff(fourier_transform(m, FieldVector(2)), total) < 1e-15);
    CHECK(std::abs(fourier_transform(m, FieldVector(2)).trace().real() - m.total_mass()) < 1e-14);
}

TEST_CASE("fourier transform of a Dirac measure") {
    Gen gen(2);
    const FieldVector z0 = gen.field(2);
    const FieldVector eta = gen.field(2);
    const CMat gamma = gen.density(3);
    const CMat ft = fourier_transform(StateValuedMeasure::dirac(z0, gamma), eta);
    CHECK(max_abs_diff(ft, gamma * std::exp(2.0 * kI * inner(eta, z0).real())) < 1e-15);
}

TEST_CASE("property: trace norm of the fourier transform is bounded by the mass") {
    Gen gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_measure(gen, gen.integer(1, 5), 3, 2);
        CHECK(trace_norm(fourier_transform(m, gen.field(2, 3.0))) <= m.total_mass() + 1e-12);
    }
}

TEST_CASE("pushforward: identity, rotation of a Dirac, change of variables") {
    Gen gen(4);
    const auto m = random_measure(gen, 3, 2, 2);
    const auto same = pushforward(m, CMat::Identity(2, 2));
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(same.samples()[k].point == m.samples()[k].point);
    }
    for (int trial = 0; trial < 10; ++trial) {
        CVec phases(2);
        phases << std::exp(kI * gen.uniform(0.0, 6.0)), std::exp(kI * gen.uniform(0.0, 6.0));
        const CMat u = phases.asDiagonal();
        const FieldVector eta = gen.field(2);
        const CMat lhs = fourier_transform(pushforward(m, u), eta);
        const CMat rhs = fourier_transform(m, FieldVector(CVec(u.adjoint() * eta.components())));
        CHECK(max_abs_diff(lhs, rhs) < 1e-14);
    }
    const FieldVector z0 = gen.field(2);
    CVec w(2);
    w << std::exp(-kI * 0.3), std::exp(-kI * 0.6);
    const auto moved = pushforward(StateValuedMeasure::dirac(z0, CMat::Identity(1, 1)), CMat(w.asDiagonal()));
    CHECK((moved.samples()[0].point.components() - w.cwiseProduct(z0.components())).norm() < 1e-15);
    CHECK_THROWS_AS(pushforward(m, 2.0 * CMat::Identity(2, 2)), PreconditionError);
}

TEST_CASE("integrate: identity, scalar functions and the left-right commutator") {
    Gen gen(5);
    const auto m = random_measure(gen, 3, 2, 1);
    const auto id = [](const FieldVector&) { return CMat(CMat::Identity(2, 2)); };
    const CMat mass = fourier_transform(m, FieldVector(1));
    CHECK(max_abs_diff(integrate(m, id, Side::left), mass) < 1e-15);
    CHECK(max_abs_diff(integrate(m, id, Side::right), mass) < 1e-15);

    const FieldVector eta = gen.field(1);
    const auto phase = [&](const FieldVector& z) {
        return CMat(std::exp(2.0 * kI * inner(eta, z).real()) * CMat::Identity(2, 2));
    };
    CHECK(max_abs_diff(integrate(m, phase, Side::left), fourier_transform(m, eta)) < 1e-14);
    CHECK(max_abs_diff(integrate(m, phase, Side::right), fourier_transform(m, eta)) < 1e-14);

    // two samples with non-commuting F: left - right = sum_k w_k [F(z_k), gamma_k]
    CMat g1(2, 2);
    g1 << 1.0, 0.0, 0.0, 0.0;
    CMat g2(2, 2);
    g2 << 0.5, 0.5, 0.5, 0.5;
    const StateValuedMeasure toy({Sample{0.4, FieldVector(CVec::Constant(1, 1.0)), g1},
                                  Sample{0.6, FieldVector(CVec::Constant(1, 2.0)), g2}});
    const auto f = [](const FieldVector& z) { return CMat(z[0] * pauli_x()); };
    const CMat diff = integrate(toy, f, Side::left) - integrate(toy, f, Side::right);
    CMat expected = 0.4 * (pauli_x() * g1 - g1 * pauli_x());
    expected += 0.6 * 2.0 * (pauli_x() * g2 - g2 * pauli_x());
    CHECK(max_abs_diff(diff, expected) < 1e-15);
    CHECK(diff.norm() > 0.1);
}

TEST_CASE("condition: constant function, partition and empty selection") {
    Gen gen(6);
    const auto m = random_measure(gen, 5, 2, 1);
    const CMat mass = fourier_transform(m, FieldVector(1));
    CHECK(max_abs_diff(condition(m, [](const FieldVector&) { return cplx(3.0); }, 3.0, 1e-12), mass) < 1e-15);
    const auto sign = [](const FieldVector& z) { return cplx(z[0].real() >= 0.0 ? 1.0 : -1.0); };
    CMat sum = CMat::Zero(2, 2);
    for (const double v : {1.0, -1.0}) {
        try {
            sum += condition(m, sign, v, 1e-12);
        } catch (const EmptyConditioningError&) {
        }
    }
    CHECK(max_abs_diff(sum, mass) < 1e-15);
    CHECK_THROWS_AS(condition(m, sign, 7.0, 1e-12), EmptyConditioningError);
}

TEST_CASE("conditioning does not commute with evolution") {
    // Two atoms with distinct field points and the same particle state;
    // conditioning on the first point then evolving differs from evolving the
    // whole measure and conditioning on the evolved point.
    ModelConfig model = qcl::testing::toy_model(6, 1, 0.8, NuRegime::constant, 0.1);
    const QCGenerator gen(model);
    PropagatorConfig cfg;
    cfg.dt = 1e-2;
    CVec psi = CVec::Zero(6);
    psi(0) = 1.0;
    const CMat gamma = psi * psi.adjoint();
    const FieldVector za(CVec::Constant(1, 1.0));
    const FieldVector zb(CVec::Constant(1, -1.0));
    const StateValuedMeasure m({Sample{0.5, za, gamma}, Sample{0.5, zb, gamma}});
    const auto is_a = [&](const FieldVector& z) { return cplx(z == za ? 1.0 : 0.0); };

    const CMat conditioned = condition(m, is_a, 1.0, 1e-12);
    const CMat then_evolved = propagate_sample(cfg, gen, za, conditioned / conditioned.trace(), 0.0, 1.0);
    const auto evolved = evolve_measure(cfg, gen, m, 1.0);
    const CMat mixed_evolution = fourier_transform(evolved, FieldVector(1));
    CHECK(max_abs_diff(then_evolved * 0.5, condition(evolved, is_a, 1.0, 1e-12)) < 1e-12);
    CHECK(max_abs_diff(then_evolved, mixed_evolution) > 1e-2);
}

TEST_CASE("moment: zero order is the mass, Dirac value, monotone in delta") {
    Gen gen(7);
    const auto m = random_measure(gen, 4, 2, 2);
    CHECK(std::abs(moment(m, 0.0) - m.total_mass()) < 1e-15);
    const StateValuedMeasure d = StateValuedMeasure::dirac(FieldVector(CVec::Unit(2, 1)), CMat::Identity(1, 1));
    CHECK(std::abs(moment(d, 1.0) - 2.0) < 1e-15);
    double previous = moment(m, 0.0);
    for (const double delta : {0.25, 0.5, 1.0, 2.0}) {
        const double value = moment(m, delta);
        CHECK(value >= previous);
        previous = value;
    }
}

TEST_CASE("measure validation and JSON round trip") {
    Gen gen(8);
    const auto m = random_measure(gen, 3, 2, 2);
    m.validate();
    const auto back = measure_from_json(nlohmann::json::parse(to_json(m).dump()));
    REQUIRE(back.size() == m.size());
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK(back.samples()[k].weight == m.samples()[k].weight);
        CHECK(back.samples()[k].point == m.samples()[k].point);
        CHECK(back.samples()[k].state == m.samples()[k].state);
    }
    CHECK(StateValuedMeasure::zero(3, 2).total_mass() == 0.0);
    CMat not_psd = CMat::Identity(2, 2);
    not_psd(1, 1) = -1.0;
    not_psd(0, 0) = 2.0;
    CHECK_THROWS_AS(StateValuedMeasure::dirac(gen.field(2), not_psd).validate(), PreconditionError);
    CHECK_THROWS_AS(StateValuedMeasure::dirac(gen.field(2), CMat::Identity(2, 2), -1.0).validate(),
                    PreconditionError);
}
