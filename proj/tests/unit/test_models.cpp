// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/models.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

using namespace qcl;
using qcl::testing::Gen;
using qcl::testing::max_abs_diff;
using qcl::testing::toy_model;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Dense Nelson Hamiltonian assembled independently of the library's sparse path.
CMat dense_nelson(const ModelConfig& m, const FockBasis& basis) {
    const Eigen::Index g = m.grid.size();
    const Eigen::Index f = basis.dimension();
    const double h2 = std::pow(m.grid.spacing(), 2);
    CMat k0 = CMat::Zero(g, g);
    for (Eigen::Index s = 0; s < g; ++s) {
        k0(s, s) += 2.0 / h2;
        k0(s, (s + 1) % g) -= 1.0 / h2;
        k0(s, (s + g - 1) % g) -= 1.0 / h2;
    }
    CMat field = CMat::Zero(f, f);
    for (Eigen::Index i = 0; i < f; ++i) {
        const auto& n = basis.multi_index(i);
        for (int k = 0; k < m.num_modes(); ++k) {
            field(i, i) += m.epsilon * m.omega(k) * n[static_cast<std::size_t>(k)];
        }
    }
    CMat h = CMat::Zero(g * f, g * f);
    for (Eigen::Index x = 0; x < g; ++x) {
        for (Eigen::Index y = 0; y < g; ++y) {
            h.block(x * f, y * f, f, f) += k0(x, y) * CMat::Identity(f, f);
        }
        h.block(x * f, x * f, f, f) += m.nu_scale() * field;
        CVec lam(m.num_modes());
        for (int k = 0; k < m.num_modes(); ++k) {
            lam(k) = m.lambda0(k) * std::exp(-kI * m.wave_numbers(k, 0) * m.grid.position(x)(0));
        }
        const CMat a = annihilator(basis, FieldVector(lam)).dense();
        h.block(x * f, x * f, f, f) += a + a.adjoint();
    }
    return h;
}

}  // namespace

TEST_CASE("K0 on one site is zero and is positive semidefinite") {
    ModelConfig m = toy_model(1, 1, 0.5, NuRegime::free, 0.1);
    CHECK(CMat(build_K0(m).matrix).cwiseAbs().maxCoeff() == 0.0);
    m = toy_model(12, 1, 0.5, NuRegime::free, 0.1);
    const CMat k0 = build_K0(m).dense();
    CHECK(build_K0(m).hermiticity_defect() == 0.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(k0);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("K0 has the finite-difference plane-wave spectrum") {
    const ModelConfig m = toy_model(10, 1, 0.5, NuRegime::free, 0.1);
    const CMat k0 = build_K0(m).dense();
    const double h = m.grid.spacing();
    const double length = m.grid.box_length;
    for (int n = 0; n < 10; ++n) {
        CVec v(10);
        for (int s = 0; s < 10; ++s) {
            v(s) = std::exp(2.0 * kPi * kI * static_cast<double>(n * s) / 10.0);
        }
        const double expected = 2.0 / (h * h) * (1.0 - std::cos(2.0 * kPi * n * h / length));
        CHECK((k0 * v - expected * v).norm() < 1e-10);
    }
}

TEST_CASE("trap adds a confining diagonal and two particles add kinetic terms") {
    ModelConfig m = toy_model(6, 1, 0.5, NuRegime::free, 0.1);
    const CMat free_k0 = build_K0(m).dense();
    m.trap_strength = 2.0;
    const CMat trapped = build_K0(m).dense();
    for (int s = 0; s < 6; ++s) {
        const double x = m.grid.position(s)(0) - 0.5 * m.grid.box_length;
        CHECK(std::abs(trapped(s, s) - free_k0(s, s) - 2.0 * x * x) < 1e-12);
    }
    m.trap_strength = 0.0;
    m.grid.num_particles = 2;
    const CMat pair = build_K0(m).dense();
    const CMat expected = Eigen::kroneckerProduct(free_k0, CMat::Identity(6, 6)).eval() +
                          Eigen::kroneckerProduct(CMat::Identity(6, 6), free_k0).eval();
    CHECK(max_abs_diff(pair, expected) < 1e-12);
}

TEST_CASE("Nelson Hamiltonian matches a dense oracle") {
    for (const auto regime : {NuRegime::constant, NuRegime::free}) {
        const ModelConfig m = toy_model(8, 1, 0.5, regime, 0.2);
        const FockBasis basis(FockSpec{1, 6, 0.2});
        const Operator h = build_nelson_hamiltonian(m, basis);
        CHECK(h.hermiticity_defect() <= 1e-12);
        const CMat oracle = dense_nelson(m, basis);
        CHECK(max_abs_diff(h.dense(), oracle) < 1e-12);
        Eigen::SelfAdjointEigenSolver<CMat> lib(h.dense());
        Eigen::SelfAdjointEigenSolver<CMat> ref(oracle);
        CHECK(std::abs(lib.eigenvalues()(0) - ref.eigenvalues()(0)) < 1e-10);
    }
}

TEST_CASE("decoupled Nelson spectrum is the sum of factor spectra") {
    const ModelConfig m = toy_model(5, 2, 0.0, NuRegime::free, 0.25);
    const FockBasis basis(FockSpec{2, 3, 0.25});
    Eigen::SelfAdjointEigenSolver<CMat> es(build_nelson_hamiltonian(m, basis).dense());
    Eigen::SelfAdjointEigenSolver<CMat> k0(build_K0(m).dense());
    std::vector<double> expected;
    for (Eigen::Index i = 0; i < k0.eigenvalues().size(); ++i) {
        for (Eigen::Index b = 0; b < basis.dimension(); ++b) {
            double field = 0.0;
            for (int k = 0; k < 2; ++k) {
                field += m.nu_scale() * 0.25 * m.omega(k) * basis.multi_index(b)[static_cast<std::size_t>(k)];
            }
            expected.push_back(k0.eigenvalues()(i) + field);
        }
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(std::abs(es.eigenvalues()(static_cast<Eigen::Index>(i)) - expected[i]) < 1e-10);
    }
}

TEST_CASE("Hamiltonian rejects mismatched bases") {
    const ModelConfig m = toy_model(4, 1, 0.5, NuRegime::free, 0.2);
    CHECK_THROWS_AS(build_nelson_hamiltonian(m, FockBasis(FockSpec{2, 3, 0.2})), DimensionError);
    CHECK_THROWS_AS(build_nelson_hamiltonian(m, FockBasis(FockSpec{1, 3, 0.1})), PreconditionError);
    ModelConfig bad = m;
    bad.omega(0) = 0.0;
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}

TEST_CASE("classical field flow: identity at zero, unitary and a group") {
    Gen gen(31);
    const ModelConfig m = toy_model(4, 3, 0.5, NuRegime::free, 0.2);
    for (int trial = 0; trial < 10; ++trial) {
        const FieldVector z = gen.field(3);
        const double s = gen.uniform(-3.0, 3.0);
        const double t = gen.uniform(-3.0, 3.0);
        CHECK(classical_field_flow(m, z, 0.0) == z);
        CHECK(std::abs(classical_field_flow(m, z, t).norm() - z.norm()) < 1e-14);
        const FieldVector two_step = classical_field_flow(m, classical_field_flow(m, z, s), t);
        CHECK((two_step - classical_field_flow(m, z, s + t)).norm() < 1e-13);
    }
    const ModelConfig frozen = toy_model(4, 3, 0.5, NuRegime::constant, 0.2);
    const FieldVector z = gen.field(3);
    CHECK(classical_field_flow(frozen, z, 2.5) == z);
}

TEST_CASE("effective potential: frozen for nu = 0, periodic for omega = 1, symbol at t = 0") {
    Gen gen(32);
    const FieldVector z = gen.field(2);
    const ModelConfig frozen = toy_model(8, 2, 0.5, NuRegime::constant, 0.2);
    CHECK(max_abs_diff(effective_potential(frozen, z, 0.0), effective_potential(frozen, z, 1.7)) == 0.0);

    ModelConfig periodic = toy_model(8, 2, 0.5, NuRegime::free, 0.2);
    periodic.omega.setOnes();
    CHECK(max_abs_diff(effective_potential(periodic, z, 0.3), effective_potential(periodic, z, 0.3 + 2.0 * kPi)) <
          1e-13);
    CHECK(max_abs_diff(effective_potential(periodic, z, 0.0),
                       evaluate_symbol(nelson_symbol(periodic.form_factor()), z, periodic.grid)) == 0.0);
    const CVec v = effective_potential(periodic, z, 0.4);
    CHECK(v.imag().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("polaron effective potential is hermitian and reduces to a multiplication below the cutoff") {
    Gen gen(33);
    ModelConfig m = toy_model(10, 4, 0.3, NuRegime::free, 0.2);
    m.coupling = Coupling::polaron;
    const FieldVector z = gen.field(4);
    m.polaron_cutoff = 1.5;
    const CMat v = CMat(polaron_effective_potential(m, z));
    CHECK(max_abs_diff(v, v.adjoint()) < 1e-12);
    CHECK(max_abs_diff(v, CMat(v.diagonal().asDiagonal())) > 1e-3);

    m.polaron_cutoff = 100.0;
    m.polaron_alpha = 2.0;
    const CMat inner_only = CMat(polaron_effective_potential(m, z));
    ModelConfig nelson = m;
    nelson.coupling = Coupling::nelson;
    nelson.lambda0 *= 2.0;
    CHECK(max_abs_diff(inner_only, CMat(effective_potential(nelson, z, 0.0).asDiagonal())) < 1e-13);
}

TEST_CASE("Pauli-Fierz effective potential is hermitian with transverse polarization") {
    Gen gen(34);
    ModelConfig m = toy_model(6, 2, 0.4, NuRegime::free, 0.2);
    m.coupling = Coupling::pauli_fierz;
    const FieldVector z = gen.field(2);
    const CMat v1 = effective_potential_matrix(m, z, 0.3);
    CHECK(max_abs_diff(v1, v1.adjoint()) < 1e-12);

    ModelConfig m2;
    m2.grid = ParticleGrid{2, 4, 2.0 * kPi, 1};
    m2.wave_numbers.resize(2, 2);
    m2.wave_numbers << 1.0, 0.0, 1.0, 1.0;
    m2.omega = RVec::Ones(2);
    m2.lambda0 = CVec::Constant(2, 0.3);
    m2.coupling = Coupling::pauli_fierz;
    const auto components = pauli_fierz_form_factors(m2);
    REQUIRE(components.size() == 2);
    for (int k = 0; k < 2; ++k) {
        const cplx dot = m2.wave_numbers(k, 0) * components[0].table()(k, 0) +
                         m2.wave_numbers(k, 1) * components[1].table()(k, 0);
        CHECK(std::abs(dot) < 1e-14);
    }
    const CMat v2 = effective_potential_matrix(m2, gen.field(2), 0.0);
    CHECK(max_abs_diff(v2, v2.adjoint()) < 1e-12);
}

TEST_CASE("coupling names round-trip") {
    for (const auto c : {Coupling::nelson, Coupling::polaron, Coupling::pauli_fierz}) {
        CHECK(coupling_from_string(to_string(c)) == c);
    }
    CHECK(nu_regime_from_string("free") == NuRegime::free);
    CHECK_THROWS_AS(nu_regime_from_string("fast"), PreconditionError);
}
