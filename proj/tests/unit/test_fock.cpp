// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/fock.hpp"

#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

using namespace qcl;
using qcl::testing::Gen;
using Catch::Matchers::WithinAbs;

namespace {

// Brute-force count of multi-indices with total <= quanta.
std::uint64_t count_states(int modes, int quanta) {
    if (modes == 0) {
        return 1;
    }
    std::uint64_t total = 0;
    for (int n = 0; n <= quanta; ++n) {
        total += count_states(modes - 1, quanta - n);
    }
    return total;
}

CVec basis_vector(const FockBasis& basis, const FockBasis::MultiIndex& n) {
    CVec v = CVec::Zero(basis.dimension());
    v(*basis.index_of(n)) = 1.0;
    return v;
}

}  // namespace

TEST_CASE("basis dimension matches stars and bars") {
    CHECK(FockBasis(FockSpec{2, 3, 1.0}).dimension() == 10);
    CHECK(FockBasis(FockSpec{1, 0, 1.0}).dimension() == 1);
    CHECK(FockBasis(FockSpec{3, 2, 1.0}).dimension() == 10);
    for (int modes = 1; modes <= 4; ++modes) {
        for (int quanta = 0; quanta <= 6; ++quanta) {
            const auto expected = count_states(modes, quanta);
            CHECK(fock_dimension(modes, quanta) == expected);
            CHECK(static_cast<std::uint64_t>(FockBasis(FockSpec{modes, quanta, 0.5}).dimension()) == expected);
        }
    }
}

TEST_CASE("fock_dimension saturates instead of overflowing") {
    CHECK(fock_dimension(200, 200) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("basis construction rejects invalid specs and oversize bases") {
    CHECK_THROWS_AS(FockBasis(FockSpec{0, 3, 1.0}), PreconditionError);
    CHECK_THROWS_AS(FockBasis(FockSpec{1, 3, 0.0}), PreconditionError);
    CHECK_THROWS_AS(FockBasis(FockSpec{1, -1, 1.0}), PreconditionError);
    CHECK_THROWS_AS(FockBasis(FockSpec{6, 40, 1.0}, 1000), TruncationError);
}

TEST_CASE("index_of is a bijection with graded prefixes") {
    const FockBasis basis(FockSpec{3, 5, 0.2});
    std::set<FockBasis::MultiIndex> seen;
    int last_total = 0;
    for (Eigen::Index i = 0; i < basis.dimension(); ++i) {
        const auto& n = basis.multi_index(i);
        CHECK(basis.index_of(n) == i);
        CHECK(seen.insert(n).second);
        int total = 0;
        for (const int k : n) {
            total += k;
        }
        CHECK(total == basis.total_quanta(i));
        CHECK(total >= last_total);
        last_total = total;
    }
    for (int q = 0; q <= 5; ++q) {
        CHECK(static_cast<std::uint64_t>(basis.prefix_dimension(q)) == count_states(3, q));
    }
    CHECK_FALSE(basis.index_of({6, 0, 0}).has_value());
    CHECK_FALSE(basis.index_of({1, 1}).has_value());
}

TEST_CASE("single-mode annihilator matches sqrt(n) ladder") {
    const double eps = 0.3;
    const FockBasis basis(FockSpec{1, 8, eps});
    const CMat a = annihilator(basis, FieldVector(CVec::Ones(1))).dense();
    for (int n = 1; n <= 8; ++n) {
        CHECK_THAT(std::abs(a(n - 1, n) - std::sqrt(eps * n)), WithinAbs(0.0, 1e-15));
    }
    CHECK_THAT(a.cwiseAbs().sum() - a.diagonal(1).cwiseAbs().sum(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("annihilator kills the vacuum and the vacuum commutator is eps") {
    const FockBasis basis(FockSpec{2, 4, 0.5});
    const FieldVector e1(CVec::Unit(2, 0));
    const CVec vac = basis_vector(basis, {0, 0});
    CHECK(annihilator(basis, e1).apply(vac).norm() == 0.0);
    const CMat a = annihilator(basis, e1).dense();
    const CMat ad = creator(basis, e1).dense();
    const cplx value = vac.dot((a * ad - ad * a) * vac);
    CHECK_THAT(value.real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(value.imag(), WithinAbs(0.0, 1e-15));
}

TEST_CASE("creator is the adjoint of the annihilator") {
    Gen gen(11);
    const FockBasis basis(FockSpec{2, 5, 0.25});
    const FieldVector f = gen.field(2);
    CHECK(qcl::testing::max_abs_diff(creator(basis, f).dense(), annihilator(basis, f).dense().adjoint()) < 1e-15);
}

TEST_CASE("property: projected CCR [a(f), a^dagger(g)] = eps <f, g> below the cap") {
    Gen gen(20260101);
    for (const double eps : {1.0, 0.5, 0.1}) {
        for (const int modes : {1, 2}) {
            const int cap = 4;
            const FockBasis basis(FockSpec{modes, cap, eps});
            const Eigen::Index inner_dim = basis.prefix_dimension(cap - 1);
            for (int trial = 0; trial < 10; ++trial) {
                const FieldVector f = gen.field(modes);
                const FieldVector g = gen.field(modes);
                const CMat a = annihilator(basis, f).dense();
                const CMat ad = creator(basis, g).dense();
                const CMat c = a * ad - ad * a;
                const CMat expected = eps * inner(f, g) * CMat::Identity(inner_dim, inner_dim);
                CHECK(qcl::testing::max_abs_diff(c.topLeftCorner(inner_dim, inner_dim), expected) <= 1e-12);
                // [a(f), a(g)] = 0 holds exactly, truncation included
                const CMat b = annihilator(basis, g).dense();
                CHECK((a * b - b * a).cwiseAbs().maxCoeff() <= 1e-12);
            }
        }
    }
}

TEST_CASE("second quantization eigenvalues") {
    const FockBasis b1(FockSpec{2, 4, 0.1});
    const CMat n1 = number_operator(b1).dense();
    CHECK(n1(0, 0) == cplx(0.0));
    const auto i21 = *b1.index_of({2, 1});
    CHECK_THAT(n1(i21, i21).real(), WithinAbs(0.3, 1e-15));

    const FockBasis b2(FockSpec{2, 4, 0.5});
    RVec omega(2);
    omega << 1.0, 2.0;
    const CMat d = second_quantize(b2, omega).dense();
    const auto i11 = *b2.index_of({1, 1});
    CHECK_THAT(d(i11, i11).real(), WithinAbs(1.5, 1e-15));
    CHECK(d.isDiagonal());
    CHECK_THROWS_AS(second_quantize(b2, RVec::Ones(3)), DimensionError);
}

TEST_CASE("field operator is hermitian with vacuum variance eps |f|^2") {
    Gen gen(3);
    const FockBasis basis(FockSpec{2, 6, 0.25});
    CHECK(field_operator(basis, FieldVector(2)).matrix.norm() == 0.0);
    CVec fv(2);
    fv << cplx(1.0, 0.0), cplx(0.0, 1.0);
    const Operator phi = field_operator(basis, FieldVector(fv));
    CHECK(phi.hermiticity_defect() == 0.0);
    const CMat p = phi.dense();
    const CVec vac = basis_vector(basis, {0, 0});
    CHECK_THAT(vac.dot(p * p * vac).real(), WithinAbs(0.5, 1e-14));
    for (int trial = 0; trial < 5; ++trial) {
        CHECK(field_operator(basis, gen.field(2)).hermiticity_defect() == 0.0);
    }
}

TEST_CASE("Weyl operator: identity at zero and vacuum overlap") {
    const FockBasis small(FockSpec{2, 3, 0.5});
    const WeylOperator w0 = weyl_operator(small, FieldVector(2));
    CHECK(qcl::testing::max_abs_diff(w0.op.dense(), CMat::Identity(small.dimension(), small.dimension())) < 1e-15);

    const FockBasis basis(FockSpec{1, 40, 0.5});
    const WeylOperator w = weyl_operator(basis, FieldVector(CVec::Ones(1)));
    CHECK(w.unitarity_defect < 1e-12);
    CHECK_THAT(std::abs(w.op.dense()(0, 0) - std::exp(-0.25)), WithinAbs(0.0, 1e-12));
    CHECK_THAT(std::exp(-0.25), WithinAbs(0.7788, 1e-4));
}

TEST_CASE("Weyl shift relation on the low-quanta subspace") {
    const double eps = 0.2;
    const FockBasis basis(FockSpec{1, 12, eps});
    const FieldVector eta(CVec::Constant(1, cplx(0.4, -0.3)));
    const FieldVector f(CVec::Constant(1, cplx(0.7, 0.2)));
    const CMat w = weyl_operator(basis, eta).op.dense();
    const CMat a = annihilator(basis, f).dense();
    const CMat lhs = w.adjoint() * a * w;
    const CMat rhs = a + kI * eps * inner(f, eta) * CMat::Identity(basis.dimension(), basis.dimension());
    const Eigen::Index low = basis.prefix_dimension(3);
    CHECK(qcl::testing::max_abs_diff(lhs.topLeftCorner(low, low), rhs.topLeftCorner(low, low)) < 1e-6);
}

TEST_CASE("property: Weyl composition law on vacuum matrix elements") {
    Gen gen(5);
    const double eps = 0.3;
    const FockBasis basis(FockSpec{2, 24, eps});
    for (int trial = 0; trial < 4; ++trial) {
        const FieldVector eta = gen.field(2, 0.5);
        const FieldVector xi = gen.field(2, 0.5);
        const CMat we = weyl_operator(basis, eta).op.dense();
        const CMat wx = weyl_operator(basis, xi).op.dense();
        const CMat ws = weyl_operator(basis, eta + xi).op.dense();
        const cplx phase = std::exp(-kI * eps * inner(eta, xi).imag());
        CHECK(std::abs((we * wx)(0, 0) - phase * ws(0, 0)) < 1e-10);
    }
}

TEST_CASE("apply_weyl Krylov path matches the dense exponential") {
    Gen gen(17);
    const FockBasis basis(FockSpec{2, 30, 0.1});
    REQUIRE(basis.dimension() > 400);
    const FieldVector eta = gen.field(2, 0.8);
    CMat vectors(basis.dimension(), 3);
    for (int c = 0; c < 3; ++c) {
        vectors.col(c) = gen.unit_vector(basis.dimension());
    }
    const CMat dense = weyl_operator(basis, eta).op.dense() * vectors;
    CHECK(qcl::testing::max_abs_diff(apply_weyl(basis, eta, vectors), dense) < 1e-10);
}

TEST_CASE("coherent state: vacuum at zero, eigen-relation and number expectation") {
    const FockBasis basis(FockSpec{1, 40, 0.25});
    const CoherentState vac = coherent_state(basis, FieldVector(1));
    CHECK(std::abs(vac.vector(0) - 1.0) < 1e-15);
    CHECK(vac.vector.tail(basis.dimension() - 1).norm() == 0.0);

    const cplx z0(0.6, 0.8);
    const CoherentState cs = coherent_state(basis, FieldVector(CVec::Constant(1, z0)));
    CHECK_THAT(cs.vector.norm(), WithinAbs(1.0, 1e-14));
    const double n_mean = cs.vector.dot(number_operator(basis).apply(cs.vector)).real();
    CHECK_THAT(n_mean, WithinAbs(1.0, 1e-6));

    // explicit series e^{-|b|^2/2} b^n / sqrt(n!) with b = z0 / sqrt(eps)
    const cplx beta = z0 / std::sqrt(0.25);
    for (int n = 0; n <= 10; ++n) {
        const cplx expected = std::exp(-0.5 * std::norm(beta)) * std::pow(beta, n) / std::sqrt(std::tgamma(n + 1.0));
        CHECK(std::abs(cs.vector(n) - expected) < 1e-12);
    }
    const CMat a = annihilator(basis, FieldVector(CVec::Ones(1))).dense();
    const CVec residual = a * cs.vector - z0 * cs.vector;
    CHECK(residual.head(20).norm() < 1e-10);
}

TEST_CASE("coherent state precondition and mass defect") {
    const FockBasis basis(FockSpec{1, 16, 0.1});
    CHECK_THROWS_AS(coherent_state(basis, FieldVector(CVec::Constant(1, 1.0))), TruncationError);
    const CoherentState cs = coherent_state(basis, FieldVector(CVec::Constant(1, 0.5)));
    CHECK(cs.mass_defect >= 0.0);
    CHECK(cs.mass_defect < 1e-6);
}

TEST_CASE("coherent Fourier pairing tends to exp(2i Re<eta, z0>)") {
    CVec z(2);
    z << cplx(0.5, 0.0), cplx(0.0, 0.3);
    CVec e(2);
    e << cplx(0.4, 0.1), cplx(-0.2, 0.3);
    const FieldVector z0(z);
    const FieldVector eta(e);
    const cplx limit = std::exp(2.0 * kI * inner(eta, z0).real());
    double previous = 1e300;
    for (const double eps : {0.4, 0.2, 0.1}) {
        const FockBasis basis(FockSpec{2, recommended_quanta_cap(z0.squared_norm(), eps), eps});
        const CVec psi = coherent_state(basis, z0).vector;
        const cplx pairing = psi.dot(CVec(apply_weyl(basis, eta, psi).col(0)));
        const cplx closed_form = std::exp(-0.5 * eps * eta.squared_norm()) * limit;
        CHECK(std::abs(pairing - closed_form) < 1e-8);
        const double distance = std::abs(pairing - limit);
        CHECK(distance < previous);
        previous = distance;
    }
}

TEST_CASE("partial trace over the field") {
    Gen gen(9);
    const CVec particle = gen.unit_vector(3);
    const CVec field = gen.unit_vector(5);
    const CMat gamma = partial_trace_field(HybridState::product(particle, field));
    CHECK(qcl::testing::max_abs_diff(gamma, particle * particle.adjoint()) < 1e-14);

    CVec bell = CVec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const CMat half = partial_trace_field(HybridState(2, 2, bell));
    CHECK(qcl::testing::max_abs_diff(half, 0.5 * CMat::Identity(2, 2)) < 1e-15);

    // ensemble of two pure components, checked against the dense joint density matrix
    const CVec v1 = gen.unit_vector(6);
    const CVec v2 = gen.unit_vector(6);
    const HybridState mixed(2, 3, {{0.25, v1}, {0.75, v2}});
    const CMat rho = 0.25 * v1 * v1.adjoint() + 0.75 * v2 * v2.adjoint();
    CMat oracle = CMat::Zero(2, 2);
    for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) {
            for (int f = 0; f < 3; ++f) {
                oracle(p, q) += rho(p * 3 + f, q * 3 + f);
            }
        }
    }
    CHECK(qcl::testing::max_abs_diff(partial_trace_field(mixed), oracle) < 1e-15);
}

TEST_CASE("recommended quanta cap") {
    CHECK(recommended_quanta_cap(0.0, 0.1) == 16);
    CHECK(recommended_quanta_cap(1.0, 0.1) == 80);
    CHECK(recommended_quanta_cap(0.34, 0.05, 4) == 55);
}
