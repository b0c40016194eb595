// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qcl/fock.hpp"

#include <vector>

namespace qcl {

/// Periodic particle grid. Each particle lives on points_per_axis^dimension
/// sites of spacing box_length / points_per_axis; configurations of N
/// particles are ordered with the first particle most significant.
struct ParticleGrid {
    int dimension = 1;
    int points_per_axis = 1;
    double box_length = 1.0;
    int num_particles = 1;

    void validate() const;
    [[nodiscard]] double spacing() const { return box_length / points_per_axis; }
    [[nodiscard]] Eigen::Index single_size() const;
    [[nodiscard]] Eigen::Index size() const;
    /// Cartesian position of single-particle site `site`.
    [[nodiscard]] RVec position(Eigen::Index site) const;
    /// Per-axis integer coordinates of `site`, first axis most significant.
    [[nodiscard]] std::vector<int> axis_indices(Eigen::Index site) const;
    [[nodiscard]] Eigen::Index site_of(const std::vector<int>& axis) const;
    /// Sites occupied by each particle in configuration `config`.
    [[nodiscard]] std::vector<Eigen::Index> sites(Eigen::Index config) const;

    friend bool operator==(const ParticleGrid&, const ParticleGrid&) = default;
};

/// Coupling factor x -> lambda(x) tabulated on the single-particle sites.
class FormFactor {
public:
    FormFactor() = default;
    /// `table` is modes x sites; column s holds lambda(x_s).
    explicit FormFactor(CMat table);

    /// lambda(x; k) = lambda0_k exp(-i k.x); `wave_numbers` is modes x dimension.
    [[nodiscard]] static FormFactor plane_wave(const ParticleGrid& grid, const Eigen::MatrixXd& wave_numbers,
                                               const CVec& lambda0);

    [[nodiscard]] Eigen::Index num_modes() const noexcept { return table_.rows(); }
    [[nodiscard]] Eigen::Index num_sites() const noexcept { return table_.cols(); }
    [[nodiscard]] FieldVector at(Eigen::Index site) const { return FieldVector(CVec(table_.col(site))); }
    [[nodiscard]] const CMat& table() const noexcept { return table_; }
    /// max over sites of |lambda(x)|.
    [[nodiscard]] double sup_norm() const noexcept { return sup_norm_; }

private:
    CMat table_;
    double sup_norm_ = 0.0;
};

/// Monomial of class S_{l,m}: sum over particles j of
/// prod_i <z, c_i(x_j)> * prod_i <a_i(x_j), z>.
struct SymbolSpec {
    std::vector<FormFactor> creation;
    std::vector<FormFactor> annihilation;

    [[nodiscard]] int degree() const { return static_cast<int>(creation.size() + annihilation.size()); }
    /// Factor i in creation-then-annihilation order.
    [[nodiscard]] const FormFactor& factor(int i) const;
    [[nodiscard]] bool is_creation(int i) const { return i < static_cast<int>(creation.size()); }
    /// Symbol of the adjoint Wick operator.
    [[nodiscard]] SymbolSpec adjoint() const;
    void validate(const ParticleGrid& grid) const;
};

/// Sum of monomials.
struct PolynomialSymbol {
    std::vector<SymbolSpec> terms;
};

/// The Nelson interaction V(z) = sum_j 2 Re <z, lambda(x_j)>.
[[nodiscard]] PolynomialSymbol nelson_symbol(const FormFactor& lambda);

/// Diagonal of the multiplication operator F(z) on the particle grid.
[[nodiscard]] CVec evaluate_symbol(const SymbolSpec& sym, const FieldVector& z, const ParticleGrid& grid);
[[nodiscard]] CVec evaluate_symbol(const PolynomialSymbol& sym, const FieldVector& z, const ParticleGrid& grid);

/// Piecewise-constant replacement of a symbol's form factors.
struct SimpleSymbol {
    struct Piece {
        std::vector<Eigen::Index> cell;          // single-particle sites, ascending
        std::vector<FieldVector> coefficients;   // one per factor
    };
    std::vector<Piece> pieces;
    int resolution = 1;
    int num_creation = 0;

    /// The same monomial with every form factor replaced by its cell value.
    [[nodiscard]] SymbolSpec as_symbol(Eigen::Index num_sites) const;
};

/// Level-set partition of each factor's real and imaginary, positive and
/// negative parts into `levels` bands of width K |z| / levels. Cells collect
/// sites with identical band tuples; the representative is the smallest site.
[[nodiscard]] SimpleSymbol simple_approximate(const SymbolSpec& sym, const FieldVector& z, int levels);

/// Sup over the grid of |F(z) - F_M(z)|.
[[nodiscard]] double simple_error(const SymbolSpec& sym, const SimpleSymbol& simple, const FieldVector& z,
                                  const ParticleGrid& grid);

/// Normal-ordered quantization sum_j a^dagger(c_1(x_j))...a(a_m(x_j)), block
/// diagonal over particle configurations.
[[nodiscard]] Operator wick_quantize(const SymbolSpec& sym, const FockBasis& basis, const ParticleGrid& grid);
[[nodiscard]] Operator wick_quantize(const PolynomialSymbol& sym, const FockBasis& basis, const ParticleGrid& grid);

/// Block-diagonal joint operator from one Fock operator per single-particle
/// site: configuration x gets sum_j blocks[x_j].
[[nodiscard]] SpMat site_sum_operator(const std::vector<SpMat>& blocks, const ParticleGrid& grid);

}  // namespace qcl
