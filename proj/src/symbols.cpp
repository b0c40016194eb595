// Copyright 2026 The qclab Authors
// SPDX-License-Identifier: Apache-2.0

#include "qcl/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qcl {

void ParticleGrid::validate() const {
    if (dimension < 1 || points_per_axis < 1 || num_particles < 1) {
        throw PreconditionError("ParticleGrid: dimension, points_per_axis and num_particles must be positive");
    }
    if (!(box_length > 0.0)) {
        throw PreconditionError("ParticleGrid: box_length must be positive");
    }
}

Eigen::Index ParticleGrid::single_size() const {
    Eigen::Index n = 1;
    for (int a = 0; a < dimension; ++a) {
        n *= points_per_axis;
    }
    return n;
}

Eigen::Index ParticleGrid::size() const {
    Eigen::Index n = 1;
    for (int j = 0; j < num_particles; ++j) {
        n *= single_size();
    }
    return n;
}

std::vector<int> ParticleGrid::axis_indices(Eigen::Index site) const {
    std::vector<int> axis(static_cast<std::size_t>(dimension));
    for (int a = dimension - 1; a >= 0; --a) {
        axis[static_cast<std::size_t>(a)] = static_cast<int>(site % points_per_axis);
        site /= points_per_axis;
    }
    return axis;
}

Eigen::Index ParticleGrid::site_of(const std::vector<int>& axis) const {
    Eigen::Index site = 0;
    for (int a = 0; a < dimension; ++a) {
        const int wrapped = ((axis[static_cast<std::size_t>(a)] % points_per_axis) + points_per_axis) % points_per_axis;
        site = site * points_per_axis + wrapped;
    }
    return site;
}

RVec ParticleGrid::position(Eigen::Index site) const {
    const auto axis = axis_indices(site);
    RVec x(dimension);
    for (int a = 0; a < dimension; ++a) {
        x(a) = axis[static_cast<std::size_t>(a)] * spacing();
    }
    return x;
}

std::vector<Eigen::Index> ParticleGrid::sites(Eigen::Index config) const {
    const Eigen::Index g = single_size();
    std::vector<Eigen::Index> out(static_cast<std::size_t>(num_particles));
    for (int j = num_particles - 1; j >= 0; --j) {
        out[static_cast<std::size_t>(j)] = config % g;
        config /= g;
    }
    return out;
}

FormFactor::FormFactor(CMat table) : table_(std::move(table)) {
    if (!table_.allFinite()) {
        throw PreconditionError("FormFactor: non-finite entries");
    }
    sup_norm_ = table_.size() == 0 ? 0.0 : table_.colwise().norm().maxCoeff();
}

FormFactor FormFactor::plane_wave(const ParticleGrid& grid, const Eigen::MatrixXd& wave_numbers, const CVec& lambda0) {
    grid.validate();
    if (wave_numbers.rows() != lambda0.size() || wave_numbers.cols() != grid.dimension) {
        throw DimensionError("FormFactor::plane_wave: wave_numbers must be modes x dimension");
    }
    CMat table(lambda0.size(), grid.single_size());
    for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
        const RVec x = grid.position(s);
        for (Eigen::Index k = 0; k < lambda0.size(); ++k) {
            table(k, s) = lambda0(k) * std::exp(-kI * wave_numbers.row(k).dot(x));
        }
    }
    return FormFactor(std::move(table));
}

const FormFactor& SymbolSpec::factor(int i) const {
    const auto ell = static_cast<int>(creation.size());
    return i < ell ? creation.at(static_cast<std::size_t>(i)) : annihilation.at(static_cast<std::size_t>(i - ell));
}

SymbolSpec SymbolSpec::adjoint() const {
    SymbolSpec out;
    out.creation.assign(annihilation.rbegin(), annihilation.rend());
    out.annihilation.assign(creation.rbegin(), creation.rend());
    return out;
}

void SymbolSpec::validate(const ParticleGrid& grid) const {
    if (degree() < 1) {
        throw PreconditionError("SymbolSpec: needs at least one factor");
    }
    const Eigen::Index modes = factor(0).num_modes();
    for (int i = 0; i < degree(); ++i) {
        if (factor(i).num_sites() != grid.single_size()) {
            throw DimensionError("SymbolSpec: form factor sampled on a different grid");
        }
        if (factor(i).num_modes() != modes) {
            throw DimensionError("SymbolSpec: form factors use inconsistent mode sets");
        }
    }
}

PolynomialSymbol nelson_symbol(const FormFactor& lambda) {
    PolynomialSymbol v;
    v.terms.push_back(SymbolSpec{{lambda}, {}});
    v.terms.push_back(SymbolSpec{{}, {lambda}});
    return v;
}

namespace {

// prod_i <z, c_i(x)> prod_i <a_i(x), z> at one single-particle site.
cplx site_value(const SymbolSpec& sym, const FieldVector& z, Eigen::Index site) {
    cplx value = 1.0;
    for (int i = 0; i < sym.degree(); ++i) {
        const auto col = sym.factor(i).table().col(site);
        value *= sym.is_creation(i) ? z.components().dot(col) : col.dot(z.components());
    }
    return value;
}

}  // namespace

CVec evaluate_symbol(const SymbolSpec& sym, const FieldVector& z, const ParticleGrid& grid) {
    sym.validate(grid);
    if (z.size() != sym.factor(0).num_modes()) {
        throw DimensionError("evaluate_symbol: field vector and form factor mode counts differ");
    }
    CVec per_site(grid.single_size());
    for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
        per_site(s) = site_value(sym, z, s);
    }
    CVec out(grid.size());
    for (Eigen::Index c = 0; c < grid.size(); ++c) {
        cplx sum = 0.0;
        for (const auto s : grid.sites(c)) {
            sum += per_site(s);
        }
        out(c) = sum;
    }
    return out;
}

CVec evaluate_symbol(const PolynomialSymbol& sym, const FieldVector& z, const ParticleGrid& grid) {
    CVec out = CVec::Zero(grid.size());
    for (const auto& term : sym.terms) {
        out += evaluate_symbol(term, z, grid);
    }
    return out;
}

SymbolSpec SimpleSymbol::as_symbol(Eigen::Index num_sites) const {
    if (pieces.empty()) {
        throw PreconditionError("SimpleSymbol::as_symbol: no pieces");
    }
    const auto degree = pieces.front().coefficients.size();
    const Eigen::Index modes = pieces.front().coefficients.front().size();
    std::vector<CMat> tables(degree, CMat::Zero(modes, num_sites));
    for (const auto& piece : pieces) {
        for (const auto site : piece.cell) {
            for (std::size_t i = 0; i < degree; ++i) {
                tables[i].col(site) = piece.coefficients[i].components();
            }
        }
    }
    SymbolSpec out;
    for (std::size_t i = 0; i < degree; ++i) {
        auto& target = static_cast<int>(i) < num_creation ? out.creation : out.annihilation;
        target.emplace_back(std::move(tables[i]));
    }
    return out;
}

SimpleSymbol simple_approximate(const SymbolSpec& sym, const FieldVector& z, int levels) {
    if (levels < 1) {
        throw PreconditionError("simple_approximate: levels must be at least 1");
    }
    if (sym.degree() < 1) {
        throw PreconditionError("simple_approximate: symbol has no factors");
    }
    const Eigen::Index sites = sym.factor(0).num_sites();
    const double znorm = z.norm();

    std::map<std::vector<int>, std::vector<Eigen::Index>> cells;
    for (Eigen::Index s = 0; s < sites; ++s) {
        std::vector<int> key;
        key.reserve(static_cast<std::size_t>(4 * sym.degree()));
        for (int i = 0; i < sym.degree(); ++i) {
            const auto col = sym.factor(i).table().col(s);
            const cplx v = sym.is_creation(i) ? z.components().dot(col) : col.dot(z.components());
            const double range = sym.factor(i).sup_norm() * znorm;
            for (const double part : {std::max(v.real(), 0.0), std::max(-v.real(), 0.0), std::max(v.imag(), 0.0),
                                      std::max(-v.imag(), 0.0)}) {
                int band = 1;
                if (range > 0.0) {
                    band = std::clamp(static_cast<int>(std::floor(part * levels / range)) + 1, 1, levels);
                }
                key.push_back(band);
            }
        }
        cells[key].push_back(s);
    }

    SimpleSymbol out;
    out.resolution = levels;
    out.num_creation = static_cast<int>(sym.creation.size());
    for (auto& [key, cell] : cells) {
        SimpleSymbol::Piece piece;
        piece.cell = std::move(cell);
        const Eigen::Index rep = piece.cell.front();
        for (int i = 0; i < sym.degree(); ++i) {
            piece.coefficients.push_back(sym.factor(i).at(rep));
        }
        out.pieces.push_back(std::move(piece));
    }
    std::sort(out.pieces.begin(), out.pieces.end(),
              [](const SimpleSymbol::Piece& a, const SimpleSymbol::Piece& b) { return a.cell.front() < b.cell.front(); });
    return out;
}

double simple_error(const SymbolSpec& sym, const SimpleSymbol& simple, const FieldVector& z, const ParticleGrid& grid) {
    const CVec exact = evaluate_symbol(sym, z, grid);
    const CVec approx = evaluate_symbol(simple.as_symbol(grid.single_size()), z, grid);
    return (exact - approx).cwiseAbs().maxCoeff();
}

namespace {

// Normal-ordered Fock string for one site.
SpMat site_string(const SymbolSpec& sym, const FockBasis& basis, Eigen::Index site) {
    SpMat out = sparse_identity(basis.dimension());
    for (int i = 0; i < sym.degree(); ++i) {
        const FieldVector f = sym.factor(i).at(site);
        const Operator op = sym.is_creation(i) ? creator(basis, f) : annihilator(basis, f);
        out = SpMat(out * op.matrix);
    }
    out.prune(cplx(0.0));
    return out;
}

}  // namespace

SpMat site_sum_operator(const std::vector<SpMat>& blocks, const ParticleGrid& grid) {
    if (static_cast<Eigen::Index>(blocks.size()) != grid.single_size() || blocks.empty()) {
        throw DimensionError("site_sum_operator: need one block per single-particle site");
    }
    const Eigen::Index f = blocks.front().rows();
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (Eigen::Index c = 0; c < grid.size(); ++c) {
        const auto occupied = grid.sites(c);
        SpMat block = blocks[static_cast<std::size_t>(occupied.front())];
        for (std::size_t j = 1; j < occupied.size(); ++j) {
            block += blocks[static_cast<std::size_t>(occupied[j])];
        }
        for (Eigen::Index r = 0; r < block.outerSize(); ++r) {
            for (SpMat::InnerIterator it(block, r); it; ++it) {
                triplets.emplace_back(c * f + it.row(), c * f + it.col(), it.value());
            }
        }
    }
    SpMat out(grid.size() * f, grid.size() * f);
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

Operator wick_quantize(const SymbolSpec& sym, const FockBasis& basis, const ParticleGrid& grid) {
    sym.validate(grid);
    if (sym.factor(0).num_modes() != basis.num_modes()) {
        throw DimensionError("wick_quantize: form factor modes do not match the Fock basis");
    }
    std::vector<SpMat> blocks;
    blocks.reserve(static_cast<std::size_t>(grid.single_size()));
    for (Eigen::Index s = 0; s < grid.single_size(); ++s) {
        blocks.push_back(site_string(sym, basis, s));
    }
    return Operator{site_sum_operator(blocks, grid), Space::joint, false, false};
}

Operator wick_quantize(const PolynomialSymbol& sym, const FockBasis& basis, const ParticleGrid& grid) {
    if (sym.terms.empty()) {
        throw PreconditionError("wick_quantize: empty polynomial");
    }
    SpMat total = wick_quantize(sym.terms.front(), basis, grid).matrix;
    for (std::size_t i = 1; i < sym.terms.size(); ++i) {
        total += wick_quantize(sym.terms[i], basis, grid).matrix;
    }
    return Operator{std::move(total), Space::joint, false, false};
}

}  // namespace qcl
