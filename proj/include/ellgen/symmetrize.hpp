#pragma once

// Rewriting scratch-root expressions in canonical generators. The theta route
// of the genus (and the gauge character expansion) works in a ring of explicit
// Chern roots; its outputs are symmetric within each root block and have to be
// converted back to Chern classes / power sums before they can be compared
// with the definition route. The conversion is a per-degree exact linear
// solve against products of block elementary symmetric polynomials — which
// doubles as a loud check that the input really is block-symmetric (and, for
// gauge blocks, even in every root): anything outside the span throws instead
// of being dropped.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ellgen/gradedpoly.hpp"

namespace ellgen {

// One orbit of roots. `vars` are generator indices in the source ring (all of
// one degree); `e_images` are the target-ring images of the elementary
// symmetric polynomials e_1..e_|vars| of those roots. With `squares` set the
// block's functions are even in every root and the rewriting runs in the
// squared roots instead (e_images then refer to e_j of the squares) — the
// shape of the gauge blocks, whose targets only carry even power sums.
struct SymmetricBlock {
  std::vector<int> vars;
  std::vector<GradedPoly> e_images;
  bool squares = false;
};

// True when every listed variable appears only with even exponents.
inline bool even_exponents_in(const GradedPoly& p, const std::vector<int>& vars) {
  for (const auto& t : p.sorted_terms())
    for (int v : vars)
      if (t.exps.empty() ? false : (t.exps[v] % 2 != 0)) return false;
  return true;
}

// p with generator i replaced by images[i] (polynomials over any one target
// ring); constants pass through.
inline GradedPoly substitute(const GradedPoly& p, const std::vector<GradedPoly>& images) {
  if (!p.ring()) return GradedPoly::constant(p.constant_part());
  if (images.size() != p.ring()->generators().size())
    throw std::invalid_argument("substitute: one image required per generator");
  GradedPoly out;
  for (const auto& t : p.sorted_terms()) {
    GradedPoly mono = GradedPoly::constant(t.coeff);
    for (size_t i = 0; i < t.exps.size(); ++i)
      for (int rep = 0; rep < t.exps[i]; ++rep) mono = mono * images[i];
    out = out + mono;
  }
  return out;
}

namespace detail {

// e_0..e_j_max of the block's (possibly squared) roots, expanded in the
// source ring by the usual prod(1 + x t) recurrence.
inline std::vector<GradedPoly> block_elementaries(const RingPtr& ring, const SymmetricBlock& b,
                                                  int j_max) {
  std::vector<GradedPoly> e(j_max + 1);
  e[0] = GradedPoly::constant_in(ring, 1);
  int used = 0;
  for (int v : b.vars) {
    GradedPoly x = GradedPoly::generator(ring, v);
    if (b.squares) x = x * x;
    ++used;
    for (int j = std::min(used, j_max); j >= 1; --j) e[j] = e[j] + e[j - 1] * x;
  }
  return e;
}

struct BasisEntry {
  GradedPoly expanded;  // source-ring polynomial
  GradedPoly image;     // the same element written in the target ring
};

// All products over blocks of elementary-symmetric monomials of total source
// degree exactly `degree`.
inline void enumerate_basis(const std::vector<SymmetricBlock>& blocks,
                            const std::vector<std::vector<GradedPoly>>& elems,
                            const std::vector<int>& unit_degrees, size_t b, int degree,
                            const GradedPoly& expanded, const GradedPoly& image,
                            std::vector<BasisEntry>& out) {
  if (b == blocks.size()) {
    if (degree == 0 && !expanded.is_zero_poly()) out.push_back({expanded, image});
    return;
  }
  // within block b: multisets of e_j, iterated with j descending
  auto rec = [&](auto&& self, int j, int remaining, const GradedPoly& exp_acc,
                 const GradedPoly& img_acc) -> void {
    if (j == 0) {
      enumerate_basis(blocks, elems, unit_degrees, b + 1, remaining, exp_acc, img_acc, out);
      return;
    }
    int dj = unit_degrees[b] * j;
    for (int m = 0; m * dj <= remaining; ++m) {
      GradedPoly e_exp = exp_acc;
      GradedPoly e_img = img_acc;
      for (int rep = 0; rep < m; ++rep) {
        e_exp = e_exp * elems[b][j];
        e_img = e_img * blocks[b].e_images[j - 1];
      }
      if (m > 0 && e_exp.is_zero_poly()) break;  // cap killed it in the source too
      self(self, j - 1, remaining - m * dj, e_exp, e_img);
    }
  };
  rec(rec, static_cast<int>(blocks[b].vars.size()), degree, expanded, image);
}

// Exact Gaussian elimination for rows * x = rhs (columns = unknowns); returns
// false when inconsistent. Underdetermined directions are set to zero.
inline bool solve_exact(std::vector<std::vector<Rational>>& m, std::vector<Rational>& x,
                        size_t cols) {
  size_t rows = m.size();
  std::vector<size_t> pivot_col_of_row(rows, cols);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    Rational inv = 1 / m[r][c];
    for (size_t k = c; k <= cols; ++k) m[r][k] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (size_t k = c; k <= cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivot_col_of_row[r] = c;
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (sgn(m[i][cols]) != 0) return false;
  x.assign(cols, Rational(0));
  for (size_t i = 0; i < r; ++i) x[pivot_col_of_row[i]] = m[i][cols];
  return true;
}

}  // namespace detail

// Rewrite p — block-symmetric by contract — in the blocks' elementary
// symmetric polynomials and push it into the target ring through their
// images. Throws when p is not in the span (not symmetric, or odd in a
// squares block).
inline GradedPoly symmetrize(const GradedPoly& p, const std::vector<SymmetricBlock>& blocks) {
  if (!p.ring() || p.top_degree() <= 0) return GradedPoly::constant(p.constant_part());
  const RingPtr& ring = p.ring();

  std::vector<int> owner(ring->generators().size(), -1);
  std::vector<int> unit_degrees(blocks.size(), 0);
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].e_images.size() != blocks[b].vars.size())
      throw std::invalid_argument("symmetrize: block needs one image per elementary symmetric");
    for (int v : blocks[b].vars) {
      if (v < 0 || v >= static_cast<int>(owner.size()) || owner[v] != -1)
        throw std::invalid_argument("symmetrize: blocks must partition the generators");
      owner[v] = static_cast<int>(b);
      int deg = ring->generators()[v].degree;
      int unit = blocks[b].squares ? 2 * deg : deg;
      if (unit_degrees[b] && unit_degrees[b] != unit)
        throw std::invalid_argument("symmetrize: block roots must share one degree");
      unit_degrees[b] = unit;
    }
    if (blocks[b].vars.empty())
      throw std::invalid_argument("symmetrize: empty block");
  }
  for (size_t v = 0; v < owner.size(); ++v)
    if (owner[v] == -1)
      throw std::invalid_argument("symmetrize: generator " + ring->generators()[v].name +
                                  " belongs to no block");
  for (const auto& b : blocks)
    if (b.squares && !even_exponents_in(p, b.vars))
      throw std::domain_error(
          "symmetrize: odd root exponent in a block declared even (squares)");

  // degree slices of p, as explicit monomial -> coefficient maps
  std::map<int, std::map<Mono, Rational>> slices;
  for (const auto& t : p.sorted_terms())
    if (t.degree > 0) slices[t.degree][t.exps] = t.coeff;

  std::vector<std::vector<GradedPoly>> elems;
  for (const auto& b : blocks)
    elems.push_back(detail::block_elementaries(ring, b, static_cast<int>(b.vars.size())));

  GradedPoly out = GradedPoly::constant(p.constant_part());
  for (const auto& [degree, slice] : slices) {
    std::vector<detail::BasisEntry> basis;
    detail::enumerate_basis(blocks, elems, unit_degrees, 0, degree, GradedPoly::constant(1),
                            GradedPoly::constant(1), basis);

    std::map<Mono, size_t> row_of;
    auto row_index = [&row_of](const Mono& m) {
      return row_of.emplace(m, row_of.size()).first->second;
    };
    for (const auto& [mono, coeff] : slice) row_index(mono);
    std::vector<std::vector<Rational>> coeffs_of_entry(basis.size());
    for (size_t j = 0; j < basis.size(); ++j)
      for (const auto& t : basis[j].expanded.sorted_terms()) {
        size_t i = row_index(t.exps);
        auto& col = coeffs_of_entry[j];
        if (col.size() <= i) col.resize(i + 1, Rational(0));
        col[i] = t.coeff;
      }

    std::vector<std::vector<Rational>> m(row_of.size(),
                                         std::vector<Rational>(basis.size() + 1, Rational(0)));
    for (size_t j = 0; j < basis.size(); ++j)
      for (size_t i = 0; i < coeffs_of_entry[j].size(); ++i) m[i][j] = coeffs_of_entry[j][i];
    for (const auto& [mono, coeff] : slice) m[row_of.at(mono)][basis.size()] = coeff;

    std::vector<Rational> lambda;
    if (!detail::solve_exact(m, lambda, basis.size()))
      throw std::domain_error("symmetrize: degree-" + std::to_string(degree) +
                              " slice is not block-symmetric");

    // exact-residual re-check, so a dependent basis can never smuggle a wrong
    // answer through the free-variable choice
    GradedPoly recon;
    for (size_t j = 0; j < basis.size(); ++j)
      if (sgn(lambda[j]) != 0) recon = recon + basis[j].expanded.scaled(lambda[j]);
    GradedPoly target;
    for (const auto& [mono, coeff] : slice)
      target = target + GradedPoly::monomial(ring, mono, coeff);
    if (!(recon == target))
      throw std::domain_error("symmetrize: inconsistent solve at degree " +
                              std::to_string(degree));

    for (size_t j = 0; j < basis.size(); ++j)
      if (sgn(lambda[j]) != 0) out = out + basis[j].image.scaled(lambda[j]);
  }
  return out;
}

}  // namespace ellgen
