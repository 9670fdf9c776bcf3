#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sphlab/algebra.hpp"
#include "sphlab/random.hpp"

namespace sphlab {

/// a o b = (ab + ba)/2. Stays inside every backend, including the
/// symmetric JC*-one, where the plain product does not.
inline Element jordan_product(const Element& a, const Element& b) {
  check_same_algebra(a, b);
  switch (a.storage()) {
    case StorageModel::matrix: {
      const CMatrix m = 0.5 * (a.mat() * b.mat() + b.mat() * a.mat());
      return Element::matrix(a.algebra(), m);
    }
    case StorageModel::coords: {
      std::vector<double> c(a.coord_values().size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coord_values()[i] * b.coord_values()[i];
      return Element::coords(a.algebra(), std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.part_values().size());
      for (std::size_t i = 0; i < a.part_values().size(); ++i)
        ps.push_back(jordan_product(a.part_values()[i], b.part_values()[i]));
      return Element::parts(a.algebra(), std::move(ps));
    }
  }
  throw Error("unreachable");
}

/// U_a(x) = 2 (a o x) o a - a^2 o x, the quadratic representation by the
/// Jordan formula. Collapses to a x a on associative backends.
inline Element u_op(const Element& a, const Element& x) {
  check_same_algebra(a, x);
  const Element ax = jordan_product(a, x);
  const Element a2 = jordan_product(a, a);
  return 2.0 * jordan_product(ax, a) - jordan_product(a2, x);
}

/// U_{a,b}(x) = (a o x) o b + (b o x) o a - (a o b) o x; symmetric in (a, b),
/// and u_pair(a, a, x) = u_op(a, x).
inline Element u_pair(const Element& a, const Element& b, const Element& x) {
  check_same_algebra(a, b);
  check_same_algebra(a, x);
  return jordan_product(jordan_product(a, x), b) + jordan_product(jordan_product(b, x), a) -
         jordan_product(jordan_product(a, b), x);
}

/// a x a through the associative product; brute-force oracle for u_op on
/// associative backends and the engine's associative route.
inline Element u_assoc(const Element& a, const Element& x) {
  check_same_algebra(a, x);
  switch (a.storage()) {
    case StorageModel::matrix:
      return Element::matrix(a.algebra(), a.mat() * x.mat() * a.mat());
    case StorageModel::coords: {
      std::vector<double> c(a.coord_values().size());
      for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = a.coord_values()[i] * x.coord_values()[i] * a.coord_values()[i];
      return Element::coords(a.algebra(), std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.part_values().size());
      for (std::size_t i = 0; i < a.part_values().size(); ++i)
        ps.push_back(u_assoc(a.part_values()[i], x.part_values()[i]));
      return Element::parts(a.algebra(), std::move(ps));
    }
  }
  throw Error("unreachable");
}

/// Eigenspace splitting of multiplication by a projection: part j satisfies
/// p o x_j = (j/2) x_j, with projectors P2 = U_p, P1 = 2 U_{p,1-p}, P0 = U_{1-p}.
struct PeirceDecomposition {
  Element p;
  Element part0;
  Element part1;
  Element part2;
};

inline Element peirce_p2(const Element& p, const Element& x) { return u_op(p, x); }

inline Element peirce_p0(const Element& p, const Element& x) {
  return u_op(Element::unit(p.algebra()) - p, x);
}

inline Element peirce_p1(const Element& p, const Element& x) {
  return 2.0 * u_pair(p, Element::unit(p.algebra()) - p, x);
}

inline PeirceDecomposition peirce(const Element& p, const Element& x) {
  if (!is_projection(p, 1e-8)) throw NotProjection("peirce: p is not a projection");
  check_same_algebra(p, x);
  return PeirceDecomposition{p, peirce_p0(p, x), peirce_p1(p, x), peirce_p2(p, x)};
}

/// Orthogonality a _|_ b: for positive pairs a o b = 0; otherwise the
/// C*-criterion a b* = b* a = 0, evaluated on raw entries so the symmetric
/// backend is covered as a subspace of the full matrix algebra.
inline bool are_orthogonal(const Element& a, const Element& b, double tol) {
  check_same_algebra(a, b);
  if (is_positive(a, kPosTol) && is_positive(b, kPosTol)) return op_norm(jordan_product(a, b)) <= tol;
  switch (a.storage()) {
    case StorageModel::matrix: {
      const CMatrix ab = a.mat() * b.mat().adjoint();
      const CMatrix ba = b.mat().adjoint() * a.mat();
      return matrix_op_norm(ab) + matrix_op_norm(ba) <= tol;
    }
    case StorageModel::coords: {
      double m = 0.0;
      for (std::size_t i = 0; i < a.coord_values().size(); ++i)
        m = std::max(m, std::abs(a.coord_values()[i] * b.coord_values()[i]));
      return 2.0 * m <= tol;
    }
    case StorageModel::parts: {
      for (std::size_t i = 0; i < a.part_values().size(); ++i)
        if (!are_orthogonal(a.part_values()[i], b.part_values()[i], tol)) return false;
      return true;
    }
  }
  throw Error("unreachable");
}

struct PeirceResidualReport {
  std::vector<std::pair<std::string, double>> residuals;
  double max_residual = 0.0;
};

namespace detail {
inline Element normalized_or_zero(const Element& a) {
  const double n = op_norm(a);
  return n > 1e-12 ? (1.0 / n) * a : a;
}
}  // namespace detail

/// Samples the multiplication rules of the Peirce decomposition and reports
/// the worst residual per rule, including U_{A0,A0}(A1) = {0} and
/// A0 o A2 = {0}.
inline PeirceResidualReport check_peirce_rules(const Element& p, int samples, std::uint64_t rng_seed) {
  if (!is_projection(p, 1e-8)) throw NotProjection("check_peirce_rules: p is not a projection");
  Rng rng(rng_seed);
  const AlgebraPtr alg = p.algebra();

  double r_a0_x2 = 0.0, r_u00_c1 = 0.0, r_00_in_0 = 0.0, r_22_in_2 = 0.0;
  double r_02_c1_in_1 = 0.0, r_11_in_02 = 0.0;
  for (int it = 0; it < samples; ++it) {
    const Element a0 = detail::normalized_or_zero(peirce_p0(p, random_self_adjoint(alg, rng)));
    const Element b0 = detail::normalized_or_zero(peirce_p0(p, random_self_adjoint(alg, rng)));
    const Element c1 = detail::normalized_or_zero(peirce_p1(p, random_self_adjoint(alg, rng)));
    const Element d1 = detail::normalized_or_zero(peirce_p1(p, random_self_adjoint(alg, rng)));
    const Element x2 = detail::normalized_or_zero(peirce_p2(p, random_self_adjoint(alg, rng)));

    r_a0_x2 = std::max(r_a0_x2, op_norm(jordan_product(a0, x2)));
    r_u00_c1 = std::max(r_u00_c1, op_norm(u_pair(a0, b0, c1)));

    const Element p00 = jordan_product(a0, b0);
    r_00_in_0 = std::max(r_00_in_0, op_norm(p00 - peirce_p0(p, p00)));
    const Element p22 = jordan_product(x2, peirce_p2(p, random_self_adjoint(alg, rng)));
    r_22_in_2 = std::max(r_22_in_2, op_norm(p22 - peirce_p2(p, p22)));

    const Element p01 = jordan_product(a0 + x2, c1);
    r_02_c1_in_1 = std::max(r_02_c1_in_1, op_norm(p01 - peirce_p1(p, p01)));
    const Element p11 = jordan_product(c1, d1);
    r_11_in_02 = std::max(r_11_in_02, op_norm(p11 - (peirce_p0(p, p11) + peirce_p2(p, p11))));
  }

  PeirceResidualReport rep;
  rep.residuals = {{"a0_jordan_x2", r_a0_x2},
                   {"u_a0_b0_on_c1", r_u00_c1},
                   {"a0_b0_stays_in_part0", r_00_in_0},
                   {"a2_b2_stays_in_part2", r_22_in_2},
                   {"part02_times_part1_stays_in_part1", r_02_c1_in_1},
                   {"part1_times_part1_stays_in_part02", r_11_in_02}};
  for (const auto& [name, r] : rep.residuals) {
    (void)name;
    rep.max_residual = std::max(rep.max_residual, r);
  }
  return rep;
}

}  // namespace sphlab
