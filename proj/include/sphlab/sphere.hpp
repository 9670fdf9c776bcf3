#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sphlab/algebra.hpp"
#include "sphlab/calculus.hpp"
#include "sphlab/jordan.hpp"
#include "sphlab/random.hpp"

namespace sphlab {

/// Membership in the positive portion of the unit sphere.
inline bool in_positive_sphere(const Element& a, double tol = 1e-9) {
  return is_positive(a, tol) && std::abs(op_norm(a) - 1.0) <= tol;
}

/// s lies on the positive unit sphere at distance exactly one from target.
inline bool in_sph_of(const Element& target, const Element& s, double tol = 1e-9) {
  check_same_algebra(target, s);
  return in_positive_sphere(s, tol) && std::abs(distance(s, target) - 1.0) <= tol;
}

/// Finite-set variant: distance one from every member. Only the singleton
/// path is exercised by the double-sphere results; this generalization is
/// plain set logic.
inline bool in_sph_of(const std::vector<Element>& targets, const Element& s, double tol = 1e-9) {
  if (!in_positive_sphere(s, tol)) return false;
  for (const Element& t : targets) {
    check_same_algebra(t, s);
    if (std::abs(distance(s, t) - 1.0) > tol) return false;
  }
  return true;
}

/// Constraint view of Sph(a) in the diagonal model, for a target with
/// coordinates in [0,1] and max exactly 1. In the box [0,1]^n the distance
/// |x_i - a_i| = 1 activates only through the exact pairs (a_i = 1, x_i = 0)
/// and (a_i = 0, x_i = 1), so the set is carried by two index sets.
struct SphereConstraintSet {
  int dim = 0;
  std::vector<int> ones_of_target;   // I0: a_i == 1, activated by x_i == 0
  std::vector<int> zeros_of_target;  // I1: a_i == 0, activated by x_i == 1

  bool contains(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != dim) return false;
    double mx = 0.0;
    for (double v : x) {
      if (v < 0.0 || v > 1.0) return false;
      mx = std::max(mx, v);
    }
    if (mx != 1.0) return false;
    for (int i : ones_of_target)
      if (x[i] == 0.0) return true;
    for (int i : zeros_of_target)
      if (x[i] == 1.0) return true;
    return false;
  }
};

inline SphereConstraintSet commutative_sph_set(const Element& a) {
  if (a.storage() != StorageModel::coords)
    throw Error("commutative_sph_set: target must live in a diagonal algebra");
  const auto& c = a.coord_values();
  double mx = 0.0;
  for (double v : c) {
    if (v < 0.0 || v > 1.0) throw NotInPositiveSphere("commutative_sph_set: coordinates outside [0,1]");
    mx = std::max(mx, v);
  }
  if (mx != 1.0) throw NotInPositiveSphere("commutative_sph_set: max coordinate must equal 1 exactly");
  SphereConstraintSet set;
  set.dim = static_cast<int>(c.size());
  for (int i = 0; i < set.dim; ++i) {
    if (c[i] == 1.0) set.ones_of_target.push_back(i);
    if (c[i] == 0.0) set.zeros_of_target.push_back(i);
  }
  return set;
}

/// Analytic double sphere in the diagonal model: x belongs iff x is in the
/// positive unit sphere, x_i = 1 wherever a_i = 1 and x_i = 0 wherever
/// a_i = 0 (the adversarial sphere member avoiding x exists otherwise).
/// Singleton exactly when a is a 0/1 vector.
inline bool commutative_double_sph_contains(const SphereConstraintSet& set, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != set.dim) return false;
  double mx = 0.0;
  for (double v : x) {
    if (v < 0.0 || v > 1.0) return false;
    mx = std::max(mx, v);
  }
  if (mx != 1.0) return false;
  for (int i : set.ones_of_target)
    if (x[i] != 1.0) return false;
  for (int i : set.zeros_of_target)
    if (x[i] != 0.0) return false;
  return true;
}

/// Scan budget: (k+1)^n points, kept below ~1.3e8 so exhaustive runs stay
/// around a second.
inline constexpr std::uint64_t kGridBudget = 1ULL << 27;

/// Exhaustive double-sphere oracle on the 1/k grid. Every returned point is
/// at sup-distance exactly one from each member of a finite certifying
/// subset of Sph(a): the constraint-active elements (one activated index,
/// one maximal index, 1/2 elsewhere) plus the 0/1 vertices of Sph(a). The
/// activation arithmetic is exact on the grid, so the scan reproduces the
/// analytic membership above.
inline std::vector<std::vector<double>> commutative_double_sph(const Element& a, int k) {
  const SphereConstraintSet set = commutative_sph_set(a);
  const int n = set.dim;
  if (n > 4 || k < 1 || k > 256) throw GridTooFine("commutative_double_sph: requires n <= 4 and k <= 256");
  std::uint64_t points = 1;
  for (int i = 0; i < n; ++i) points *= static_cast<std::uint64_t>(k) + 1;
  if (points > kGridBudget) throw GridTooFine("commutative_double_sph: grid exceeds the scan budget");

  // Certifying subset, encoded as activation masks: zeros[i] set when the
  // member has coordinate 0 at i, ones[i] when it has coordinate 1.
  struct Certifier {
    unsigned zero_mask = 0;
    unsigned one_mask = 0;
  };
  std::vector<Certifier> certs;
  for (int j : set.ones_of_target)
    for (int i = 0; i < n; ++i)
      if (i != j) certs.push_back({1u << j, 1u << i});
  for (int j : set.zeros_of_target) certs.push_back({0u, 1u << j});
  for (unsigned v = 1; v < (1u << n); ++v) {
    bool activates = false;
    for (int i = 0; i < n && !activates; ++i) {
      const bool vi_one = (v >> i) & 1u;
      if (a.coord_values()[i] == 1.0 && !vi_one) activates = true;
      if (a.coord_values()[i] == 0.0 && vi_one) activates = true;
    }
    if (activates) certs.push_back({~v & ((1u << n) - 1u), v});
  }

  std::vector<std::vector<double>> out;
  std::vector<int> idx(n, 0);
  while (true) {
    unsigned top_mask = 0, bot_mask = 0;
    for (int i = 0; i < n; ++i) {
      if (idx[i] == k) top_mask |= 1u << i;
      if (idx[i] == 0) bot_mask |= 1u << i;
    }
    if (top_mask != 0) {
      bool member = true;
      for (const Certifier& c : certs) {
        if ((top_mask & c.zero_mask) == 0 && (bot_mask & c.one_mask) == 0) {
          member = false;
          break;
        }
      }
      if (member) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(idx[i]) / k;
        out.push_back(std::move(x));
      }
    }
    int c = 0;
    while (c < n && ++idx[c] > k) idx[c++] = 0;
    if (c == n) break;
  }
  return out;
}

enum class SphereFamily : unsigned {
  orthogonal = 1,  // positive norm-one elements of the (1-p)-corner
  corner_zero = 2, // norm-one elements of pAp with 0 in the corner spectrum
  unit_plus = 4,   // p + y with y norm-one in the (1-p)-corner
  all = 7,
};

inline unsigned operator&(SphereFamily a, SphereFamily b) {
  return static_cast<unsigned>(a) & static_cast<unsigned>(b);
}

/// Seeded sampler for Sph(p), mixing the three witness-shaped families.
/// Every returned element passes in_sph_of(p, s, 1e-9).
inline std::vector<Element> sample_sph(const Element& p, int count, std::uint64_t rng_seed,
                                       SphereFamily families = SphereFamily::all) {
  if (!is_projection(p, 1e-8) || op_norm(p) < 0.5) throw NotProjection("sample_sph: p must be a nonzero projection");
  const AlgebraPtr alg = p.algebra();
  const Element unit = Element::unit(alg);
  const Element pperp = unit - p;
  const bool proper = op_norm(pperp) > 0.5;        // p != unit
  AlgebraPtr p_corner = corner(alg, p);
  const bool shiftable = p_corner->dim() >= 2;     // corner-zero family needs rank >= 2

  std::vector<SphereFamily> avail;
  if (proper && (families & SphereFamily::orthogonal)) avail.push_back(SphereFamily::orthogonal);
  if (shiftable && (families & SphereFamily::corner_zero)) avail.push_back(SphereFamily::corner_zero);
  if (proper && (families & SphereFamily::unit_plus)) avail.push_back(SphereFamily::unit_plus);
  if (avail.empty()) throw NoFamilyAvailable("sample_sph: no requested family applies to this projection");

  AlgebraPtr perp_corner = proper ? corner(alg, pperp) : nullptr;
  Rng rng(rng_seed);
  std::vector<Element> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    switch (avail[i % avail.size()]) {
      case SphereFamily::orthogonal:
        out.push_back(embed(random_positive_norm_one(perp_corner, rng)));
        break;
      case SphereFamily::unit_plus:
        out.push_back(p + embed(random_positive_norm_one(perp_corner, rng)));
        break;
      case SphereFamily::corner_zero: {
        Element w = random_psd(p_corner, rng);
        Element shifted = w - min_spectrum(w) * Element::unit(p_corner);
        double nrm = op_norm(shifted);
        while (nrm <= 1e-8) {
          w = random_psd(p_corner, rng);
          shifted = w - min_spectrum(w) * Element::unit(p_corner);
          nrm = op_norm(shifted);
        }
        out.push_back(embed((1.0 / nrm) * shifted));
        break;
      }
      default:
        throw Error("unreachable");
    }
  }
  return out;
}

/// Rank-one state phi(a) = <a xi, xi> with support projection w = xi xi*.
class PureState {
 public:
  PureState(AlgebraPtr alg, std::vector<Complex> xi) : algebra_(std::move(alg)), xi_(std::move(xi)) {
    if (static_cast<int>(xi_.size()) != algebra_->dim()) throw Error("PureState: vector dim mismatch");
    double nrm = 0.0;
    for (const Complex& z : xi_) nrm += std::norm(z);
    if (std::abs(std::sqrt(nrm) - 1.0) > 1e-12) throw Error("PureState: vector must be unit within 1e-12");
    if (algebra_->storage() == StorageModel::parts) throw Error("PureState: direct sums are not supported");
  }

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Complex>& vector() const { return xi_; }

  Complex value(const Element& a) const {
    if (!(*a.algebra() == *algebra_)) throw AlgebraMismatch("PureState::value");
    if (algebra_->storage() == StorageModel::coords) {
      Complex s{};
      for (std::size_t i = 0; i < xi_.size(); ++i) s += std::norm(xi_[i]) * a.coord_values()[i];
      return s;
    }
    Complex s{};
    const CMatrix& m = a.mat();
    const int n = algebra_->dim();
    for (int i = 0; i < n; ++i) {
      Complex row{};
      for (int j = 0; j < n; ++j) row += m(i, j) * xi_[j];
      s += std::conj(xi_[i]) * row;
    }
    return s;
  }

  double real_value(const Element& a) const { return value(a).real(); }

  Element support_projection() const {
    if (algebra_->storage() == StorageModel::coords) {
      std::vector<double> c(xi_.size());
      for (std::size_t i = 0; i < xi_.size(); ++i) {
        const double w = std::norm(xi_[i]);
        if (w > 1e-9 && std::abs(w - 1.0) > 1e-9)
          throw NotProjection("PureState: support in a diagonal algebra needs a basis-aligned vector");
        c[i] = w > 0.5 ? 1.0 : 0.0;
      }
      return Element::coords(algebra_, std::move(c));
    }
    const int n = algebra_->dim();
    CMatrix w(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w(i, j) = xi_[i] * std::conj(xi_[j]);
    return Element::matrix(algebra_, std::move(w));
  }

 private:
  AlgebraPtr algebra_;
  std::vector<Complex> xi_;
};

enum class DichotomyBranch { first_attains, second_attains };

struct DichotomyResult {
  PureState state;
  DichotomyBranch branch;
};

/// Finite-dimensional realization of the pure-state dichotomy: for positive
/// norm-one u, v at distance one, a unit eigenvector of u - v at eigenvalue
/// +-1 carries a state with (phi(u), phi(v)) = (1, 0) or (0, 1); the box
/// 0 <= u, v <= 1 forces the pattern.
inline DichotomyResult dichotomy_state(const Element& u, const Element& v, double tol = 1e-8) {
  check_same_algebra(u, v);
  if (!is_positive(u, tol) || std::abs(op_norm(u) - 1.0) > tol)
    throw PreconditionFailed("dichotomy_state: u must be positive norm-one");
  if (!is_positive(v, tol) || std::abs(op_norm(v) - 1.0) > tol)
    throw PreconditionFailed("dichotomy_state: v must be positive norm-one");
  const Element d = u - v;
  if (std::abs(op_norm(d) - 1.0) > tol) throw PreconditionFailed("dichotomy_state: ||u - v|| must equal 1");

  const AlgebraPtr alg = u.algebra();
  std::vector<Complex> xi(alg->dim(), Complex{});
  DichotomyBranch branch;
  if (alg->storage() == StorageModel::coords) {
    int best = 0;
    for (int i = 1; i < alg->dim(); ++i)
      if (std::abs(d.coord_values()[i]) > std::abs(d.coord_values()[best])) best = i;
    xi[best] = 1.0;
    branch = d.coord_values()[best] > 0.0 ? DichotomyBranch::first_attains : DichotomyBranch::second_attains;
  } else if (alg->storage() == StorageModel::matrix) {
    const auto s = spectrum_of(d);
    const int n = alg->dim();
    const double top = s->eigenvalues.back();
    const double bot = s->eigenvalues.front();
    const int col = top >= -bot ? n - 1 : 0;
    for (int i = 0; i < n; ++i) xi[i] = s->eigenvectors(i, col);
    branch = col == n - 1 ? DichotomyBranch::first_attains : DichotomyBranch::second_attains;
  } else {
    throw Error("dichotomy_state: direct sums are not supported");
  }

  PureState phi(alg, std::move(xi));
  const double pu = phi.real_value(u);
  const double pv = phi.real_value(v);
  const bool ok = branch == DichotomyBranch::first_attains ? (std::abs(pu - 1.0) <= 1e-7 && std::abs(pv) <= 1e-7)
                                                           : (std::abs(pv - 1.0) <= 1e-7 && std::abs(pu) <= 1e-7);
  if (!ok) throw PreconditionFailed("dichotomy_state: state pattern did not materialize");
  return DichotomyResult{std::move(phi), branch};
}

}  // namespace sphlab
