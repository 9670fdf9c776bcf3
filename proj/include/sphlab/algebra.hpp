#pragma once

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sphlab/matrix.hpp"
#include "sphlab/spectral.hpp"

namespace sphlab {

/// Symmetrization tolerance eta_sym: accepted self-adjointness defect,
/// relative to the element's size.
inline constexpr double kSymTolRel = 1e-12;
/// Positivity tolerance eta_pos.
inline constexpr double kPosTol = 1e-10;

enum class AlgebraKind { full_matrix, diagonal, symmetric_jordan, direct_sum, corner };

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;
class Element;

/// How elements of an algebra are stored: one dense square matrix, a real
/// coordinate vector, or one part per direct summand.
enum class StorageModel { matrix, coords, parts };

/// Descriptor of a unital algebra an element lives in: full matrix algebras,
/// the commutative model C({1..n}) (kind diagonal), the complex-symmetric
/// JC*-backend, direct sums, and corners pAp. Immutable; shared by pointer.
class Algebra {
 public:
  AlgebraKind kind() const { return kind_; }
  int dim() const { return dim_; }

  const std::vector<AlgebraPtr>& summands() const { return summands_; }
  const AlgebraPtr& parent() const { return parent_; }

  /// Corner isometry (parent_dim x dim), matrix-model parents only.
  const CMatrix& isometry() const { return isometry_; }
  /// Selected coordinates, coords-model parents only.
  const std::vector<int>& selection() const { return selection_; }
  /// Per-parent-summand corner algebras (null where the projection part
  /// vanishes), parts-model parents only.
  const std::vector<AlgebraPtr>& corner_children() const { return corner_children_; }

  StorageModel storage() const {
    switch (kind_) {
      case AlgebraKind::full_matrix:
      case AlgebraKind::symmetric_jordan:
        return StorageModel::matrix;
      case AlgebraKind::diagonal:
        return StorageModel::coords;
      case AlgebraKind::direct_sum:
        return StorageModel::parts;
      case AlgebraKind::corner:
        if (!selection_.empty() || parent_storage_ == StorageModel::coords) return StorageModel::coords;
        return parent_storage_ == StorageModel::parts ? StorageModel::parts : StorageModel::matrix;
    }
    throw Error("unreachable");
  }

  /// True when elements must satisfy a = transpose(a) (JC*-backend and its corners).
  bool symmetric_constrained() const { return symmetric_constrained_; }

  friend bool operator==(const Algebra& a, const Algebra& b) {
    if (&a == &b) return true;
    if (a.kind_ != b.kind_ || a.dim_ != b.dim_) return false;
    if (a.kind_ == AlgebraKind::direct_sum) {
      if (a.summands_.size() != b.summands_.size()) return false;
      for (std::size_t i = 0; i < a.summands_.size(); ++i)
        if (!(*a.summands_[i] == *b.summands_[i])) return false;
      return true;
    }
    if (a.kind_ == AlgebraKind::corner) {
      if (!(*a.parent_ == *b.parent_)) return false;
      if (a.selection_ != b.selection_) return false;
      if (!(a.isometry_ == b.isometry_)) return false;
      if (a.corner_children_.size() != b.corner_children_.size()) return false;
      for (std::size_t i = 0; i < a.corner_children_.size(); ++i) {
        const bool an = a.corner_children_[i] == nullptr;
        const bool bn = b.corner_children_[i] == nullptr;
        if (an != bn) return false;
        if (!an && !(*a.corner_children_[i] == *b.corner_children_[i])) return false;
      }
    }
    return true;
  }

  friend bool operator!=(const Algebra& a, const Algebra& b) { return !(a == b); }

  friend AlgebraPtr full_matrix_algebra(int n);
  friend AlgebraPtr diagonal_algebra(int n);
  friend AlgebraPtr symmetric_jordan_algebra(int n);
  friend AlgebraPtr direct_sum_algebra(std::vector<AlgebraPtr> summands);
  friend AlgebraPtr corner(const AlgebraPtr& parent, const Element& p);

 private:
  Algebra() = default;

  AlgebraKind kind_ = AlgebraKind::full_matrix;
  int dim_ = 0;
  bool symmetric_constrained_ = false;
  StorageModel parent_storage_ = StorageModel::matrix;
  std::vector<AlgebraPtr> summands_;
  AlgebraPtr parent_;
  CMatrix isometry_;
  std::vector<int> selection_;
  std::vector<AlgebraPtr> corner_children_;
};

inline AlgebraPtr full_matrix_algebra(int n) {
  if (n < 1) throw Error("full_matrix_algebra: dim must be >= 1");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::full_matrix;
  a->dim_ = n;
  return a;
}

inline AlgebraPtr diagonal_algebra(int n) {
  if (n < 1) throw Error("diagonal_algebra: dim must be >= 1");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::diagonal;
  a->dim_ = n;
  return a;
}

inline AlgebraPtr symmetric_jordan_algebra(int n) {
  if (n < 1) throw Error("symmetric_jordan_algebra: dim must be >= 1");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::symmetric_jordan;
  a->dim_ = n;
  a->symmetric_constrained_ = true;
  return a;
}

inline AlgebraPtr direct_sum_algebra(std::vector<AlgebraPtr> summands) {
  if (summands.empty()) throw Error("direct_sum_algebra: needs >= 1 summand");
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->kind_ = AlgebraKind::direct_sum;
  int d = 0;
  for (const auto& s : summands) {
    if (!s) throw Error("direct_sum_algebra: null summand");
    d += s->dim();
  }
  a->dim_ = d;
  a->summands_ = std::move(summands);
  return a;
}

namespace detail {
struct EigenCache {
  std::once_flag once;
  std::shared_ptr<const Spectrum> spec;
};
}  // namespace detail

/// A member of an algebra: dense complex matrix for matrix kinds, real
/// coordinate vector for the diagonal kind, one part per summand for direct
/// sums. Immutable after construction; the eigensystem is computed once on
/// demand and shared across copies.
class Element {
 public:
  static Element matrix(AlgebraPtr alg, CMatrix m) {
    if (!alg || alg->storage() != StorageModel::matrix) throw Error("Element::matrix: algebra is not matrix-kind");
    if (!m.square() || m.rows() != alg->dim()) throw Error("Element::matrix: entries do not match algebra dim");
    if (alg->symmetric_constrained()) {
      const double tol = kSymTolRel * std::max(1.0, m.frobenius());
      if (symmetric_defect(m) > tol)
        throw BackendMismatch("Element::matrix: entries are not transpose-symmetric");
    }
    Element e;
    e.algebra_ = std::move(alg);
    e.mat_ = std::move(m);
    e.cache_ = std::make_shared<detail::EigenCache>();
    return e;
  }

  static Element coords(AlgebraPtr alg, std::vector<double> c) {
    if (!alg || alg->storage() != StorageModel::coords) throw Error("Element::coords: algebra is not diagonal-kind");
    if (static_cast<int>(c.size()) != alg->dim()) throw Error("Element::coords: wrong coordinate count");
    Element e;
    e.algebra_ = std::move(alg);
    e.coords_ = std::move(c);
    return e;
  }

  static Element parts(AlgebraPtr alg, std::vector<Element> p);

  static Element zero(const AlgebraPtr& alg);
  static Element unit(const AlgebraPtr& alg);

  const AlgebraPtr& algebra() const { return algebra_; }
  StorageModel storage() const { return algebra_->storage(); }
  const CMatrix& mat() const { return mat_; }
  const std::vector<double>& coord_values() const { return coords_; }
  const std::vector<Element>& part_values() const { return parts_; }

  /// Fresh copy with no cached spectral data.
  Element fresh() const {
    Element e = *this;
    if (e.cache_) e.cache_ = std::make_shared<detail::EigenCache>();
    std::vector<Element> fp;
    fp.reserve(e.parts_.size());
    for (const Element& q : e.parts_) fp.push_back(q.fresh());
    e.parts_ = std::move(fp);
    return e;
  }

  std::shared_ptr<const Spectrum> cached_spectrum_cell(const CMatrix& hermitized) const {
    std::call_once(cache_->once, [&] { cache_->spec = std::make_shared<const Spectrum>(jacobi_hermitian(hermitized)); });
    return cache_->spec;
  }

  friend Element operator+(const Element& a, const Element& b);
  friend Element operator-(const Element& a, const Element& b);
  friend Element operator*(double s, const Element& a);
  friend Element operator*(const Element& a, const Element& b);

 private:
  Element() = default;

  AlgebraPtr algebra_;
  CMatrix mat_;
  std::vector<double> coords_;
  std::vector<Element> parts_;
  std::shared_ptr<detail::EigenCache> cache_;
};

inline void check_same_algebra(const Element& a, const Element& b) {
  if (!(*a.algebra() == *b.algebra())) throw AlgebraMismatch("elements live in different algebras");
}

inline Element Element::parts(AlgebraPtr alg, std::vector<Element> p) {
  if (!alg || alg->storage() != StorageModel::parts) throw Error("Element::parts: algebra is not a direct sum");
  const auto& expect = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
  std::size_t want = 0;
  for (const auto& s : expect)
    if (s) ++want;
  if (p.size() != want) throw Error("Element::parts: wrong part count");
  std::size_t j = 0;
  for (const auto& s : expect) {
    if (!s) continue;
    if (!(*p[j].algebra() == *s)) throw AlgebraMismatch("Element::parts: part algebra mismatch");
    ++j;
  }
  Element e;
  e.algebra_ = std::move(alg);
  e.parts_ = std::move(p);
  return e;
}

inline Element Element::zero(const AlgebraPtr& alg) {
  switch (alg->storage()) {
    case StorageModel::matrix:
      return Element::matrix(alg, CMatrix(alg->dim(), alg->dim()));
    case StorageModel::coords:
      return Element::coords(alg, std::vector<double>(alg->dim(), 0.0));
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<Element> ps;
      for (const auto& s : kids)
        if (s) ps.push_back(Element::zero(s));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element Element::unit(const AlgebraPtr& alg) {
  switch (alg->storage()) {
    case StorageModel::matrix:
      return Element::matrix(alg, CMatrix::identity(alg->dim()));
    case StorageModel::coords:
      return Element::coords(alg, std::vector<double>(alg->dim(), 1.0));
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<Element> ps;
      for (const auto& s : kids)
        if (s) ps.push_back(Element::unit(s));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element operator+(const Element& a, const Element& b) {
  check_same_algebra(a, b);
  switch (a.storage()) {
    case StorageModel::matrix:
      return Element::matrix(a.algebra_, a.mat_ + b.mat_);
    case StorageModel::coords: {
      std::vector<double> c(a.coords_.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] + b.coords_[i];
      return Element::coords(a.algebra_, std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.parts_.size());
      for (std::size_t i = 0; i < a.parts_.size(); ++i) ps.push_back(a.parts_[i] + b.parts_[i]);
      return Element::parts(a.algebra_, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element operator-(const Element& a, const Element& b) { return a + (-1.0) * b; }

inline Element operator*(double s, const Element& a) {
  switch (a.storage()) {
    case StorageModel::matrix:
      return Element::matrix(a.algebra_, s * a.mat_);
    case StorageModel::coords: {
      std::vector<double> c(a.coords_.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = s * a.coords_[i];
      return Element::coords(a.algebra_, std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.parts_.size());
      for (const Element& q : a.parts_) ps.push_back(s * q);
      return Element::parts(a.algebra_, std::move(ps));
    }
  }
  throw Error("unreachable");
}

/// Associative product. Unavailable on the symmetric JC*-backend, which is
/// closed under the Jordan product only.
inline Element operator*(const Element& a, const Element& b) {
  check_same_algebra(a, b);
  switch (a.storage()) {
    case StorageModel::matrix:
      if (a.algebra_->symmetric_constrained())
        throw BackendMismatch("associative product leaves the symmetric backend; use jordan_product");
      return Element::matrix(a.algebra_, a.mat_ * b.mat_);
    case StorageModel::coords: {
      std::vector<double> c(a.coords_.size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords_[i] * b.coords_[i];
      return Element::coords(a.algebra_, std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.parts_.size());
      for (std::size_t i = 0; i < a.parts_.size(); ++i) ps.push_back(a.parts_[i] * b.parts_[i]);
      return Element::parts(a.algebra_, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element adjoint(const Element& a) {
  switch (a.storage()) {
    case StorageModel::matrix:
      return Element::matrix(a.algebra(), a.mat().adjoint());
    case StorageModel::coords:
      return a;
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.part_values().size());
      for (const Element& q : a.part_values()) ps.push_back(adjoint(q));
      return Element::parts(a.algebra(), std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline double self_adjoint_defect(const Element& a) {
  switch (a.storage()) {
    case StorageModel::matrix:
      return hermitian_defect(a.mat());
    case StorageModel::coords:
      return 0.0;
    case StorageModel::parts: {
      double s = 0.0;
      for (const Element& q : a.part_values()) s = std::hypot(s, self_adjoint_defect(q));
      return s;
    }
  }
  throw Error("unreachable");
}

inline double frobenius(const Element& a) {
  switch (a.storage()) {
    case StorageModel::matrix:
      return a.mat().frobenius();
    case StorageModel::coords: {
      double s = 0.0;
      for (double x : a.coord_values()) s += x * x;
      return std::sqrt(s);
    }
    case StorageModel::parts: {
      double s = 0.0;
      for (const Element& q : a.part_values()) s = std::hypot(s, frobenius(q));
      return s;
    }
  }
  throw Error("unreachable");
}

inline bool is_self_adjoint(const Element& a) {
  return self_adjoint_defect(a) <= kSymTolRel * std::max(1.0, frobenius(a));
}

/// (a + a*)/2, accepted only within the symmetrization tolerance eta_sym.
inline Element symmetrized(const Element& a) {
  if (!is_self_adjoint(a)) throw NotSelfAdjoint("element exceeds the symmetrization tolerance");
  return 0.5 * (a + adjoint(a));
}

/// Eigensystem of a self-adjoint matrix-model element, cached on first use.
inline std::shared_ptr<const Spectrum> spectrum_of(const Element& a) {
  if (a.storage() != StorageModel::matrix) throw Error("spectrum_of: requires a matrix-kind element");
  if (!is_self_adjoint(a)) throw NotSelfAdjoint("spectrum_of: element exceeds the symmetrization tolerance");
  return a.cached_spectrum_cell(hermitize(a.mat()));
}

/// Hermitian eigendecomposition (matrix kinds): eigenvalues ascending,
/// orthonormal eigenvector columns, deterministic for identical input bits.
inline Spectrum hermitian_eigen(const Element& a) { return *spectrum_of(a); }

namespace detail {
inline void collect_spectrum_values(const Element& a, std::vector<double>& out) {
  switch (a.storage()) {
    case StorageModel::matrix: {
      const auto s = spectrum_of(a);
      out.insert(out.end(), s->eigenvalues.begin(), s->eigenvalues.end());
      return;
    }
    case StorageModel::coords:
      out.insert(out.end(), a.coord_values().begin(), a.coord_values().end());
      return;
    case StorageModel::parts:
      for (const Element& q : a.part_values()) collect_spectrum_values(q, out);
      return;
  }
}
}  // namespace detail

/// min sigma(a) in the element's own algebra (corner-aware).
inline double min_spectrum(const Element& a) {
  std::vector<double> vals;
  detail::collect_spectrum_values(a, vals);
  double m = vals.front();
  for (double v : vals) m = std::min(m, v);
  return m;
}

/// C*-norm: sup-norm on the diagonal model, spectral radius for self-adjoint
/// matrices, largest singular value otherwise.
inline double op_norm(const Element& a) {
  switch (a.storage()) {
    case StorageModel::matrix: {
      if (is_self_adjoint(a)) {
        const auto s = spectrum_of(a);
        double m = 0.0;
        for (double v : s->eigenvalues) m = std::max(m, std::abs(v));
        return m;
      }
      const CMatrix g = a.mat().adjoint() * a.mat();
      const Spectrum s = jacobi_hermitian(hermitize(g));
      const double top = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back();
      return std::sqrt(std::max(0.0, top));
    }
    case StorageModel::coords: {
      double m = 0.0;
      for (double x : a.coord_values()) m = std::max(m, std::abs(x));
      return m;
    }
    case StorageModel::parts: {
      double m = 0.0;
      for (const Element& q : a.part_values()) m = std::max(m, op_norm(q));
      return m;
    }
  }
  throw Error("unreachable");
}

inline double distance(const Element& a, const Element& b) { return op_norm(a - b); }

inline bool is_positive(const Element& a, double tol = kPosTol) {
  if (!is_self_adjoint(a)) return false;
  return min_spectrum(a) >= -tol;
}

inline bool is_projection(const Element& a, double tol = kPosTol) {
  if (!is_self_adjoint(a)) return false;
  if (a.storage() == StorageModel::coords) {
    for (double x : a.coord_values())
      if (std::abs(x * x - x) > tol) return false;
    return true;
  }
  if (a.storage() == StorageModel::parts) {
    for (const Element& q : a.part_values())
      if (!is_projection(q, tol)) return false;
    return true;
  }
  const CMatrix d = a.mat() * a.mat() - a.mat();
  const Spectrum s = jacobi_hermitian(hermitize(d));
  double m = 0.0;
  for (double v : s.eigenvalues) m = std::max(m, std::abs(v));
  return m <= tol;
}

/// Corner algebra pAp of a nonzero projection p, with unit compress(p).
inline AlgebraPtr corner(const AlgebraPtr& parent, const Element& p) {
  if (!(*p.algebra() == *parent)) throw AlgebraMismatch("corner: projection lives elsewhere");
  if (!is_projection(p, 1e-8)) throw NotProjection("corner: not a projection");

  auto alg = std::shared_ptr<Algebra>(new Algebra());
  alg->kind_ = AlgebraKind::corner;
  alg->parent_ = parent;
  alg->parent_storage_ = parent->storage();
  alg->symmetric_constrained_ = parent->symmetric_constrained();

  switch (parent->storage()) {
    case StorageModel::matrix: {
      const auto s = spectrum_of(p);
      int r = 0;
      for (double v : s->eigenvalues)
        if (v > 0.5) ++r;
      if (r == 0) throw ZeroProjection("corner: projection has rank zero");
      const int n = parent->dim();
      CMatrix w(n, r);
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) w(i, j) = s->eigenvectors(i, n - r + j);
      alg->dim_ = r;
      alg->isometry_ = std::move(w);
      return alg;
    }
    case StorageModel::coords: {
      std::vector<int> sel;
      for (int i = 0; i < parent->dim(); ++i)
        if (p.coord_values()[i] > 0.5) sel.push_back(i);
      if (sel.empty()) throw ZeroProjection("corner: projection has rank zero");
      alg->dim_ = static_cast<int>(sel.size());
      alg->selection_ = std::move(sel);
      return alg;
    }
    case StorageModel::parts: {
      const auto& kids = parent->kind() == AlgebraKind::direct_sum ? parent->summands() : parent->corner_children();
      std::vector<AlgebraPtr> children;
      int d = 0;
      std::size_t j = 0;
      for (const auto& s : kids) {
        if (!s) continue;
        const Element& part = p.part_values()[j++];
        if (op_norm(part) > 0.5) {
          auto c = corner(s, part);
          d += c->dim();
          children.push_back(std::move(c));
        } else {
          children.push_back(nullptr);
        }
      }
      if (d == 0) throw ZeroProjection("corner: projection has rank zero");
      alg->dim_ = d;
      alg->corner_children_ = std::move(children);
      return alg;
    }
  }
  throw Error("unreachable");
}

/// W* a W: restriction of a parent element to the corner coordinates.
inline Element compress(const AlgebraPtr& corner_alg, const Element& a) {
  if (corner_alg->kind() != AlgebraKind::corner) throw Error("compress: not a corner algebra");
  if (!(*a.algebra() == *corner_alg->parent())) throw AlgebraMismatch("compress: element not in the parent");
  switch (corner_alg->parent()->storage()) {
    case StorageModel::matrix:
      return Element::matrix(corner_alg, corner_alg->isometry().adjoint() * a.mat() * corner_alg->isometry());
    case StorageModel::coords: {
      std::vector<double> c;
      c.reserve(corner_alg->selection().size());
      for (int i : corner_alg->selection()) c.push_back(a.coord_values()[i]);
      return Element::coords(corner_alg, std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      std::size_t j = 0;
      for (const auto& child : corner_alg->corner_children()) {
        const Element& part = a.part_values()[j++];
        if (child) ps.push_back(compress(child, part));
      }
      return Element::parts(corner_alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

/// W x W*: the corner element viewed back inside the parent algebra.
inline Element embed(const Element& x) {
  const AlgebraPtr alg = x.algebra();
  if (alg->kind() != AlgebraKind::corner) throw Error("embed: element is not in a corner algebra");
  const AlgebraPtr& parent = alg->parent();
  switch (parent->storage()) {
    case StorageModel::matrix:
      return Element::matrix(parent, alg->isometry() * x.mat() * alg->isometry().adjoint());
    case StorageModel::coords: {
      std::vector<double> c(parent->dim(), 0.0);
      for (std::size_t k = 0; k < alg->selection().size(); ++k) c[alg->selection()[k]] = x.coord_values()[k];
      return Element::coords(parent, std::move(c));
    }
    case StorageModel::parts: {
      const auto& parent_kids =
          parent->kind() == AlgebraKind::direct_sum ? parent->summands() : parent->corner_children();
      std::vector<Element> ps;
      std::size_t child_idx = 0;
      std::size_t part_idx = 0;
      for (const auto& s : parent_kids) {
        if (!s) continue;
        const AlgebraPtr& child = alg->corner_children()[child_idx++];
        if (child)
          ps.push_back(embed(x.part_values()[part_idx++]));
        else
          ps.push_back(Element::zero(s));
      }
      return Element::parts(parent, std::move(ps));
    }
  }
  throw Error("unreachable");
}

}  // namespace sphlab
