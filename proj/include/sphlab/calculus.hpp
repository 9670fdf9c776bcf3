#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "sphlab/algebra.hpp"

namespace sphlab {

/// Spectral threshold rho for range projections.
inline constexpr double kRangeTol = 1e-8;
/// Margin absorbing eigenvalue roundoff at the ends of a function's domain.
inline constexpr double kDomainMargin = 1e-9;

/// Real function on an interval given by breakpoints, continuous by
/// construction. Every function the functional calculus needs here is
/// piecewise linear.
class PiecewiseLinear {
 public:
  PiecewiseLinear(double lo, double hi, std::vector<std::pair<double, double>> pts)
      : lo_(lo), hi_(hi), pts_(std::move(pts)) {
    if (!(lo_ < hi_)) throw ParameterOutOfRange("PiecewiseLinear: empty domain");
    if (pts_.size() < 2 || pts_.front().first != lo_ || pts_.back().first != hi_)
      throw ParameterOutOfRange("PiecewiseLinear: breakpoints must span the domain");
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
      if (!(pts_[i].first < pts_[i + 1].first))
        throw ParameterOutOfRange("PiecewiseLinear: breakpoints must be strictly ascending");
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<std::pair<double, double>>& breakpoints() const { return pts_; }

  double operator()(double t) const {
    if (t < lo_ || t > hi_) throw DomainViolation("PiecewiseLinear: argument outside the domain");
    auto it = std::lower_bound(pts_.begin(), pts_.end(), t,
                               [](const std::pair<double, double>& p, double x) { return p.first < x; });
    if (it != pts_.end() && it->first == t) return it->second;
    const auto& right = *it;
    const auto& left = *(it - 1);
    const double w = (t - left.first) / (right.first - left.first);
    return left.second + w * (right.second - left.second);
  }

 private:
  double lo_, hi_;
  std::vector<std::pair<double, double>> pts_;
};

/// f(t) = 1/2 + t / (2 norm_c) on [0, norm_c], an affine bijection onto [1/2, 1].
inline PiecewiseLinear make_f(double norm_c) {
  if (!(norm_c > 0.0)) throw NonpositiveParameter("make_f: norm_c must be positive");
  return PiecewiseLinear(0.0, norm_c, {{0.0, 0.5}, {norm_c, 1.0}});
}

/// Inverse of make_f: s -> 2 norm_c (s - 1/2), taken on all of [0, 1].
inline PiecewiseLinear make_f_inv(double norm_c) {
  if (!(norm_c > 0.0)) throw NonpositiveParameter("make_f_inv: norm_c must be positive");
  return PiecewiseLinear(0.0, 1.0, {{0.0, -norm_c}, {0.5, 0.0}, {1.0, norm_c}});
}

/// Plateau-ramp-zero cutoff on [0,1]: 1 up to t0+eps, affine down to 0 at
/// 1-eps, then 0. Requires 0 <= t0 < 1 and 0 < eps < (1-t0)/2.
inline PiecewiseLinear make_g(double t0, double eps) {
  if (!(t0 >= 0.0 && t0 < 1.0)) throw ParameterOutOfRange("make_g: t0 must lie in [0,1)");
  if (!(eps > 0.0 && eps < (1.0 - t0) / 2.0)) throw ParameterOutOfRange("make_g: need 0 < eps < (1-t0)/2");
  return PiecewiseLinear(0.0, 1.0, {{0.0, 1.0}, {t0 + eps, 1.0}, {1.0 - eps, 0.0}, {1.0, 0.0}});
}

/// Identity below norm_z - eps, steep ramp to 1 at norm_z, then 1 on
/// [norm_z, 1]. Requires 0 < norm_z <= 1 and 0 < eps < norm_z.
inline PiecewiseLinear make_h(double norm_z, double eps) {
  if (!(norm_z > 0.0 && norm_z <= 1.0)) throw ParameterOutOfRange("make_h: norm_z must lie in (0,1]");
  if (!(eps > 0.0 && eps < norm_z)) throw ParameterOutOfRange("make_h: need 0 < eps < norm_z");
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {norm_z - eps, norm_z - eps}, {norm_z, 1.0}};
  if (norm_z < 1.0) pts.emplace_back(1.0, 1.0);
  return PiecewiseLinear(0.0, 1.0, std::move(pts));
}

namespace detail {

inline double clamp_into_domain(double v, double lo, double hi) {
  if (v < lo) {
    if (lo - v > kDomainMargin) throw DomainViolation("functional calculus: eigenvalue below the domain");
    return lo;
  }
  if (v > hi) {
    if (v - hi > kDomainMargin) throw DomainViolation("functional calculus: eigenvalue above the domain");
    return hi;
  }
  return v;
}

template <typename Fn>
Element apply_spectral(const Element& a, Fn&& fn) {
  switch (a.storage()) {
    case StorageModel::coords: {
      std::vector<double> c(a.coord_values().size());
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = fn(a.coord_values()[i]);
      return Element::coords(a.algebra(), std::move(c));
    }
    case StorageModel::parts: {
      std::vector<Element> ps;
      ps.reserve(a.part_values().size());
      for (const Element& q : a.part_values()) ps.push_back(apply_spectral(q, fn));
      return Element::parts(a.algebra(), std::move(ps));
    }
    case StorageModel::matrix: {
      const auto s = spectrum_of(a);
      const int n = a.algebra()->dim();
      const CMatrix& v = s->eigenvectors;
      CMatrix scaled(n, n);
      for (int j = 0; j < n; ++j) {
        const double fv = fn(s->eigenvalues[j]);
        for (int i = 0; i < n; ++i) scaled(i, j) = fv * v(i, j);
      }
      CMatrix out = scaled * v.adjoint();
      return Element::matrix(a.algebra(), hermitize(out));
    }
  }
  throw Error("unreachable");
}

}  // namespace detail

/// Continuous functional calculus V fun(Lambda) V*. Eigenvalues may overshoot
/// the domain by at most the clamping margin; they are clamped inside.
inline Element apply_fc(const PiecewiseLinear& fun, const Element& a) {
  const Element sa = symmetrized(a);
  return detail::apply_spectral(sa, [&](double t) { return fun(detail::clamp_into_domain(t, fun.lo(), fun.hi())); });
}

/// Square root of a positive element.
inline Element sqrt_pos(const Element& a) {
  if (!is_positive(a, kPosTol)) throw NotPositive("sqrt_pos: element is not positive");
  return detail::apply_spectral(symmetrized(a), [](double t) { return std::sqrt(std::max(0.0, t)); });
}

/// Smallest projection q with q a = a q = a: the spectral projection onto
/// eigenvalues above the threshold rho.
inline Element range_projection(const Element& a, double rho = kRangeTol) {
  if (!is_positive(a, kPosTol)) throw NotPositive("range_projection: element is not positive");
  return detail::apply_spectral(symmetrized(a), [rho](double t) { return t > rho ? 1.0 : 0.0; });
}

}  // namespace sphlab
