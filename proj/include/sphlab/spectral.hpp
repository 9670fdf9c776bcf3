#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sphlab/matrix.hpp"

namespace sphlab {

/// Eigensystem of a self-adjoint matrix: eigenvalues ascending, eigenvector
/// columns orthonormal, reconstruction V diag(lambda) V* = input.
struct Spectrum {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;
};

namespace detail {

/// Off-diagonal Frobenius mass, the Jacobi convergence measure.
inline double offdiag_mass(const CMatrix& h) {
  double s = 0.0;
  const int n = h.rows();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) s += std::norm(h(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices (rotation + phase).
/// Deterministic for identical input bits; converges in far fewer sweeps
/// than the cap of 60 for the n <= 256 matrices used here. The input must
/// already be Hermitian; callers symmetrize beforehand.
inline Spectrum jacobi_hermitian(const CMatrix& input, int max_sweeps = 60) {
  const int n = input.rows();
  CMatrix h = hermitize(input);
  CMatrix v = CMatrix::identity(n);

  if (n == 1) {
    return Spectrum{{h(0, 0).real()}, v};
  }

  const double scale = std::max(1.0, h.frobenius());
  const double threshold = 1e-14 * scale;

  bool converged = detail::offdiag_mass(h) <= threshold;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = h(p, q);
        const double r = std::abs(apq);
        if (r <= threshold / (static_cast<double>(n) * n)) continue;

        const Complex phase = apq / r;
        const double app = h(p, p).real();
        const double aqq = h(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Column update: col_p' = c col_p - s conj(phase) col_q,
        //                col_q' = s phase col_p + c col_q.
        for (int k = 0; k < n; ++k) {
          const Complex hp = h(k, p);
          const Complex hq = h(k, q);
          h(k, p) = c * hp - s * std::conj(phase) * hq;
          h(k, q) = s * phase * hp + c * hq;
        }
        // Row update with the adjoint rotation.
        for (int k = 0; k < n; ++k) {
          const Complex hp = h(p, k);
          const Complex hq = h(q, k);
          h(p, k) = c * hp - s * phase * hq;
          h(q, k) = s * std::conj(phase) * hp + c * hq;
        }
        // The targeted pair is annihilated exactly; diagonal stays real.
        h(p, q) = 0.0;
        h(q, p) = 0.0;
        h(p, p) = Complex{h(p, p).real(), 0.0};
        h(q, q) = Complex{h(q, q).real(), 0.0};

        for (int k = 0; k < n; ++k) {
          const Complex vp = v(k, p);
          const Complex vq = v(k, q);
          v(k, p) = c * vp - s * std::conj(phase) * vq;
          v(k, q) = s * phase * vp + c * vq;
        }
      }
    }
    converged = detail::offdiag_mass(h) <= threshold;
  }
  if (!converged) throw NoConvergence("jacobi_hermitian: sweep cap exceeded");

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h(a, a).real() < h(b, b).real(); });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    out.eigenvalues[j] = h(order[j], order[j]).real();
    for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

/// Operator norm of a raw matrix: spectral radius when Hermitian, largest
/// singular value otherwise.
inline double matrix_op_norm(const CMatrix& m) {
  const double scale = std::max(1.0, m.frobenius());
  if (hermitian_defect(m) <= 1e-12 * scale) {
    const Spectrum s = jacobi_hermitian(hermitize(m));
    double top = 0.0;
    for (double v : s.eigenvalues) top = std::max(top, std::abs(v));
    return top;
  }
  const Spectrum s = jacobi_hermitian(hermitize(m.adjoint() * m));
  return std::sqrt(std::max(0.0, s.eigenvalues.back()));
}

}  // namespace sphlab
