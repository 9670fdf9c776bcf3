#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "sphlab/algebra.hpp"

namespace sphlab {

/// splitmix64 step, used to derive independent per-instance seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(base ^ mix_seed(a ^ mix_seed(b)));
}

/// Deterministic random stream; each instance gets its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Complex cnormal() { return Complex{normal(), normal()}; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline CMatrix random_gaussian_matrix(int n, Rng& rng, bool real_only) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = real_only ? Complex{rng.normal(), 0.0} : rng.cnormal();
  return g;
}

/// Gram-Schmidt on a Gaussian draw; real_only gives an orthogonal matrix.
inline CMatrix random_unitary(int n, Rng& rng, bool real_only = false) {
  CMatrix g = random_gaussian_matrix(n, rng, real_only);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < j; ++k) {
      Complex dot{};
      for (int i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
      for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += std::norm(g(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-8) {
      for (int i = 0; i < n; ++i) g(i, j) = (i == j) ? 1.0 : 0.0;
      j -= 1;
      continue;
    }
    for (int i = 0; i < n; ++i) g(i, j) = g(i, j) * (1.0 / nrm);
  }
  return g;
}

/// General (not necessarily self-adjoint) random member of the algebra.
inline Element random_general(const AlgebraPtr& alg, Rng& rng) {
  switch (alg->storage()) {
    case StorageModel::matrix: {
      CMatrix g = random_gaussian_matrix(alg->dim(), rng, false);
      if (alg->symmetric_constrained()) g = 0.5 * (g + g.transpose());
      return Element::matrix(alg, std::move(g));
    }
    case StorageModel::coords: {
      std::vector<double> c(alg->dim());
      for (double& x : c) x = rng.normal();
      return Element::coords(alg, std::move(c));
    }
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<Element> ps;
      for (const auto& s : kids)
        if (s) ps.push_back(random_general(s, rng));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element random_self_adjoint(const AlgebraPtr& alg, Rng& rng) {
  switch (alg->storage()) {
    case StorageModel::matrix: {
      // On the symmetric backend self-adjoint members are real symmetric.
      CMatrix g = random_gaussian_matrix(alg->dim(), rng, alg->symmetric_constrained());
      return Element::matrix(alg, hermitize(g));
    }
    case StorageModel::coords: {
      std::vector<double> c(alg->dim());
      for (double& x : c) x = rng.normal();
      return Element::coords(alg, std::move(c));
    }
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<Element> ps;
      for (const auto& s : kids)
        if (s) ps.push_back(random_self_adjoint(s, rng));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline Element random_psd(const AlgebraPtr& alg, Rng& rng) {
  switch (alg->storage()) {
    case StorageModel::matrix: {
      CMatrix g = random_gaussian_matrix(alg->dim(), rng, alg->symmetric_constrained());
      CMatrix p = alg->symmetric_constrained() ? g.transpose() * g : g.adjoint() * g;
      return Element::matrix(alg, hermitize(p));
    }
    case StorageModel::coords: {
      std::vector<double> c(alg->dim());
      for (double& x : c) {
        const double v = rng.normal();
        x = v * v;
      }
      return Element::coords(alg, std::move(c));
    }
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<Element> ps;
      for (const auto& s : kids)
        if (s) ps.push_back(random_psd(s, rng));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

/// Normalized positive element: random PSD scaled to norm one.
inline Element random_positive_norm_one(const AlgebraPtr& alg, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Element w = random_psd(alg, rng);
    const double nrm = op_norm(w);
    if (nrm > 1e-8) return (1.0 / nrm) * w;
  }
  throw Error("random_positive_norm_one: degenerate draws");
}

/// Projection of the requested rank, unitarily (orthogonally on the
/// symmetric backend) conjugated for matrix kinds.
inline Element random_projection(const AlgebraPtr& alg, int rank, Rng& rng) {
  if (rank < 0 || rank > alg->dim()) throw Error("random_projection: rank out of range");
  switch (alg->storage()) {
    case StorageModel::matrix: {
      const int n = alg->dim();
      const CMatrix u = random_unitary(n, rng, alg->symmetric_constrained());
      CMatrix m(n, n);
      for (int k = 0; k < rank; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m(i, j) += u(i, k) * std::conj(u(j, k));
      return Element::matrix(alg, hermitize(m));
    }
    case StorageModel::coords: {
      std::vector<int> idx(alg->dim());
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng.engine());
      std::vector<double> c(alg->dim(), 0.0);
      for (int k = 0; k < rank; ++k) c[idx[k]] = 1.0;
      return Element::coords(alg, std::move(c));
    }
    case StorageModel::parts: {
      const auto& kids = alg->kind() == AlgebraKind::direct_sum ? alg->summands() : alg->corner_children();
      std::vector<int> dims;
      for (const auto& s : kids)
        if (s) dims.push_back(s->dim());
      // Spread the rank across summands deterministically.
      std::vector<int> ranks(dims.size(), 0);
      int left = rank;
      while (left > 0) {
        bool moved = false;
        for (std::size_t i = 0; i < dims.size() && left > 0; ++i) {
          if (ranks[i] < dims[i]) {
            ++ranks[i];
            --left;
            moved = true;
          }
        }
        if (!moved) throw Error("random_projection: rank exceeds total dim");
      }
      std::vector<Element> ps;
      std::size_t j = 0;
      for (const auto& s : kids)
        if (s) ps.push_back(random_projection(s, ranks[j++], rng));
      return Element::parts(alg, std::move(ps));
    }
  }
  throw Error("unreachable");
}

inline std::vector<Complex> random_unit_vector(int n, Rng& rng, bool real_only = false) {
  std::vector<Complex> v(n);
  double nrm = 0.0;
  while (nrm < 1e-8) {
    nrm = 0.0;
    for (Complex& z : v) {
      z = real_only ? Complex{rng.normal(), 0.0} : rng.cnormal();
      nrm += std::norm(z);
    }
    nrm = std::sqrt(nrm);
  }
  for (Complex& z : v) z = z * (1.0 / nrm);
  return v;
}

}  // namespace sphlab
