#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sphlab/algebra.hpp"
#include "sphlab/calculus.hpp"
#include "sphlab/jordan.hpp"
#include "sphlab/sphere.hpp"

namespace sphlab {

enum class CaseTag { UNIT_SINGULAR, UNIT_SHIFTED, D_CASE, Z_CASE, TAIL_NORM_ONE, TAIL_SHRUNK };

inline const char* to_string(CaseTag t) {
  switch (t) {
    case CaseTag::UNIT_SINGULAR: return "UNIT_SINGULAR";
    case CaseTag::UNIT_SHIFTED: return "UNIT_SHIFTED";
    case CaseTag::D_CASE: return "D_CASE";
    case CaseTag::Z_CASE: return "Z_CASE";
    case CaseTag::TAIL_NORM_ONE: return "TAIL_NORM_ONE";
    case CaseTag::TAIL_SHRUNK: return "TAIL_SHRUNK";
  }
  return "?";
}

/// Refutation output: a concrete s in Sph(p) whose distance to b differs
/// from one, with the four rechecked norms and the gap |  ||b-s|| - 1 |.
struct WitnessCertificate {
  CaseTag case_tag;
  Element witness;
  double norm_s = 0.0;
  double norm_s_minus_p = 0.0;
  double min_eig_s = 0.0;
  double norm_b_minus_s = 0.0;
  double gap = 0.0;
  std::optional<double> m;
  std::optional<double> t0;
  std::optional<double> eps;
  std::optional<double> norm_c;
  std::optional<double> norm_zprime;
};

enum class RefuteStatus { confirmed, refuted, inconclusive };

struct RefutationResult {
  RefuteStatus status;
  std::optional<WitnessCertificate> certificate;
  std::string note;
};

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultMargin = 1e-6;

/// Independent recheck: recomputes positivity and all four norms from
/// scratch (fresh elements, no cached spectra) and tests the certificate
/// invariants and the stored values.
inline bool verify_certificate(const Element& p, const Element& b, const WitnessCertificate& cert,
                               double tol = kDefaultTol, double margin = kDefaultMargin) {
  try {
    if (!(*p.algebra() == *b.algebra()) || !(*cert.witness.algebra() == *p.algebra())) return false;
    const Element s = cert.witness.fresh();
    const Element pf = p.fresh();
    const Element bf = b.fresh();
    const double vtol = std::max(tol, 1e-9);

    const double ns = op_norm(s);
    const double nsp = distance(s, pf);
    const double mes = min_spectrum(symmetrized(s));
    const double nbs = distance(bf, s);
    const double gap = std::abs(nbs - 1.0);

    if (std::abs(ns - 1.0) > vtol) return false;
    if (std::abs(nsp - 1.0) > vtol) return false;
    if (mes < -vtol) return false;
    if (gap < margin) return false;

    const double agree = 1e-7;
    return std::abs(ns - cert.norm_s) <= agree && std::abs(nsp - cert.norm_s_minus_p) <= agree &&
           std::abs(mes - cert.min_eig_s) <= agree && std::abs(nbs - cert.norm_b_minus_s) <= agree &&
           std::abs(gap - cert.gap) <= agree;
  } catch (const Error&) {
    return false;
  }
}

namespace detail {

struct CandidateWitness {
  CaseTag tag;
  Element s;
  std::optional<double> m, t0, eps, norm_c, norm_zprime;
};

inline WitnessCertificate measure_candidate(const Element& p, const Element& b, const CandidateWitness& c) {
  WitnessCertificate cert{c.tag, c.s};
  cert.norm_s = op_norm(c.s.fresh());
  cert.norm_s_minus_p = distance(c.s.fresh(), p);
  cert.min_eig_s = min_spectrum(symmetrized(c.s.fresh()));
  cert.norm_b_minus_s = distance(b, c.s.fresh());
  cert.gap = std::abs(cert.norm_b_minus_s - 1.0);
  cert.m = c.m;
  cert.t0 = c.t0;
  cert.eps = c.eps;
  cert.norm_c = c.norm_c;
  cert.norm_zprime = c.norm_zprime;
  return cert;
}

/// Case analysis of the refutation proof, shared by the associative and the
/// Jordan engines; `jordan` switches the U-operator route.
inline RefutationResult refute_engine(const AlgebraPtr& A, const Element& p, const Element& b, double tol,
                                      double margin, bool jordan) {
  if (!(*p.algebra() == *A) || !(*b.algebra() == *A)) throw AlgebraMismatch("refute: inputs live elsewhere");
  if (!is_projection(p, 1e-8)) throw NotProjection("refute: p is not a projection");
  if (op_norm(p) < 0.5) throw NotProjection("refute: p must be nonzero");
  if (!is_positive(b, std::max(tol, kPosTol)) || std::abs(op_norm(b) - 1.0) > tol)
    throw NotPositiveNormOne("refute: b must be positive with norm one");

  if (distance(b, p) <= tol) return RefutationResult{RefuteStatus::confirmed, std::nullopt, ""};

  const auto U = [jordan](const Element& x, const Element& y) { return jordan ? u_op(x, y) : u_assoc(x, y); };

  const Element unit = Element::unit(A);
  const Element pperp = unit - p;
  const bool proper = op_norm(pperp) > 0.5;  // rank(p) < dim
  const AlgebraPtr p_corner = corner(A, p);
  const AlgebraPtr perp_corner = proper ? corner(A, pperp) : nullptr;

  const double norm_c_out = proper ? op_norm(U(pperp, b)) : 0.0;
  const double e_norm = op_norm(U(p, b));
  const Element e_c = compress(p_corner, b);
  const double t0_raw = min_spectrum(e_c);

  // Candidate builders; each returns nothing when its construction is
  // degenerate for this input.
  const auto build_unit_singular = [&]() -> std::optional<CandidateWitness> {
    const Element bc = compress(p_corner, b);
    const double m = min_spectrum(bc);
    if (m > tol) return std::nullopt;
    CandidateWitness c{CaseTag::UNIT_SINGULAR, embed(bc)};
    c.m = m;
    return c;
  };
  const auto build_unit_shifted = [&]() -> std::optional<CandidateWitness> {
    const Element bc = compress(p_corner, b);
    const double m = min_spectrum(bc);
    const Element shifted = bc - m * Element::unit(p_corner);
    const double nrm = op_norm(shifted);
    if (nrm <= tol) return std::nullopt;
    CandidateWitness c{CaseTag::UNIT_SHIFTED, embed((1.0 / nrm) * shifted)};
    c.m = m;
    return c;
  };
  const auto build_d_case = [&]() -> std::optional<CandidateWitness> {
    if (!proper) return std::nullopt;
    const Element cc = compress(perp_corner, b);
    const double nc = op_norm(cc);
    if (nc <= tol) return std::nullopt;
    const Element d = apply_fc(make_f(nc), cc);
    CandidateWitness c{CaseTag::D_CASE, embed(d)};
    c.norm_c = nc;
    return c;
  };
  const auto build_z_case = [&]() -> std::optional<CandidateWitness> {
    if (!proper) return std::nullopt;
    // Soundness guards from the proposition's hypotheses.
    if (norm_c_out <= tol) return std::nullopt;
    if (t0_raw > 1.0 - 2.0 * tol) return std::nullopt;
    const double t0 = std::min(std::max(t0_raw, 0.0), 1.0 - 4.0 * tol);
    const double eps = (1.0 - t0) / 4.0;
    const Element x_c = apply_fc(make_g(t0, eps), e_c);
    const Element x = embed(x_c);
    const Element y = p - x;
    const Element uyb = U(y, b);
    const double nuyb = op_norm(uyb);
    if (nuyb <= tol) return std::nullopt;
    const Element cz = U(pperp, b);
    const double ncz = op_norm(cz);
    if (ncz <= tol) return std::nullopt;
    const Element z = 0.5 * (pperp + (1.0 / ncz) * cz + (1.0 / nuyb) * uyb);
    // Internal checks before use.
    if (std::abs(op_norm(z) - 1.0) > 1e-8) return std::nullopt;
    if (std::abs(distance(z, p) - 1.0) > 1e-8) return std::nullopt;
    if (op_norm(U(x, b)) >= 1.0 - 1e-8) return std::nullopt;
    CandidateWitness c{CaseTag::Z_CASE, z};
    c.t0 = t0;
    c.eps = eps;
    return c;
  };
  const auto build_tail_norm_one = [&]() -> std::optional<CandidateWitness> {
    if (!proper) return std::nullopt;
    const Element zc = compress(perp_corner, b);
    const double nz = op_norm(zc);
    if (nz < 1.0 - tol) return std::nullopt;
    CandidateWitness c{CaseTag::TAIL_NORM_ONE, b};
    c.norm_zprime = nz;
    return c;
  };
  const auto build_tail_shrunk = [&]() -> std::optional<CandidateWitness> {
    if (!proper) return std::nullopt;
    const Element zc = compress(perp_corner, b);
    const double nz = op_norm(zc);
    if (nz <= tol || nz >= 1.0 - tol) return std::nullopt;
    const Element y = apply_fc(make_h(nz, nz / 2.0), zc);
    CandidateWitness c{CaseTag::TAIL_SHRUNK, p + embed(y)};
    c.eps = nz / 2.0;
    c.norm_zprime = nz;
    return c;
  };

  std::vector<std::pair<CaseTag, std::function<std::optional<CandidateWitness>()>>> plan;
  const bool unit_like = norm_c_out <= tol;
  if (unit_like) {
    plan.emplace_back(CaseTag::UNIT_SINGULAR, build_unit_singular);
    plan.emplace_back(CaseTag::UNIT_SHIFTED, build_unit_shifted);
  } else if (e_norm < 1.0 - 10.0 * tol) {
    plan.emplace_back(CaseTag::D_CASE, build_d_case);
  } else if (t0_raw < 1.0 - 10.0 * tol) {
    plan.emplace_back(CaseTag::Z_CASE, build_z_case);
  } else {
    plan.emplace_back(CaseTag::TAIL_NORM_ONE, build_tail_norm_one);
    plan.emplace_back(CaseTag::TAIL_SHRUNK, build_tail_shrunk);
  }
  // Fallback: the proof guarantees a witness exists, not that the primary
  // branch has the widest numerical gap; try the remaining constructions.
  const std::vector<std::pair<CaseTag, std::function<std::optional<CandidateWitness>()>>> rest = {
      {CaseTag::UNIT_SINGULAR, build_unit_singular}, {CaseTag::UNIT_SHIFTED, build_unit_shifted},
      {CaseTag::D_CASE, build_d_case},               {CaseTag::Z_CASE, build_z_case},
      {CaseTag::TAIL_NORM_ONE, build_tail_norm_one}, {CaseTag::TAIL_SHRUNK, build_tail_shrunk}};
  for (const auto& r : rest) {
    bool present = false;
    for (const auto& q : plan) present = present || q.first == r.first;
    if (!present) plan.push_back(r);
  }

  for (const auto& [tag, build] : plan) {
    (void)tag;
    std::optional<CandidateWitness> cand;
    try {
      cand = build();
    } catch (const Error&) {
      continue;
    }
    if (!cand) continue;
    WitnessCertificate cert = measure_candidate(p, b, *cand);
    if (verify_certificate(p, b, cert, tol, margin))
      return RefutationResult{RefuteStatus::refuted, std::move(cert), ""};
  }
  return RefutationResult{RefuteStatus::inconclusive, std::nullopt,
                          "no candidate achieved the gap margin; tolerances are degenerate for this input"};
}

}  // namespace detail

/// Decides membership of b in the double sphere around p: confirms b = p or
/// produces a verified witness s in Sph(p) with ||b - s|| != 1, following
/// the proof's case order with numerical fallback across branches.
inline RefutationResult refute_membership(const AlgebraPtr& A, const Element& p, const Element& b,
                                          double tol = kDefaultTol, double margin = kDefaultMargin) {
  return detail::refute_engine(A, p, b, tol, margin, /*jordan=*/false);
}

/// The p = unit specialization: confirms b = 1 or certifies via the shifted
/// witness (b - m 1) / ||b - m 1||.
inline RefutationResult unit_refuter(const AlgebraPtr& A, const Element& b, double tol = kDefaultTol,
                                     double margin = kDefaultMargin) {
  return detail::refute_engine(A, Element::unit(A), b, tol, margin, /*jordan=*/false);
}

/// Same contract with every U computed by the Jordan formula; on the full
/// matrix backend it must reproduce the associative engine's certificates.
inline RefutationResult jordan_refute_membership(const AlgebraPtr& A, const Element& p, const Element& b,
                                                 double tol = kDefaultTol, double margin = kDefaultMargin) {
  const AlgebraKind k = A->kind();
  if (k != AlgebraKind::full_matrix && k != AlgebraKind::symmetric_jordan)
    throw BackendMismatch("jordan_refute_membership: backend must be full_matrix or symmetric_jordan");
  return detail::refute_engine(A, p, b, tol, margin, /*jordan=*/true);
}

/// |phi(a o b)| for positive a, b with phi(U_a(b)) = 0; the Cauchy-Schwarz
/// refinement predicts a vanishing value.
inline double cs_refinement_check(const PureState& phi, const Element& a, const Element& b, double tol = 1e-9) {
  if (!is_positive(a, kPosTol) || !is_positive(b, kPosTol))
    throw NotPositive("cs_refinement_check: a and b must be positive");
  const double u_val = std::abs(phi.value(u_op(a, b)));
  if (u_val > tol) throw PreconditionFailed("cs_refinement_check: phi(U_a(b)) must vanish within tol");
  return std::abs(phi.value(jordan_product(a, b)));
}

}  // namespace sphlab
