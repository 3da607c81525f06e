#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/errors.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace siqhj {

// Quantum Hamilton-Jacobi bookkeeping. Near each fixed pole the quantum
// momentum p = -hbar psi'/psi is expanded in a local coordinate u as
//   p = b1/u + a0 + a1 u + ...
// and the contour integral of p dx around that pole is kappa times one of the
// three coefficients, fixed by how dx looks in u (dx = kappa u^order du).

enum class PoleLocation { AtZeroOfVariable, AtInfinity, AtPlusOne, AtMinusOne };

enum class PoleVariable { F1, F2, Y, InverseF1, InverseF2, InverseY };

// a0 = +/- principal sqrt(c0^2 - E), or the root of the indicial quadratic
// that equals the leading coefficient of W
enum class BranchRule { SqrtPlus, SqrtMinus, LeadingTermMatch };

using cplx = std::complex<double>;

struct PoleDescriptor {
  PoleLocation location;
  PoleVariable variable;
  cplx point = 0.0; // value of the variable at the pole (0 for the inverse variables)
  double weight = 1.0;
  cplx kappa = 1.0; // dx = kappa * u^order du near the pole
  int order = 0;    // 0, -1 or -2: picks b1, a0 or a1 as the residue
  std::string differential;
};

struct ResidueSolution {
  PoleDescriptor pole;
  cplx b1 = 0.0, a0 = 0.0, a1 = 0.0;
  BranchRule branch = BranchRule::LeadingTermMatch;
  cplx contribution = 0.0; // weight * kappa * (selected coefficient)
};

enum class QhjRoute { ClosedForm, NumericRoot };

inline std::string_view to_string(QhjRoute r) {
  return r == QhjRoute::ClosedForm ? "closed_form" : "numeric_root";
}
inline std::string_view to_string(BranchRule b) {
  switch (b) {
  case BranchRule::SqrtPlus: return "+sqrt";
  case BranchRule::SqrtMinus: return "-sqrt";
  case BranchRule::LeadingTermMatch: return "leading";
  }
  return "";
}
inline std::string_view to_string(PoleVariable v) {
  switch (v) {
  case PoleVariable::F1: return "f1";
  case PoleVariable::F2: return "f2";
  case PoleVariable::Y: return "y";
  case PoleVariable::InverseF1: return "z=1/f1";
  case PoleVariable::InverseF2: return "z=1/f2";
  case PoleVariable::InverseY: return "z=1/y";
  }
  return "";
}
inline std::string_view to_string(PoleLocation p) {
  switch (p) {
  case PoleLocation::AtZeroOfVariable: return "zero";
  case PoleLocation::AtInfinity: return "infinity";
  case PoleLocation::AtPlusOne: return "+1";
  case PoleLocation::AtMinusOne: return "-1";
  }
  return "";
}

struct QuantizationResult {
  int n = 0;
  double energy = 0.0;
  double residual = 0.0;
  QhjRoute route = QhjRoute::NumericRoot;
};

namespace detail {

// sqrt(lambda) for the two-pole classes: i on the trigonometric branch
inline cplx pole_scale(ClassId id) {
  switch (id) {
  case ClassId::IIB1:
  case ClassId::IIIB1: return {0.0, 1.0};
  default: return {1.0, 0.0};
  }
}

// IIIB in the y-plane: the second basis function is 2s/(y - 1/y) times this
inline cplx effective_B(const SuperpotentialSpec &spec) {
  return spec.class_id == ClassId::IIIB2 ? cplx(0.0, spec.B) : cplx(spec.B, 0.0);
}

// Spurious moving poles double the count on the right-hand side for IIIB
inline double node_multiplier(ClassId id) {
  return family(id) == 3 && id != ClassId::IIIA ? 2.0 : 1.0;
}

} // namespace detail

inline std::vector<PoleDescriptor> fixed_pole_set(ClassId id) {
  using L = PoleLocation;
  using V = PoleVariable;
  const cplx s = detail::pole_scale(id);
  switch (id) {
  case ClassId::IA:
    // kappa here is per unit 1/omega
    return {{L::AtInfinity, V::InverseF2, 0.0, 1.0, -2.0, -2, "dx = -(2/omega) dz/z^2"}};
  case ClassId::IB:
    return {{L::AtZeroOfVariable, V::F2, 0.0, 1.0, -1.0, -1, "dx = -df2/f2"},
            {L::AtInfinity, V::InverseF2, 0.0, 1.0, 1.0, -1, "dx = dz/z"}};
  case ClassId::IIA:
    return {{L::AtZeroOfVariable, V::F1, 0.0, 1.0, 1.0, -2, "dx = df1/f1^2"},
            {L::AtInfinity, V::InverseF1, 0.0, 1.0, -1.0, 0, "dx = -dz"}};
  case ClassId::IIB1:
  case ClassId::IIB2:
  case ClassId::IIB3:
    return {{L::AtPlusOne, V::F1, s, 1.0, 1.0 / (2.0 * s), -1, "dx ~ du/(2s u)"},
            {L::AtMinusOne, V::F1, -s, 1.0, -1.0 / (2.0 * s), -1, "dx ~ -du/(2s u)"},
            {L::AtInfinity, V::InverseF1, 0.0, 1.0, -1.0, 0, "dx ~ -dz"}};
  case ClassId::IIIA:
    return {{L::AtZeroOfVariable, V::F1, 0.0, 0.5, 1.0, -2, "dx = df1/f1^2"},
            {L::AtInfinity, V::InverseF1, 0.0, 0.5, -1.0, 0, "dx = -dz"}};
  case ClassId::IIIB1:
  case ClassId::IIIB2:
  case ClassId::IIIB3:
    return {{L::AtZeroOfVariable, V::Y, 0.0, 1.0, 1.0 / s, -1, "dx = dy/(s y)"},
            {L::AtPlusOne, V::Y, 1.0, 1.0, 1.0 / s, 0, "dx ~ du/s"},
            {L::AtMinusOne, V::Y, -1.0, 1.0, -1.0 / s, 0, "dx ~ -du/s"},
            {L::AtInfinity, V::InverseY, 0.0, 1.0, -1.0 / s, -1, "dx = -dz/(s z)"}};
  }
  return {};
}

namespace detail {

// root of c0^2 - E on the branch continuous with c0 at E = 0
inline cplx matched_root(cplx c0, double E, BranchRule &rule) {
  if (c0.imag() == 0.0 && E > c0.real() * c0.real()) {
    std::ostringstream os;
    os << "E=" << E << " exceeds the branch point " << c0.real() * c0.real();
    throw Error(ErrorKind::BranchPointCrossed, os.str());
  }
  cplx r = c0 == 0.0 ? std::sqrt(cplx(-E, 0.0)) : c0 * std::sqrt(1.0 - E / (c0 * c0));
  cplx principal = std::sqrt(c0 * c0 - E);
  rule = std::abs(r - principal) <= std::abs(r + principal) ? BranchRule::SqrtPlus
                                                            : BranchRule::SqrtMinus;
  return r;
}

inline cplx selected(const ResidueSolution &r) {
  switch (r.pole.order) {
  case 0: return r.b1;
  case -1: return r.a0;
  default: return r.a1;
  }
}

} // namespace detail

inline std::vector<ResidueSolution> residue_solutions(const SuperpotentialSpec &spec, double E) {
  const double a = spec.a, h = spec.hbar;
  const double B = spec.B;
  const cplx s = detail::pole_scale(spec.class_id);
  auto poles = fixed_pole_set(spec.class_id);
  std::vector<ResidueSolution> out;
  for (const auto &pole : poles) {
    ResidueSolution r;
    r.pole = pole;
    BranchRule rule = BranchRule::LeadingTermMatch;
    switch (spec.class_id) {
    case ClassId::IA:
      r.pole.kappa /= spec.omega;
      r.b1 = 1.0;
      r.a0 = 0.0;
      r.a1 = -E / 2.0;
      break;
    case ClassId::IB:
      if (pole.location == PoleLocation::AtZeroOfVariable) {
        r.a0 = detail::matched_root(-a, E, rule);
        r.a1 = (h - 2.0 * a) / (2.0 * r.a0 + h);
      } else {
        r.b1 = 1.0;
        r.a0 = -a;
        r.a1 = -E / 2.0;
      }
      break;
    case ClassId::IIA:
      if (pole.location == PoleLocation::AtZeroOfVariable) {
        r.a0 = detail::matched_root(B / a, E, rule);
        r.a1 = B / r.a0;
      } else {
        r.b1 = a;
        r.a0 = B / a;
        r.a1 = -E / (2.0 * a + h);
      }
      break;
    case ClassId::IIB1:
    case ClassId::IIB2:
    case ClassId::IIB3:
      if (pole.location == PoleLocation::AtPlusOne) {
        r.a0 = detail::matched_root(a * s + B / a, E, rule);
        r.a1 = (B + a * a * s - a * h * s) / (r.a0 - h * s);
      } else if (pole.location == PoleLocation::AtMinusOne) {
        r.a0 = detail::matched_root(-a * s + B / a, E, rule);
        r.a1 = (B - a * a * s + a * h * s) / (r.a0 + h * s);
      } else {
        r.b1 = a;
        r.a0 = B / a;
        r.a1 = -E / (2.0 * a + h);
      }
      break;
    case ClassId::IIIA: {
      const double Bq = -spec.omega / 2.0;
      if (pole.location == PoleLocation::AtZeroOfVariable) {
        r.b1 = Bq;
        r.a1 = (2.0 * a * Bq - E) / (2.0 * Bq);
      } else {
        r.b1 = a;
        r.a1 = (2.0 * a * Bq + Bq * h - E) / (2.0 * a + h);
      }
      break;
    }
    case ClassId::IIIB1:
    case ClassId::IIIB2:
    case ClassId::IIIB3: {
      const cplx Be = detail::effective_B(spec);
      const cplx s2 = s * s;
      switch (pole.location) {
      case PoleLocation::AtZeroOfVariable:
        r.a0 = detail::matched_root(a * s, E, rule);
        r.a1 = (2.0 * Be * h * s2 - 4.0 * Be * a * s2) / (2.0 * r.a0 - h * s);
        break;
      case PoleLocation::AtPlusOne:
        r.b1 = s * (Be - a);
        r.a0 = s * (Be - a) / 2.0;
        r.a1 = (Be * Be * s2 + 2.0 * Be * a * s2 - Be * h * s2 + 4.0 * E - 3.0 * a * a * s2 -
                a * h * s2 + 4.0 * r.a0 * r.a0) /
               (4.0 * h * s - 8.0 * r.b1);
        break;
      case PoleLocation::AtMinusOne:
        r.b1 = s * (Be + a);
        r.a0 = -s * (Be + a) / 2.0;
        r.a1 = (-Be * Be * s2 + 2.0 * Be * a * s2 - Be * h * s2 - 4.0 * E + 3.0 * a * a * s2 +
                a * h * s2 - 4.0 * r.a0 * r.a0) /
               (8.0 * r.b1 + 4.0 * h * s);
        break;
      case PoleLocation::AtInfinity:
        r.a0 = detail::matched_root(-a * s, E, rule);
        r.a1 = (2.0 * Be * h * s2 - 4.0 * Be * a * s2) / (2.0 * r.a0 + h * s);
        break;
      }
      break;
    }
    }
    r.branch = rule;
    r.contribution = r.pole.weight * r.pole.kappa * detail::selected(r);
    out.push_back(r);
  }
  return out;
}

// Q(E) = sum of pole contributions - M n hbar; bound-state energies are its roots
inline std::function<double(double)> quantization_equation(const SuperpotentialSpec &spec, int n) {
  const double rhs = detail::node_multiplier(spec.class_id) * n * spec.hbar;
  return [spec, rhs](double E) {
    cplx sum = 0.0;
    for (const auto &r : residue_solutions(spec, E))
      sum += r.contribution;
    return sum.real() - rhs;
  };
}

// Smallest real branch point c0^2 over the poles, or infinity
inline double branch_point_bound(const SuperpotentialSpec &spec) {
  double bound = std::numeric_limits<double>::infinity();
  for (const auto &r : residue_solutions(spec, 0.0)) {
    if (r.branch == BranchRule::LeadingTermMatch)
      continue;
    if (r.a0.imag() == 0.0)
      bound = std::min(bound, r.a0.real() * r.a0.real());
  }
  return bound;
}

inline double qhj_closed_form(const SuperpotentialSpec &spec, int n) {
  const double a = spec.a, B = spec.B, h = spec.hbar, an = a + n * h;
  switch (spec.class_id) {
  case ClassId::IA: return n * spec.omega * h;
  case ClassId::IB:
  case ClassId::IIIB2:
  case ClassId::IIIB3: return a * a - an * an;
  case ClassId::IIA: return B * B / (a * a) - B * B / (an * an);
  case ClassId::IIB1: return an * an - a * a + B * B / (a * a) - B * B / (an * an);
  case ClassId::IIB2:
  case ClassId::IIB3: return a * a - an * an + B * B / (a * a) - B * B / (an * an);
  case ClassId::IIIA: return 2.0 * n * spec.omega * h;
  case ClassId::IIIB1: return an * an - a * a;
  }
  return 0.0;
}

inline QuantizationResult solve_energy_qhj(const SuperpotentialSpec &spec, int n,
                                           QhjRoute route = QhjRoute::NumericRoot) {
  if (n < 0 || !bound_state_count(spec).admits(n)) {
    std::ostringstream os;
    os << "n=" << n << " exceeds bound state count " << bound_state_count(spec).count;
    throw Error(ErrorKind::NotBound, os.str());
  }
  auto Q = quantization_equation(spec, n);
  QuantizationResult res;
  res.n = n;
  res.route = route;
  if (route == QhjRoute::ClosedForm) {
    res.energy = qhj_closed_form(spec, n);
    res.residual = std::abs(Q(res.energy));
    return res;
  }
  double lo = 0.0;
  double qlo = Q(lo);
  if (qlo >= 0.0) {
    if (qlo > 1e-10)
      throw Error(ErrorKind::NoRoot, "quantization function is already positive at E=0");
    res.energy = 0.0;
    res.residual = std::abs(qlo);
    return res;
  }
  double hi = branch_point_bound(spec);
  if (std::isinf(hi)) {
    hi = 1.0;
    for (int i = 0; i < 200 && Q(hi) < 0.0; ++i)
      hi *= 2.0;
  }
  if (Q(hi) < 0.0)
    throw Error(ErrorKind::NoRoot, "quantization function has no sign change below the branch point");
  for (int it = 0; it < 2000; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (Q(mid) < 0.0 ? lo : hi) = mid;
  }
  double ql = std::abs(Q(lo)), qh = std::abs(Q(hi));
  res.energy = ql <= qh ? lo : hi;
  res.residual = std::min(ql, qh);
  return res;
}

} // namespace siqhj
