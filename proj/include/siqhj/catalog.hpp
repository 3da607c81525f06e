#pragma once

#include "siqhj/abscissa.hpp"
#include "siqhj/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>

namespace siqhj {

enum class ClassId { IA, IB, IIA, IIB1, IIB2, IIB3, IIIA, IIIB1, IIIB2, IIIB3 };

inline constexpr std::array<ClassId, 10> all_classes{
    ClassId::IA,   ClassId::IB,    ClassId::IIA,   ClassId::IIB1,  ClassId::IIB2,
    ClassId::IIB3, ClassId::IIIA,  ClassId::IIIB1, ClassId::IIIB2, ClassId::IIIB3};

inline std::string_view to_string(ClassId id) {
  switch (id) {
  case ClassId::IA: return "IA";
  case ClassId::IB: return "IB";
  case ClassId::IIA: return "IIA";
  case ClassId::IIB1: return "IIB1";
  case ClassId::IIB2: return "IIB2";
  case ClassId::IIB3: return "IIB3";
  case ClassId::IIIA: return "IIIA";
  case ClassId::IIIB1: return "IIIB1";
  case ClassId::IIIB2: return "IIIB2";
  case ClassId::IIIB3: return "IIIB3";
  }
  return "?";
}

inline std::optional<ClassId> parse_class_id(std::string_view text) {
  for (auto id : all_classes)
    if (to_string(id) == text)
      return id;
  return std::nullopt;
}

// 1, 2 or 3
inline int family(ClassId id) {
  switch (id) {
  case ClassId::IA:
  case ClassId::IB: return 1;
  case ClassId::IIA:
  case ClassId::IIB1:
  case ClassId::IIB2:
  case ClassId::IIB3: return 2;
  default: return 3;
  }
}

enum class DomainKind { FullLine, HalfLine, Box };

struct Domain {
  DomainKind kind;
  double lower;
  double upper;

  bool contains(double x) const { return x > lower && x < upper; }
};

inline Domain class_domain(ClassId id) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double half_pi = std::numbers::pi / 2;
  switch (id) {
  case ClassId::IA:
  case ClassId::IB:
  case ClassId::IIB2:
  case ClassId::IIIB2: return {DomainKind::FullLine, -inf, inf};
  case ClassId::IIA:
  case ClassId::IIB3:
  case ClassId::IIIA:
  case ClassId::IIIB3: return {DomainKind::HalfLine, 0.0, inf};
  case ClassId::IIB1:
  case ClassId::IIIB1: return {DomainKind::Box, -half_pi, half_pi};
  }
  return {DomainKind::FullLine, -inf, inf};
}

struct ClassInfo {
  std::string_view superpotential;
  std::string_view energy;
  std::string_view name;
  std::string_view constraints;
};

inline ClassInfo class_info(ClassId id) {
  switch (id) {
  case ClassId::IA:
    return {"(omega/2) x", "n hbar omega", "1D Harmonic Oscillator", "omega>0"};
  case ClassId::IB:
    return {"-a - exp(-x)", "a^2 - (a+n hbar)^2", "Morse", "a<0"};
  case ClassId::IIA:
    return {"-a/x + B/a", "B^2/a^2 - B^2/(a+n hbar)^2", "Coulomb", "a>0, B>0"};
  case ClassId::IIB1:
    return {"a tan x + B/a", "(a+n hbar)^2 - a^2 + B^2/a^2 - B^2/(a+n hbar)^2",
            "Rosen-Morse (Trigonometric)", "a>0"};
  case ClassId::IIB2:
    return {"-a tanh x + B/a", "a^2 - (a+n hbar)^2 + B^2/a^2 - B^2/(a+n hbar)^2",
            "Rosen-Morse (Hyperbolic)", "a<0, B<0, a^2>|B|"};
  case ClassId::IIB3:
    return {"-a coth x + B/a", "a^2 - (a+n hbar)^2 + B^2/a^2 - B^2/(a+n hbar)^2", "Eckart",
            "a>0, B>a^2"};
  case ClassId::IIIA:
    return {"-a/x + (omega/2) x", "2 n hbar omega", "3D Oscillator", "a>0, B=-omega/2<0"};
  case ClassId::IIIB1:
    return {"a tan x + B sec x", "(a+n hbar)^2 - a^2", "Scarf (Trigonometric)", "a>0, |B|<a"};
  case ClassId::IIIB2:
    return {"-a tanh x + B sech x", "a^2 - (a+n hbar)^2", "Scarf (Hyperbolic)", "a<0"};
  case ClassId::IIIB3:
    return {"-a coth x + B csch x", "a^2 - (a+n hbar)^2", "Poschl-Teller (Hyperbolic)",
            "a<0, B<a"};
  }
  return {};
}

struct Params {
  std::optional<double> a;
  std::optional<double> B;
  std::optional<double> omega;
  double hbar = 1.0;
};

struct SuperpotentialSpec {
  ClassId class_id;
  double a = 0.0;
  double B = 0.0;
  double omega = 0.0;
  double hbar = 1.0;
  Domain domain;
};

// Class-level constants of the basis ODEs: f1' = f1^2 - lambda, and
// f2' = alpha f2 - eps (family 1) or f2' = f1 f2 - eps (family 3).
struct ClassConstants {
  double alpha = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
};

inline ClassConstants class_constants(const SuperpotentialSpec &spec) {
  switch (spec.class_id) {
  case ClassId::IA: return {0.0, 0.0, -spec.omega / 2};
  case ClassId::IB: return {-1.0, 0.0, 0.0};
  case ClassId::IIA: return {0.0, 0.0, 0.0};
  case ClassId::IIB1: return {0.0, -1.0, 0.0};
  case ClassId::IIB2:
  case ClassId::IIB3: return {0.0, 1.0, 0.0};
  case ClassId::IIIA: return {0.0, 0.0, -spec.omega};
  case ClassId::IIIB1: return {0.0, -1.0, 0.0};
  case ClassId::IIIB2:
  case ClassId::IIIB3: return {0.0, 1.0, 0.0};
  }
  return {};
}

namespace detail {

inline double coth(double x) { return 1.0 / std::tanh(x); }

// W at the two ends of the domain (may be infinite)
inline std::pair<double, double> boundary_limits(ClassId id, double a, double B,
                                                 double omega) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto sgn_inf = [](double v) { return v > 0 ? inf : (v < 0 ? -inf : 0.0); };
  switch (id) {
  case ClassId::IA: return {-inf, inf};
  case ClassId::IB: return {-inf, -a};
  case ClassId::IIA: return {sgn_inf(-a), B / a};
  case ClassId::IIB1: return {sgn_inf(-a), sgn_inf(a)};
  case ClassId::IIB2: return {a + B / a, -a + B / a};
  case ClassId::IIB3: return {sgn_inf(-a), -a + B / a};
  case ClassId::IIIA: return {sgn_inf(-a), omega > 0 ? inf : -inf};
  case ClassId::IIIB1: return {sgn_inf(B - a), sgn_inf(a + B)};
  case ClassId::IIIB2: return {a, -a};
  case ClassId::IIIB3: return {sgn_inf(B - a), -a};
  }
  return {0.0, 0.0};
}

} // namespace detail

inline double g_function(const SuperpotentialSpec &spec, double a) {
  const double B = spec.B;
  switch (spec.class_id) {
  case ClassId::IA: return spec.omega * a;
  case ClassId::IB: return -a * a;
  case ClassId::IIA: return -B * B / (a * a);
  case ClassId::IIB1: return a * a - B * B / (a * a);
  case ClassId::IIB2:
  case ClassId::IIB3: return -a * a - B * B / (a * a);
  case ClassId::IIIA: return 2.0 * spec.omega * a;
  case ClassId::IIIB1: return a * a;
  case ClassId::IIIB2:
  case ClassId::IIIB3: return -a * a;
  }
  return 0.0;
}

inline double dg_da(const SuperpotentialSpec &spec, double a) {
  const double B = spec.B;
  switch (spec.class_id) {
  case ClassId::IA: return spec.omega;
  case ClassId::IB: return -2.0 * a;
  case ClassId::IIA: return 2.0 * B * B / (a * a * a);
  case ClassId::IIB1: return 2.0 * a + 2.0 * B * B / (a * a * a);
  case ClassId::IIB2:
  case ClassId::IIB3: return -2.0 * a + 2.0 * B * B / (a * a * a);
  case ClassId::IIIA: return 2.0 * spec.omega;
  case ClassId::IIIB1: return 2.0 * a;
  case ClassId::IIIB2:
  case ClassId::IIIB3: return -2.0 * a;
  }
  return 0.0;
}

// Returns a description of the first violated constraint for the shape
// parameter value a (B, omega taken from spec), or nothing if admissible.
inline std::optional<std::string> parameter_violation(const SuperpotentialSpec &spec, double a) {
  const double B = spec.B;
  auto fail = [](std::string s) { return std::optional<std::string>(std::move(s)); };
  if (!std::isfinite(a) || !std::isfinite(B))
    return fail("parameters must be finite");
  switch (spec.class_id) {
  case ClassId::IA:
    if (!(spec.omega > 0)) return fail("IA requires omega>0");
    break;
  case ClassId::IB:
    if (!(a < 0)) return fail("IB requires a<0");
    break;
  case ClassId::IIA:
    if (!(a > 0)) return fail("IIA requires a>0");
    if (!(B > 0)) return fail("IIA requires B>0");
    break;
  case ClassId::IIB1:
    if (!(a > 0)) return fail("IIB1 requires a>0");
    break;
  case ClassId::IIB2:
    if (!(a < 0)) return fail("IIB2 requires a<0");
    if (!(B < 0)) return fail("IIB2 requires B<0");
    if (!(a * a > -B)) return fail("IIB2 requires a^2>|B|");
    break;
  case ClassId::IIB3:
    if (!(a > 0)) return fail("IIB3 requires a>0");
    if (!(B > a * a)) return fail("IIB3 requires B>a^2");
    break;
  case ClassId::IIIA:
    if (!(a > 0)) return fail("IIIA requires a>0");
    if (!(spec.omega > 0)) return fail("IIIA requires B=-omega/2<0");
    break;
  case ClassId::IIIB1:
    if (!(a > 0)) return fail("IIIB1 requires a>0");
    if (!(std::abs(B) < a)) return fail("IIIB1 requires |B|<a");
    break;
  case ClassId::IIIB2:
    if (!(a < 0)) return fail("IIIB2 requires a<0");
    break;
  case ClassId::IIIB3:
    if (!(a < 0)) return fail("IIIB3 requires a<0");
    if (!(B < a)) return fail("IIIB3 requires B<a");
    break;
  }
  auto [left, right] = detail::boundary_limits(spec.class_id, a, B, spec.omega);
  if (!(left < 0 && right > 0))
    return fail("W must be negative at the left boundary and positive at the right boundary");
  if (!(dg_da(spec, a) > 0))
    return fail("g must be strictly increasing in a");
  return std::nullopt;
}

inline SuperpotentialSpec make_spec(ClassId id, const Params &p) {
  SuperpotentialSpec spec;
  spec.class_id = id;
  spec.domain = class_domain(id);
  if (!(p.hbar > 0) || !std::isfinite(p.hbar))
    throw Error(ErrorKind::InvalidParameter, "hbar must be positive");
  spec.hbar = p.hbar;

  auto need = [&](const std::optional<double> &v, const char *name) {
    if (!v)
      throw Error(ErrorKind::InvalidParameter,
                  std::string(to_string(id)) + " requires parameter " + name);
    return *v;
  };

  switch (id) {
  case ClassId::IA:
    spec.omega = need(p.omega, "omega");
    spec.a = p.a.value_or(0.0);
    break;
  case ClassId::IB:
    spec.a = need(p.a, "a");
    break;
  case ClassId::IIIA:
    spec.a = need(p.a, "a");
    if (p.omega) {
      spec.omega = *p.omega;
      if (p.B && std::abs(*p.B + spec.omega / 2) > 1e-12 * std::max(1.0, spec.omega))
        throw Error(ErrorKind::InvalidParameter, "IIIA requires B=-omega/2");
    } else if (p.B) {
      spec.omega = -2.0 * *p.B;
    } else {
      throw Error(ErrorKind::InvalidParameter, "IIIA requires parameter omega (or B)");
    }
    spec.B = -spec.omega / 2;
    break;
  default:
    spec.a = need(p.a, "a");
    spec.B = need(p.B, "B");
    break;
  }
  if (auto v = parameter_violation(spec, spec.a))
    throw Error(ErrorKind::InvalidParameter, *v);
  return spec;
}

struct BasisValues {
  double f1;
  double f2;
  double u;
};

struct WValues {
  double W;
  double dWdx;
  double dWda;
};

namespace detail {

inline void check_inside(const SuperpotentialSpec &spec, double x) {
  if (!spec.domain.contains(x)) {
    std::ostringstream os;
    os << "x=" << x << " is not strictly inside the domain of " << to_string(spec.class_id);
    throw Error(ErrorKind::DomainError, os.str());
  }
}

// f1, f2, u for shape parameter a, together with df1/dx and df2/dx
struct BasisFull {
  double f1, f2, u, df1, df2;
};

// tan x and sec x on (-pi/2, pi/2), taken from the nearer wall when close
inline std::pair<double, double> tan_sec(const Abscissa &p) {
  if (p.upper_gap < 0.5) {
    double d = p.upper_gap;
    return {1.0 / std::tan(d), 1.0 / std::sin(d)};
  }
  if (p.lower_gap < 0.5) {
    double d = p.lower_gap;
    return {-1.0 / std::tan(d), 1.0 / std::sin(d)};
  }
  return {std::tan(p.x), 1.0 / std::cos(p.x)};
}

inline BasisFull basis_full(const SuperpotentialSpec &spec, double a, const Abscissa &p) {
  const double B = spec.B;
  const double x = p.x;
  switch (spec.class_id) {
  case ClassId::IA: return {0.0, spec.omega / 2 * x, 0.0, 0.0, spec.omega / 2};
  case ClassId::IB: {
    double e = std::exp(-x);
    return {-1.0, -e, 0.0, 0.0, e};
  }
  case ClassId::IIA: return {-1.0 / x, 0.0, B / a, 1.0 / (x * x), 0.0};
  case ClassId::IIB1: {
    double t = tan_sec(p).first;
    return {t, 0.0, B / a, 1.0 + t * t, 0.0};
  }
  case ClassId::IIB2: {
    double t = std::tanh(x);
    return {-t, 0.0, B / a, t * t - 1.0, 0.0};
  }
  case ClassId::IIB3: {
    double c = coth(x);
    return {-c, 0.0, B / a, c * c - 1.0, 0.0};
  }
  case ClassId::IIIA: return {-1.0 / x, spec.omega / 2 * x, 0.0, 1.0 / (x * x), spec.omega / 2};
  case ClassId::IIIB1: {
    auto [t, s] = tan_sec(p);
    return {t, B * s, 0.0, s * s, B * s * t};
  }
  case ClassId::IIIB2: {
    double t = std::tanh(x), s = 1.0 / std::cosh(x);
    return {-t, B * s, 0.0, -s * s, -B * s * t};
  }
  case ClassId::IIIB3: {
    double c = coth(x), s = 1.0 / std::sinh(x);
    return {-c, B * s, 0.0, s * s, -B * s * c};
  }
  }
  return {};
}

} // namespace detail

inline BasisValues evaluate_basis(const SuperpotentialSpec &spec, double x) {
  detail::check_inside(spec, x);
  auto b = detail::basis_full(spec, spec.a, Abscissa{x});
  return {b.f1, b.f2, b.u};
}

// W and its derivatives at an arbitrary shape parameter value (no domain check)
inline WValues superpotential_at(const SuperpotentialSpec &spec, double a, const Abscissa &p) {
  auto b = detail::basis_full(spec, a, p);
  double dWda = b.f1;
  if (family(spec.class_id) == 2)
    dWda -= spec.B / (a * a);
  return {a * b.f1 + b.f2 + b.u, a * b.df1 + b.df2, dWda};
}

inline WValues superpotential_at(const SuperpotentialSpec &spec, double a, double x) {
  return superpotential_at(spec, a, Abscissa{x});
}

inline double evaluate_W(const SuperpotentialSpec &spec, double x) {
  detail::check_inside(spec, x);
  return superpotential_at(spec, spec.a, x).W;
}

struct PartnerPotentials {
  double V_minus;
  double V_plus;
};

inline PartnerPotentials partner_potentials_at(const SuperpotentialSpec &spec, double a,
                                               const Abscissa &p) {
  auto w = superpotential_at(spec, a, p);
  double sq = w.W * w.W;
  return {sq - spec.hbar * w.dWdx, sq + spec.hbar * w.dWdx};
}

inline PartnerPotentials partner_potentials(const SuperpotentialSpec &spec, double x) {
  detail::check_inside(spec, x);
  return partner_potentials_at(spec, spec.a, Abscissa{x});
}

// W continued to complex x, used for Laurent-coefficient checks
inline std::complex<double> evaluate_W_complex(const SuperpotentialSpec &spec,
                                               std::complex<double> x, double a) {
  using std::cos, std::cosh, std::exp, std::sinh, std::tan, std::tanh;
  const double B = spec.B;
  switch (spec.class_id) {
  case ClassId::IA: return spec.omega / 2 * x;
  case ClassId::IB: return -a - exp(-x);
  case ClassId::IIA: return -a / x + B / a;
  case ClassId::IIB1: return a * tan(x) + B / a;
  case ClassId::IIB2: return -a * tanh(x) + B / a;
  case ClassId::IIB3: return -a * cosh(x) / sinh(x) + B / a;
  case ClassId::IIIA: return -a / x + spec.omega / 2 * x;
  case ClassId::IIIB1: return a * tan(x) + B / cos(x);
  case ClassId::IIIB2: return -a * tanh(x) + B / cosh(x);
  case ClassId::IIIB3: return (-a * cosh(x) + B) / sinh(x);
  }
  return 0.0;
}

inline std::pair<double, double> boundary_limits(const SuperpotentialSpec &spec, double a) {
  return detail::boundary_limits(spec.class_id, a, spec.B, spec.omega);
}

// The unique zero of W(., a) on the domain, by bracketing outward then TOMS 748.
inline double find_W_zero(const SuperpotentialSpec &spec, double a) {
  const Domain &d = spec.domain;
  auto W = [&](double x) { return superpotential_at(spec, a, x).W; };
  double center = d.kind == DomainKind::HalfLine ? 1.0 : 0.0;
  auto step_left = [&](int k) {
    double f = std::ldexp(1.0, -k);
    switch (d.kind) {
    case DomainKind::FullLine: return center - (std::ldexp(1.0, k) - 1.0);
    case DomainKind::HalfLine: return center * f;
    case DomainKind::Box: return d.lower + (center - d.lower) * f;
    }
    return center;
  };
  auto step_right = [&](int k) {
    double f = std::ldexp(1.0, -k);
    switch (d.kind) {
    case DomainKind::FullLine: return center + (std::ldexp(1.0, k) - 1.0);
    case DomainKind::HalfLine: return center + (std::ldexp(1.0, k) - 1.0);
    case DomainKind::Box: return d.upper - (d.upper - center) * f;
    }
    return center;
  };
  double lo = center, hi = center;
  double wlo = W(lo), whi = wlo;
  for (int k = 1; wlo >= 0; ++k) {
    if (k > 1000)
      throw Error(ErrorKind::NoRoot, "W has no negative region");
    lo = step_left(k);
    wlo = W(lo);
  }
  for (int k = 1; whi <= 0; ++k) {
    if (k > 1000)
      throw Error(ErrorKind::NoRoot, "W has no positive region");
    hi = step_right(k);
    whi = W(hi);
  }
  if (lo > hi)
    std::swap(lo, hi);
  // lo and hi now straddle a sign change (W(lo)<0<W(hi) with lo<hi when W rises)
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(
      W, lo, hi, W(lo), W(hi), boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

inline double find_W_zero(const SuperpotentialSpec &spec) { return find_W_zero(spec, spec.a); }

struct BoundStateCount {
  bool infinite = false;
  long long count = 0;

  bool admits(long long n) const { return n >= 0 && (infinite || n <= count); }
};

inline BoundStateCount bound_state_count(const SuperpotentialSpec &spec) {
  const double h = spec.hbar;
  auto valid = [&](long long k) {
    return !parameter_violation(spec, spec.a + static_cast<double>(k) * h).has_value();
  };
  constexpr long long top = 1LL << 40;
  if (valid(top))
    return {true, 0};
  long long lo = 0, hi = top; // valid(lo), !valid(hi)
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (valid(mid) ? lo : hi) = mid;
  }
  // levels must also rise; the parameter ray is contiguous, so check the steps
  long long n = 0;
  double prev = g_function(spec, spec.a);
  for (long long k = 1; k <= lo && k <= 1000000; ++k) {
    double cur = g_function(spec, spec.a + static_cast<double>(k) * h);
    if (!(cur > prev))
      break;
    prev = cur;
    n = k;
  }
  if (lo > 1000000)
    n = lo;
  return {false, n};
}

inline double closed_form_energy(const SuperpotentialSpec &spec, long long n) {
  if (!bound_state_count(spec).admits(n)) {
    std::ostringstream os;
    os << "n=" << n << " exceeds bound state count " << bound_state_count(spec).count;
    throw Error(ErrorKind::NotBound, os.str());
  }
  if (n == 0)
    return 0.0;
  const double an = spec.a + static_cast<double>(n) * spec.hbar;
  return g_function(spec, an) - g_function(spec, spec.a);
}

// Shipped parameter sets
inline Params preset_params(ClassId id) {
  switch (id) {
  case ClassId::IA: return {std::nullopt, std::nullopt, 2.0};
  case ClassId::IB: return {-3.0, std::nullopt, std::nullopt};
  case ClassId::IIA: return {1.0, 2.0, std::nullopt};
  case ClassId::IIB1: return {1.0, 1.0, std::nullopt};
  case ClassId::IIB2: return {-4.0, -4.0, std::nullopt};
  case ClassId::IIB3: return {1.0, 4.0, std::nullopt};
  case ClassId::IIIA: return {2.0, std::nullopt, 2.0};
  case ClassId::IIIB1: return {2.0, 1.0, std::nullopt};
  case ClassId::IIIB2: return {-3.0, 1.0, std::nullopt};
  case ClassId::IIIB3: return {-3.0, -4.0, std::nullopt};
  }
  return {};
}

// A second valid parameter set per class
inline Params alternate_params(ClassId id) {
  switch (id) {
  case ClassId::IA: return {std::nullopt, std::nullopt, 3.0};
  case ClassId::IB: return {-2.5, std::nullopt, std::nullopt};
  case ClassId::IIA: return {1.5, 1.0, std::nullopt};
  case ClassId::IIB1: return {2.0, -1.5, std::nullopt};
  case ClassId::IIB2: return {-3.0, -2.0, std::nullopt};
  case ClassId::IIB3: return {2.0, 6.0, std::nullopt};
  case ClassId::IIIA: return {1.5, std::nullopt, 1.0};
  case ClassId::IIIB1: return {3.0, -2.0, std::nullopt};
  case ClassId::IIIB2: return {-2.0, -1.5, std::nullopt};
  case ClassId::IIIB3: return {-2.0, -3.0, std::nullopt};
  }
  return {};
}

inline SuperpotentialSpec preset_spec(ClassId id, double hbar = 1.0) {
  Params p = preset_params(id);
  p.hbar = hbar;
  return make_spec(id, p);
}

} // namespace siqhj
