#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/grid.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace siqhj {

// Only the sign of the shape parameter is needed for W(x, a) to exist; the
// normalizability conditions of make_spec do not apply to the shifted partner.
inline bool shape_parameter_in_range(const SuperpotentialSpec &spec, double a) {
  if (!std::isfinite(a))
    return false;
  switch (spec.class_id) {
  case ClassId::IA: return true;
  case ClassId::IB:
  case ClassId::IIB2:
  case ClassId::IIIB2:
  case ClassId::IIIB3: return a < 0;
  default: return a > 0;
  }
}

namespace detail {

inline double shifted_parameter(const SuperpotentialSpec &spec) {
  double a1 = spec.a + spec.hbar;
  if (!shape_parameter_in_range(spec, a1))
    throw Error(ErrorKind::InvalidParameter,
                "shifted parameter a+hbar leaves the admissible range of " +
                    std::string(to_string(spec.class_id)));
  return a1;
}

} // namespace detail

// sup |W^2(a0) + hbar W'(a0) + g(a0) - W^2(a1) + hbar W'(a1) - g(a1)|
// g_offset adds a constant to g(a0) only, to exercise the check itself.
inline double si_residual(const SuperpotentialSpec &spec, std::span<const double> xs,
                          double g_offset = 0.0) {
  const double a0 = spec.a;
  const double a1 = detail::shifted_parameter(spec);
  const double h = spec.hbar;
  const double g0 = g_function(spec, a0) + g_offset;
  const double g1 = g_function(spec, a1);
  double worst = 0.0;
  for (double x : xs) {
    detail::check_inside(spec, x);
    auto w0 = superpotential_at(spec, a0, x);
    auto w1 = superpotential_at(spec, a1, x);
    double r = (w0.W * w0.W + h * w0.dWdx + g0) - (w1.W * w1.W - h * w1.dWdx + g1);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// sup |W dW/da - dW/dx + (1/2) dg/da|
inline double pde1_residual(const SuperpotentialSpec &spec, std::span<const double> xs) {
  double worst = 0.0;
  const double half_dg = 0.5 * dg_da(spec, spec.a);
  for (double x : xs) {
    detail::check_inside(spec, x);
    auto w = superpotential_at(spec, spec.a, x);
    worst = std::max(worst, std::abs(w.W * w.dWda - w.dWdx + half_dg));
  }
  return worst;
}

inline double si_residual(const SuperpotentialSpec &spec, const Grid &grid, double g_offset = 0.0) {
  return si_residual(spec, std::span<const double>(grid.x), g_offset);
}

inline double pde1_residual(const SuperpotentialSpec &spec, const Grid &grid) {
  return pde1_residual(spec, std::span<const double>(grid.x));
}

struct ResidualReport {
  ClassId class_id;
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  double sup_norm_si = 0.0;
  double sup_norm_pde1 = 0.0;
  double tolerance = 1e-10;
  bool pass = false;
};

inline ResidualReport check_shape_invariance(const SuperpotentialSpec &spec, const Grid &grid,
                                             double tolerance = 1e-10) {
  ResidualReport r;
  r.class_id = spec.class_id;
  r.x_min = grid.x_min();
  r.x_max = grid.x_max();
  r.n_points = static_cast<int>(grid.size());
  r.sup_norm_si = si_residual(spec, grid);
  r.sup_norm_pde1 = pde1_residual(spec, grid);
  r.tolerance = tolerance;
  r.pass = r.sup_norm_si <= tolerance && r.sup_norm_pde1 <= tolerance;
  return r;
}

} // namespace siqhj
