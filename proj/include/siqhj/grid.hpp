#pragma once

#include "siqhj/abscissa.hpp"
#include "siqhj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace siqhj {

// How the uniform computational coordinate t maps onto x.
//   Identity: x = t
//   Softplus: x = L log(1 + e^t)       half-line, fine near 0, linear far out
//   Log:      x = L e^t                half-line, geometric spacing
//   Tanh:     x = (pi/2) tanh t        the box (-pi/2, pi/2)
enum class GridMap { Identity, Softplus, Log, Tanh };

// Dirichlet pins psi to zero at the end sample. Asymptotic uses the local
// exponential (WKB) solution in t, which is exact at a mapped wall.
enum class EndCondition { Dirichlet, Asymptotic };

struct Grid {
  GridMap map = GridMap::Identity;
  double scale = 1.0;
  double t_min = 0.0;
  double t_max = 1.0;
  int n_points = 0;
  EndCondition left_end = EndCondition::Dirichlet;
  EndCondition right_end = EndCondition::Dirichlet;

  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> jac;       // dx/dt
  std::vector<double> curvature; // -1/2 of the Schwarzian derivative of x(t)
  // Distances to the domain ends, accurate even where x itself has lost the
  // digits (x near pi/2). Infinite when the map has no end on that side.
  std::vector<double> lower_gap;
  std::vector<double> upper_gap;

  double dt() const { return (t_max - t_min) / (n_points - 1); }
  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }
  std::size_t size() const { return x.size(); }
  Abscissa point(std::size_t i) const { return {x[i], lower_gap[i], upper_gap[i]}; }

  bool same_as(const Grid &o) const {
    return map == o.map && scale == o.scale && t_min == o.t_min && t_max == o.t_max &&
           n_points == o.n_points;
  }
};

namespace detail {

inline double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }
inline double logistic(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

} // namespace detail

inline double map_x(GridMap map, double scale, double t) {
  switch (map) {
  case GridMap::Identity: return t;
  case GridMap::Softplus: return scale * detail::softplus(t);
  case GridMap::Log: return scale * std::exp(t);
  case GridMap::Tanh: return std::numbers::pi / 2 * std::tanh(t);
  }
  return t;
}

inline double map_t(GridMap map, double scale, double x) {
  switch (map) {
  case GridMap::Identity: return x;
  case GridMap::Softplus: {
    double r = x / scale;
    return r > 30 ? r + std::log(-std::expm1(-r)) : std::log(std::expm1(r));
  }
  case GridMap::Log: return std::log(x / scale);
  case GridMap::Tanh: return std::atanh(x / (std::numbers::pi / 2));
  }
  return x;
}

struct MapPoint {
  Abscissa at;
  double jac;
  double curvature;
};

inline MapPoint map_point(GridMap map, double scale, double t) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (map) {
  case GridMap::Identity: return {{t, inf, inf}, 1.0, 0.0};
  case GridMap::Softplus: {
    double s = detail::logistic(t);
    double x = scale * detail::softplus(t);
    return {{x, x, inf}, scale * s, 0.25 * (1.0 - s * s)};
  }
  case GridMap::Log: {
    double x = scale * std::exp(t);
    return {{x, x, inf}, x, 0.25};
  }
  case GridMap::Tanh: {
    constexpr double pi = std::numbers::pi;
    double c = std::cosh(t);
    return {{pi / 2 * std::tanh(t), pi / (1.0 + std::exp(-2.0 * t)), pi / (1.0 + std::exp(2.0 * t))},
            pi / 2 / (c * c),
            1.0};
  }
  }
  return {{t, inf, inf}, 1.0, 0.0};
}

inline Grid make_grid(GridMap map, double scale, double t_min, double t_max, int n_points,
                      EndCondition left = EndCondition::Dirichlet,
                      EndCondition right = EndCondition::Dirichlet) {
  if (!(t_max > t_min) || n_points < 3)
    throw Error(ErrorKind::InvalidDomain, "grid needs t_min < t_max and at least 3 points");
  Grid g;
  g.map = map;
  g.scale = scale;
  g.t_min = t_min;
  g.t_max = t_max;
  g.n_points = n_points;
  g.left_end = left;
  g.right_end = right;
  const double h = g.dt();
  g.t.resize(n_points);
  g.x.resize(n_points);
  g.jac.resize(n_points);
  g.curvature.resize(n_points);
  g.lower_gap.resize(n_points);
  g.upper_gap.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    double t = i + 1 == n_points ? t_max : t_min + i * h;
    g.t[i] = t;
    auto p = map_point(map, scale, t);
    g.x[i] = p.at.x;
    g.jac[i] = p.jac;
    g.curvature[i] = p.curvature;
    g.lower_gap[i] = p.at.lower_gap;
    g.upper_gap[i] = p.at.upper_gap;
  }
  return g;
}

inline Grid uniform_grid(double x_min, double x_max, int n_points) {
  return make_grid(GridMap::Identity, 1.0, x_min, x_max, n_points);
}

// Widen the free (non-wall) ends by fraction/2 of the t-span each, keeping dt.
// Ends sitting on a mapped wall or against a finite domain edge stay put.
inline Grid widened(const Grid &g, double fraction, double domain_lower, double domain_upper) {
  const double h = g.dt();
  const double extra = 0.5 * fraction * (g.t_max - g.t_min);
  const int add = static_cast<int>(std::ceil(extra / h));
  bool left_wall = g.map == GridMap::Softplus || g.map == GridMap::Log || g.map == GridMap::Tanh;
  bool right_wall = g.map == GridMap::Tanh;
  int add_left = 0, add_right = 0;
  if (!left_wall) {
    double x_new = map_x(g.map, g.scale, g.t_min - add * h);
    if (x_new > domain_lower)
      add_left = add;
  }
  if (!right_wall) {
    double x_new = map_x(g.map, g.scale, g.t_max + add * h);
    if (x_new < domain_upper)
      add_right = add;
  }
  return make_grid(g.map, g.scale, g.t_min - add_left * h, g.t_max + add_right * h,
                   g.n_points + add_left + add_right, g.left_end, g.right_end);
}

// Trapezoid rule in t, i.e. integral of f dx
inline double integrate(const Grid &g, std::span<const double> f) {
  const std::size_t n = g.size();
  double s = 0.5 * (f[0] * g.jac[0] + f[n - 1] * g.jac[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    s += f[i] * g.jac[i];
  return s * g.dt();
}

inline double inner_product(const Grid &g, std::span<const double> a, std::span<const double> b) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    p[i] = a[i] * b[i];
  return integrate(g, p);
}

inline double l2_norm(const Grid &g, std::span<const double> a) {
  return std::sqrt(inner_product(g, a, a));
}

// Fourth-order first derivative with respect to t on uniform spacing h
inline std::vector<double> derivative_uniform(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n);
  if (n < 5)
    throw Error(ErrorKind::InvalidDomain, "derivative needs at least 5 points");
  const double c = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * c;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * c;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * c;
  const std::size_t m = n - 1;
  d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * c;
  d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * c;
  return d;
}

// d/dx through the map
inline std::vector<double> derivative_x(const Grid &g, std::span<const double> f) {
  auto d = derivative_uniform(f, g.dt());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] /= g.jac[i];
  return d;
}

// Same stencil on every second point, used for error estimates. Entries that
// cannot be formed are left at zero.
inline std::vector<double> derivative_x_coarse(const Grid &g, std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  const double c = 1.0 / (24.0 * g.dt());
  for (std::size_t i = 4; i + 4 < n; ++i)
    d[i] = (f[i - 4] - 8.0 * f[i - 2] + 8.0 * f[i + 2] - f[i + 4]) * c / g.jac[i];
  return d;
}

} // namespace siqhj
