#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/errors.hpp"
#include "siqhj/grid.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace siqhj {

// H = -hbar^2 d^2/dx^2 + V(x)   (units with 2m = 1)
struct Hamiltonian {
  std::function<double(const Abscissa &)> potential;
  double hbar = 1.0;
  std::optional<double> match_x; // shooting match point; defaults to the minimum of V
  // finite domain ends, where V may blow up; lets shooting on a plain grid
  // that stops just short of an edge start from the regular solution
  std::optional<double> lower_edge;
  std::optional<double> upper_edge;
};

inline Hamiltonian make_hamiltonian(std::function<double(double)> V, double hbar) {
  return {[V = std::move(V)](const Abscissa &p) { return V(p.x); }, hbar, std::nullopt, std::nullopt, std::nullopt};
}

namespace detail {

inline std::optional<double> finite_or_none(double v) {
  return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
}

} // namespace detail

inline Hamiltonian hamiltonian_minus(const SuperpotentialSpec &spec) {
  return {[spec](const Abscissa &p) { return partner_potentials_at(spec, spec.a, p).V_minus; },
          spec.hbar, find_W_zero(spec), detail::finite_or_none(spec.domain.lower),
          detail::finite_or_none(spec.domain.upper)};
}

inline Hamiltonian hamiltonian_plus(const SuperpotentialSpec &spec) {
  return {[spec](const Abscissa &p) { return partner_potentials_at(spec, spec.a, p).V_plus; },
          spec.hbar, find_W_zero(spec), detail::finite_or_none(spec.domain.lower),
          detail::finite_or_none(spec.domain.upper)};
}

struct WaveFunction {
  Grid grid;
  std::vector<double> values;
  double energy = 0.0;
  int node_count = 0;
  bool normalized = false;
};

inline std::vector<double> sample_potential(const Hamiltonian &H, const Grid &grid) {
  std::vector<double> V(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    V[i] = H.potential(grid.point(i));
    if (!std::isfinite(V[i])) {
      std::ostringstream os;
      os << "potential is not finite at x=" << grid.x[i];
      throw Error(ErrorKind::SingularPotential, os.str());
    }
  }
  return V;
}

// Strict sign changes, ignoring samples below 1e-8 of the peak amplitude
inline int count_nodes(std::span<const double> values) {
  double peak = 0.0;
  for (double v : values)
    peak = std::max(peak, std::abs(v));
  const double floor = 1e-8 * peak;
  int nodes = 0, last = 0;
  for (double v : values) {
    if (std::abs(v) <= floor)
      continue;
    int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last)
      ++nodes;
    last = s;
  }
  return nodes;
}

inline WaveFunction normalize(WaveFunction wf) {
  double norm = l2_norm(wf.grid, wf.values);
  if (!(norm > 0) || !std::isfinite(norm))
    throw Error(ErrorKind::ZeroFunction, "cannot normalize a zero (or non-finite) function");
  double peak = 0.0;
  for (double v : wf.values)
    peak = std::max(peak, std::abs(v));
  double sign = 1.0;
  for (double v : wf.values) {
    if (std::abs(v) > 1e-8 * peak) {
      sign = v > 0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double &v : wf.values)
    v *= sign / norm;
  wf.normalized = true;
  wf.node_count = count_nodes(wf.values);
  return wf;
}

namespace detail {

inline double match_index_default(const Grid &grid, const std::vector<double> &V,
                                  std::optional<double> match_x) {
  const std::size_t n = grid.size();
  std::size_t m = 0;
  if (match_x) {
    auto it = std::lower_bound(grid.x.begin(), grid.x.end(), *match_x);
    m = static_cast<std::size_t>(it - grid.x.begin());
  } else {
    m = static_cast<std::size_t>(std::min_element(V.begin(), V.end()) - V.begin());
  }
  return static_cast<double>(std::clamp<std::size_t>(m, 2, n - 4));
}

// Symmetric tridiagonal form of H on a mapped grid: chi = jac * phi where
// psi = sqrt(jac) * phi.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  std::size_t first = 0; // grid index of row 0; a Dirichlet end sample is pinned and left out
};

inline double q_function(const Grid &g, const std::vector<double> &V, std::size_t i, double E,
                         double hbar) {
  return g.jac[i] * g.jac[i] * (V[i] - E) / (hbar * hbar) + g.curvature[i];
}

inline double end_ratio(const Grid &g, const std::vector<double> &V, std::size_t i, double hbar) {
  double q = q_function(g, V, i, 0.0, hbar);
  return std::exp(-std::sqrt(std::max(q, 0.0)) * g.dt());
}

inline Tridiagonal build_matrix(const Grid &g, const std::vector<double> &V, double hbar) {
  const std::size_t n = g.size();
  const double h = g.dt();
  const double k = hbar * hbar / (h * h);
  const std::size_t lo = g.left_end == EndCondition::Dirichlet ? 1 : 0;
  const std::size_t hi = g.right_end == EndCondition::Dirichlet ? n - 2 : n - 1;
  Tridiagonal T;
  T.first = lo;
  T.diag.resize(hi - lo + 1);
  T.off.resize(hi - lo);
  for (std::size_t i = lo; i <= hi; ++i) {
    double j2 = g.jac[i] * g.jac[i];
    T.diag[i - lo] = (2.0 * k + j2 * V[i] + hbar * hbar * g.curvature[i]) / j2;
  }
  if (g.left_end == EndCondition::Asymptotic)
    T.diag.front() -= k * end_ratio(g, V, 0, hbar) / (g.jac[0] * g.jac[0]);
  if (g.right_end == EndCondition::Asymptotic)
    T.diag.back() -= k * end_ratio(g, V, n - 1, hbar) / (g.jac[n - 1] * g.jac[n - 1]);
  for (std::size_t i = lo; i < hi; ++i)
    T.off[i - lo] = -k / (g.jac[i] * g.jac[i + 1]);
  return T;
}

// number of eigenvalues strictly below x
inline std::size_t sturm_count(const Tridiagonal &T, double x) {
  std::size_t count = 0;
  double q = T.diag[0] - x;
  if (q < 0)
    ++count;
  for (std::size_t i = 1; i < T.diag.size(); ++i) {
    if (q == 0.0)
      q = -std::numeric_limits<double>::min() * 1e10;
    q = T.diag[i] - x - T.off[i - 1] * T.off[i - 1] / q;
    if (q < 0)
      ++count;
  }
  return count;
}

inline std::vector<double> lowest_eigenvalues(const Tridiagonal &T, std::size_t k) {
  double lo = -1.0;
  while (sturm_count(T, lo) > 0)
    lo *= 2.0;
  double hi = 1.0;
  while (sturm_count(T, hi) < k)
    hi *= 2.0;
  std::vector<double> values;
  double start = lo;
  for (std::size_t j = 0; j < k; ++j) {
    double a = start, b = hi; // count(a) <= j < count(b)
    for (int it = 0; it < 400 && b - a > 1e-10 * std::max(1.0, 1e-6 * std::abs(a)); ++it) {
      double mid = 0.5 * (a + b);
      if (mid == a || mid == b)
        break;
      (sturm_count(T, mid) <= j ? a : b) = mid;
    }
    values.push_back(0.5 * (a + b));
    start = a;
  }
  return values;
}

// (T - sigma) y = b with partial pivoting
inline std::vector<double> tridiagonal_solve(const Tridiagonal &T, double sigma,
                                             std::vector<double> b) {
  const std::size_t n = T.diag.size();
  std::vector<double> dl(T.off), d(n), du(T.off), du2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = T.diag[i] - sigma;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0)
        d[i] = tiny;
      double f = dl[i] / d[i];
      d[i + 1] -= f * du[i];
      b[i + 1] -= f * b[i];
    } else {
      double f = d[i] / dl[i];
      d[i] = dl[i];
      double tmp = d[i + 1];
      d[i + 1] = du[i] - f * tmp;
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -f * du2[i];
      }
      du[i] = tmp;
      tmp = b[i];
      b[i] = b[i + 1];
      b[i + 1] = tmp - f * b[i + 1];
    }
  }
  if (d[n - 1] == 0.0)
    d[n - 1] = tiny;
  std::vector<double> x(n);
  x[n - 1] = b[n - 1] / d[n - 1];
  if (n > 1)
    x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t i = n - 2; i-- > 0;)
    x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
  return x;
}

inline std::vector<double> inverse_iteration(const Tridiagonal &T, double lambda) {
  const std::size_t n = T.diag.size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  auto unit = [](std::vector<double> &y) {
    double s = 0.0;
    for (double e : y)
      s += e * e;
    s = std::sqrt(s);
    for (double &e : y)
      e /= s;
  };
  unit(v);
  for (int sweep = 0; sweep < 50; ++sweep) {
    auto y = tridiagonal_solve(T, lambda, v);
    unit(y);
    double overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      overlap += y[i] * v[i];
    v = std::move(y);
    if (std::abs(overlap) > 1.0 - 1e-14)
      return v;
  }
  return v;
}

} // namespace detail

struct FdOptions {
  bool check_convergence = true;
  double domain_lower = -std::numeric_limits<double>::infinity();
  double domain_upper = std::numeric_limits<double>::infinity();
};

// Lowest k eigenpairs of the finite-difference Hamiltonian.
inline std::vector<WaveFunction> fd_eigen(const Hamiltonian &H, const Grid &grid, int k,
                                          const FdOptions &opt = {}) {
  if (k < 1)
    return {};
  auto V = sample_potential(H, grid);
  auto T = detail::build_matrix(grid, V, H.hbar);
  auto values = detail::lowest_eigenvalues(T, static_cast<std::size_t>(k));
  for (std::size_t j = 1; j < values.size(); ++j)
    if (!(values[j] > values[j - 1]))
      throw Error(ErrorKind::GridTooSmall, "discrete eigenvalues are not strictly increasing");
  if (opt.check_convergence) {
    Grid wide = widened(grid, 0.2, opt.domain_lower, opt.domain_upper);
    auto Vw = sample_potential(H, wide);
    auto Tw = detail::build_matrix(wide, Vw, H.hbar);
    auto wv = detail::lowest_eigenvalues(Tw, static_cast<std::size_t>(k));
    if (std::abs(wv.back() - values.back()) > 1e-3) {
      std::ostringstream os;
      os << "level " << k - 1 << " moved by " << std::abs(wv.back() - values.back())
         << " when the domain was widened by 20%";
      throw Error(ErrorKind::GridTooSmall, os.str());
    }
  }
  std::vector<WaveFunction> out;
  for (double E : values) {
    auto chi = detail::inverse_iteration(T, E);
    WaveFunction wf;
    wf.grid = grid;
    wf.energy = E;
    wf.values.assign(grid.size(), 0.0);
    for (std::size_t r = 0; r < chi.size(); ++r)
      wf.values[r + T.first] = chi[r] / std::sqrt(grid.jac[r + T.first]);
    out.push_back(normalize(std::move(wf)));
  }
  return out;
}

namespace detail {

struct Shooting {
  const Grid &grid;
  std::vector<double> V;
  double hbar;
  std::size_t m;
  std::optional<double> lower_edge;
  std::optional<double> upper_edge;

  std::vector<double> f_coeffs(double E) const {
    const double h2 = grid.dt() * grid.dt() / 12.0;
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      f[i] = 1.0 - h2 * q_function(grid, V, i, E, hbar);
    return f;
  }

  // Frobenius start d^s (1 + c1 d + c2 d^2) in the distance d to a domain
  // edge, with d^2 (V - E) / hbar^2 = c + v1 d + v2 d^2 fitted on three points.
  // Only for plain grids whose end sits within one step of the edge.
  std::optional<std::pair<double, double>> regular_start(std::size_t i0, std::size_t i1, std::size_t i2,
                                                         std::optional<double> edge, double E) const {
    if (!edge || grid.map != GridMap::Identity)
      return std::nullopt;
    const double d0 = std::abs(grid.x[i0] - *edge), d1 = std::abs(grid.x[i1] - *edge),
                 d2 = std::abs(grid.x[i2] - *edge);
    if (!(d0 > 0.0) || d0 > std::abs(d1 - d0))
      return std::nullopt;
    auto f = [&](std::size_t i, double d) { return d * d * (V[i] - E) / (hbar * hbar); };
    const double f0 = f(i0, d0), f1 = f(i1, d1), f2 = f(i2, d2);
    // quadratic through (d0,f0), (d1,f1), (d2,f2)
    const double s01 = (f1 - f0) / (d1 - d0), s12 = (f2 - f1) / (d2 - d1);
    const double v2 = (s12 - s01) / (d2 - d0);
    const double v1 = s01 - v2 * (d0 + d1);
    const double c = f0 - v1 * d0 - v2 * d0 * d0;
    if (!(0.25 + c >= 0.0))
      return std::nullopt;
    const double s = 0.5 + std::sqrt(0.25 + c);
    const double c1 = v1 / (2.0 * s);
    const double c2 = (v1 * c1 + v2) / (4.0 * s + 2.0);
    auto poly = [&](double d) { return 1.0 + c1 * d + c2 * d * d; };
    const double log_ratio = s * std::log(d1 / d0);
    if (log_ratio > 400.0)
      return std::nullopt;
    return std::pair{1.0, std::exp(log_ratio) * poly(d1) / poly(d0)};
  }

  std::pair<double, double> start(EndCondition end, std::size_t i0, std::size_t i1, double E) const {
    if (end == EndCondition::Dirichlet) {
      const bool left = i0 == 0;
      const std::size_t i2 = left ? 2 : i1 - 1;
      if (auto r = regular_start(i0, i1, i2, left ? lower_edge : upper_edge, E))
        return *r;
      return {0.0, 1.0};
    }
    double q0 = std::max(q_function(grid, V, i0, E, hbar), 0.0);
    double q1 = std::max(q_function(grid, V, i1, E, hbar), 0.0);
    return {1.0, std::exp(0.5 * (std::sqrt(q0) + std::sqrt(q1)) * grid.dt())};
  }

  // phi on [0, m+1] integrated from the left, and on [m, n-1] from the right
  void integrate(double E, std::vector<double> &L, std::vector<double> &R) const {
    const std::size_t n = grid.size();
    auto f = f_coeffs(E);
    constexpr double big = 1e200;
    L.assign(n, 0.0);
    R.assign(n, 0.0);
    std::tie(L[0], L[1]) = start(grid.left_end, 0, 1, E);
    for (std::size_t i = 1; i <= m; ++i) {
      L[i + 1] = ((12.0 - 10.0 * f[i]) * L[i] - f[i - 1] * L[i - 1]) / f[i + 1];
      if (std::abs(L[i + 1]) > big)
        for (std::size_t j = 0; j <= i + 1; ++j)
          L[j] /= big;
    }
    std::tie(R[n - 1], R[n - 2]) = start(grid.right_end, n - 1, n - 2, E);
    for (std::size_t i = n - 2; i > m; --i) {
      R[i - 1] = ((12.0 - 10.0 * f[i]) * R[i] - f[i + 1] * R[i + 1]) / f[i - 1];
      if (std::abs(R[i - 1]) > big)
        for (std::size_t j = i - 1; j < n; ++j)
          R[j] /= big;
    }
  }

  double mismatch(double E) const {
    std::vector<double> L, R;
    integrate(E, L, R);
    double a0 = L[m], a1 = L[m + 1], b0 = R[m], b1 = R[m + 1];
    double c = a0 * b1 - a1 * b0;
    return c / (std::hypot(a0, a1) * std::hypot(b0, b1));
  }
};

inline Shooting make_shooting(const Hamiltonian &H, const Grid &grid) {
  auto V = sample_potential(H, grid);
  auto m = static_cast<std::size_t>(match_index_default(grid, V, H.match_x));
  return Shooting{grid, std::move(V), H.hbar, m, H.lower_edge, H.upper_edge};
}

inline double refine_root(const Shooting &s, double lo, double hi) {
  double flo = s.mismatch(lo), fhi = s.mismatch(hi);
  if (flo == 0.0)
    return lo;
  if (fhi == 0.0)
    return hi;
  if ((flo > 0) == (fhi > 0)) {
    std::ostringstream os;
    os << "matching function has no sign change on [" << lo << ", " << hi << "]";
    throw Error(ErrorKind::NoSignChange, os.str());
  }
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) {
    return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(a));
  };
  auto r = boost::math::tools::toms748_solve([&](double E) { return s.mismatch(E); }, lo, hi, flo,
                                             fhi, tol, iters);
  if (iters >= 200)
    throw Error(ErrorKind::MaxIterations, "shooting refinement did not converge");
  return 0.5 * (r.first + r.second);
}

} // namespace detail

// Refine one eigenvalue inside [lo, hi] by Numerov shooting.
inline double numerov_refine(const Hamiltonian &H, const Grid &grid, std::pair<double, double> bracket) {
  auto s = detail::make_shooting(H, grid);
  return detail::refine_root(s, bracket.first, bracket.second);
}

// Numerov solution at energy E, stitched at the match point and normalized.
inline WaveFunction numerov_state(const Hamiltonian &H, const Grid &grid, double E) {
  auto s = detail::make_shooting(H, grid);
  std::vector<double> L, R;
  s.integrate(E, L, R);
  const std::size_t m = s.m, n = grid.size();
  // both pieces may sit near the 1e200 rescale threshold, so bring them to
  // unit size at the match point before combining
  const double ln = std::hypot(L[m], L[m + 1]), rn = std::hypot(R[m], R[m + 1]);
  const double scale = (L[m] / ln * R[m] / rn + L[m + 1] / ln * R[m + 1] / rn) / rn;
  WaveFunction wf;
  wf.grid = grid;
  wf.energy = E;
  wf.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double phi = i <= m ? L[i] / ln : scale * R[i];
    wf.values[i] = phi * std::sqrt(grid.jac[i]);
  }
  return normalize(std::move(wf));
}

// Lowest k levels: finite-difference brackets, then Numerov refinement.
inline std::vector<WaveFunction> numeric_levels(const Hamiltonian &H, const Grid &grid, int k) {
  FdOptions opt;
  opt.check_convergence = false;
  auto fd = fd_eigen(H, grid, k + 1, opt);
  auto s = detail::make_shooting(H, grid);
  std::vector<WaveFunction> out;
  for (int j = 0; j < k; ++j) {
    double E = fd[j].energy;
    double up = fd[j + 1].energy - E;
    double down = j > 0 ? E - fd[j - 1].energy : up;
    double lo = E - 0.45 * down, hi = E + 0.45 * up;
    double root = 0.0;
    bool found = false;
    for (int attempt = 0; attempt < 4 && !found; ++attempt) {
      if ((s.mismatch(lo) > 0) != (s.mismatch(hi) > 0)) {
        root = detail::refine_root(s, lo, hi);
        found = true;
      } else {
        lo = E - (0.45 + 0.15 * (attempt + 1)) * down;
        hi = E + (0.45 + 0.15 * (attempt + 1)) * up;
      }
    }
    if (!found)
      throw Error(ErrorKind::NoSignChange, "could not bracket a shooting root near a discrete level");
    auto wf = numerov_state(H, grid, root);
    out.push_back(std::move(wf));
  }
  return out;
}

// Spec-level conveniences, all on H- = -hbar^2 d^2/dx^2 + V-
inline std::vector<WaveFunction> fd_eigen(const SuperpotentialSpec &spec, const Grid &grid, int k) {
  FdOptions opt;
  opt.domain_lower = spec.domain.lower;
  opt.domain_upper = spec.domain.upper;
  return fd_eigen(hamiltonian_minus(spec), grid, k, opt);
}

inline double numerov_refine(const SuperpotentialSpec &spec, const Grid &grid,
                             std::pair<double, double> bracket) {
  return numerov_refine(hamiltonian_minus(spec), grid, bracket);
}

// <psi|H|psi> / <psi|psi> with a fourth-order second difference in t.
// The wall terms of V and of the map cancel pointwise, so they are combined
// before summing.
inline double rayleigh_quotient(const Hamiltonian &H, const WaveFunction &wf) {
  const Grid &g = wf.grid;
  const std::size_t n = g.size();
  auto V = sample_potential(H, g);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i)
    phi[i] = wf.values[i] / std::sqrt(g.jac[i]);
  const double h = g.dt();
  const double c = 1.0 / (12.0 * h * h);
  const double hb2 = H.hbar * H.hbar;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    double ptt = (-phi[i - 2] + 16.0 * phi[i - 1] - 30.0 * phi[i] + 16.0 * phi[i + 1] - phi[i + 2]) * c;
    double j2 = g.jac[i] * g.jac[i];
    num += phi[i] * (-hb2 * ptt + (j2 * V[i] + hb2 * g.curvature[i]) * phi[i]);
    den += j2 * phi[i] * phi[i];
  }
  return num / den;
}

// || -hbar^2 psi'' + V psi - E psi || / ||psi||, fourth-order differences in t
inline double schrodinger_residual(const Hamiltonian &H, const WaveFunction &wf, double E) {
  const Grid &g = wf.grid;
  const std::size_t n = g.size();
  auto V = sample_potential(H, g);
  std::vector<double> phi(n), r(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    phi[i] = wf.values[i] / std::sqrt(g.jac[i]);
  const double h = g.dt();
  const double c = 1.0 / (12.0 * h * h);
  const double hb2 = H.hbar * H.hbar;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    double ptt = (-phi[i - 2] + 16.0 * phi[i - 1] - 30.0 * phi[i] + 16.0 * phi[i + 1] - phi[i + 2]) * c;
    double kinetic = -hb2 * (ptt - g.curvature[i] * phi[i]) / std::pow(g.jac[i], 1.5);
    r[i] = kinetic + (V[i] - E) * wf.values[i];
  }
  return l2_norm(g, r) / l2_norm(g, wf.values);
}

struct PresetOptions {
  int n_top = 5;
  double resolution = 1.0; // > 1 refines the spacing proportionally
  double action = 40.0;    // WKB decay exponent retained past the turning points
  double step = 0.03;      // target local phase advance per cell
  double max_dt = 0.02;    // ceiling on the t spacing, for derivative stencils near walls
};

// Grid sized from the spectrum: mapped coordinates for walls, extents from a
// WKB action criterion at the highest requested level, spacing from the
// largest local wave number where the states are not negligible.
inline Grid preset_grid(const SuperpotentialSpec &spec, const PresetOptions &opt = {}) {
  auto count = bound_state_count(spec);
  long long top = count.infinite ? opt.n_top : std::min<long long>(opt.n_top, count.count);
  const double E_s = closed_form_energy(spec, top);
  const double x0 = find_W_zero(spec);
  const double hbar = spec.hbar;
  // Where the wall exponent is critical (psi ~ gap^(1/2)) the end condition
  // is off by O(sqrt(gap)), so the walls sit very deep in the mapped coordinate.
  constexpr double wall_gap = 1e-24;

  GridMap map = GridMap::Identity;
  double scale = 1.0;
  double wall_lo = -std::numeric_limits<double>::infinity();
  double wall_hi = std::numeric_limits<double>::infinity();
  switch (spec.domain.kind) {
  case DomainKind::FullLine: break;
  case DomainKind::HalfLine:
    map = spec.class_id == ClassId::IIA ? GridMap::Log : GridMap::Softplus;
    scale = x0;
    wall_lo = map_t(map, scale, wall_gap * scale);
    break;
  case DomainKind::Box:
    map = GridMap::Tanh;
    wall_hi = 0.5 * std::log(std::numbers::pi / wall_gap - 1.0);
    wall_lo = -wall_hi;
    break;
  }

  auto V = [&](const Abscissa &p) { return partner_potentials_at(spec, spec.a, p).V_minus; };
  const double t0 = map_t(map, scale, x0);
  double kmax = 0.0;
  auto scan = [&](double dir, double wall) {
    const double dt = 0.01;
    double t = t0, action = 0.0;
    for (long step = 0; step < 2000000; ++step) {
      double tn = t + dir * dt;
      if ((dir < 0 && tn <= wall) || (dir > 0 && tn >= wall))
        return wall;
      t = tn;
      auto [pt, jac, curv] = map_point(map, scale, t);
      double dv = V(pt) - E_s;
      if (dv > 0)
        action += std::sqrt(dv) * jac * dt / hbar;
      else
        action = 0.0;
      if (action <= 0.5 * opt.action) {
        double q = jac * jac * dv / (hbar * hbar) + curv;
        kmax = std::max(kmax, std::sqrt(std::abs(q)));
      }
      if (action >= opt.action)
        return t;
    }
    return t;
  };
  double t_lo = scan(-1.0, wall_lo);
  double t_hi = scan(1.0, wall_hi);
  double dt = std::min(opt.step / std::max(kmax, 1e-3), opt.max_dt) / opt.resolution;
  double span = t_hi - t_lo;
  long n = static_cast<long>(std::ceil(span / dt)) + 1;
  n = std::clamp<long>(n, 2001, 400001);
  return make_grid(map, scale, t_lo, t_hi, static_cast<int>(n), EndCondition::Asymptotic,
                   EndCondition::Asymptotic);
}

} // namespace siqhj
