#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/grid.hpp"
#include "siqhj/schrodinger.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace siqhj {

namespace detail {

// -(1/hbar) * integral of W(., a) from the zero of W to each grid point,
// cell by cell with 15-point Gauss-Kronrod in the grid coordinate t.
inline std::vector<double> groundstate_exponent(const SuperpotentialSpec &spec, double a,
                                                const Grid &grid) {
  using boost::math::quadrature::gauss_kronrod;
  const std::size_t n = grid.size();
  const double x0 = find_W_zero(spec, a);
  const double t0 = std::clamp(map_t(grid.map, grid.scale, x0), grid.t_min, grid.t_max);
  auto integrand = [&](double t) {
    auto p = map_point(grid.map, grid.scale, t);
    return superpotential_at(spec, a, p.at).W * p.jac;
  };
  auto cell = [&](double ta, double tb) {
    if (ta == tb)
      return 0.0;
    return gauss_kronrod<double, 15>::integrate(integrand, ta, tb, 0);
  };
  std::size_t m = static_cast<std::size_t>(
      std::upper_bound(grid.t.begin(), grid.t.end(), t0) - grid.t.begin());
  // grid.t[m-1] <= t0 < grid.t[m]
  std::vector<double> e(n, 0.0);
  if (m > 0) {
    double acc = cell(t0, grid.t[m - 1]);
    e[m - 1] = acc;
    for (std::size_t i = m - 1; i-- > 0;) {
      acc += cell(grid.t[i + 1], grid.t[i]);
      e[i] = acc;
    }
  }
  if (m < n) {
    double acc = cell(t0, grid.t[m]);
    e[m] = acc;
    for (std::size_t i = m + 1; i < n; ++i) {
      acc += cell(grid.t[i - 1], grid.t[i]);
      e[i] = acc;
    }
  }
  for (double &v : e)
    v = -v / spec.hbar;
  return e;
}

} // namespace detail

struct GroundState {
  WaveFunction wavefunction;
  std::vector<bool> underflow; // exponent clamped at -700
};

// Unnormalized exp(-(1/hbar) int W) at shape parameter a, peak value 1
inline GroundState groundstate_raw(const SuperpotentialSpec &spec, double a, const Grid &grid) {
  auto e = detail::groundstate_exponent(spec, a, grid);
  GroundState gs;
  gs.wavefunction.grid = grid;
  gs.wavefunction.values.resize(e.size());
  gs.underflow.assign(e.size(), false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    double v = std::clamp(e[i], -700.0, 700.0);
    gs.underflow[i] = e[i] < -700.0;
    gs.wavefunction.values[i] = std::exp(v);
  }
  return gs;
}

inline WaveFunction groundstate(const SuperpotentialSpec &spec, const Grid &grid) {
  GroundState gs;
  try {
    gs = groundstate_raw(spec, spec.a, grid);
  } catch (const Error &e) {
    // W without a sign change: exp(-int W/hbar) grows at one end at least
    if (e.kind() != ErrorKind::NoRoot)
      throw;
    throw Error(ErrorKind::NonNormalizable, std::string("W never changes sign (") + e.what() + ")");
  }
  const auto &v = gs.wavefunction.values;
  double peak = *std::max_element(v.begin(), v.end());
  if (v.front() > 1e-8 * peak || v.back() > 1e-8 * peak) {
    // tails still sizeable: see whether the norm keeps growing with the domain
    Grid wide = widened(grid, 0.2, spec.domain.lower, spec.domain.upper);
    auto gw = groundstate_raw(spec, spec.a, wide);
    double n0 = l2_norm(grid, v), n1 = l2_norm(wide, gw.wavefunction.values);
    if (!std::isfinite(n1) || n1 > n0 * (1.0 + 1e-2))
      throw Error(ErrorKind::NonNormalizable,
                  "ground state norm grows with the domain; SUSY is broken for these parameters");
  }
  auto wf = normalize(std::move(gs.wavefunction));
  wf.energy = 0.0;
  return wf;
}

enum class LadderSign { Plus, Minus };

// A+ = -hbar d/dx + W(x, a),  A- = +hbar d/dx + W(x, a)
inline WaveFunction apply_A(const SuperpotentialSpec &spec, double a, const WaveFunction &wf,
                            LadderSign sign) {
  const Grid &g = wf.grid;
  const double h = spec.hbar;
  const double s = sign == LadderSign::Plus ? -1.0 : 1.0;
  auto d = derivative_x(g, wf.values);
  auto d2 = derivative_x_coarse(g, wf.values);
  WaveFunction out;
  out.grid = g;
  out.values.resize(g.size());
  std::vector<double> hd(g.size()), est(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    double W = superpotential_at(spec, a, g.point(i)).W;
    out.values[i] = s * h * d[i] + W * wf.values[i];
    hd[i] = h * d[i];
    if (i >= 4 && i + 4 < g.size())
      est[i] = h * (d[i] - d2[i]) / 15.0;
  }
  double scale = std::max(l2_norm(g, out.values), l2_norm(g, hd));
  double err = l2_norm(g, est);
  // a result that is itself zero to ~1e-7 (A- on a ground state) leaves only
  // stencil noise, so estimates below 1e-10 are not held against it
  if (err > 1e-6 * scale && err > 1e-10) {
    std::ostringstream os;
    os << "derivative error estimate " << err << " exceeds 1e-6 of " << scale;
    throw Error(ErrorKind::GridTooCoarse, os.str());
  }
  out.node_count = count_nodes(out.values);
  return out;
}

inline WaveFunction apply_A(const SuperpotentialSpec &spec, const WaveFunction &wf, LadderSign sign) {
  return apply_A(spec, spec.a, wf, sign);
}

struct LadderChainResult {
  int n = 0;
  WaveFunction wavefunction;
  std::vector<double> energies_used;      // g(a_n) - g(a_k), k = 0..n-1
  std::vector<double> parameter_sequence; // a_k = a + k hbar, k = 0..n
};

// Stencil differentiates each intermediate state with apply_A. Rounding noise
// grows by roughly 1/dt per step, so past n ~ 2 on fine grids it trips
// GridTooCoarse. Exact carries psi' alongside psi: the intermediate state at
// a_{k+1} solves -hbar^2 psi'' + V-(a_{k+1}) psi = e psi, which gives psi''
// pointwise and hence the derivative of the next state.
enum class LadderDerivative { Exact, Stencil };

inline LadderChainResult excited_state_via_ladder(const SuperpotentialSpec &spec, int n,
                                                  const Grid &grid,
                                                  LadderDerivative mode = LadderDerivative::Exact) {
  if (!bound_state_count(spec).admits(n)) {
    std::ostringstream os;
    os << "n=" << n << " exceeds bound state count " << bound_state_count(spec).count;
    throw Error(ErrorKind::NotBound, os.str());
  }
  LadderChainResult r;
  r.n = n;
  for (int k = 0; k <= n; ++k)
    r.parameter_sequence.push_back(spec.a + k * spec.hbar);
  const double gn = g_function(spec, r.parameter_sequence[n]);
  for (int k = 0; k < n; ++k)
    r.energies_used.push_back(gn - g_function(spec, r.parameter_sequence[k]));
  if (n == 0) {
    r.wavefunction = groundstate(spec, grid);
    return r;
  }
  const double h = spec.hbar;
  WaveFunction psi = groundstate_raw(spec, r.parameter_sequence[n], grid).wavefunction;
  if (mode == LadderDerivative::Stencil) {
    for (int k = n - 1; k >= 0; --k) {
      psi = apply_A(spec, r.parameter_sequence[k], psi, LadderSign::Plus);
      for (double &v : psi.values)
        v /= std::sqrt(r.energies_used[k]);
    }
  } else {
    const std::size_t m = grid.size();
    std::vector<double> dpsi(m);
    std::vector<WValues> upper(m);
    for (std::size_t i = 0; i < m; ++i) {
      upper[i] = superpotential_at(spec, r.parameter_sequence[n], grid.point(i));
      dpsi[i] = -upper[i].W / h * psi.values[i];
    }
    double e = 0.0;
    for (int k = n - 1; k >= 0; --k) {
      const double norm = std::sqrt(r.energies_used[k]);
      for (std::size_t i = 0; i < m; ++i) {
        auto w = superpotential_at(spec, r.parameter_sequence[k], grid.point(i));
        const double p = psi.values[i], dp = dpsi[i];
        const double vm = upper[i].W * upper[i].W - h * upper[i].dWdx;
        const double d2p = (vm - e) * p / (h * h);
        psi.values[i] = (-h * dp + w.W * p) / norm;
        dpsi[i] = (-h * d2p + w.dWdx * p + w.W * dp) / norm;
        upper[i] = w;
      }
      e = r.energies_used[k];
    }
  }
  r.wavefunction = normalize(std::move(psi));
  r.wavefunction.energy = closed_form_energy(spec, n);
  return r;
}

struct IsospectralityReport {
  int n = 0;
  double energy_minus = 0.0; // E_{n+1} of V-
  double energy_plus = 0.0;  // E_n of V+
  double difference = 0.0;
};

inline IsospectralityReport isospectrality_check(const SuperpotentialSpec &spec, int n,
                                                 const Grid &grid) {
  if (!bound_state_count(spec).admits(n + 1))
    throw Error(ErrorKind::NotBound, "isospectrality needs level n+1 to be bound");
  auto minus = numeric_levels(hamiltonian_minus(spec), grid, n + 2);
  auto plus = numeric_levels(hamiltonian_plus(spec), grid, n + 1);
  IsospectralityReport r;
  r.n = n;
  r.energy_minus = minus[n + 1].energy;
  r.energy_plus = plus[n].energy;
  r.difference = std::abs(r.energy_minus - r.energy_plus);
  return r;
}

} // namespace siqhj
