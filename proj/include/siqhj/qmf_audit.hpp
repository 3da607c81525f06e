#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/grid.hpp"
#include "siqhj/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace siqhj {

struct QmfSample {
  std::vector<double> p;
  std::vector<bool> masked; // within 3 cells of a node
};

struct PoleAudit {
  int n = 0;
  std::vector<double> node_locations;
  std::vector<double> residue_estimates;
  double mean_residue = 0.0;
  double pole_sum = 0.0;          // sum of residues; n * (-hbar) in theory
  double max_residue_error = 0.0; // max |r + hbar| / hbar
  double qmf_vs_W_tail_error = 0.0;     // outside the ground-state turning points
  double qmf_vs_W_interior_error = 0.0; // every significant, unmasked sample
};

namespace detail {

constexpr double node_floor = 1e-8; // same significance floor as count_nodes

// Sign changes as (index of the last significant sample before, index after)
inline std::vector<std::pair<std::size_t, std::size_t>> node_brackets(std::span<const double> v) {
  double peak = 0.0;
  for (double s : v)
    peak = std::max(peak, std::abs(s));
  const double floor = node_floor * peak;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  bool have = false;
  std::size_t last = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) <= floor)
      continue;
    if (have && (v[i] > 0) != (v[last] > 0))
      out.emplace_back(last, i);
    last = i;
    have = true;
  }
  return out;
}

inline void require_isolated(const Grid &g, const std::vector<std::pair<std::size_t, std::size_t>> &br) {
  const std::size_t n = g.size();
  for (std::size_t k = 0; k < br.size(); ++k) {
    std::size_t lo = br[k].first, hi = br[k].second;
    bool near_edge = lo < 10 || hi + 10 >= n;
    bool near_prev = k > 0 && lo < br[k - 1].second + 10;
    if (near_edge || near_prev) {
      std::ostringstream os;
      os << "node near x=" << g.x[lo] << " is within 10 cells of a neighbour or the grid end";
      throw Error(ErrorKind::NodesTooClose, os.str());
    }
  }
}

// cubic Lagrange interpolation of samples f at x, from the four nearest points
inline double interpolate(const Grid &g, std::span<const double> f, double x) {
  auto it = std::lower_bound(g.x.begin(), g.x.end(), x);
  std::ptrdiff_t j = it - g.x.begin();
  std::ptrdiff_t start = std::clamp<std::ptrdiff_t>(j - 2, 0, static_cast<std::ptrdiff_t>(g.size()) - 4);
  double s = 0.0;
  for (std::ptrdiff_t i = start; i < start + 4; ++i) {
    double w = 1.0;
    for (std::ptrdiff_t m = start; m < start + 4; ++m)
      if (m != i)
        w *= (x - g.x[m]) / (g.x[i] - g.x[m]);
    s += w * f[i];
  }
  return s;
}

} // namespace detail

// Interior sign changes of psi, located by linear interpolation
inline std::vector<double> detect_nodes(const WaveFunction &wf) {
  std::vector<double> out;
  for (auto [i, j] : detail::node_brackets(wf.values)) {
    double a = wf.values[i], b = wf.values[j];
    out.push_back(wf.grid.x[i] + (wf.grid.x[j] - wf.grid.x[i]) * a / (a - b));
  }
  return out;
}

// p = -hbar psi'/psi, masked within 3 cells of each node
inline QmfSample compute_qmf(const WaveFunction &wf, const SuperpotentialSpec &spec) {
  const Grid &g = wf.grid;
  auto br = detail::node_brackets(wf.values);
  detail::require_isolated(g, br);
  auto d = derivative_x(g, wf.values);
  QmfSample q;
  q.p.resize(g.size());
  q.masked.assign(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i)
    q.p[i] = -spec.hbar * d[i] / wf.values[i];
  for (auto [lo, hi] : br) {
    std::size_t from = lo >= 2 ? lo - 2 : 0;
    std::size_t to = std::min(hi + 2, g.size() - 1);
    for (std::size_t i = from; i <= to; ++i)
      q.masked[i] = true;
  }
  return q;
}

// Limit of (x - node) p(x): symmetric averages at 2h, 4h, 8h and two
// Richardson steps in h^2
inline double estimate_residue(const WaveFunction &wf, double node_x, double hbar) {
  const Grid &g = wf.grid;
  auto it = std::lower_bound(g.x.begin(), g.x.end(), node_x);
  std::size_t j = static_cast<std::size_t>(it - g.x.begin());
  if (j < 10 || j + 10 >= g.size())
    throw Error(ErrorKind::NodesTooClose, "node is within 10 cells of the grid end");
  const double h = g.x[j] - g.x[j - 1];
  auto d = derivative_x(g, wf.values);
  std::vector<double> r(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    r[i] = wf.values[i] != 0.0 ? -hbar * (g.x[i] - node_x) * d[i] / wf.values[i] : -hbar;
  auto sym = [&](double off) {
    return 0.5 * (detail::interpolate(g, r, node_x + off) + detail::interpolate(g, r, node_x - off));
  };
  double s2 = sym(2 * h), s4 = sym(4 * h), s8 = sym(8 * h);
  double r1 = (4 * s2 - s4) / 3, r2 = (4 * s4 - s8) / 3;
  return (16 * r1 - r2) / 15;
}

inline double estimate_residue(const WaveFunction &wf, double node_x, const SuperpotentialSpec &spec) {
  return estimate_residue(wf, node_x, spec.hbar);
}

struct QmfWError {
  double tail = 0.0;
  double interior = 0.0;
};

// sup of |p - W| / max(1, |W|) over samples where the ground state is above
// the node floor; tail restricts to points outside the turning points of V-
inline QmfWError qmf_w_error(const WaveFunction &ground, const SuperpotentialSpec &spec) {
  const Grid &g = ground.grid;
  auto q = compute_qmf(ground, spec);
  std::size_t first = g.size(), last = 0;
  std::vector<double> W(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto pp = partner_potentials_at(spec, spec.a, g.point(i));
    W[i] = superpotential_at(spec, spec.a, g.point(i)).W;
    if (pp.V_minus < ground.energy) {
      first = std::min(first, i);
      last = i;
    }
  }
  double peak = 0.0;
  for (double v : ground.values)
    peak = std::max(peak, std::abs(v));
  QmfWError e;
  for (std::size_t i = 2; i + 2 < g.size(); ++i) {
    if (std::abs(ground.values[i]) < detail::node_floor * peak || q.masked[i])
      continue;
    double err = std::abs(q.p[i] - W[i]) / std::max(1.0, std::abs(W[i]));
    e.interior = std::max(e.interior, err);
    if (i < first || i > last)
      e.tail = std::max(e.tail, err);
  }
  return e;
}

inline PoleAudit audit(const SuperpotentialSpec &spec, int n, const PresetOptions &opt = {}) {
  if (n < 0 || !bound_state_count(spec).admits(n)) {
    std::ostringstream os;
    os << "n=" << n << " exceeds bound state count " << bound_state_count(spec).count;
    throw Error(ErrorKind::NotBound, os.str());
  }
  Grid grid = preset_grid(spec, opt);
  auto levels = numeric_levels(hamiltonian_minus(spec), grid, n + 1);
  const WaveFunction &wf = levels[n];
  PoleAudit a;
  a.n = n;
  a.node_locations = detect_nodes(wf);
  detail::require_isolated(grid, detail::node_brackets(wf.values));
  for (double x : a.node_locations) {
    double r = estimate_residue(wf, x, spec);
    a.residue_estimates.push_back(r);
    a.pole_sum += r;
    a.max_residue_error = std::max(a.max_residue_error, std::abs(r + spec.hbar) / spec.hbar);
  }
  if (!a.residue_estimates.empty())
    a.mean_residue = a.pole_sum / a.residue_estimates.size();
  auto werr = qmf_w_error(levels[0], spec);
  a.qmf_vs_W_tail_error = werr.tail;
  a.qmf_vs_W_interior_error = werr.interior;
  return a;
}

} // namespace siqhj
