#pragma once

#include "siqhj/catalog.hpp"
#include "siqhj/grid.hpp"
#include "siqhj/qhj_residue.hpp"
#include "siqhj/schrodinger.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

namespace siqhj {

// P_n^{(alpha, beta)}(s) by the three-term recurrence
inline double jacobi_poly(int n, double alpha, double beta, double s) {
  if (n == 0)
    return 1.0;
  double prev = 1.0;
  double cur = (alpha + 1.0) + (alpha + beta + 2.0) * (s - 1.0) / 2.0;
  for (int k = 2; k <= n; ++k) {
    const double ab = alpha + beta;
    const double c = 2.0 * k + ab;
    const double a1 = 2.0 * k * (k + ab) * (c - 2.0);
    const double a2 = (c - 1.0) * (c * (c - 2.0) * s + alpha * alpha - beta * beta);
    const double a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
    double next = (a2 * cur - a3 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

// d/ds P_n^{(alpha, beta)} = (n + alpha + beta + 1)/2 P_{n-1}^{(alpha+1, beta+1)}
inline double jacobi_poly_derivative(int n, double alpha, double beta, double s) {
  if (n == 0)
    return 0.0;
  return 0.5 * (n + alpha + beta + 1.0) * jacobi_poly(n - 1, alpha + 1.0, beta + 1.0, s);
}

struct JacobiParams {
  double alpha = 0.0;
  double beta = 0.0;
  int n = 0;
};

// chi = -hbar P'/P + b_minus/(S+1) + b_plus/(S-1) + C in S = tanh x
struct ChiDecomposition {
  double residue_minus = 0.0;
  double residue_plus = 0.0;
  int polynomial_degree = 0;
  double analytic_part = 0.0;
  double energy = 0.0;
};

namespace detail {

inline void require_rosen_morse(const SuperpotentialSpec &spec) {
  if (spec.class_id != ClassId::IIB2)
    throw Error(ErrorKind::UnsupportedClass,
                "closed-form eigenfunctions are only derived for " + std::string(to_string(ClassId::IIB2)) +
                    ", not " + std::string(to_string(spec.class_id)));
}

inline void require_bound(const SuperpotentialSpec &spec, int n) {
  if (n < 0 || !bound_state_count(spec).admits(n)) {
    std::ostringstream os;
    os << "n=" << n << " exceeds bound state count " << bound_state_count(spec).count;
    throw Error(ErrorKind::NotBound, os.str());
  }
}

} // namespace detail

inline std::pair<JacobiParams, ChiDecomposition> chi_params(const SuperpotentialSpec &spec, int n) {
  detail::require_rosen_morse(spec);
  detail::require_bound(spec, n);
  const double a = spec.a, B = spec.B, h = spec.hbar;
  const double an = a + n * h;
  JacobiParams jp{(B / an - an) / h, (-B / an - an) / h, n};

  ChiDecomposition chi;
  chi.polynomial_degree = n;
  chi.energy = solve_energy_qhj(spec, n).energy;
  // Indicial equation at S = +-1: (b + hbar/2)^2 = (W(+-1)^2 - E)/4, root
  // continuous with W/F - (hbar/2) F'/F as E -> 0
  auto solved = [&](double c) {
    if (chi.energy > c * c)
      throw Error(ErrorKind::BranchPointCrossed, "energy beyond the fixed-pole branch point");
    return -h / 2.0 + c * std::sqrt(1.0 - chi.energy / (c * c)) / 2.0;
  };
  chi.residue_plus = solved(a - B / a);
  chi.residue_minus = solved(a + B / a);

  // C from the large-|S| form of chi, where p -> W
  const double S = 1e6;
  const double F = 1.0 - S * S;
  const double chi_far = (B / a - a * S) / F + h * S / F;
  double moving = 0.0;
  if (n > 0)
    moving = -h * jacobi_poly_derivative(n, jp.alpha, jp.beta, S) / jacobi_poly(n, jp.alpha, jp.beta, S);
  const double poles = moving + chi.residue_minus / (S + 1.0) + chi.residue_plus / (S - 1.0);
  chi.analytic_part = chi_far - poles;
  return {jp, chi};
}

// psi_n ~ (1+S)^(beta/2) (1-S)^(alpha/2) P_n(S), S = tanh x
inline WaveFunction closed_form_eigenfunction(const SuperpotentialSpec &spec, int n, const Grid &grid) {
  auto [jp, chi] = chi_params(spec, n);
  const double ln2 = std::numbers::ln2;
  WaveFunction wf;
  wf.grid = grid;
  wf.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x[i];
    // log(1 - tanh x) and log(1 + tanh x) without cancellation
    const double log_minus = ln2 - detail::softplus(2.0 * x);
    const double log_plus = ln2 - detail::softplus(-2.0 * x);
    const double envelope = std::exp(0.5 * jp.beta * log_plus + 0.5 * jp.alpha * log_minus);
    wf.values[i] = envelope * jacobi_poly(n, jp.alpha, jp.beta, std::tanh(x));
  }
  wf = normalize(std::move(wf));
  wf.energy = chi.energy;
  return wf;
}

// L2 distance after aligning the global sign
inline double compare_eigenfunctions(const WaveFunction &a, const WaveFunction &b) {
  if (!a.grid.same_as(b.grid) || a.values.size() != b.values.size())
    throw Error(ErrorKind::GridMismatch, "wavefunctions live on different grids");
  std::vector<double> plus(a.values.size()), minus(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    plus[i] = a.values[i] + b.values[i];
    minus[i] = a.values[i] - b.values[i];
  }
  return std::min(l2_norm(a.grid, plus), l2_norm(a.grid, minus));
}

} // namespace siqhj
