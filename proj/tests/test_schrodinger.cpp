#include "oracles.hpp"
#include "siqhj/qhj_residue.hpp"
#include "siqhj/schrodinger.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace siqhj;

namespace {

ErrorKind kind_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::ConfigError;
}

} // namespace

TEST(FdEigen, OscillatorLevels) {
  auto s = preset_spec(ClassId::IA);
  auto levels = fd_eigen(s, uniform_grid(-10, 10, 4001), 4);
  ASSERT_EQ(levels.size(), 4u);
  for (int n = 0; n < 4; ++n) {
    EXPECT_NEAR(levels[n].energy, 2.0 * n, 1e-4);
    EXPECT_EQ(levels[n].node_count, n);
  }
}

TEST(FdEigen, MorseLevels) {
  auto s = preset_spec(ClassId::IB);
  auto levels = fd_eigen(s, uniform_grid(-6, 12, 4001), 3);
  EXPECT_NEAR(levels[0].energy, 0.0, 1e-3);
  EXPECT_NEAR(levels[1].energy, 5.0, 1e-3);
  EXPECT_NEAR(levels[2].energy, 8.0, 1e-3);
}

TEST(FdEigen, ParticleInABox) {
  auto H = make_hamiltonian([](double) { return 0.0; }, 1.0);
  FdOptions walls;
  walls.domain_lower = 0.0;
  walls.domain_upper = std::numbers::pi;
  auto levels = fd_eigen(H, uniform_grid(0, std::numbers::pi, 2001), 1, walls);
  EXPECT_NEAR(levels[0].energy, 1.0, 1e-3);
}

TEST(FdEigen, NarrowDomainIsFlagged) {
  auto s = preset_spec(ClassId::IA);
  EXPECT_EQ(kind_of([&] { fd_eigen(s, uniform_grid(-2, 2, 401), 4); }), ErrorKind::GridTooSmall);
}

TEST(FdEigen, InfinitePotentialAtANodeIsFlagged) {
  auto H = make_hamiltonian([](double x) { return 1.0 / x; }, 1.0);
  EXPECT_EQ(kind_of([&] { fd_eigen(H, uniform_grid(-1, 1, 201), 1); }), ErrorKind::SingularPotential);
}

TEST(NumerovRefine, OscillatorBracket) {
  auto s = preset_spec(ClassId::IA);
  EXPECT_NEAR(numerov_refine(s, uniform_grid(-10, 10, 4001), {5.9, 6.1}), 6.0, 1e-6);
}

TEST(NumerovRefine, CoulombBracket) {
  auto s = preset_spec(ClassId::IIA);
  EXPECT_NEAR(numerov_refine(s, uniform_grid(1e-4, 60, 8001), {2.9, 3.1}), 3.0, 1e-6);
}

TEST(NumerovRefine, EmptyBracket) {
  auto s = preset_spec(ClassId::IA);
  EXPECT_EQ(kind_of([&] { numerov_refine(s, uniform_grid(-10, 10, 4001), {5.9, 5.95}); }), ErrorKind::NoSignChange);
}

TEST(Normalize, ConstantBecomesOne) {
  WaveFunction wf;
  wf.grid = uniform_grid(0, 1, 101);
  wf.values.assign(101, 2.0);
  auto n = normalize(wf);
  for (double v : n.values)
    EXPECT_NEAR(v, 1.0, 1e-14);
  EXPECT_TRUE(n.normalized);
}

TEST(Normalize, Idempotent) {
  WaveFunction wf;
  wf.grid = uniform_grid(-3, 3, 301);
  for (double x : wf.grid.x)
    wf.values.push_back(std::sin(x) * std::exp(-x * x));
  auto once = normalize(wf);
  auto twice = normalize(once);
  for (std::size_t i = 0; i < once.values.size(); ++i)
    EXPECT_NEAR(once.values[i], twice.values[i], 1e-15);
}

TEST(Normalize, ZeroFunction) {
  WaveFunction wf;
  wf.grid = uniform_grid(0, 1, 11);
  wf.values.assign(11, 0.0);
  EXPECT_EQ(kind_of([&] { normalize(wf); }), ErrorKind::ZeroFunction);
}

TEST(NumericLevels, OscillatorStatesMatchHermiteFunctions) {
  auto s = preset_spec(ClassId::IA);
  Grid g = preset_grid(s);
  auto levels = numeric_levels(hamiltonian_minus(s), g, 4);
  for (int n = 0; n < 4; ++n) {
    double sign = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < g.size() && sign == 0.0; ++i) {
      double ref = oracle::hermite_state(n, g.x[i]);
      if (std::abs(ref) > 0.1)
        sign = (ref > 0) == (levels[n].values[i] > 0) ? 1.0 : -1.0;
    }
    for (std::size_t i = 0; i < g.size(); ++i)
      worst = std::max(worst, std::abs(sign * levels[n].values[i] - oracle::hermite_state(n, g.x[i])));
    EXPECT_LE(worst, 1e-6) << "n=" << n;
    EXPECT_NEAR(levels[n].energy, 2.0 * n, 1e-7);
  }
}

TEST(NumericLevels, PresetsAgreeWithClosedForm) {
  for (auto id : all_classes) {
    auto s = preset_spec(id);
    auto c = bound_state_count(s);
    int top = c.infinite ? 5 : static_cast<int>(std::min<long long>(5, c.count));
    auto levels = numeric_levels(hamiltonian_minus(s), preset_grid(s), top + 1);
    for (int n = 0; n <= top; ++n) {
      double e = closed_form_energy(s, n);
      EXPECT_NEAR(levels[n].energy, e, 1e-6 * std::max(1.0, std::abs(e))) << to_string(id) << " n=" << n;
      EXPECT_EQ(levels[n].node_count, n) << to_string(id);
    }
  }
}

TEST(RayleighQuotient, ReproducesEigenvalues) {
  auto s = preset_spec(ClassId::IIB1);
  Grid g = preset_grid(s);
  auto levels = numeric_levels(hamiltonian_minus(s), g, 3);
  for (const auto &wf : levels)
    EXPECT_NEAR(rayleigh_quotient(hamiltonian_minus(s), wf), wf.energy, 1e-6 * std::max(1.0, wf.energy));
}

TEST(PresetGrid, SizeIsBounded) {
  for (auto id : all_classes) {
    Grid g = preset_grid(preset_spec(id));
    EXPECT_GE(g.size(), 2001u);
    EXPECT_LE(g.size(), 400001u);
  }
}

TEST(FdEigen, SecondOrderConvergence) {
  auto s = preset_spec(ClassId::IA);
  Grid coarse = uniform_grid(-10, 10, 1001), fine = uniform_grid(-10, 10, 2001);
  auto a = fd_eigen(s, coarse, 4), b = fd_eigen(s, fine, 4);
  for (int n = 0; n < 4; ++n) {
    const double ref = numerov_refine(s, fine, {2.0 * n - 0.5, 2.0 * n + 0.5});
    const double ratio = std::abs(a[n].energy - ref) / std::abs(b[n].energy - ref);
    EXPECT_NEAR(ratio, 4.0, 0.2) << "n=" << n;
  }
}

TEST(FdEigen, OrderedLevelsWithMatchingNodes) {
  for (auto id : all_classes) {
    auto s = preset_spec(id);
    Grid g = preset_grid(s);
    const int k = std::min(4, static_cast<int>(bound_state_count(s).infinite ? 4 : bound_state_count(s).count + 1));
    auto levels = fd_eigen(s, g, k);
    for (int n = 0; n < k; ++n) {
      EXPECT_EQ(levels[n].node_count, n) << to_string(id);
      if (n > 0) {
        EXPECT_GT(levels[n].energy, levels[n - 1].energy);
      }
      for (int m = 0; m < n; ++m)
        EXPECT_LE(std::abs(inner_product(g, levels[m].values, levels[n].values)), 1e-6) << to_string(id);
    }
  }
}

TEST(NumerovRefine, StableUnderDomainEnlargement) {
  struct Case {
    ClassId id;
    double lo, hi, lo_wide, hi_wide;
    int points;
  };
  // same spacing, 20% more span on the free ends
  const std::vector<Case> cases{{ClassId::IA, -10, 10, -12, 12, 4001},
                                {ClassId::IB, -6, 12, -7.8, 13.8, 3601},
                                {ClassId::IIA, 1e-4, 60, 1e-4, 72, 8001},
                                {ClassId::IIB2, -10, 14, -12.4, 16.4, 4801}};
  for (const auto &c : cases) {
    auto s = preset_spec(c.id);
    Grid g = uniform_grid(c.lo, c.hi, c.points);
    const double dx = (c.hi - c.lo) / (c.points - 1);
    Grid wide = uniform_grid(c.lo_wide, c.hi_wide, static_cast<int>(std::lround((c.hi_wide - c.lo_wide) / dx)) + 1);
    for (int n = 0; n <= 2 && bound_state_count(s).admits(n); ++n) {
      const double E = closed_form_energy(s, n);
      double half = n > 0 ? E - closed_form_energy(s, n - 1) : 1.0;
      if (bound_state_count(s).admits(n + 1))
        half = std::min(half, closed_form_energy(s, n + 1) - E);
      half = std::min(half, branch_point_bound(s) - E);
      const std::pair<double, double> br{E - 0.4 * half, E + 0.4 * half};
      EXPECT_LE(std::abs(numerov_refine(s, g, br) - numerov_refine(s, wide, br)), 1e-8) << to_string(c.id) << " n=" << n;
    }
  }
}

TEST(NumericLevels, OrthogonalOnPresets) {
  for (auto id : all_classes) {
    auto s = preset_spec(id);
    Grid g = preset_grid(s);
    const int k = bound_state_count(s).infinite ? 4 : std::min<int>(4, bound_state_count(s).count + 1);
    auto levels = numeric_levels(hamiltonian_minus(s), g, k);
    for (int n = 0; n < k; ++n)
      for (int m = 0; m < n; ++m)
        EXPECT_LE(std::abs(inner_product(g, levels[m].values, levels[n].values)), 1e-6) << to_string(id);
  }
}
