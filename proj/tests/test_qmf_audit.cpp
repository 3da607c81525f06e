#include "oracles.hpp"
#include "siqhj/qmf_audit.hpp"
#include "siqhj/susy_ladder.hpp"

#include <gtest/gtest.h>

using namespace siqhj;

namespace {

WaveFunction hermite_on(const Grid &g, int n) {
  WaveFunction wf;
  wf.grid = g;
  for (double x : g.x)
    wf.values.push_back(oracle::hermite_state(n, x));
  return normalize(wf);
}

} // namespace

TEST(ComputeQmf, GroundStateReproducesW) {
  for (auto id : all_classes) {
    auto s = preset_spec(id);
    Grid g = preset_grid(s);
    auto e = qmf_w_error(groundstate(s, g), s);
    EXPECT_LE(e.interior, 1e-4) << to_string(id);
  }
}

TEST(ComputeQmf, OscillatorFirstStateHasOneMaskedNode) {
  auto s = preset_spec(ClassId::IA);
  Grid g = preset_grid(s);
  auto levels = numeric_levels(hamiltonian_minus(s), g, 2);
  auto q = compute_qmf(levels[1], s);
  std::size_t runs = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (q.masked[i] && (i == 0 || !q.masked[i - 1])) {
      ++runs;
      EXPECT_NEAR(g.x[i], 0.0, 0.05);
    }
  EXPECT_EQ(runs, 1u);
}

TEST(ComputeQmf, MorseSecondStateHasTwoMaskedNodes) {
  auto s = preset_spec(ClassId::IB);
  auto levels = numeric_levels(hamiltonian_minus(s), preset_grid(s), 3);
  auto q = compute_qmf(levels[2], s);
  std::size_t runs = 0;
  for (std::size_t i = 0; i < q.masked.size(); ++i)
    if (q.masked[i] && (i == 0 || !q.masked[i - 1]))
      ++runs;
  EXPECT_EQ(runs, 2u);
}

TEST(ComputeQmf, CrowdedNodes) {
  Grid g = uniform_grid(-10, 10, 41);
  auto wf = hermite_on(g, 3);
  try {
    compute_qmf(wf, preset_spec(ClassId::IA));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NodesTooClose);
  }
}

TEST(DetectNodes, Examples) {
  auto s = preset_spec(ClassId::IA);
  Grid g = uniform_grid(-10, 10, 4001);
  auto levels = fd_eigen(s, g, 3);
  EXPECT_TRUE(detect_nodes(levels[0]).empty());
  auto one = detect_nodes(levels[1]);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 0.0, 1e-3);
  auto two = detect_nodes(levels[2]);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0], -two[1], 1e-3);
  EXPECT_NEAR(two[1], std::sqrt(0.5), 1e-3); // zeros of H_2
}

TEST(EstimateResidue, OscillatorSecondState) {
  auto s = preset_spec(ClassId::IA);
  Grid g = uniform_grid(-10, 10, 4001);
  auto levels = fd_eigen(s, g, 3);
  for (double x : detect_nodes(levels[2]))
    EXPECT_NEAR(estimate_residue(levels[2], x, s), -1.0, 0.05);
}

TEST(EstimateResidue, AnalyticHermiteState) {
  Grid g = uniform_grid(-10, 10, 4001);
  auto wf = hermite_on(g, 3);
  for (double x : detect_nodes(wf))
    EXPECT_NEAR(estimate_residue(wf, x, 1.0), -1.0, 1e-6);
}

TEST(EstimateResidue, ScalesWithHbar) {
  auto s = preset_spec(ClassId::IA, 2.0);
  auto levels = numeric_levels(hamiltonian_minus(s), preset_grid(s), 3);
  for (double x : detect_nodes(levels[2]))
    EXPECT_NEAR(estimate_residue(levels[2], x, s), -2.0, 0.10);
}

TEST(EstimateResidue, RosenMorseFirstState) {
  auto s = preset_spec(ClassId::IIB2);
  for (double res : {1.0, 2.0}) {
    PresetOptions opt;
    opt.resolution = res;
    auto levels = numeric_levels(hamiltonian_minus(s), preset_grid(s, opt), 2);
    auto nodes = detect_nodes(levels[1]);
    ASSERT_EQ(nodes.size(), 1u);
    EXPECT_NEAR(estimate_residue(levels[1], nodes[0], s), -1.0, 0.05);
  }
}

TEST(EstimateResidue, ErrorShrinksUnderRefinement) {
  auto s = preset_spec(ClassId::IA);
  double prev = std::numeric_limits<double>::infinity();
  for (int pts : {401, 801, 1601}) {
    auto levels = fd_eigen(s, uniform_grid(-10, 10, pts), 3);
    double worst = 0.0;
    for (double x : detect_nodes(levels[2]))
      worst = std::max(worst, std::abs(estimate_residue(levels[2], x, s) + 1.0));
    EXPECT_LT(worst, prev) << pts;
    prev = worst;
  }
}

TEST(EstimateResidue, NodeAtTheGridEnd) {
  Grid g = uniform_grid(0.001, 3, 301);
  WaveFunction wf;
  wf.grid = g;
  for (double x : g.x)
    wf.values.push_back(std::sin(x * std::numbers::pi / 0.03));
  EXPECT_THROW(estimate_residue(wf, 0.03, 1.0), Error);
}

TEST(Audit, Examples) {
  auto ho = audit(preset_spec(ClassId::IA), 3);
  EXPECT_EQ(ho.node_locations.size(), 3u);
  for (double r : ho.residue_estimates)
    EXPECT_NEAR(r, -1.0, 0.05);
  EXPECT_NEAR(ho.pole_sum, -3.0, 0.15);

  auto morse = audit(preset_spec(ClassId::IB), 0);
  EXPECT_TRUE(morse.node_locations.empty());
  EXPECT_LE(morse.qmf_vs_W_tail_error, 1e-4);

  auto osc3 = audit(preset_spec(ClassId::IIIA), 2);
  ASSERT_EQ(osc3.node_locations.size(), 2u);
  for (double x : osc3.node_locations)
    EXPECT_GT(x, 0.0);
}

TEST(Audit, AllPresetsAndHbar) {
  for (auto id : all_classes)
    for (double h : {1.0, 0.5, 2.0}) {
      auto s = preset_spec(id, h);
      for (int n = 0; n <= 3 && bound_state_count(s).admits(n); ++n) {
        auto a = audit(s, n);
        EXPECT_EQ(static_cast<int>(a.node_locations.size()), n) << to_string(id) << " hbar=" << h;
        EXPECT_LE(a.max_residue_error, 0.05) << to_string(id) << " hbar=" << h << " n=" << n;
        if (n > 0) {
          EXPECT_NEAR(a.mean_residue, -h, 0.05 * h);
        }
        EXPECT_LE(a.qmf_vs_W_interior_error, 1e-4) << to_string(id) << " hbar=" << h;
      }
    }
}

TEST(Audit, NotBound) {
  EXPECT_THROW(audit(preset_spec(ClassId::IIB2), 2), Error);
}
