#include "oracles.hpp"
#include "siqhj/catalog.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace siqhj;

namespace {

std::vector<double> sample_points(const SuperpotentialSpec &s) {
  switch (s.domain.kind) {
  case DomainKind::FullLine: return {-2.3, -0.7, 0.0, 0.4, 1.9};
  case DomainKind::HalfLine: return {0.3, 0.9, 1.7, 3.2};
  case DomainKind::Box: return {-1.2, -0.5, 0.1, 0.8, 1.3};
  }
  return {};
}

std::vector<SuperpotentialSpec> all_specs() {
  std::vector<SuperpotentialSpec> out;
  for (auto id : all_classes) {
    for (double h : {1.0, 0.5, 2.0})
      out.push_back(preset_spec(id, h));
    Params p = alternate_params(id);
    out.push_back(make_spec(id, p));
  }
  return out;
}

} // namespace

TEST(ClassIds, RoundTripThroughText) {
  for (auto id : all_classes) {
    auto parsed = parse_class_id(to_string(id));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, id);
  }
  EXPECT_FALSE(parse_class_id("XX").has_value());
}

TEST(ClassInfo, TenRowsWithConventionalNames) {
  EXPECT_EQ(all_classes.size(), 10u);
  EXPECT_EQ(class_info(ClassId::IIB2).name, "Rosen-Morse (Hyperbolic)");
  EXPECT_EQ(class_info(ClassId::IB).name, "Morse");
  EXPECT_EQ(class_info(ClassId::IIB3).name, "Eckart");
}

TEST(MakeSpec, MorsePresetIsValid) {
  auto s = make_spec(ClassId::IB, {-3.0, std::nullopt, std::nullopt, 1.0});
  EXPECT_EQ(s.class_id, ClassId::IB);
  EXPECT_DOUBLE_EQ(s.a, -3.0);
  EXPECT_EQ(s.domain.kind, DomainKind::FullLine);
}

TEST(MakeSpec, SignViolationsAreRejected) {
  auto bad = [](ClassId id, Params p) {
    try {
      make_spec(id, p);
    } catch (const Error &e) {
      return e.kind() == ErrorKind::InvalidParameter;
    }
    return false;
  };
  EXPECT_TRUE(bad(ClassId::IB, {3.0, std::nullopt, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIA, {1.0, -2.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIA, {-1.0, 2.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIB1, {-1.0, 1.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIB2, {-4.0, 4.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIB3, {1.0, 0.5, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIIA, {-2.0, std::nullopt, 2.0}));
  EXPECT_TRUE(bad(ClassId::IIIA, {2.0, 1.0, 2.0}));
  EXPECT_TRUE(bad(ClassId::IIIB1, {2.0, 3.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIIB2, {3.0, 1.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IIIB3, {-3.0, -2.0, std::nullopt}));
  EXPECT_TRUE(bad(ClassId::IA, {std::nullopt, std::nullopt, -1.0}));
  EXPECT_TRUE(bad(ClassId::IA, {std::nullopt, std::nullopt, 2.0, 0.0}));
}

TEST(MakeSpec, MissingParameterIsNamed) {
  try {
    make_spec(ClassId::IIB2, {-4.0, std::nullopt, std::nullopt});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameter);
    EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
  }
}

TEST(MakeSpec, DomainsFollowTheClass) {
  using K = DomainKind;
  std::map<ClassId, K> expect{{ClassId::IA, K::FullLine},   {ClassId::IB, K::FullLine},    {ClassId::IIB2, K::FullLine},
                              {ClassId::IIIB2, K::FullLine}, {ClassId::IIA, K::HalfLine},   {ClassId::IIB3, K::HalfLine},
                              {ClassId::IIIA, K::HalfLine},  {ClassId::IIIB3, K::HalfLine}, {ClassId::IIB1, K::Box},
                              {ClassId::IIIB1, K::Box}};
  for (auto [id, kind] : expect) {
    auto s = preset_spec(id);
    EXPECT_EQ(s.domain.kind, kind) << to_string(id);
    if (kind == K::Box) {
      EXPECT_DOUBLE_EQ(s.domain.lower, -std::numbers::pi / 2);
      EXPECT_DOUBLE_EQ(s.domain.upper, std::numbers::pi / 2);
    }
    if (kind == K::HalfLine) {
      EXPECT_EQ(s.domain.lower, 0.0);
    }
  }
}

TEST(MakeSpec, LevelFunctionIncreasesAtPresets) {
  for (const auto &s : all_specs()) {
    auto g = [&](double a) { return g_function(s, a); };
    double slope = oracle::central_diff(g, s.a, 1e-4);
    EXPECT_GT(slope, 0.0) << to_string(s.class_id);
    EXPECT_NEAR(slope, dg_da(s, s.a), 1e-7 * std::max(1.0, std::abs(slope))) << to_string(s.class_id);
  }
}

TEST(EvaluateBasis, Examples) {
  auto rm = preset_spec(ClassId::IIB2);
  EXPECT_EQ(evaluate_basis(rm, 0.0).f1, 0.0);

  auto coul = preset_spec(ClassId::IIA);
  EXPECT_DOUBLE_EQ(evaluate_basis(coul, 2.0).f1, -0.5);
  // f1' = f1^2 for the Coulomb basis
  double d = oracle::central_diff([&](double x) { return evaluate_basis(coul, x).f1; }, 2.0);
  EXPECT_NEAR(d, 0.25, 1e-9);

  auto ho = preset_spec(ClassId::IA);
  EXPECT_DOUBLE_EQ(evaluate_basis(ho, 1.0).f2, 1.0);
  EXPECT_NEAR(oracle::central_diff([&](double x) { return evaluate_basis(ho, x).f2; }, 1.0), 1.0, 1e-9);
}

TEST(EvaluateBasis, EndpointsAreOutsideTheDomain) {
  auto coul = preset_spec(ClassId::IIA);
  EXPECT_THROW(evaluate_basis(coul, 0.0), Error);
  auto box = preset_spec(ClassId::IIB1);
  EXPECT_THROW(evaluate_W(box, std::numbers::pi / 2), Error);
  EXPECT_THROW(evaluate_W(box, 2.0), Error);
}

TEST(EvaluateW, Examples) {
  EXPECT_EQ(evaluate_W(preset_spec(ClassId::IA), 0.0), 0.0);
  EXPECT_DOUBLE_EQ(evaluate_W(preset_spec(ClassId::IB), 0.0), 2.0);
  EXPECT_NEAR(evaluate_W(preset_spec(ClassId::IIB2), 20.0), 5.0, 1e-12);
}

TEST(EvaluateW, MatchesTheTableFormula) {
  for (const auto &s : all_specs())
    for (double x : sample_points(s))
      EXPECT_NEAR(evaluate_W(s, x), oracle::table_W(s, s.a, x), 1e-12 * std::max(1.0, std::abs(evaluate_W(s, x))))
          << to_string(s.class_id) << " x=" << x;
}

TEST(EvaluateW, DerivativesMatchFiniteDifferences) {
  for (const auto &s : all_specs())
    for (double x : sample_points(s)) {
      auto w = superpotential_at(s, s.a, x);
      double dx = oracle::central_diff([&](double t) { return oracle::table_W(s, s.a, t); }, x);
      double da = oracle::central_diff([&](double b) { return oracle::table_W(s, b, x); }, s.a);
      EXPECT_NEAR(w.dWdx, dx, 1e-7 * std::max(1.0, std::abs(dx))) << to_string(s.class_id) << " x=" << x;
      EXPECT_NEAR(w.dWda, da, 1e-7 * std::max(1.0, std::abs(da))) << to_string(s.class_id) << " x=" << x;
    }
}

TEST(EvaluateW, ComplexContinuationAgreesOnTheRealAxis) {
  for (const auto &s : all_specs())
    for (double x : sample_points(s)) {
      auto z = evaluate_W_complex(s, {x, 0.0}, s.a);
      EXPECT_NEAR(z.real(), evaluate_W(s, x), 1e-12 * std::max(1.0, std::abs(z.real())));
      EXPECT_NEAR(z.imag(), 0.0, 1e-12);
    }
}

TEST(PartnerPotentials, Examples) {
  EXPECT_DOUBLE_EQ(partner_potentials(preset_spec(ClassId::IA), 0.0).V_minus, -1.0);
  EXPECT_NEAR(partner_potentials(preset_spec(ClassId::IIA), 1.0).V_minus, 0.0, 1e-15);
  // textbook Morse form for W = 3 - e^{-x}
  auto morse = preset_spec(ClassId::IB);
  for (double x : {-1.0, 0.0, 2.0}) {
    double e = std::exp(-x);
    EXPECT_NEAR(partner_potentials(morse, x).V_minus, 9.0 - 7.0 * e + e * e, 1e-12);
  }
}

TEST(PartnerPotentials, DifferenceIsTwiceHbarWPrime) {
  for (const auto &s : all_specs())
    for (double x : sample_points(s)) {
      auto v = partner_potentials(s, x);
      double dW = oracle::central_diff([&](double t) { return oracle::table_W(s, s.a, t); }, x);
      EXPECT_NEAR(v.V_plus - v.V_minus, 2 * s.hbar * dW, 1e-7 * std::max(1.0, std::abs(dW)));
    }
}

TEST(LevelFunction, FamilyForms) {
  auto morse = preset_spec(ClassId::IB);
  for (double a : {-3.0, -1.5})
    EXPECT_DOUBLE_EQ(g_function(morse, a), -a * a);
  for (auto id : {ClassId::IIB1, ClassId::IIB2, ClassId::IIB3}) {
    auto s = preset_spec(id);
    double lambda = class_constants(s).lambda;
    EXPECT_DOUBLE_EQ(g_function(s, s.a), -lambda * s.a * s.a - s.B * s.B / (s.a * s.a));
  }
  for (auto id : {ClassId::IIIB1, ClassId::IIIB2, ClassId::IIIB3}) {
    auto s = preset_spec(id);
    EXPECT_DOUBLE_EQ(g_function(s, s.a), -class_constants(s).lambda * s.a * s.a);
  }
}

TEST(ClosedFormEnergy, Examples) {
  EXPECT_DOUBLE_EQ(closed_form_energy(preset_spec(ClassId::IA), 3), 6.0);
  EXPECT_DOUBLE_EQ(closed_form_energy(preset_spec(ClassId::IB), 1), 5.0);
  EXPECT_NEAR(closed_form_energy(preset_spec(ClassId::IIB2), 1), 56.0 / 9.0, 1e-14);
  for (const auto &s : all_specs())
    EXPECT_EQ(closed_form_energy(s, 0), 0.0);
}

TEST(ClosedFormEnergy, MatchesTheTableFormulas) {
  for (const auto &s : all_specs()) {
    auto c = bound_state_count(s);
    int top = c.infinite ? 8 : static_cast<int>(c.count);
    for (int n = 0; n <= top; ++n) {
      double e = oracle::table_energy(s, n);
      EXPECT_NEAR(closed_form_energy(s, n), e, 1e-12 * std::max(1.0, std::abs(e))) << to_string(s.class_id);
    }
  }
}

TEST(ClosedFormEnergy, NotBoundBeyondTheCount) {
  auto morse = preset_spec(ClassId::IB);
  try {
    closed_form_energy(morse, 3);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBound);
  }
}

TEST(BoundStateCount, Examples) {
  auto morse = bound_state_count(preset_spec(ClassId::IB));
  EXPECT_FALSE(morse.infinite);
  EXPECT_EQ(morse.count, 2);
  EXPECT_TRUE(bound_state_count(preset_spec(ClassId::IA)).infinite);
  EXPECT_TRUE(bound_state_count(make_spec(ClassId::IA, {std::nullopt, std::nullopt, 7.5})).infinite);
  EXPECT_EQ(bound_state_count(preset_spec(ClassId::IIB2)).count, 1);
}

TEST(BoundStateCount, EckartWithDegenerateFirstLevelIsRejected) {
  // E_1 = 1 - 4 + 4 - 1 = 0 does not rise above the ground state
  auto s = make_spec(ClassId::IIB3, {1.0, 2.0, std::nullopt});
  EXPECT_DOUBLE_EQ(oracle::table_energy(s, 1), 0.0);
  EXPECT_FALSE(bound_state_count(s).admits(1));
  EXPECT_THROW(closed_form_energy(s, 1), Error);
}

TEST(BoundStateCount, AdmittedLevelsIncreaseStrictly) {
  for (const auto &s : all_specs()) {
    auto c = bound_state_count(s);
    int top = c.infinite ? 10 : static_cast<int>(c.count);
    for (int n = 1; n <= top; ++n)
      EXPECT_GT(closed_form_energy(s, n), closed_form_energy(s, n - 1)) << to_string(s.class_id);
  }
}

TEST(Presets, ZeroOfWIsInsideTheDomain) {
  for (const auto &s : all_specs()) {
    double x0 = find_W_zero(s);
    EXPECT_TRUE(s.domain.contains(x0));
    EXPECT_NEAR(evaluate_W(s, x0), 0.0, 1e-10);
  }
}

TEST(Basis, SatisfiesTheClassEquations) {
  for (auto id : all_classes)
    for (const auto &s : {preset_spec(id), make_spec(id, alternate_params(id))}) {
      const auto k = class_constants(s);
      auto f1 = [&](double x) { return evaluate_basis(s, x).f1; };
      auto f2 = [&](double x) { return evaluate_basis(s, x).f2; };
      for (double x : sample_points(s)) {
        const auto b = evaluate_basis(s, x);
        const double d1 = oracle::central_diff(f1, x, 1e-4);
        const double d2 = oracle::central_diff(f2, x, 1e-4);
        switch (family(id)) {
        case 1:
          EXPECT_NEAR(d2, k.alpha * b.f2 - k.epsilon, 1e-10) << to_string(id) << " x=" << x;
          break;
        case 2:
          EXPECT_NEAR(d1, b.f1 * b.f1 - k.lambda, 1e-10) << to_string(id) << " x=" << x;
          break;
        default:
          EXPECT_NEAR(d1, b.f1 * b.f1 - k.lambda, 1e-10) << to_string(id) << " x=" << x;
          EXPECT_NEAR(d2, b.f1 * b.f2 - k.epsilon, 1e-10) << to_string(id) << " x=" << x;
        }
      }
    }
}

TEST(EvaluateW, ChangesSignOnce) {
  for (auto id : all_classes)
    for (const auto &s : {preset_spec(id), make_spec(id, alternate_params(id))}) {
      double lo = s.domain.lower, hi = s.domain.upper;
      if (!std::isfinite(lo))
        lo = -30.0;
      if (!std::isfinite(hi))
        hi = 80.0;
      const int n = 20001;
      int changes = 0;
      double prev = 0.0;
      for (int i = 1; i < n - 1; ++i) {
        const double w = evaluate_W(s, lo + (hi - lo) * i / (n - 1));
        if (w != 0.0 && prev != 0.0 && (w > 0) != (prev > 0))
          ++changes;
        if (w != 0.0)
          prev = w;
      }
      EXPECT_EQ(changes, 1) << to_string(id);
    }
}

TEST(ClosedFormEnergy, GroundLevelIsExactlyZero) {
  for (auto id : all_classes)
    for (double h : {0.5, 1.0, 2.0}) {
      EXPECT_EQ(closed_form_energy(preset_spec(id, h), 0), 0.0) << to_string(id);
      Params p = alternate_params(id);
      p.hbar = h;
      EXPECT_EQ(closed_form_energy(make_spec(id, p), 0), 0.0) << to_string(id);
    }
}
