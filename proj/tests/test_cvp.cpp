#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "lpsieve/covering.hpp"
#include "lpsieve/cvp.hpp"
#include "lpsieve/errors.hpp"
#include "lpsieve/oracle.hpp"
#include "support.hpp"

using namespace lpsieve;
namespace ts = testing_support;

namespace {

constexpr double kPi = std::numbers::pi;

SolverConfig quick(std::uint64_t seed, unsigned retries = 2) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.retries = retries;
  return cfg;
}

RatVec half_integers(std::initializer_list<long> xs, long den) {
  RatVec v;
  for (long x : xs) {
    v.emplace_back(x, den);
    v.back().canonicalize();
  }
  return v;
}

// Closest point of the boundary of r B_p^2 to x, by a dense scan of the
// parametrization theta -> r (sgn cos |cos|^{2/p}, sgn sin |sin|^{2/p}).
std::array<double, 2> boundary_scan(std::array<double, 2> x, double p, double r) {
  std::array<double, 2> best{};
  double best_d = HUGE_VAL;
  int const steps = 400000;
  for (int i = 0; i < steps; ++i) {
    double const th = 2 * kPi * i / steps;
    double const c = std::cos(th);
    double const s = std::sin(th);
    std::array<double, 2> const z{r * std::copysign(std::pow(std::fabs(c), 2 / p), c),
                                  r * std::copysign(std::pow(std::fabs(s), 2 / p), s)};
    double const d = std::hypot(x[0] - z[0], x[1] - z[1]);
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  }
  return best;
}

double l2_distance_to_ball(std::vector<double> const& w, NormKind const& p) {
  auto const proj = project_to_lp_ball(w, p, 1.0);
  double d = 0;
  for (std::size_t i = 0; i < w.size(); ++i) d += (w[i] - proj[i]) * (w[i] - proj[i]);
  return std::sqrt(d);
}

}  // namespace

TEST(KannanEmbed, BlockStructure) {
  RatVec const t = half_integers({1, 1}, 2);
  EmbeddedBasis const e = kannan_embed(Basis::identity(2), t, Scalar(1));
  EXPECT_EQ(e.mu_over_n, Scalar(1, 2));
  ASSERT_EQ(e.base.dim(), 3u);
  EXPECT_EQ(e.base.column(2), (RatVec{Scalar(1, 2), Scalar(1, 2), Scalar(1, 2)}));
  EXPECT_EQ(e.base.column(0), (RatVec{Scalar(1), Scalar(0), Scalar(0)}));
  EXPECT_EQ(e.base.determinant(), Scalar(1, 2));
  RatVec const v = e.base.apply(IntVec{-1, 0, 1});
  EXPECT_EQ(v[2], e.mu_over_n);
  EXPECT_THROW(kannan_embed(Basis::identity(2), t, Scalar(0)), std::invalid_argument);
}

TEST(KannanEmbed, LatticeTargetGivesShortCorner) {
  std::mt19937_64 gen(139);
  Basis const b(ts::random_full_rank(gen, 3, -5, 5));
  RatVec const t = b.apply(IntVec{2, -1, 4});
  EmbeddedBasis const e = kannan_embed(b, t, Scalar(3));
  RatVec const v = e.base.apply(IntVec{-2, 1, -4, 1});
  EXPECT_EQ(v, (RatVec{Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
  EXPECT_EQ(e.base.determinant(), b.determinant() * e.mu_over_n);
}

TEST(DistanceGrid, LatticeTargetIsExactHit) {
  std::mt19937_64 gen(149);
  Basis const b = ts::random_reduced(gen, 3);
  RatVec const t = b.apply(IntVec{1, 0, -2});
  DistanceGrid const g = distance_grid(b, t, NormKind(2));
  ASSERT_TRUE(g.exact_hit.has_value());
  EXPECT_EQ(g.exact_hit->coeffs(), (IntVec{1, 0, -2}));
  EXPECT_TRUE(g.guesses.empty());
}

TEST(DistanceGrid, UnitCellCenterWindow) {
  DistanceGrid const g = distance_grid(Basis::identity(2), half_integers({1, 1}, 2), NormKind(2));
  ASSERT_FALSE(g.exact_hit);
  EXPECT_LE(g.lower.get_d(), std::sqrt(0.5));
  EXPECT_GE(g.upper.get_d(), std::sqrt(0.5));
  for (std::size_t i = 1; i < g.guesses.size(); ++i) {
    EXPECT_EQ(g.guesses[i], g.guesses[i - 1] * Scalar(3, 2));
  }
}

TEST(DistanceGrid, BracketsOracleDistance) {
  std::mt19937_64 gen(151);
  for (NormKind const& p : {NormKind(1), NormKind(2), NormKind(3), NormKind::infinity()}) {
    for (int trial = 0; trial < 10; ++trial) {
      Basis const b = ts::random_reduced(gen, 4);
      RatVec const t = ts::random_target(gen, 4, 6, 7);
      DistanceGrid const g = distance_grid(b, t, p);
      if (g.exact_hit) continue;
      OracleAnswer const o = exact_cvp(b, t, p);
      double const l2 = std::sqrt(squared_l2(subtract(t, o.best.coords())).get_d());
      EXPECT_LE(g.lower.get_d(), std::min(o.value, l2) * (1 + 1e-12));
      if (p.at_least_two()) {
        EXPECT_GE(g.upper.get_d(), l2 * (1 - 1e-12));
      } else {
        EXPECT_GE(g.upper.get_d(), o.value * (1 - 1e-12));
      }
      EXPECT_LE(g.guesses.size(), 200u);
    }
  }
}

TEST(DistanceGrid, TranslationInvariant) {
  std::mt19937_64 gen(157);
  Basis const b = ts::random_reduced(gen, 3);
  RatVec const t = ts::random_target(gen, 3);
  RatVec const u = b.apply(IntVec{5, -7, 2});
  RatVec shifted = t;
  for (std::size_t i = 0; i < 3; ++i) shifted[i] += u[i];
  EXPECT_EQ(distance_grid(b, t, NormKind(2)).guesses,
            distance_grid(b, shifted, NormKind(2)).guesses);
}

TEST(ProjectToLpBall, Examples) {
  NormKind const one(1);
  std::vector<double> const inside{0.2, -0.3};
  EXPECT_EQ(project_to_lp_ball(inside, one, 1.0), inside);
  auto const a = project_to_lp_ball(std::vector<double>{2.0, 0.0}, one, 1.0);
  EXPECT_NEAR(a[0], 1.0, 1e-12);
  EXPECT_NEAR(a[1], 0.0, 1e-12);
  auto const b = project_to_lp_ball(std::vector<double>{1.0, 1.0}, one, 1.0);
  EXPECT_NEAR(b[0], 0.5, 1e-12);
  EXPECT_NEAR(b[1], 0.5, 1e-12);
  EXPECT_NEAR(std::hypot(1 - b[0], 1 - b[1]), std::sqrt(0.5), 1e-12);
  auto const c = project_to_lp_ball(std::vector<double>{3.0, 4.0}, NormKind(2), 1.0);
  EXPECT_NEAR(c[0], 0.6, 1e-12);
  EXPECT_THROW(project_to_lp_ball(inside, NormKind(3), 1.0), std::invalid_argument);
}

TEST(ProjectToLpBall, IntermediateExponentMatchesBoundaryScan) {
  NormKind const p = NormKind::parse("3/2");
  std::mt19937_64 gen(163);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 12; ++trial) {
    std::array<double, 2> const x{u(gen), u(gen)};
    double const r = 0.5 + trial * 0.1;
    auto const z = project_to_lp_ball(std::vector<double>{x[0], x[1]}, p, r);
    if (lp_norm(std::vector<double>{x[0], x[1]}, p) <= r) {
      EXPECT_EQ(z[0], x[0]);
      continue;
    }
    auto const ref = boundary_scan(x, 1.5, r);
    double const dz = std::hypot(x[0] - z[0], x[1] - z[1]);
    double const dr = std::hypot(x[0] - ref[0], x[1] - ref[1]);
    EXPECT_LE(dz, dr + 1e-9);
    EXPECT_NEAR(dz, dr, 1e-6);
    EXPECT_NEAR(lp_norm(z, p), r, 1e-9);
  }
}

TEST(CoverSampler, AcceptanceMatchesPlanarSteinerArea) {
  NormKind const one(1);
  double const r = cover_radius(1.0, one, 2);
  EXPECT_NEAR(r, 1 / std::sqrt(2.0), 1e-15);
  RatVec const t = half_integers({3, -1}, 4);
  Rng rng = make_rng(17, 0);
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  while (attempts < 100000) {
    CoverSample const s = sample_cover_target(t, one, 1.0, 2.0, rng);
    attempts += s.attempts;
    ++accepted;
    std::vector<double> w(2);
    for (std::size_t i = 0; i < 2; ++i) w[i] = Scalar(s.point[i] - t[i]).get_d() / 2.0;
    EXPECT_LE(l2_distance_to_ball(w, one), r + 1e-9);
  }
  double const area = 2 + 4 * std::sqrt(2.0) * r + kPi * r * r;
  double const box = 4 * (1 + r) * (1 + r);
  EXPECT_NEAR(static_cast<double>(accepted) / attempts, area / box, 0.05 * area / box);
}

TEST(CoverSampler, VanishingRadiusStaysInLpBall) {
  NormKind const p = NormKind::parse("3/2");
  RatVec const t(3);
  Rng rng = make_rng(19, 0);
  for (int i = 0; i < 500; ++i) {
    CoverSample const s = sample_cover_target(t, p, 1e-12, 1.5, rng);
    EXPECT_LE(lp_norm(s.point, p), 1.5 * (1 + 1e-9));
  }
}

TEST(CoverSampler, BudgetGuard) {
  Rng rng = make_rng(23, 0);
  RatVec const t(12);
  EXPECT_THROW(sample_cover_target(t, NormKind(1), 0.0, 1.0, rng, 5), RejectionBudgetExceeded);
}

TEST(ApproxCvp, LatticeTargetIsDegenerate) {
  std::mt19937_64 gen(167);
  Basis const b(ts::random_full_rank(gen, 3, -6, 6));
  RatVec const t = b.apply(IntVec{4, 1, -3});
  for (NormKind const& p : {NormKind(1), NormKind(2), NormKind::infinity()}) {
    SolveReport const r = solve_cvp({b, t, p, quick(0)});
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.achieved, 0.0);
    EXPECT_EQ(r.best.coords(), t);
    EXPECT_EQ(r.best.coeffs(), (IntVec{4, 1, -3}));
  }
}

TEST(ApproxCvp, RankOneIsDegenerate) {
  Basis const b(std::vector<RatVec>{{Scalar(3)}});
  SolveReport const r = solve_cvp({b, RatVec{Scalar(7)}, NormKind(2), quick(0)});
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.best.coeffs(), (IntVec{2}));
  EXPECT_EQ(*r.achieved_exact, 1);
}

TEST(ApproxCvp, UnitCellCenterInfinity) {
  RatVec const t = half_integers({1, 1}, 2);
  SolveReport const r = approx_cvp_high({Basis::identity(2), t, NormKind::infinity(), quick(0)});
  double const opt = exact_cvp(Basis::identity(2), t, NormKind::infinity()).value;
  EXPECT_DOUBLE_EQ(opt, 0.5);
  EXPECT_TRUE(r.best.verify(Basis::identity(2)));
  EXPECT_LE(r.achieved, r.guarantee * opt);
  EXPECT_DOUBLE_EQ(r.achieved, lp_norm(subtract(t, r.best.coords()), NormKind::infinity()));
}

TEST(ApproxCvp, EuclideanWithinConfiguredFactor) {
  std::mt19937_64 gen(173);
  for (int trial = 0; trial < 6; ++trial) {
    Basis const b = ts::random_reduced(gen, 3);
    RatVec const t = ts::random_target(gen, 3);
    SolveReport const r = approx_cvp_high({b, t, NormKind(2), quick(trial)});
    double const opt = exact_cvp(b, t, NormKind(2)).value;
    EXPECT_TRUE(r.best.verify(b));
    EXPECT_LE(r.achieved, r.c * opt * (1 + 1e-12));
    ASSERT_EQ(r.history.size(), 2u);
    EXPECT_LE(r.history[1], r.history[0]);
  }
}

TEST(ApproxCvp, TranslationEquivariantHigh) {
  std::mt19937_64 gen(179);
  for (NormKind const& p : {NormKind(2), NormKind::infinity()}) {
    Basis const b(ts::random_full_rank(gen, 3, -6, 6));
    RatVec const t = ts::random_target(gen, 3);
    IntVec const uc{3, -2, 5};
    RatVec const u = b.apply(uc);
    RatVec shifted = t;
    for (std::size_t i = 0; i < 3; ++i) shifted[i] += u[i];
    SolveReport const r1 = approx_cvp_high({b, t, p, quick(2)});
    SolveReport const r2 = approx_cvp_high({b, shifted, p, quick(2)});
    EXPECT_EQ(*r1.achieved_exact, *r2.achieved_exact);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r2.best.coeffs()[i] - uc[i], r1.best.coeffs()[i]);
  }
}

TEST(ApproxCvp, LowExponentAxisTarget) {
  RatVec const t{Scalar(2, 5), Scalar(0)};
  SolveReport const r = approx_cvp_low({Basis::identity(2), t, NormKind(1), quick(0, 1)});
  double const opt = exact_cvp(Basis::identity(2), t, NormKind(1)).value;
  EXPECT_DOUBLE_EQ(opt, 0.4);
  ASSERT_TRUE(r.accepted_guess.has_value());
  EXPECT_LE(r.achieved, *r.acceptance_bound);
  EXPECT_DOUBLE_EQ(*r.acceptance_bound, r.c * (*r.a_eps + 1) * r.accepted_guess->get_d());
  EXPECT_LE(r.achieved, r.guarantee * opt);
  EXPECT_NEAR(*r.a_eps, solve_a_eps_l1(0.1), 1e-9);
}

TEST(ApproxCvp, LowExponentEnvelopeAndMembership) {
  std::mt19937_64 gen(181);
  for (NormKind const& p : {NormKind(1), NormKind::parse("3/2")}) {
    for (int trial = 0; trial < 3; ++trial) {
      Basis const b = ts::random_reduced(gen, 3);
      RatVec const t = ts::random_target(gen, 3);
      SolverConfig cfg = quick(trial, 1);
      cfg.a = 1.0;
      SolveReport const r = approx_cvp_low({b, t, p, cfg});
      EXPECT_TRUE(r.best.verify(b));
      ASSERT_TRUE(r.acceptance_bound.has_value());
      EXPECT_LE(r.achieved, *r.acceptance_bound);
      EXPECT_DOUBLE_EQ(*r.a_eps, 1.0);
      EXPECT_EQ(r.cover_targets % static_cast<std::size_t>(cover_target_formula(0.1, 3)), 0u);
      EXPECT_LE(r.achieved, r.guarantee * exact_cvp(b, t, p).value * (1 + 1e-12));
    }
  }
}

TEST(ApproxCvp, TranslationEquivariantLow) {
  std::mt19937_64 gen(191);
  Basis const b = ts::random_reduced(gen, 3);
  RatVec const t = ts::random_target(gen, 3);
  IntVec const uc{-1, 4, 2};
  RatVec const u = b.apply(uc);
  RatVec shifted = t;
  for (std::size_t i = 0; i < 3; ++i) shifted[i] += u[i];
  SolverConfig cfg = quick(4, 1);
  cfg.a = 1.0;
  SolveReport const r1 = approx_cvp_low({b, t, NormKind(1), cfg});
  SolveReport const r2 = approx_cvp_low({b, shifted, NormKind(1), cfg});
  EXPECT_EQ(*r1.achieved_exact, *r2.achieved_exact);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r2.best.coeffs()[i] - uc[i], r1.best.coeffs()[i]);
}

TEST(ApproxCvp, ThreadCountDoesNotChangeAnswer) {
  std::mt19937_64 gen(193);
  Basis const b = ts::random_reduced(gen, 3);
  RatVec const t = ts::random_target(gen, 3);
  SolverConfig cfg = quick(6, 1);
  cfg.a = 2.0;
  SolveReport const serial = approx_cvp_low({b, t, NormKind(1), cfg});
  cfg.jobs = 4;
  SolveReport const parallel = approx_cvp_low({b, t, NormKind(1), cfg});
  EXPECT_EQ(serial.best, parallel.best);
  EXPECT_EQ(serial.history, parallel.history);
}

TEST(ApproxCvp, RoutingAndValidation) {
  RatVec const t = half_integers({1, 1}, 3);
  EXPECT_THROW(approx_cvp_high({Basis::identity(2), t, NormKind(1), quick(0)}), std::invalid_argument);
  EXPECT_THROW(approx_cvp_low({Basis::identity(2), t, NormKind(2), quick(0)}), std::invalid_argument);
  EXPECT_THROW(solve_cvp({Basis::identity(2), RatVec(3), NormKind(2), quick(0)}), std::invalid_argument);
}

TEST(ApproxSvpLow, IntegerLatticeL1WithinGuarantee) {
  for (std::size_t n : {2u, 3u}) {
    SolveReport const r = approx_svp_low({Basis::identity(n), NormKind(1), quick(0, 1)});
    EXPECT_FALSE(r.best.is_zero());
    EXPECT_GE(r.achieved, 1.0);
    EXPECT_LE(r.achieved, r.guarantee) << "n=" << n;
  }
}

TEST(ApproxSvpLow, IntegerLatticeL1SmallCover) {
  for (std::size_t n : {2u, 3u, 4u}) {
    SolverConfig cfg = quick(0, 1);
    cfg.a = 1.0;
    SolveReport const r = approx_svp_low({Basis::identity(n), NormKind(1), cfg});
    EXPECT_DOUBLE_EQ(r.achieved, 1.0) << "n=" << n;
  }
}

TEST(ApproxSvpLow, ScaledLatticeScalesNorm) {
  Basis const id = Basis::identity(3);
  SolveReport const r1 = approx_svp_low({id, NormKind(1), quick(8, 1)});
  SolveReport const r3 = approx_svp_low({id.scaled(Scalar(3)), NormKind(1), quick(8, 1)});
  EXPECT_EQ(*r3.achieved_exact, *r1.achieved_exact * 3);
  EXPECT_EQ(r3.best.coeffs(), r1.best.coeffs());
}
