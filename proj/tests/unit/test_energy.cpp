#include "nehari/energy.hpp"
#include "nehari/error.hpp"
#include "nehari/fiber.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace nehari {
namespace {

const Exponents kEx{0.5, 1.5, 1.5};

GridPair random_positive_pair(const GridSpec& g, std::mt19937_64& rng, double lo = 0.0) {
  std::uniform_real_distribution<double> U(lo, 1.0);
  GridPair p{GridFunction::Zero(g.nodes()), GridFunction::Zero(g.nodes())};
  for (int i = 1; i < g.cells; ++i) {
    p.u[i] = U(rng);
    p.w[i] = U(rng);
  }
  return p;
}

class EnergyTest : public ::testing::Test {
 protected:
  ProblemSpec spec_ = [] {
    ProblemSpec s;
    s.grid.cells = 32;
    return s;
  }();
  Problem problem_ = validate_params(spec_);
  GagliardoForm form_ = assemble_form(spec_.grid, spec_.s);
};

TEST_F(EnergyTest, ZeroAndNonpositivePairs) {
  const GridPair z = zero_pair(spec_.grid);
  EXPECT_EQ(K_value(problem_, z), 0.0);
  EXPECT_EQ(B_value(problem_, z), 0.0);
  EXPECT_EQ(energy(problem_, form_, z).J, 0.0);
  GridPair neg{-GridFunction::Ones(33), -GridFunction::Ones(33)};
  EXPECT_EQ(K_value(problem_, neg), 0.0);
  EXPECT_EQ(B_value(problem_, neg), 0.0);
}

TEST(KValue, TrapezoidClosedForm) {
  // f = g = 1, λ = μ = 1, u = w = 4 at the 7 interior nodes of h = 1/4:
  // K = 2 * 7 * h * 4^{1/2} = 7.
  ProblemSpec s;
  s.grid.cells = 8;
  s.lambda = s.mu = 1.0;
  const Problem p = validate_params(s);
  GridPair c{GridFunction::Constant(9, 4.0), GridFunction::Constant(9, 4.0)};
  c.u[0] = c.u[8] = c.w[0] = c.w[8] = 0.0;
  EXPECT_NEAR(K_value(p, c), 7.0, 1e-14);
}

TEST_F(EnergyTest, CouplingNegativeWhereBIsNegative) {
  GridPair p = zero_pair(spec_.grid);
  for (int i = 1; i < spec_.grid.cells; ++i)
    if (std::abs(spec_.grid.unit_x(i)) > 0.6) p.u[i] = p.w[i] = 1.0;
  EXPECT_LT(B_value(problem_, p), 0.0);

  ProblemSpec s = spec_;
  s.b = WeightSpec::constant(0.0);
  const Problem flat = sample_problem(s);
  EXPECT_EQ(B_value(flat, p), 0.0);
}

TEST(EnergyFromStats, Arithmetic) {
  const PairStats st{1.0, 0.1, 0.1};
  EXPECT_NEAR(energy_from_stats(st, kEx), 0.5 - 0.2 - 0.1 / 3.0, 1e-15);
  const FiberValues fv = phi(st, kEx, 1.0);
  EXPECT_NEAR(fv.dphi, 1.0 - 0.1 - 0.1, 1e-15);
  EXPECT_NEAR(fv.ddphi, 0.85, 1e-15);
  EXPECT_THROW(phi(st, kEx, 0.0), Error);
}

TEST_F(EnergyTest, FiberMatchesScaledEnergy) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> T(0.05, 5.0);
  for (int k = 0; k < 20; ++k) {
    const GridPair p = random_positive_pair(spec_.grid, rng);
    const double t = T(rng);
    const double direct = energy(problem_, form_, p.scaled(t)).J;
    const double fiber = phi(problem_, form_, p, t).phi;
    EXPECT_NEAR(fiber, direct, 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_F(EnergyTest, SingularTermDominatesNearZero) {
  std::mt19937_64 rng(8);
  const GridPair p = random_positive_pair(spec_.grid, rng);
  const double j3 = energy(problem_, form_, p.scaled(1e-3)).J;
  const double j2 = energy(problem_, form_, p.scaled(1e-2)).J;
  EXPECT_LT(j3, 0.0);
  EXPECT_LT(j2, 0.0);
  EXPECT_LT(j2, j3);  // still decreasing: the fiber minimum lies further out
}

TEST_F(EnergyTest, Homogeneity) {
  std::mt19937_64 rng(9);
  const GridPair p = random_positive_pair(spec_.grid, rng);
  for (double t : {0.3, 2.0, 7.5}) {
    const GridPair tp = p.scaled(t);
    EXPECT_NEAR(K_value(problem_, tp), std::pow(t, 0.5) * K_value(problem_, p),
                1e-13 * K_value(problem_, tp));
    EXPECT_NEAR(B_value(problem_, tp), std::pow(t, 3.0) * B_value(problem_, p),
                1e-13 * std::abs(B_value(problem_, tp)));
  }
}

TEST_F(EnergyTest, SecondDerivativeFormsAgreeOnManifold) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 10; ++k) {
    const GridPair p = random_positive_pair(spec_.grid, rng);
    const PairStats st = pair_stats(problem_, form_, p);
    const FiberRoots roots = project(st, kEx, 1e-14);
    for (double t : {roots.t1, roots.t2}) {
      if (!std::isfinite(t)) continue;
      const PairStats m = pair_stats(problem_, form_, p.scaled(t));
      const double tau = 1e-8 * m.scale();
      ASSERT_LE(std::abs(m.norm2 - m.K - m.B), tau);
      const double via_B = 1.5 * m.norm2 - 2.5 * m.B;
      const double via_K = -1.0 * m.norm2 + 2.5 * m.K;
      EXPECT_NEAR(via_B, via_K, 10 * tau * std::max(1.0, m.norm2));
      EXPECT_NEAR(phi(m, kEx, 1.0).ddphi, via_B, 10 * tau * std::max(1.0, m.norm2));
    }
  }
}

TEST_F(EnergyTest, SmoothedEnergyAgreesAboveFloor) {
  std::mt19937_64 rng(12);
  const GridPair p = random_positive_pair(spec_.grid, rng, 0.1);
  EXPECT_NEAR(smoothed_energy(problem_, form_, p, 1e-8), energy(problem_, form_, p).J, 1e-14);
  EXPECT_THROW(smoothed_energy(problem_, form_, p, 0.0), Error);
  EXPECT_THROW(energy_gradient(problem_, form_, p, -1.0), Error);
}

TEST_F(EnergyTest, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(13);
  GridPair p = random_positive_pair(spec_.grid, rng, 0.05);
  const double eps = 1e-8;
  const GridPair g = energy_gradient(problem_, form_, p, eps);
  std::uniform_int_distribution<int> node(1, spec_.grid.cells - 1);
  const double step = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const int i = node(rng);
    const bool on_u = k % 2 == 0;
    GridFunction& v = on_u ? p.u : p.w;
    const double saved = v[i];
    v[i] = saved + step;
    const double up = smoothed_energy(problem_, form_, p, eps);
    v[i] = saved - step;
    const double down = smoothed_energy(problem_, form_, p, eps);
    v[i] = saved;
    const double fd = (up - down) / (2 * step);
    const double an = on_u ? g.u[i] : g.w[i];
    EXPECT_NEAR(an, fd, 1e-5 * std::max(std::abs(fd), 1e-3)) << i;
  }
}

TEST_F(EnergyTest, GradientIsPureFormWithoutSources) {
  ProblemSpec s = spec_;
  s.lambda = s.mu = 0.0;
  s.b = WeightSpec::constant(0.0);
  const Problem bare = sample_problem(s);
  std::mt19937_64 rng(14);
  const GridPair p = random_positive_pair(spec_.grid, rng);
  const GridPair g = energy_gradient(bare, form_, p, 1e-8);
  EXPECT_LE((g.u - apply_form(form_, p.u)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((g.w - apply_form(form_, p.w)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST_F(EnergyTest, GradientSymmetricUnderSwap) {
  std::mt19937_64 rng(15);
  GridPair p = random_positive_pair(spec_.grid, rng);
  p.w = p.u;
  const GridPair g = energy_gradient(problem_, form_, p, 1e-8);
  EXPECT_TRUE(g.u == g.w);
}

}  // namespace
}  // namespace nehari
