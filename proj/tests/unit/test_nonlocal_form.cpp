#include "nehari/detail/kernel_integrals.hpp"
#include "nehari/error.hpp"
#include "nehari/nonlocal_form.hpp"
#include "nehari/verify.hpp"

#include <gtest/gtest.h>
#include <omp.h>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

namespace nehari {
namespace {

GridFunction random_x0(const GridSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  GridFunction u = GridFunction::Zero(g.nodes());
  for (int i = 1; i < g.cells; ++i) u[i] = U(rng);
  return u;
}

GridFunction hat(const GridSpec& g) {
  GridFunction u = GridFunction::Zero(g.nodes());
  for (int i = 0; i <= g.cells; ++i) u[i] = 1.0 - std::abs(g.unit_x(i));
  return u;
}

TEST(GaussRule, ExactForDegree2nMinus1) {
  for (int n : {1, 2, 4, 8, 10}) {
    const auto rule = detail::gauss_legendre_unit(n);
    double sum = 0.0, moment = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += rule.weights[k];
      moment += rule.weights[k] * std::pow(rule.nodes[k], 2 * n - 1);
    }
    EXPECT_NEAR(sum, 1.0, 1e-14) << n;
    EXPECT_NEAR(moment, 1.0 / (2 * n), 1e-14) << n;
  }
}

TEST(KernelIntegrals, SameCellCoefficient) {
  // 2 / ((2 - 2s)(3 - 2s)) at h = 1, s = 0.4
  EXPECT_NEAR(detail::same_cell_coefficient(1.0, 0.4), 0.75757575757575757, 1e-15);
  EXPECT_NEAR(detail::same_cell_coefficient(0.5, 0.4),
              std::pow(0.5, 2.2) * 0.75757575757575757, 1e-15);
}

TEST(KernelIntegrals, CornerMomentsMatchHighPrecisionQuadrature) {
  const auto m = detail::corner_moments(0.4);
  EXPECT_NEAR(m.m20, 0.29923065058109750826, 1e-14);
  EXPECT_NEAR(m.m11, 0.19220749714392901204, 1e-14);
}

TEST(KernelIntegrals, BlocksAnnihilateConstantsAcrossPairs) {
  // Equal nodal values on two interacting cells carry no difference energy.
  for (int offset : {1, 2, 5}) {
    const auto B = offset == 1 ? detail::adjacent_cell_block(0.1, 0.3)
                               : detail::separated_cell_block(0.1, 0.3, offset);
    for (int a = 0; a < 4; ++a) {
      double row = 0.0;
      for (int b = 0; b < 4; ++b) row += B[a][b];
      EXPECT_NEAR(row, 0.0, 1e-12) << offset;
    }
  }
}

TEST(AssembleForm, SymmetricAndPositiveDefinite) {
  GridSpec g{-1.0, 1.0, 32};
  const GagliardoForm F = assemble_form(g, 0.4);
  const auto& G = F.matrix();
  ASSERT_EQ(G.rows(), 31);
  EXPECT_EQ((G - G.transpose()).cwiseAbs().maxCoeff(), 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
}

TEST(AssembleForm, ParallelMatchesSerialReference) {
  for (double s : {0.2, 0.4, 0.49}) {
    GridSpec g{-1.0, 3.0, 24};
    const auto P = assemble_form(g, s).matrix();
    const auto S = assemble_form_serial(g, s).matrix();
    EXPECT_LE((P - S).cwiseAbs().maxCoeff(), 1e-13 * S.cwiseAbs().maxCoeff()) << s;
  }
}

TEST(AssembleForm, IndependentOfThreadCount) {
  GridSpec g{-1.0, 1.0, 40};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = assemble_form(g, 0.35).matrix();
  omp_set_num_threads(3);
  const auto three = assemble_form(g, 0.35).matrix();
  omp_set_num_threads(saved);
  EXPECT_TRUE(one == three);
}

TEST(AssembleForm, ScalingIsQuadratic) {
  GridSpec g{-1.0, 1.0, 16};
  const GagliardoForm F = assemble_form(g, 0.4);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = random_x0(g, rng);
    const double a = seminorm_sq(F, u);
    EXPECT_NEAR(seminorm_sq(F, 2.0 * u), 4.0 * a, 1e-14 * a);
  }
}

TEST(AssembleForm, AgreesWithBruteForceOracle) {
  GridSpec g{-1.0, 1.0, 16};
  const GagliardoForm F = assemble_form(g, 0.4);
  const GridFunction h = hat(g);
  EXPECT_NEAR(brute_force_norm(g, 0.4, h, 8), seminorm_sq(F, h), 0.02 * seminorm_sq(F, h));
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = random_x0(g, rng);
    const double a = seminorm_sq(F, u);
    EXPECT_NEAR(brute_force_norm(g, 0.4, u, 8), a, 0.02 * a) << k;
  }
}

TEST(AssembleForm, OracleGapShrinksUnderRefinement) {
  GridSpec g{-1.0, 1.0, 16};
  const GagliardoForm F = assemble_form(g, 0.4);
  std::mt19937_64 rng(5);
  const GridFunction u = random_x0(g, rng);
  const double a = seminorm_sq(F, u);
  const double e4 = std::abs(brute_force_norm(g, 0.4, u, 4) - a);
  const double e16 = std::abs(brute_force_norm(g, 0.4, u, 16) - a);
  EXPECT_LT(e16, e4);
  const GridFunction h = hat(g);
  const double b = seminorm_sq(F, h);
  EXPECT_LE(std::abs(brute_force_norm(g, 0.4, h, 16) - b), std::abs(brute_force_norm(g, 0.4, h, 4) - b));
}

TEST(ExteriorKernel, SymmetricOnSymmetricGrid) {
  GridSpec g{-1.0, 1.0, 20};
  const Eigen::VectorXd k = exterior_kernel(g, 0.3);
  ASSERT_EQ(k.size(), 19);
  for (int i = 0; i < 19; ++i) EXPECT_NEAR(k[i], k[18 - i], 1e-14);
  // kappa(0) = 2 * 1 / (2s)
  EXPECT_NEAR(k[9], 1.0 / 0.3, 1e-14);
}

TEST(Riesz, SolvesInteriorSystem) {
  GridSpec g{-1.0, 1.0, 24};
  const GagliardoForm F = assemble_form(g, 0.3);
  std::mt19937_64 rng(2);
  const GridFunction rhs = random_x0(g, rng);
  const GridFunction x = F.riesz(rhs);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(x[24], 0.0);
  const GridFunction back = apply_form(F, x);
  EXPECT_LE((back - rhs).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Form, RejectsMismatchedGridFunctions) {
  GridSpec g{-1.0, 1.0, 8};
  const GagliardoForm F = assemble_form(g, 0.4);
  try {
    seminorm_sq(F, GridFunction::Zero(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
  EXPECT_THROW(assemble_form(g, 0.6), Error);
}

}  // namespace
}  // namespace nehari
