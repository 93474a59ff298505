#include "nehari/nonlocal_form.hpp"

#include "nehari/detail/kernel_integrals.hpp"
#include "nehari/error.hpp"

#include <cmath>
#include <vector>

namespace nehari {

namespace {

void check_order(double s) {
  if (!(s > 0.0 && s < 0.5))
    throw Error(ErrorCode::InvalidOrder, "the 1-D form needs s in (0, 1/2)");
}

}  // namespace

GagliardoForm::GagliardoForm(GridSpec grid, double s, Eigen::MatrixXd matrix)
    : grid_(grid),
      s_(s),
      matrix_(std::move(matrix)),
      quad_weights_(trapezoid_weights(grid)),
      llt_(matrix_) {}

GridFunction GagliardoForm::riesz(const GridFunction& rhs) const {
  check_compatible(*this, rhs);
  const int n = grid_.interior();
  GridFunction out = GridFunction::Zero(grid_.nodes());
  out.segment(1, n) = llt_.solve(rhs.segment(1, n));
  return out;
}

void check_compatible(const GagliardoForm& form, const GridFunction& u) {
  if (u.size() != form.grid().nodes())
    throw Error(ErrorCode::GridMismatch, "expected " + std::to_string(form.grid().nodes()) +
                                             " nodal values, got " + std::to_string(u.size()));
}

Eigen::VectorXd exterior_kernel(const GridSpec& grid, double s) {
  check_order(s);
  grid.check();
  Eigen::VectorXd kappa(grid.interior());
  for (int i = 1; i < grid.cells; ++i) {
    const double x = grid.x(i);
    kappa[i - 1] =
        (std::pow(grid.right - x, -2.0 * s) + std::pow(x - grid.left, -2.0 * s)) / (2.0 * s);
  }
  return kappa;
}

GagliardoForm assemble_form(const GridSpec& grid, double s) {
  check_order(s);
  grid.check();
  const int N = grid.cells;
  const int n = grid.interior();
  const double h = grid.h();

  // On a uniform grid the pair block depends only on the cell offset.
  const detail::Local2 same = detail::same_cell_block(h, s);
  const detail::Local4 adjacent = detail::adjacent_cell_block(h, s);
  std::vector<detail::Local4> by_offset(2 * N - 1);
#pragma omp parallel for schedule(static)
  for (int off = -(N - 1); off <= N - 1; ++off) {
    if (std::abs(off) >= 2) by_offset[off + N - 1] = detail::separated_cell_block(h, s, off);
  }
  std::vector<detail::Local2> exterior(N);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < N; ++c) exterior[c] = detail::exterior_cell_block(h, s, c, N);

  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 1; i < N; ++i) {
    const int row = i - 1;
    auto add = [&](int node, double v) {
      if (node >= i && node < N) G(row, node - 1) += v;
    };
    for (int I = i - 1; I <= i; ++I) {
      const int a = (I == i - 1) ? 1 : 0;
      for (int b = 0; b < 2; ++b) {
        add(I + b, same[a][b]);
        add(I + b, 2.0 * exterior[I][a][b]);
      }
      for (int J = 0; J < N; ++J) {
        if (J == I) continue;
        const int off = J - I;
        const detail::Local4& blk = std::abs(off) == 1 ? adjacent : by_offset[off + N - 1];
        add(I, blk[a][0]);
        add(I + 1, blk[a][1]);
        add(J, blk[a][2]);
        add(J + 1, blk[a][3]);
      }
    }
  }
  G.triangularView<Eigen::StrictlyLower>() = G.transpose();
  return GagliardoForm(grid, s, std::move(G));
}

GagliardoForm assemble_form_serial(const GridSpec& grid, double s) {
  check_order(s);
  grid.check();
  const int N = grid.cells;
  const int n = grid.interior();
  const double h = grid.h();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  auto scatter = [&](int na, int nb, double v) {
    if (na > 0 && na < N && nb > 0 && nb < N) G(na - 1, nb - 1) += v;
  };

  const detail::Local2 same = detail::same_cell_block(h, s);
  for (int I = 0; I < N; ++I) {
    const detail::Local2 ext = detail::exterior_cell_block(h, s, I, N);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) scatter(I + a, I + b, same[a][b] + 2.0 * ext[a][b]);
  }
  for (int I = 0; I < N; ++I) {
    for (int J = I + 1; J < N; ++J) {
      const detail::Local4 blk = (J - I == 1) ? detail::adjacent_cell_block(h, s)
                                              : detail::separated_cell_block(h, s, J - I);
      const int nodes[4] = {I, I + 1, J, J + 1};
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) scatter(nodes[a], nodes[b], blk[a][b]);
    }
  }
  return GagliardoForm(grid, s, std::move(G));
}

double seminorm_sq(const GagliardoForm& form, const GridFunction& u) {
  check_compatible(form, u);
  const int n = form.grid().interior();
  const auto v = u.segment(1, n);
  return v.dot(form.matrix() * v);
}

double pair_norm_sq(const GagliardoForm& form, const GridPair& p) {
  return seminorm_sq(form, p.u) + seminorm_sq(form, p.w);
}

GridFunction apply_form(const GagliardoForm& form, const GridFunction& u) {
  check_compatible(form, u);
  const int n = form.grid().interior();
  GridFunction out = GridFunction::Zero(form.grid().nodes());
  out.segment(1, n) = form.matrix() * u.segment(1, n);
  return out;
}

}  // namespace nehari
