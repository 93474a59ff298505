#include "nehari/detail/kernel_integrals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nehari::detail {

GaussRule gauss_legendre_unit(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre_unit: points must be >= 1");
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const int n = points;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

namespace {

const GaussRule& cached_rule(int n) {
  static const std::array<GaussRule, 17> rules = [] {
    std::array<GaussRule, 17> r;
    for (int k = 1; k <= 16; ++k) r[k] = gauss_legendre_unit(k);
    return r;
  }();
  return rules.at(n);
}

int separated_points(int gap_cells) {
  if (gap_cells <= 2) return 10;
  if (gap_cells == 3) return 8;
  if (gap_cells <= 5) return 6;
  return 4;
}

// \int_cell phi_a phi_b z^{-2s} dz / (2s) with z = x - L on cell [k h, (k+1) h].
Local2 left_exterior_part(double h, double s, int k) {
  const double e = -2.0 * s;
  const double z0 = k * h, z1 = (k + 1) * h;
  double a00 = 0.0, a01 = 0.0, a11 = 0.0;
  if (k < 4) {
    auto moment = [&](int j) {
      const double p = j + e + 1.0;
      return (std::pow(z1, p) - (z0 > 0.0 ? std::pow(z0, p) : 0.0)) / p;
    };
    const double m0 = moment(0), m1 = moment(1), m2 = moment(2);
    a00 = (z1 * z1 * m0 - 2.0 * z1 * m1 + m2) / (h * h);
    a01 = (-z0 * z1 * m0 + (z0 + z1) * m1 - m2) / (h * h);
    a11 = (z0 * z0 * m0 - 2.0 * z0 * m1 + m2) / (h * h);
  } else {
    const GaussRule& g = cached_rule(8);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double t = g.nodes[i];
      const double wk = g.weights[i] * h * std::pow(z0 + t * h, e);
      a00 += wk * (1.0 - t) * (1.0 - t);
      a01 += wk * (1.0 - t) * t;
      a11 += wk * t * t;
    }
  }
  const double c = 1.0 / (2.0 * s);
  return {{{c * a00, c * a01}, {c * a01, c * a11}}};
}

}  // namespace

double same_cell_coefficient(double h, double s) {
  return 2.0 * std::pow(h, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
}

CornerMoments corner_moments(double s) {
  const double p = -1.0 - 2.0 * s;
  // T = \int\int (xi+eta)^{p+2} over the unit square
  const double total = (std::pow(2.0, p + 4.0) - 2.0) / ((p + 3.0) * (p + 4.0));
  // \int_0^1 xi^2 [(xi+1)^{p+1} - xi^{p+1}] / (p+1) dxi
  const double shifted = (std::pow(2.0, p + 4.0) - 1.0) / (p + 4.0) -
                         2.0 * (std::pow(2.0, p + 3.0) - 1.0) / (p + 3.0) +
                         (std::pow(2.0, p + 2.0) - 1.0) / (p + 2.0);
  const double m20 = (shifted - 1.0 / (p + 4.0)) / (p + 1.0);
  const double m11 = 0.5 * (total - 2.0 * m20);
  return {m20, m11};
}

Local2 same_cell_block(double h, double s) {
  // energy = c * m^2 with m = (u1 - u0) / h
  const double c = same_cell_coefficient(h, s) / (h * h);
  return {{{c, -c}, {-c, c}}};
}

Local4 adjacent_cell_block(double h, double s) {
  // energy over I x J and J x I: 2 h^{3-2s} [m20 (m1^2 + m2^2) + 2 m11 m1 m2],
  // m1 = (v1 - v0)/h, m2 = (v3 - v2)/h.
  const CornerMoments cm = corner_moments(s);
  const double scale = 2.0 * std::pow(h, 1.0 - 2.0 * s);
  const double a = scale * cm.m20, b = scale * cm.m11;
  // D = [[-1, 1, 0, 0], [0, 0, -1, 1]], block = D^T [[a, b], [b, a]] D
  const std::array<std::array<double, 4>, 2> D{{{-1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, -1.0, 1.0}}};
  const double Q[2][2] = {{a, b}, {b, a}};
  Local4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double v = 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) v += D[k][i] * Q[k][l] * D[l][j];
      out[i][j] = v;
    }
  return out;
}

Local4 separated_cell_block(double h, double s, int offset) {
  const int gap = std::abs(offset) - 1;
  const GaussRule& g = cached_rule(separated_points(gap));
  const double expo = -1.0 - 2.0 * s;
  const std::size_t n = g.nodes.size();
  Local4 out{};
  for (std::size_t k = 0; k < n; ++k) {
    const double xi = g.nodes[k];
    for (std::size_t l = 0; l < n; ++l) {
      const double eta = g.nodes[l];
      const double dist = std::abs((offset + eta - xi) * h);
      const double wt = 2.0 * g.weights[k] * g.weights[l] * h * h * std::pow(dist, expo);
      const double c[4] = {1.0 - xi, xi, -(1.0 - eta), -eta};
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) out[i][j] += wt * c[i] * c[j];
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) out[i][j] = out[j][i];
  return out;
}

Local2 exterior_cell_block(double h, double s, int cell, int cells) {
  const Local2 left = left_exterior_part(h, s, cell);
  // The right-endpoint part is the mirror image of the left part.
  const Local2 right = left_exterior_part(h, s, cells - 1 - cell);
  return {{{left[0][0] + right[1][1], left[0][1] + right[1][0]},
           {left[1][0] + right[0][1], left[1][1] + right[0][0]}}};
}

}  // namespace nehari::detail
