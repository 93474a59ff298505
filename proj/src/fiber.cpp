#include "nehari/fiber.hpp"

#include "nehari/error.hpp"

#include <cmath>
#include <limits>

namespace nehari {

std::string_view to_string(RootCase c) {
  switch (c) {
    case RootCase::SingleRoot: return "SingleRoot";
    case RootCase::TwoRoots: return "TwoRoots";
    case RootCase::NoAdmissibleRoot: return "NoAdmissibleRoot";
  }
  return "Unknown";
}

std::string_view to_string(MembershipLabel m) {
  switch (m) {
    case MembershipLabel::NPlus: return "NPlus";
    case MembershipLabel::NMinus: return "NMinus";
    case MembershipLabel::NZero: return "NZero";
    case MembershipLabel::OffManifold: return "OffManifold";
  }
  return "Unknown";
}

double psi(const PairStats& st, const Exponents& ex, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveT, "psi needs t > 0");
  const double r = ex.r();
  return std::pow(t, 2.0 - r) * st.norm2 - std::pow(t, 1.0 - r - ex.q) * st.K - st.B;
}

double psi_derivative(const PairStats& st, const Exponents& ex, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonpositiveT, "psi needs t > 0");
  const double r = ex.r();
  return (2.0 - r) * std::pow(t, 1.0 - r) * st.norm2 +
         (r - 1.0 + ex.q) * std::pow(t, -r - ex.q) * st.K;
}

double t_max(const PairStats& st, const Exponents& ex) {
  if (!(st.norm2 > 0.0)) throw Error(ErrorCode::NonpositiveNorm, "t_max needs norm2 > 0");
  if (!(st.K > 0.0)) throw Error(ErrorCode::NonpositiveK, "t_max needs K > 0");
  const double r = ex.r();
  return std::pow((r - 1.0 + ex.q) * st.K / ((r - 2.0) * st.norm2), 1.0 / (1.0 + ex.q));
}

namespace {

// Bisection on [lo, hi] with psi(lo) and psi(hi) of opposite sign.
double bisect(const PairStats& st, const Exponents& ex, double lo, double hi, double tol) {
  double f_lo = psi(st, ex, lo);
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * lo || mid == lo || mid == hi) break;
    const double f_mid = psi(st, ex, mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FiberRoots project(const PairStats& st, const Exponents& ex, double tol) {
  FiberRoots out;
  out.t_max = t_max(st, ex);
  out.psi_at_tmax = psi(st, ex, out.t_max);
  out.t1 = out.t2 = std::numeric_limits<double>::quiet_NaN();
  if (st.B > 0.0 && !(out.psi_at_tmax > 0.0)) {
    out.kind = RootCase::NoAdmissibleRoot;
    return out;
  }

  // psi -> -inf as t -> 0+, so halving eventually gives a negative value.
  double lo = out.t_max;
  int guard = 0;
  do {
    lo *= 0.5;
    if (++guard > 2000 || lo == 0.0)
      throw Error(ErrorCode::NoBracket, "no lower bracket for t1");
  } while (!(psi(st, ex, lo) < 0.0));
  out.t1 = bisect(st, ex, lo, out.t_max, tol);

  if (st.B <= 0.0) {
    out.kind = RootCase::SingleRoot;
    return out;
  }
  double hi = out.t_max;
  guard = 0;
  do {
    hi *= 2.0;
    if (++guard > 2000 || !std::isfinite(hi))
      throw Error(ErrorCode::NoBracket, "no upper bracket for t2");
  } while (!(psi(st, ex, hi) < 0.0));
  out.t2 = bisect(st, ex, out.t_max, hi, tol);
  out.kind = RootCase::TwoRoots;
  return out;
}

Membership classify(const PairStats& st, const Exponents& ex, double tol, double tol2) {
  const FiberValues fv = phi(st, ex, 1.0);
  Membership m;
  m.phi1 = fv.dphi;
  m.phi2 = fv.ddphi;
  const double scale = st.scale();
  if (!(std::abs(m.phi1) <= tol * scale)) {
    m.label = MembershipLabel::OffManifold;
  } else if (m.phi2 > tol2 * scale) {
    m.label = MembershipLabel::NPlus;
  } else if (m.phi2 < -tol2 * scale) {
    m.label = MembershipLabel::NMinus;
  } else {
    m.label = MembershipLabel::NZero;
  }
  return m;
}

Membership classify(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                    double tol, double tol2) {
  return classify(pair_stats(problem, form, pair), Exponents::of(problem), tol, tol2);
}

}  // namespace nehari
