#pragma once

#include "nehari/energy.hpp"

#include <string_view>

namespace nehari {

enum class RootCase {
  SingleRoot,        // B <= 0: one projection, onto N+
  TwoRoots,          // B > 0 and psi(t_max) > 0: t1 onto N+, t2 onto N-
  NoAdmissibleRoot,  // B > 0 and psi(t_max) <= 0
};

std::string_view to_string(RootCase c);

/// Result of projecting a direction pair onto the Nehari set along its fiber.
/// t1/t2 are NaN when absent.
struct FiberRoots {
  RootCase kind = RootCase::NoAdmissibleRoot;
  double t1 = 0.0;
  double t2 = 0.0;
  double t_max = 0.0;
  double psi_at_tmax = 0.0;
};

enum class MembershipLabel { NPlus, NMinus, NZero, OffManifold };

std::string_view to_string(MembershipLabel m);

struct Membership {
  MembershipLabel label = MembershipLabel::OffManifold;
  double phi1 = 0.0;  // phi'(1)
  double phi2 = 0.0;  // phi''(1)
};

/// psi(t) = t^{2-r} norm2 - t^{1-r-q} K - B, with phi'(t) = t^{r-1} psi(t).
double psi(const PairStats& st, const Exponents& ex, double t);
double psi_derivative(const PairStats& st, const Exponents& ex, double t);

/// Unique maximizer of psi: [(r-1+q) K / ((r-2) norm2)]^{1/(1+q)}.
double t_max(const PairStats& st, const Exponents& ex);

/// Brackets and bisects the zeros of psi. `tol` is the relative bracket
/// width at termination.
FiberRoots project(const PairStats& st, const Exponents& ex, double tol = 1e-12);

/// Manifold membership from phi'(1), phi''(1) with the bands
/// |phi'(1)| <= tol * scale and |phi''(1)| <= tol2 * scale, where
/// scale = norm2 + |K| + |B|.
Membership classify(const PairStats& st, const Exponents& ex, double tol = 1e-8,
                    double tol2 = 1e-10);
Membership classify(const Problem& problem, const GagliardoForm& form, const GridPair& pair,
                    double tol = 1e-8, double tol2 = 1e-10);

}  // namespace nehari
