#pragma once

// Exact checks of the quadrature-operator identities (null equivalences,
// Richter-type inversions, Poisson identities, displacement series).

#include "homotomo/phase_poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace homotomo {

enum class IdentityId {
  MainEquiv,
  HermiteEquiv,
  TruncHermite,
  Richter,
  Symm,
  SOrder,
  MuNu,
  Resample,
  Poisson,
  DisplacementSeries,
};

std::string identity_name(IdentityId id);
/// Accepts the upper-case names, e.g. "MAIN_EQUIV"; nullopt if unknown.
std::optional<IdentityId> parse_identity(const std::string& name);

/// Parameters shared by all identities; each id reads only the fields it needs.
///   MAIN_EQUIV, HERMITE_EQUIV: p = k, q = n, sign
///   TRUNC_HERMITE:             p = l, q = n, kappa, sign
///   RICHTER, SYMM:             p = n, q = m
///   S_ORDER:                   p = k, q = l, s
///   MU_NU:                     p = n, mu, nu
///   RESAMPLE:                  p = n, u = e^{i phi0}
///   POISSON:                   p = k, odd
///   DISPLACEMENT_SERIES:       p = order, alpha
struct IdentityParams {
  int p = 0;
  int q = 0;
  int sign = 1;
  bool odd = false;
  mpq_class s = 0;
  mpq_class kappa = 1;
  CRational mu = 1, nu = 1, u = 1, alpha = 0;

  std::string describe(IdentityId id) const;
};

struct IdentityReport {
  IdentityId id;
  std::string params;
  PhasePolyOperator residual;
  bool passed = false;
  std::string note;
};

IdentityReport verify_identity(IdentityId id, const IdentityParams& params, const DegreeBudget& budget = {});

/// Exact quotient of A by (1 - e^{i step phi}); the remainder must vanish.
PhasePolyOperator divide_one_minus_phase(const PhasePolyOperator& A, int step, PhasePolyOperator* remainder);

struct SuiteLimits {
  int main_k = 8, main_n = 8;
  int richter = 10;
  int symm = 8;
  int s_order = 8;
  int trunc_l = 4, trunc_n = 4;
  int mu_nu = 8;
  int resample = 6;
  int poisson = 5;
  int displacement_order = 8;
};

/// Runs every identity over the given ranges; optionally restricted to one id.
std::vector<IdentityReport> run_identity_suite(const SuiteLimits& limits = {},
                                               std::optional<IdentityId> only = std::nullopt,
                                               const DegreeBudget& budget = {});

}  // namespace homotomo
