#pragma once

// Closed-form admissibility of a prescribed blow-up rate (gamma, eta) for
// radial singular solutions of Δ(f^m/m) + αf + β x·∇f = 0.
//
// Away from the critical rate p = 2/(1-m) a singular solution can only exist
// when β != 0, gamma = α/β and gamma > p. At gamma = p the coefficient must
// satisfy (α - 2β/(1-m)) * eta^(1-m) = 2(n-2-nm)/(1-m)^2.

#include <optional>
#include <string_view>
#include <vector>

#include "ssfde/domain.hpp"

namespace ssfde {

inline constexpr double kDefaultTolerance = 1e-9;

enum class VerdictStatus {
  Excluded,
  NecessaryConditionsMet,
  ExistenceKnown,
  ExistenceKnownUnique,
};

enum class Rule {
  // Exclusions.
  GammaBelowCritical,
  GammaNotAlphaOverBeta,
  CaseIImpossible,
  EtaRelationFailed,
  ForwardSignViolation,
  BackwardSignViolation,
  StationaryRateMismatch,
  // Positive findings.
  GammaEqualsAlphaOverBeta,
  EtaRelationHolds,
  HuiKimRange,
  BackwardExistence,
  BackwardUniqueness,
  BarenblattWitness,
  StationaryWitness,
};

std::string_view to_string(VerdictStatus status);
std::string_view to_string(Rule rule);

/// Which exponent of eta enters the critical-rate relation.
///   Corrected:    (α - βp) * eta^(1-m) = rhs
///   PaperLiteral: (α - βp) * eta       = rhs
/// Both coincide when C* = 1. Only Corrected is satisfied by every exact
/// power-law solution K r^-p.
enum class EtaRelationForm { Corrected, PaperLiteral };

std::string_view to_string(EtaRelationForm form);
EtaRelationForm parse_eta_form(std::string_view text);

struct Verdict {
  VerdictStatus status = VerdictStatus::Excluded;
  std::vector<Rule> reasons;
  /// lhs - rhs of the eta relation; present only on the gamma = p branch.
  std::optional<double> relation_gap;

  bool has_reason(Rule rule) const;
};

enum class KnownExistence {
  None,
  HuiKimForwardUnique,
  BackwardExists,
  BackwardExistsUnique,
};

std::string_view to_string(KnownExistence k);

enum class SignCheck { ConsistentWithExistence, SignsForceNonexistence };

/// Throws on invalid params, spec, or a non-positive tolerance.
Verdict classify(const ProblemParams& params, const BlowUpSpec& spec,
                 EtaRelationForm form = EtaRelationForm::Corrected,
                 double tol = kDefaultTolerance);

/// The unique eta satisfying the selected relation at gamma = p, or nullopt
/// when α - 2β/(1-m) <= 0.
std::optional<double> critical_eta(const ProblemParams& params,
                                   EtaRelationForm form = EtaRelationForm::Corrected);

/// Existence results available in the literature for the coupled modes.
KnownExistence known_existence(const ProblemParams& params,
                               const BlowUpSpec& spec,
                               double tol = kDefaultTolerance);

/// Sign consequences of the gamma != p theorem for coupled modes: forward
/// solutions need α, β < 0, backward ones α, β > 0.
SignCheck sign_check(const ProblemParams& params, SimilarityMode mode);

/// The coupled mode satisfied by (α, β), or Generic if none holds within tol.
SimilarityMode detect_mode(const ProblemParams& params,
                           double tol = kDefaultTolerance);

}  // namespace ssfde
