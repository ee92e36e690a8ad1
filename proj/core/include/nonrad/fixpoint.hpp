#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nonrad/extsolve.hpp"
#include "nonrad/nonlinearity.hpp"
#include "nonrad/profile.hpp"

namespace nonrad {

enum class ConstructionOrder { first, second };

// A previously constructed first-order run used as the reference u^alpha.
// Second characteristic numbers are only meaningful against a recorded
// reference, so the tag travels with every derived quantity.
struct ReferenceRun {
  std::string tag;
  double alpha = 0.0;
  double R = 0.0;              // mask radius of the reference run
  RadialProfile G_full;        // full-line profile of its initial data
};

struct FixpointConfig {
  double alpha = 0.0;
  double beta = 0.0;           // second construction only
  double R_override = -1.0;    // <= 0: use the recipe radius, snapped up to a node
  double c = 32.0;             // the constant c(gamma)
  double tol = 1e-7;           // weighted-distance convergence tolerance
  int max_iters = 25;
  double T_extract = 8.0;      // horizon for scattering-profile extraction
  // The sampling cross-check differs from the exact accumulation by an
  // O(1/T_extract) moment term; this bounds the tolerated relative gap.
  double extract_crosscheck_tol = 0.5;
  double interior_bump = 0.0;  // zero-moment cosine perturbation of the interior fill
  SolveConfig solve;

  std::optional<ReferenceRun> reference;  // required context for order == second

  // Recipe radii: c^{3/2} alpha^2, and max{c^{3/2} alpha^2, c^{1/2} |beta|^{2/3}}.
  double recipe_radius(ConstructionOrder order) const;
  // Radius actually used: override or recipe, snapped up to a grid node.
  double effective_radius(ConstructionOrder order) const;
};

// Extends a tail (supported in |s| > R) to the whole line with the constant
// -(alpha + int_{|s|>R} G_tail) / (2R) on [-R, R], so the total integral is
// exactly -alpha. R must sit on a grid node. An optional zero-moment cosine
// bump perturbs the interior without touching either interior moment.
RadialProfile extend_profile_first(const RadialProfile& G_tail, double alpha, double R,
                                   double interior_bump = 0.0);

// Affine interior fill a + b s chosen so the full-line moments are exactly
// int G = 0 and int s G = beta.
RadialProfile extend_profile_second(const RadialProfile& G_tail, double beta, double R,
                                    double interior_bump = 0.0);

// Scattering profiles of the Duhamel part of a computed solution.
// Exact accumulation (authoritative): G^- = H_backward, G^+(s) = H_forward(-s),
// both restricted to s > R. Cross-check: r^2 u_t of the Duhamel part sampled
// along s = r -+ t at |t| = T.
struct ScatterProfiles {
  RadialProfile g_minus, g_plus;        // supported on s > R
  RadialProfile g_minus_sampled, g_plus_sampled;
  double crosscheck_rel = 0.0;          // relative L2 disagreement of the two methods
  double bound_constant_minus = 0.0;    // ||G^-||_{L2(R,inf)} / ||chi_R F||_{Z(-inf,0]}
  double bound_constant_plus = 0.0;
};
ScatterProfiles extract_scatter_profiles(const ExteriorSolution& sol, double R,
                                         double crosscheck_tol);

// One application of the contraction map T: extend, solve the masked global
// extension, extract the nonlinear scattering profiles and return the new tail
//   (T G)(s) = -G^-(s) for s > R, -G^+(-s) for s < -R.
struct ApplyResult {
  RadialProfile tail;
  ExteriorSolution sol;
  ScatterProfiles scatter;
};
ApplyResult apply_T(const RadialProfile& G_tail, const FixpointConfig& cfg,
                    const Nonlinearity& F, ConstructionOrder order);

struct FixpointResult {
  bool converged = false;
  int iters = 0;
  ConstructionOrder order = ConstructionOrder::first;
  double alpha = 0.0, beta = 0.0;
  double R = 0.0, c = 0.0;
  RadialProfile tail;   // fixed-point tail
  RadialProfile full;   // extended full-line profile (initial-data profile)
  ExteriorSolution sol;  // solve of the converged profile
  std::vector<double> distances;   // d(G_{k+1}, G_k)
  std::vector<double> ratios;      // successive distance ratios
  std::vector<double> tail_norms;  // l2_tail(G_k, R)
  std::vector<std::pair<double, double>> energy_trace;  // (t, exterior energy)
  double recovered_alpha = 0.0;
  double recovered_beta = 0.0;
  double picard_contraction_max = 0.0;
  double extract_crosscheck_rel = 0.0;
  std::string reference_tag;  // which u^alpha defined beta (order == second)

  std::string tag() const;  // deterministic identifier of this construction
};

// Iterates G_0 = 0, G_{k+1} = T G_k until the weighted distance drops below
// cfg.tol. Throws NonContractionError when the iteration stops contracting.
// For order == second a missing cfg.reference is built here by running the
// first-order construction at the same numerics.
FixpointResult iterate_to_fixed_point(FixpointConfig cfg, const Nonlinearity& F,
                                      ConstructionOrder order);

// Reference-run view of a converged first-order result.
ReferenceRun as_reference(const FixpointResult& r);

}  // namespace nonrad
