#pragma once

#include "tdscalc/forms.hpp"
#include "tdscalc/rng.hpp"

namespace tdsc {

struct PlaqueDecision {
  bool accepted = false;
  std::string reason;  // populated on rejection
};

struct Membership {
  bool member = false;
  std::string branch;  // fixture-specific label, e.g. "x-axis"
};

/// Tangent vector at a point of a diffeological space: the first-order jet
/// signature of a witness 1-plaque against the generator functions.
struct TangentVector {
  RatVec base;
  RatVec signature;  // d/dt (f_j o p)(0) over the generators f_j
  bool exact = true;
  SmoothMap witness;  // the defining 1-plaque
};

/// Prescribed vector field: a signature formula plus a rule producing the
/// curve intended to realize it. Whether the prescription is realizable at a
/// given point is exactly what the probes decide.
struct SpaceVectorField {
  std::string name;
  std::function<RatVec(const RatVec&)> signature_at;
  std::function<SmoothMap(const RatVec&)> witness_at;
  std::optional<std::vector<PolyExpr>> ambient_formula;  // when polynomial
};

struct ProbeCertificate {
  std::string kind;    // e.g. "line-direction-obstruction"
  std::string detail;
};

struct ProbeResult {
  bool found = false;
  std::optional<SmoothMap> witness;
  std::optional<ProbeCertificate> obstruction;
  std::string strategy;  // which search produced the outcome
};

/// Strong mode matches boundary traces pointwise (q(r,0) = p1(r)); weak mode
/// matches first-order classes only.
enum class JointMode { Strong, Weak };

/// A diffeological space with a standard tangent structure generated by a
/// finite function algebra, plus the fixture hooks the probe strategies use.
/// Predicates and constructors are supplied per fixture; they are decision
/// rules, not general solvers.
struct DiffSpace {
  std::string name;
  int ambient_dim = 0;
  std::vector<PolyExpr> generators;  // on R^ambient_dim
  Rational tol = 0;                  // 0 = exact fixture; > 0 for black-box data

  std::function<Membership(const RatVec&)> membership;
  std::function<PlaqueDecision(const SmoothMap&)> plaque_predicate;

  /// Strategy (i): fixture joint-plaque constructor. May return nullopt.
  std::function<std::optional<SmoothMap>(const SmoothMap&, const SmoothMap&, JointMode)>
      joint_constructor;
  /// Strategy (iii): geometric obstruction analysis, yielding a certificate.
  std::function<std::optional<ProbeCertificate>(const SmoothMap&, const SmoothMap&, JointMode)>
      joint_obstruction;
  /// Family of 1-plaques through F used to span tangent spaces.
  std::function<std::vector<SmoothMap>(const RatVec&, int, Sampler&)> curve_family;
  /// Fixture integrator for locally_integrable_probe.
  std::function<std::optional<SmoothMap>(const SpaceVectorField&, const SmoothMap&,
                                         const RatVec&)>
      integrator;
  /// Pointwise sum of two plaques with the same base (linearity fixture hook).
  std::function<std::optional<SmoothMap>(const SmoothMap&, const SmoothMap&)> plaque_sum;
  /// Direct spanning-plaque constructors at F for given signature directions;
  /// used to cross-check the iterated joint-probe route. May return several.
  std::function<std::vector<SmoothMap>(const RatVec&, const std::vector<RatVec>&)>
      spanning_plaques;
  /// Deterministic member-point sampler.
  std::function<std::vector<RatVec>(int, Sampler&)> sample_members;

  /// Fixture attestation for the bijection hypothesis ("no transverse
  /// points"). Probes that discover a transversality certificate on a fixture
  /// are reflected here by construction.
  bool has_transverse_points = false;

  bool is_member(const RatVec& p) const { return membership(p).member; }
};

/// Decision with reason; dimension mismatch is an error, not a rejection.
PlaqueDecision is_plaque(const DiffSpace& x, const SmoothMap& m);

/// First-order jet signature of a 1-plaque against the generators.
TangentVector tangent_class(const DiffSpace& x, const SmoothMap& one_plaque);

/// Jet equality of f o p_i at 0 up to `order` for every generator f.
bool equivalent(const DiffSpace& x, const SmoothMap& p1, const SmoothMap& p2, int order);

struct BranchComponent {
  std::string label;
  int dimension = 0;
  RatMat basis;  // signature row basis
};

struct TangentSpaceReport {
  RatVec base;
  int dimension = 0;       // rank of the span of all sampled signatures
  RatMat basis;            // row basis of that span
  std::vector<BranchComponent> branches;
  bool union_of_branches_is_linear = true;  // false when distinct branch lines meet
};

TangentSpaceReport tangent_space(const DiffSpace& x, const RatVec& f, int probe_budget,
                                 Sampler& sampler);

/// Search for a joint plaque q with q(r,0) ~ p1, q(0,s) ~ p2 (pointwise in
/// strong mode, classwise in weak mode). Strategy list: fixture constructor,
/// additive template, obstruction analysis. Candidates are always verified
/// before being reported found.
ProbeResult joint_plaque_probe(const DiffSpace& x, const SmoothMap& p1, const SmoothMap& p2,
                               JointMode mode, int budget);

/// The relaxed joint condition: p1, p2 are (n+1)-plaques agreeing at s=0;
/// seeks an (n+2)-plaque matching both first-order s-jet classes along r.
ProbeResult weaker_condition_probe(const DiffSpace& x, const SmoothMap& p1,
                                   const SmoothMap& p2, int budget);

/// Seeks an (n+1)-plaque q with q(r,0) = p(r) whose transverse jet class
/// matches the field along a neighborhood of r0. NotFound is a result.
ProbeResult locally_integrable_probe(const DiffSpace& x, const SpaceVectorField& field,
                                     const SmoothMap& p, const RatVec& r0, int budget);

struct CheckCase {
  std::string id;
  bool pass = false;
  std::string witness;
};

struct CheckReport {
  std::string name;
  bool pass = true;
  std::vector<CheckCase> cases;

  void add(std::string id, bool ok, std::string witness = "");
};

/// Verifies the linearity conditions on sampled reparameterizations and the
/// continuity condition on sampled plaque pairs with a common base curve.
CheckReport check_linear_continuous(const DiffSpace& x, int samples, Sampler& sampler);

/// Verifies that h preserves plaques, equivalence, and the linear structure
/// of signatures, on sampled data.
CheckReport check_smooth_map(const DiffSpace& x, const DiffSpace& y, const SmoothMap& h,
                             int samples, Sampler& sampler);

/// Iterated pairwise joint-plaque construction: a k-plaque p at F with
/// [p(t e_i)] = directions[i] classwise. Returns all distinct candidates the
/// strategies produce (callers use >= 2 for independence checks).
std::vector<SmoothMap> build_spanning_plaques(const DiffSpace& x, const RatVec& f,
                                              const std::vector<RatVec>& directions);

/// Helper: the 1-plaque t -> p(r0 + t v) inside p's domain.
SmoothMap plaque_ray(const SmoothMap& p, const RatVec& r0, const RatVec& v);

}  // namespace tdsc
