#pragma once

#include "tdscalc/spaces.hpp"

namespace tdsc {

/// An invertible chart: forward maps a parameter box into the ambient space,
/// inverse recovers parameters on the chart's image region.
struct Chart {
  std::string name;
  Box param_box;
  SmoothMap forward;  // params -> ambient
  SmoothMap inverse;  // ambient -> params (defined on the chart image)
};

struct OverlapSample {
  int chart_from = 0;  // j: parameters live in this chart
  int chart_to = 0;    // i: the transition lands here
  RatVec param;        // a point of chart_from's box inside the overlap
};

struct Atlas {
  int manifold_dim = 0;
  int ambient_dim = 0;
  Rational tol = 0;  // 0 for exact (polynomial) atlases
  std::vector<Chart> charts;
  std::vector<OverlapSample> overlap_samples;

  /// alpha_i^{-1} o alpha_j.
  SmoothMap transition(int to_chart, int from_chart) const;
  /// Does the ambient point lie on this chart (parameters inside the box and
  /// the chart reproduces the point)?
  bool chart_contains(int chart, const RatVec& ambient_point) const;
  int chart_for(const RatVec& ambient_point) const;  // first containing chart
  /// Columns of the forward jacobian: a tangent frame at the given point.
  std::vector<RatVec> tangent_frame(const RatVec& ambient_point) const;
};

struct AtlasSpace {
  DiffSpace space;
  Atlas atlas;
};

AtlasSpace make_atlas_plane2();
AtlasSpace make_atlas_circle2();
AtlasSpace make_atlas_sphere2();
AtlasSpace atlas_by_name(const std::string& name);

/// One differential form per chart, compatible under transitions. Chart
/// forms reuse PointwiseForm: an evaluation rule on the parameter box plus a
/// polynomial witness when the chart data is exact.
struct ChartFormCollection {
  int degree = 0;
  std::vector<PointwiseForm> forms;  // one per chart, over chart parameters
};

/// Per-chart coefficient view of the same data: the local trivialization of
/// the exterior-form bundle, listing coefficient functions per multi-index.
struct BundleSection {
  int manifold_dim = 0;
  int degree = 0;
  /// coefficient vectors indexed like MultiIndex::all(manifold_dim, degree)
  std::vector<std::function<RatVec(const RatVec&)>> coeff_at;  // one per chart
  std::vector<std::optional<std::vector<PolyExpr>>> poly_coeffs;
};

ChartFormCollection chart_collection_from_pointwise(const AtlasSpace& m,
                                                    const PointwiseForm& omega);

struct CompatibilityReport {
  bool pass = true;
  std::string witness;
};

/// The transition law omega_j = (transition_ij)^* omega_i on the recorded
/// overlap samples, within the atlas tolerance.
CompatibilityReport collection_compatibility_check(const AtlasSpace& m,
                                                   const ChartFormCollection& c);

/// Rebuild the pointwise form; chart independence is part of the
/// compatibility invariant and is re-verified on the overlap samples.
PointwiseForm pointwise_from_chart_collection(const AtlasSpace& m,
                                              const ChartFormCollection& c);

BundleSection section_from_pointwise(const AtlasSpace& m, const PointwiseForm& omega);
PointwiseForm pointwise_from_section(const AtlasSpace& m, const BundleSection& s);

/// Value-level agreement of two pointwise forms at a point, evaluated on all
/// degree-sized tuples from the chart tangent frame.
bool pointwise_forms_agree_at(const AtlasSpace& m, const PointwiseForm& a,
                              const PointwiseForm& b, const RatVec& f, const Rational& tol);

}  // namespace tdsc
