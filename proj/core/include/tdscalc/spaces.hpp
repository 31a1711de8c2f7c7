#pragma once

#include "tdscalc/plaque_forms.hpp"

namespace tdsc {

/// Euclidean space R^n with every smooth map a plaque; coordinate generators.
DiffSpace make_euclidean(int n);

/// The union of the two coordinate axes in R^2. Plaques stay inside a single
/// axis; the origin is a transverse point. The punctured variant (origin
/// removed) has none and supports the bijection round trip per branch.
DiffSpace make_axes_union(bool include_origin = true);

/// R^2 with plaques whose image lies in a single affine line. Linear and
/// (on admissible pairs) continuous; every point is strongly transverse of
/// degree (1,1) and only the zero field is locally integrable.
DiffSpace make_lines_plane();

/// The unit sphere with plaques running inside single parallels (constant
/// third coordinate), angle-parameterized in black-box mode. The parallels
/// through the poles degenerate, so only constant plaques pass through them.
DiffSpace make_sphere_parallels();

/// Two sheets tangent at the origin: the plane z = 0 and the paraboloid
/// z = x^2 + y^2. Polynomial plaques live in a single sheet; first-order
/// data of the two sheets agrees at the tangency point, so classwise joint
/// plaques always exist (no transverse points in the classwise sense).
DiffSpace make_tangent_sheets();

/// CLI fixture lookup: euclidean:N, axes, axes_punctured, lines,
/// sphere_parallels, tangent_planes. Unknown names raise a Schema error.
DiffSpace space_by_name(const std::string& name);

/// Black-box plaque running in the parallel of `base` with the given angular
/// velocity about the z axis.
SmoothMap sphere_parallel_plaque(const RatVec& base, double angular_velocity);

/// The rotation field xi(F) = (-F_y, F_x, 0): tangent to every parallel and
/// vanishing at the poles.
SpaceVectorField sphere_tangential_field();

/// 1D C^1 cutoff: 1 on [-inner, inner], 0 outside (-outer, outer), cubic
/// smoothstep in between. Piecewise polynomial, evaluated exactly.
Rational cutoff_1d(const Rational& t, const Rational& inner, const Rational& outer);

/// Bump extension of a local field: multiplies by a product of 1D cutoffs so
/// the result agrees with the field on the inner box and vanishes outside
/// the outer box. The inner box must sit strictly inside the outer one.
SpaceVectorField bump_extension(const VectorFieldOnBox& local_field, const Box& inner,
                                const Box& outer);

/// Exact evaluation of the extended field at a point.
RatVec bump_extension_value(const VectorFieldOnBox& local_field, const Box& inner,
                            const Box& outer, const RatVec& p);

}  // namespace tdsc
