#pragma once

#include "gb/bundles.hpp"
#include "gb/cech.hpp"

namespace gb {
namespace covers {

// Circle covered by three arcs: pairwise overlaps are single arcs, no triple
// overlap. Constant fiber, identity gluings.
BundlePresentation three_arc_circle(const FiniteAbelianGroup& fiber);

// One contractible patch.
BundlePresentation single_patch(const FiniteAbelianGroup& fiber);

// Circle covered by two arcs: the overlap has two components.
BundlePresentation two_patch_circle(const FiniteAbelianGroup& fiber);

// Interval covered by two patches with a connected overlap glued by theta
// (H_1 -> H_0); exercises nontrivial transport.
BundlePresentation two_patch_interval(const FiniteAbelianGroup& fiber, const GroupHom& theta);

// Circle covered by six arcs, refining the three-arc circle two-to-one.
BundlePresentation six_arc_circle(const FiniteAbelianGroup& fiber);
Refinement six_into_three(const FiniteAbelianGroup& fiber);

// Degree-1 cochain on the three-arc circle from values on (0,1),(1,2),(0,2).
CechCochain circle_cochain(const BundlePresentation& b, const Elem& g01, const Elem& g12, const Elem& g02);

// One base point in each pairwise overlap of the three-arc circle.
PointedCover three_arc_points(const BundlePresentation& b);

// A single base point inside the one patch.
PointedCover single_patch_point(const BundlePresentation& b);

// The Moebius-style bundle over the three-arc circle: cocycle (0,0,1).
PrincipalBundle moebius_bundle(int64_t m);
PrincipalBundle trivial_circle_bundle(int64_t m);

}  // namespace covers
}  // namespace gb
