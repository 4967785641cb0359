#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gb/cech.hpp"

namespace gb {

// Structural equality of presentations (same nerve, fibers, gluings).
bool presentations_equal(const BundlePresentation& a, const BundlePresentation& b);

// A principal S-bundle presented by its transition cocycle.
struct PrincipalBundle {
    BundlePresentation presentation;
    CechCochain cocycle;  // degree 1

    void validate() const;
    Elem class_coords() const;  // coordinates in H^1 of the presentation
};

// A finite sample of the base space: which patches contain each point and the
// component each point sits in, for every simplex of its patch set.
struct PointedCover {
    int n_points = 0;
    std::vector<std::vector<int>> patches_of;            // per point, sorted
    std::map<std::pair<int, Simplex>, int> comp_assign;  // (point, simplex) -> component

    bool point_in(int point, int patch) const;
    int component(int point, const Simplex& s) const;
    int least_patch(int point) const { return patches_of.at(point).at(0); }
    void validate(const CoverComplex& c) const;
};

// Fiber identification at a point: H_{from} -> H_{to} through the gluings,
// along the components the point sits in.
GroupHom point_transport(const BundlePresentation& b, const PointedCover& pc, int point, int to_patch,
                         int from_patch);

// The canonical fiber S_u of a point: the fiber of its least patch.
const FiniteAbelianGroup& point_fiber(const BundlePresentation& b, const PointedCover& pc, int point);

// The glued total space X_gamma over the sampled base: equivalence classes of
// pairs (fiber element, patch) under (s,i) == (t,j) iff s = gamma_ij(u) + t,
// with the induced S-action and the patch bijections phi_i.
class GluedSpace {
public:
    GluedSpace(PointedCover pc, PrincipalBundle bundle);

    const PointedCover& pointed_cover() const { return pc_; }
    const PrincipalBundle& bundle() const { return bundle_; }

    int n_classes() const { return static_cast<int>(base_of_.size()); }
    int base_of(int cls) const { return base_of_.at(cls); }
    std::vector<int> fiber_classes(int point) const;  // q^{-1}(point), sorted

    // phi_i of a class: its fiber coordinate in patch i.
    Elem phi(int cls, int patch) const;
    int phi_inverse(int point, int patch, const Elem& value) const;

    // s . x computed through `patch`; s is in the canonical fiber of q(x).
    int act_via_patch(const Elem& s, int cls, int patch) const;
    // s . x through the least patch (the canonical route).
    int act(const Elem& s, int cls) const;

private:
    PointedCover pc_;
    PrincipalBundle bundle_;
    std::vector<int> base_of_;
    // (point, patch, fiber element index) -> class id
    std::map<std::tuple<int, int, int64_t>, int> class_of_;
    std::map<std::pair<int, int>, Elem> phi_;  // (class, patch) -> value
};

GluedSpace glue_total_space(const PointedCover& pc, const PrincipalBundle& b);

struct PrincipalAxiomsReport {
    bool free = false;
    bool orbit_transitive = false;
    bool equivariant = false;
    // Properness is vacuous on finite discrete models; reported as such
    // instead of silently true.
    std::string properness = "not-applicable";
    bool all() const { return free && orbit_transitive && equivariant; }
};

PrincipalAxiomsReport check_principal_axioms(const GluedSpace& g);
// Same checks against a hand-built action table; for negative controls.
PrincipalAxiomsReport check_principal_axioms(const GluedSpace& g,
                                             const std::function<int(const Elem&, int)>& act);

// Result of the cohomological isomorphism test: a coboundary witness when the
// classes agree, the differing H^1 coordinates otherwise.
struct BundleIsoResult {
    std::optional<CechCochain> witness;  // beta with d0(beta) = eta - gamma
    Elem coords1, coords2;               // class coordinates in H^1
    FiniteAbelianGroup h1;

    bool isomorphic() const { return witness.has_value(); }
};

BundleIsoResult iso_bundles(const PrincipalBundle& b1, const PrincipalBundle& b2);
// Compare after refining both to a common cover.
BundleIsoResult iso_bundles(const PrincipalBundle& b1, const Refinement& r1, const PrincipalBundle& b2,
                            const Refinement& r2);

// Verdict on a candidate equivariant map between glued spaces, given as a
// class map from g1 to g2. Base-preservation violations throw InvalidInput;
// non-equivariance is a REJECT verdict.
struct EquivariantMapResult {
    bool accepted = false;
    std::string reject_reason;
    std::optional<CechCochain> beta;  // extracted witness, verified via iso_bundles
};

EquivariantMapResult equivariant_map_implies_iso(const GluedSpace& g1, const GluedSpace& g2,
                                                 const std::vector<int>& omega);

// A finite H-space with a full action table.
struct SigmaTrivialSystem {
    FiniteAbelianGroup h;
    int n_points = 0;
    std::vector<std::vector<int>> action;  // action[element index][x] = elem . x

    void validate() const;
    int apply(const Elem& s, int x) const;
    std::vector<int> orbit_of() const;                  // point -> orbit id (by least member)
    std::vector<Elem> stabilizer(int point) const;      // all stabilizing elements
};

// Chart data: each chart is a set of orbits with one base point per orbit.
// Orbits of one chart may be grouped into connected components; sections are
// constant per component, which is what lets transition classes be nontrivial.
// Overlap components are always the individual shared orbits.
struct SigmaChartSpec {
    std::vector<std::vector<int>> charts;                 // orbit ids per chart, sorted
    std::map<std::pair<int, int>, int> base_point;        // (chart, orbit) -> point
    std::map<std::pair<int, int>, int> chart_component;   // (chart, orbit) -> component; default singleton
};

struct SigmaTrivialResult {
    BundlePresentation presentation;  // of S_(X,H)
    PrincipalBundle bundle;
    PointedCover points;              // one point per orbit
    std::vector<int> orbit_reps;      // orbit id -> representative point of X
};

SigmaTrivialResult sigma_trivial_bundle(const SigmaTrivialSystem& sys, const SigmaChartSpec& charts);
// Default charts: one chart per orbit (trivial class).
SigmaTrivialResult sigma_trivial_bundle(const SigmaTrivialSystem& sys);

// The cocycle recovered from the canonical sections sigma_i(u) = phi_i^{-1}(0);
// every overlap component must contain a base point.
CechCochain trivialization_from_sections(const GluedSpace& g);

}  // namespace gb
