#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gb/abelian.hpp"

namespace gb {

// A simplex of the cover nerve: strictly increasing patch indices, size 1..3.
using Simplex = std::vector<int>;

// Cover of the base space as a component-decorated nerve. For every tuple of
// patches up to triples, the set of connected components of the intersection
// and, for each codimension-1 face, the map sending a component into the
// component of the larger open it lies in. Absent simplices are empty
// intersections.
struct CoverComplex {
    int patches = 0;
    std::map<Simplex, int> comps;                              // simplex -> #components (>= 1)
    std::map<std::pair<Simplex, Simplex>, std::vector<int>> faces;  // (simplex, codim-1 face) -> comp map

    bool has(const Simplex& s) const { return comps.count(s) > 0; }
    int n_comps(const Simplex& s) const;
    // Face map for any proper face (composed through codimension-1 steps).
    int face(const Simplex& s, const Simplex& t, int comp) const;
    std::vector<Simplex> simplices(int degree) const;  // degree = |s| - 1, sorted

    // Throws InvalidInput on malformed data (missing faces, non-commuting
    // face maps, empty simplex with nonempty superset, ...).
    void validate() const;
};

// The group bundle S presented by per-patch fiber groups and gluing
// isomorphisms over overlap components.
struct BundlePresentation {
    CoverComplex complex;
    std::vector<FiniteAbelianGroup> fibers;          // one per patch
    std::map<std::pair<Simplex, int>, GroupHom> glue;  // ((i,j), comp) -> iso H_j -> H_i

    const FiniteAbelianGroup& fiber(int patch) const { return fibers.at(patch); }
    // Gluing transport between patch fibers over a component of the pair
    // {a,b}: returns the iso H_b -> H_a (identity when a == b).
    GroupHom transport(int a, int b, int comp) const;

    // Validates the complex, that every gluing is an isomorphism, and the
    // cocycle compatibility of gluings over triple-overlap components.
    void validate() const;
};

// Sections of S over a simplex: one fiber value per component, all expressed
// in the fiber of the least patch index.
struct SectionGroup {
    Simplex simplex;
    int n_comps = 0;
    FiniteAbelianGroup fiber;  // fiber of the least patch
    FiniteAbelianGroup group;  // direct sum of n_comps copies

    Elem component(const Elem& value, int comp) const;
    void set_component(Elem& value, int comp, const Elem& v) const;
};

SectionGroup sections(const BundlePresentation& b, const Simplex& s);

// Restriction homomorphism Sec(t) -> Sec(s) for a face t of s.
GroupHom restriction(const BundlePresentation& b, const Simplex& s, const Simplex& t);

// Degree-n cochain: one section per n-simplex. Degree-1 and degree-2 data is
// stored skew-normalized: only strictly increasing tuples are kept and the
// evaluation helpers supply gamma_ii = 0 and gamma_ji = -gamma_ij.
struct CechCochain {
    int degree = 0;
    std::map<Simplex, Elem> values;
};

// Total cochain group of a fixed degree with stable block layout.
struct CochainSpace {
    int degree = 0;
    std::vector<Simplex> simplices;
    std::vector<SectionGroup> parts;
    std::vector<int> offsets;  // block offset of each simplex
    FiniteAbelianGroup total;

    Elem pack(const CechCochain& c) const;
    CechCochain unpack(const Elem& v) const;
    Elem zero() const { return total.zero(); }
};

CochainSpace cochain_space(const BundlePresentation& b, int degree);

// Čech differential as a homomorphism between total cochain groups:
//   (d0 b)_ij  = res_i(b_i) - res_j(b_j)
//   (d1 g)_ijk = res(g_jk) - res(g_ik) + res(g_ij)
GroupHom differential(const BundlePresentation& b, int degree);

// Value of a skew cochain at an ordered tuple, expressed in the fiber of the
// first index. For degree 1: (a,b) over a component of {a,b}; for degree 2:
// (a,b,c) over a component of {a,b,c}; repeated indices give zero.
Elem eval_ordered(const BundlePresentation& b, const CechCochain& c, const std::vector<int>& tuple, int comp);

bool is_cocycle(const BundlePresentation& b, const CechCochain& c);
// First simplex where the cocycle identity fails, for error reports.
std::optional<Simplex> cocycle_defect(const BundlePresentation& b, const CechCochain& c);

// d0(beta) = gamma solved exactly; nullopt iff [gamma] != 0.
// Throws InvalidInput (naming the failing triple) when gamma is not a cocycle.
std::optional<CechCochain> coboundary_witness(const BundlePresentation& b, const CechCochain& gamma);

// H^n with representative extraction and cocycle coordinates.
class Cohomology {
public:
    Cohomology(const BundlePresentation& b, int degree);

    const FiniteAbelianGroup& group() const { return group_; }
    // Coordinates of a cocycle's class; throws InvalidInput on non-cocycles.
    Elem coords(const CechCochain& z) const;
    CechCochain representative(const Elem& h) const;

private:
    int degree_;
    CochainSpace space_;
    GroupHom incl_;  // ker d^n -> C^n
    GroupHom proj_;  // ker d^n -> H^n
    FiniteAbelianGroup group_;
};

// A refinement of the cover underlying `coarse`: each fine patch maps into a
// coarse patch, and each fine component lifts into a component of the image
// simplex (the sorted set of images, which may collapse).
struct Refinement {
    CoverComplex fine;
    std::vector<int> patch_map;                  // fine patch -> coarse patch
    std::map<std::pair<Simplex, int>, int> comp_lift;  // (fine simplex, comp) -> coarse comp

    Simplex image_simplex(const Simplex& s) const;
    void validate(const CoverComplex& coarse) const;
};

Refinement identity_refinement(const CoverComplex& c);

// The presentation induced on the fine cover (fibers pulled back, gluings
// transported through the coarse gluings).
BundlePresentation refine_presentation(const BundlePresentation& coarse, const Refinement& r);

// Induced cochain map; commutes with the differentials.
CechCochain refine_cochain(const BundlePresentation& coarse, const Refinement& r, const CechCochain& c);

// The induced map on H^1, as a hom between the two cohomology groups.
GroupHom induced_h1(const BundlePresentation& coarse, const Refinement& r);

// Cochain arithmetic in a fixed presentation.
CechCochain cochain_add(const BundlePresentation& b, const CechCochain& x, const CechCochain& y);
CechCochain cochain_sub(const BundlePresentation& b, const CechCochain& x, const CechCochain& y);
CechCochain zero_cochain(const BundlePresentation& b, int degree);

}  // namespace gb
