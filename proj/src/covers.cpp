#include "gb/covers.hpp"

namespace gb {
namespace covers {

namespace {

void add_simplex(CoverComplex& c, const Simplex& s, int n) {
    c.comps[s] = n;
    if (s.size() < 2) return;
    for (size_t drop = 0; drop < s.size(); ++drop) {
        Simplex t;
        for (size_t i = 0; i < s.size(); ++i)
            if (i != drop) t.push_back(s[i]);
        c.faces[{s, t}] = std::vector<int>(n, 0);
    }
}

BundlePresentation constant_presentation(CoverComplex complex, const FiniteAbelianGroup& fiber) {
    BundlePresentation b;
    b.complex = std::move(complex);
    b.fibers.assign(b.complex.patches, fiber);
    for (const Simplex& s : b.complex.simplices(1))
        for (int c = 0; c < b.complex.n_comps(s); ++c) b.glue.insert({{s, c}, GroupHom::identity(fiber)});
    b.validate();
    return b;
}

}  // namespace

BundlePresentation three_arc_circle(const FiniteAbelianGroup& fiber) {
    CoverComplex c;
    c.patches = 3;
    for (int i = 0; i < 3; ++i) add_simplex(c, {i}, 1);
    add_simplex(c, {0, 1}, 1);
    add_simplex(c, {1, 2}, 1);
    add_simplex(c, {0, 2}, 1);
    return constant_presentation(c, fiber);
}

BundlePresentation single_patch(const FiniteAbelianGroup& fiber) {
    CoverComplex c;
    c.patches = 1;
    add_simplex(c, {0}, 1);
    return constant_presentation(c, fiber);
}

BundlePresentation two_patch_circle(const FiniteAbelianGroup& fiber) {
    CoverComplex c;
    c.patches = 2;
    add_simplex(c, {0}, 1);
    add_simplex(c, {1}, 1);
    add_simplex(c, {0, 1}, 2);
    return constant_presentation(c, fiber);
}

BundlePresentation two_patch_interval(const FiniteAbelianGroup& fiber, const GroupHom& theta) {
    CoverComplex c;
    c.patches = 2;
    add_simplex(c, {0}, 1);
    add_simplex(c, {1}, 1);
    add_simplex(c, {0, 1}, 1);
    BundlePresentation b;
    b.complex = c;
    b.fibers = {fiber, fiber};
    b.glue.insert({{Simplex{0, 1}, 0}, theta});
    b.validate();
    return b;
}

BundlePresentation six_arc_circle(const FiniteAbelianGroup& fiber) {
    CoverComplex c;
    c.patches = 6;
    for (int i = 0; i < 6; ++i) add_simplex(c, {i}, 1);
    for (int i = 0; i < 5; ++i) add_simplex(c, {i, i + 1}, 1);
    add_simplex(c, {0, 5}, 1);
    return constant_presentation(c, fiber);
}

Refinement six_into_three(const FiniteAbelianGroup& fiber) {
    Refinement r;
    r.fine = six_arc_circle(fiber).complex;
    r.patch_map = {0, 0, 1, 1, 2, 2};
    for (const auto& [s, n] : r.fine.comps)
        for (int k = 0; k < n; ++k) r.comp_lift[{s, k}] = 0;
    return r;
}

CechCochain circle_cochain(const BundlePresentation& b, const Elem& g01, const Elem& g12, const Elem& g02) {
    CechCochain c = zero_cochain(b, 1);
    c.values[{0, 1}] = b.fiber(0).reduce(g01);
    c.values[{1, 2}] = b.fiber(1).reduce(g12);
    c.values[{0, 2}] = b.fiber(0).reduce(g02);
    return c;
}

PointedCover three_arc_points(const BundlePresentation& b) {
    (void)b;
    PointedCover pc;
    pc.n_points = 3;
    pc.patches_of = {{0, 1}, {1, 2}, {0, 2}};
    for (int u = 0; u < 3; ++u) {
        for (int p : pc.patches_of[u]) pc.comp_assign[{u, {p}}] = 0;
        pc.comp_assign[{u, pc.patches_of[u]}] = 0;
    }
    return pc;
}

PointedCover single_patch_point(const BundlePresentation& b) {
    (void)b;
    PointedCover pc;
    pc.n_points = 1;
    pc.patches_of = {{0}};
    pc.comp_assign[{0, {0}}] = 0;
    return pc;
}

PrincipalBundle moebius_bundle(int64_t m) {
    BundlePresentation pres = three_arc_circle(FiniteAbelianGroup::cyclic(m));
    return PrincipalBundle{pres, circle_cochain(pres, {0}, {0}, {1})};
}

PrincipalBundle trivial_circle_bundle(int64_t m) {
    BundlePresentation pres = three_arc_circle(FiniteAbelianGroup::cyclic(m));
    return PrincipalBundle{pres, zero_cochain(pres, 1)};
}

}  // namespace covers
}  // namespace gb
