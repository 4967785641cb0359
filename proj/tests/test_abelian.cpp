#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "gb/abelian.hpp"

using namespace gb;

namespace {

// Brute-force oracle: all elements x of h's domain with h(x) = 0.
std::set<Elem> kernel_by_enumeration(const GroupHom& h) {
    std::set<Elem> out;
    for (const Elem& x : h.domain().elements())
        if (h.apply(x) == h.codomain().zero()) out.insert(x);
    return out;
}

std::set<Elem> image_by_enumeration(const GroupHom& h) {
    std::set<Elem> out;
    for (const Elem& x : h.domain().elements()) out.insert(h.apply(x));
    return out;
}

// Coset count of <gens> in g by enumeration.
int64_t quotient_order_by_enumeration(const FiniteAbelianGroup& g, const std::vector<Elem>& gens) {
    std::set<Elem> sub{g.zero()};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Elem& s : std::set<Elem>(sub))
            for (const Elem& gen : gens) {
                Elem t = g.add(s, g.reduce(gen));
                if (sub.insert(t).second) grew = true;
            }
    }
    return g.order() / static_cast<int64_t>(sub.size());
}

GroupHom mult_by(int64_t n, const FiniteAbelianGroup& g) {
    IntMat m = IntMat::identity(g.rank());
    for (int i = 0; i < g.rank(); ++i) m(i, i) = n;
    return GroupHom(g, g, m);
}

}  // namespace

TEST_CASE("smith normal form on the spec examples") {
    // [[2]] stays [[2]].
    auto s1 = smith_normal_form(IntMat(1, 1, {2}));
    CHECK(s1.d == IntMat(1, 1, {2}));

    // diag(2,3) normalizes to diag(1,6); verify by the multiplication oracle.
    IntMat m(2, 2, {2, 0, 0, 3});
    auto s2 = smith_normal_form(m);
    CHECK(s2.d(0, 0) == 1);
    CHECK(s2.d(1, 1) == 6);
    CHECK(s2.u * m * s2.v == s2.d);
    CHECK(std::abs(determinant(s2.u)) == 1);
    CHECK(std::abs(determinant(s2.v)) == 1);

    // Zero map.
    auto s3 = smith_normal_form(IntMat(1, 1, {0}));
    CHECK(s3.d == IntMat(1, 1, {0}));
}

TEST_CASE("smith normal form round trip on assorted shapes") {
    std::vector<IntMat> cases = {
        IntMat(2, 3, {4, 6, 2, 2, 8, 10}),
        IntMat(3, 2, {0, 0, 5, 3, 7, -2}),
        IntMat(3, 3, {2, 4, 4, -6, 6, 12, 10, 4, 16}),
        IntMat(1, 4, {6, 10, 15, 0}),
        IntMat(2, 2, {0, 1, -1, 0}),
    };
    for (const auto& m : cases) {
        auto s = smith_normal_form(m);
        CHECK(s.u * m * s.v == s.d);
        CHECK(std::abs(determinant(s.u)) == 1);
        CHECK(std::abs(determinant(s.v)) == 1);
        for (int i = 0; i + 1 < std::min(s.d.rows(), s.d.cols()); ++i) {
            if (s.d(i + 1, i + 1) != 0) {
                REQUIRE(s.d(i, i) != 0);
                CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
            }
        }
    }
}

TEST_CASE("kernel: spec examples against the enumeration oracle") {
    FiniteAbelianGroup z4({4}), z6({6}), z3({3});

    auto k1 = kernel(mult_by(2, z4));
    CHECK(k1.group == FiniteAbelianGroup({2}));
    CHECK(kernel_by_enumeration(mult_by(2, z4)) == std::set<Elem>{{0}, {2}});
    CHECK(image_by_enumeration(k1.inclusion) == kernel_by_enumeration(mult_by(2, z4)));

    auto k2 = kernel(GroupHom::identity(z6));
    CHECK(k2.group.is_trivial());

    auto k3 = kernel(GroupHom::zero(z3, z3));
    CHECK(k3.group == z3);
}

TEST_CASE("kernel inclusion is injective and lands on the right set") {
    std::vector<GroupHom> homs = {
        mult_by(2, FiniteAbelianGroup({8})),
        mult_by(3, FiniteAbelianGroup({6, 12})),
        GroupHom(FiniteAbelianGroup({4, 4}), FiniteAbelianGroup({4}), IntMat(1, 2, {1, 1})),
        GroupHom(FiniteAbelianGroup({2, 4}), FiniteAbelianGroup({8}), IntMat(1, 2, {4, 2})),
    };
    for (const auto& h : homs) {
        auto k = kernel(h);
        CHECK(k.inclusion.is_injective());
        CHECK(image_by_enumeration(k.inclusion) == kernel_by_enumeration(h));
    }
}

TEST_CASE("rank-nullity |ker h| * |im h| = |dom h| by enumeration") {
    std::vector<GroupHom> homs = {
        mult_by(2, FiniteAbelianGroup({4})),
        mult_by(6, FiniteAbelianGroup({4, 8})),
        GroupHom(FiniteAbelianGroup({3, 9}), FiniteAbelianGroup({9}), IntMat(1, 2, {3, 1})),
        GroupHom(FiniteAbelianGroup({2, 2, 2}), FiniteAbelianGroup({2, 2}), IntMat(2, 3, {1, 1, 0, 0, 1, 1})),
    };
    for (const auto& h : homs) {
        REQUIRE(h.domain().order() <= 10000);
        CHECK(kernel(h).group.order() * image(h).group.order() == h.domain().order());
        CHECK(static_cast<int64_t>(kernel_by_enumeration(h).size()) == kernel(h).group.order());
        CHECK(static_cast<int64_t>(image_by_enumeration(h).size()) == image(h).group.order());
    }
}

TEST_CASE("quotient: spec examples by coset enumeration") {
    FiniteAbelianGroup z4({4});
    auto q1 = quotient(z4, {{2}});
    CHECK(q1.group == FiniteAbelianGroup({2}));
    CHECK(quotient_order_by_enumeration(z4, {{2}}) == 2);

    FiniteAbelianGroup z22({2, 2});
    auto q2 = quotient(z22, {{1, 1}});
    CHECK(q2.group == FiniteAbelianGroup({2}));
    CHECK(quotient_order_by_enumeration(z22, {{1, 1}}) == 2);

    auto q3 = quotient(z22, {});
    CHECK(q3.group == z22);
    CHECK(q3.projection.equals(GroupHom::identity(z22)));
}

TEST_CASE("quotient projection is surjective with the generated kernel") {
    FiniteAbelianGroup g({4, 8});
    std::vector<Elem> gens = {{2, 4}};
    auto q = quotient(g, gens);
    CHECK(q.projection.is_surjective());
    // Kernel of the projection equals the generated subgroup, elementwise.
    auto sub = subgroup(g, gens);
    CHECK(image_by_enumeration(sub.inclusion) == kernel_by_enumeration(q.projection));
}

TEST_CASE("solve: spec examples against the enumeration oracle") {
    FiniteAbelianGroup z4({4});
    auto h = mult_by(2, z4);

    auto x1 = solve(h, {2});
    REQUIRE(x1.has_value());
    CHECK(*x1 == Elem{1});
    CHECK(h.apply(*x1) == Elem{2});

    CHECK_FALSE(solve(h, {1}).has_value());
    bool any = false;
    for (const Elem& x : z4.elements()) any = any || h.apply(x) == Elem{1};
    CHECK_FALSE(any);

    FiniteAbelianGroup z6({6});
    auto id = GroupHom::identity(z6);
    CHECK(*solve(id, {5}) == Elem{5});
}

TEST_CASE("solve is deterministic and always a genuine preimage") {
    FiniteAbelianGroup g({2, 4, 4});
    GroupHom h(g, FiniteAbelianGroup({4}), IntMat(1, 3, {2, 1, 3}));
    for (const Elem& y : FiniteAbelianGroup({4}).elements()) {
        auto x = solve(h, y);
        auto x2 = solve(h, y);
        REQUIRE(x.has_value());
        CHECK(*x == *x2);
        CHECK(h.apply(*x) == y);
    }
}

TEST_CASE("pairing: spec examples") {
    FiniteAbelianGroup z2({2}), z3({3});
    CHECK(pairing(Character{z2, {1}}, {1}) == Frac::of(1, 2));
    CHECK(pairing(Character{z3, {1}}, {2}) == Frac::of(2, 3));
    CHECK(pairing(Character{z3, {0}}, {2}) == Frac{});
    CHECK_THROWS_AS(pairing(Character{z2, {1}}, {0, 0}), InvalidInput);
}

TEST_CASE("pairing is biadditive and nondegenerate for orders <= 1000") {
    std::vector<FiniteAbelianGroup> gs = {FiniteAbelianGroup({5}), FiniteAbelianGroup({2, 4}),
                                          FiniteAbelianGroup({3, 9}), FiniteAbelianGroup({2, 2, 2})};
    for (const auto& g : gs) {
        REQUIRE(g.order() <= 1000);
        auto dual = dual_group(g);
        for (const Elem& c : dual.elements()) {
            Character w{g, c};
            for (const Elem& a : g.elements())
                for (const Elem& b : g.elements())
                    CHECK(pairing(w, g.add(a, b)) == pairing(w, a) + pairing(w, b));
        }
        for (const Elem& s : g.elements()) {
            if (s == g.zero()) continue;
            bool hit = false;
            for (const Elem& c : dual.elements()) hit = hit || !pairing(Character{g, c}, s).is_zero();
            CHECK(hit);
        }
    }
}

TEST_CASE("double dual is an additive bijection") {
    FiniteAbelianGroup g({2, 6});
    std::set<Elem> seen;
    for (const Elem& s : g.elements()) seen.insert(double_dual(g, s).components);
    CHECK(seen.size() == static_cast<size_t>(g.order()));
    for (const Elem& a : g.elements())
        for (const Elem& b : g.elements()) {
            Character da = double_dual(g, a), db = double_dual(g, b), dab = double_dual(g, g.add(a, b));
            for (const Elem& c : dual_group(g).elements()) {
                Character w{g, c};
                CHECK((pairing(w, a) + pairing(w, b)) == pairing(w, g.add(a, b)));
                CHECK(pairing(Character{dual_group(g), dab.components}, c) ==
                      pairing(Character{dual_group(g), da.components}, c) +
                          pairing(Character{dual_group(g), db.components}, c));
            }
        }
}

TEST_CASE("dual hom transposes the pairing") {
    FiniteAbelianGroup g({2, 4}), h({4});
    GroupHom f(g, h, IntMat(1, 2, {2, 1}));
    GroupHom fd = dual_hom(f);
    for (const Elem& wv : dual_group(h).elements())
        for (const Elem& x : g.elements())
            CHECK(pairing(Character{h, wv}, f.apply(x)) == pairing(Character{g, fd.apply(wv)}, x));
}

TEST_CASE("hom inverse round trips") {
    FiniteAbelianGroup z4({4});
    GroupHom neg(z4, z4, IntMat(1, 1, {3}));
    auto inv = neg.inverse();
    CHECK(inv.compose(neg).equals(GroupHom::identity(z4)));
    CHECK(neg.compose(inv).equals(GroupHom::identity(z4)));
    CHECK_THROWS_AS(mult_by(2, z4).inverse(), InvalidInput);
}

TEST_CASE("group basics: normalization, orders, bounds") {
    CHECK(FiniteAbelianGroup({1, 2, 1, 4}).factors() == std::vector<int64_t>{2, 4});
    CHECK(FiniteAbelianGroup({1}).is_trivial());
    CHECK(FiniteAbelianGroup({2, 6}).order() == 12);
    CHECK(FiniteAbelianGroup({2, 6}).exponent() == 6);
    CHECK(FiniteAbelianGroup({4, 2}).is_canonical() == false);
    CHECK(FiniteAbelianGroup({2, 4}).is_canonical() == true);
    CHECK_THROWS_AS(FiniteAbelianGroup({int64_t(1) << 40}), ArithmeticOverflow);
    FiniteAbelianGroup g({3, 4});
    CHECK(g.element_order({1, 2}) == 6);
    for (const Elem& e : g.elements()) CHECK(g.element_at(g.index_of(e)) == e);
}
