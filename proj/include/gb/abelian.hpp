#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gb/intmat.hpp"

namespace gb {

using Elem = std::vector<int64_t>;

// Hard input bound for torsion coefficients; keeps all checked 64-bit
// arithmetic comfortably away from overflow at desk scale.
constexpr int64_t kMaxTorsion = int64_t(1) << 31;

// Exact rational in [0,1): value num/den mod 1, reduced, den >= 1.
struct Frac {
    int64_t num = 0;
    int64_t den = 1;

    static Frac of(int64_t num, int64_t den);
    Frac operator+(const Frac& o) const;
    Frac operator-(const Frac& o) const;
    bool operator==(const Frac& o) const = default;
    bool is_zero() const { return num == 0; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Finite abelian group presented by torsion coefficients: Z_{d1} x ... x Z_{dk}.
// Factors of 1 are dropped on construction; the trivial group has an empty list.
// Groups produced by kernel/quotient/dual are in canonical invariant-factor
// form (d1 | d2 | ...); direct sums keep their per-part coordinates and need
// not form a chain.
class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;
    explicit FiniteAbelianGroup(std::vector<int64_t> factors);

    static FiniteAbelianGroup trivial() { return FiniteAbelianGroup(); }
    static FiniteAbelianGroup cyclic(int64_t n) { return FiniteAbelianGroup({n}); }

    const std::vector<int64_t>& factors() const { return factors_; }
    int rank() const { return static_cast<int>(factors_.size()); }
    int64_t order() const;
    int64_t exponent() const;
    bool is_trivial() const { return factors_.empty(); }
    // True when the factors form a divisibility chain (canonical form).
    bool is_canonical() const;

    bool operator==(const FiniteAbelianGroup& o) const = default;

    Elem zero() const { return Elem(factors_.size(), 0); }
    Elem reduce(const Elem& v) const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem smul(int64_t n, const Elem& a) const;
    bool contains(const Elem& v) const;
    int64_t element_order(const Elem& v) const;

    // Deterministic enumeration (mixed-radix, last coordinate fastest).
    std::vector<Elem> elements() const;
    int64_t index_of(const Elem& v) const;
    Elem element_at(int64_t idx) const;

    std::string to_string() const;  // e.g. "Z2 x Z4", "0" for trivial

private:
    std::vector<int64_t> factors_;
};

// Homomorphism between finite abelian groups as an integer matrix acting on
// coordinates: h(x) = reduce(M x).
class GroupHom {
public:
    GroupHom() = default;
    GroupHom(FiniteAbelianGroup domain, FiniteAbelianGroup codomain, IntMat matrix);

    static GroupHom identity(const FiniteAbelianGroup& g);
    static GroupHom zero(const FiniteAbelianGroup& dom, const FiniteAbelianGroup& cod);

    const FiniteAbelianGroup& domain() const { return domain_; }
    const FiniteAbelianGroup& codomain() const { return codomain_; }
    const IntMat& matrix() const { return matrix_; }

    // M[i][j] * d_j^dom == 0 mod d_i^cod for all entries.
    bool well_defined() const;
    Elem apply(const Elem& x) const;
    GroupHom compose(const GroupHom& inner) const;  // (*this) o inner
    bool equals(const GroupHom& o) const;           // same map, entrywise mod codomain
    bool is_injective() const;
    bool is_surjective() const;
    bool is_isomorphism() const { return is_injective() && is_surjective(); }
    // Two-sided inverse of an isomorphism.
    GroupHom inverse() const;

private:
    FiniteAbelianGroup domain_, codomain_;
    IntMat matrix_;
};

struct SubgroupPresentation {
    FiniteAbelianGroup group;  // canonical form
    GroupHom inclusion;        // group -> parent, injective
};

struct QuotientPresentation {
    FiniteAbelianGroup group;  // canonical form
    GroupHom projection;       // parent -> group, surjective
};

// Subgroup of `parent` generated by `generators`, with its inclusion map.
SubgroupPresentation subgroup(const FiniteAbelianGroup& parent, const std::vector<Elem>& generators);

SubgroupPresentation kernel(const GroupHom& h);
SubgroupPresentation image(const GroupHom& h);

// parent / <generators>, with the canonical projection.
QuotientPresentation quotient(const FiniteAbelianGroup& parent, const std::vector<Elem>& generators);

// Solves h(x) = y. The returned preimage is the canonical one: free parameters
// of the SNF parameterization set to zero, then reduced mod the domain factors.
std::optional<Elem> solve(const GroupHom& h, const Elem& y);

// Characters of a finite abelian group. Component vector c against element a
// pairs to sum c_i a_i / d_i mod 1.
struct Character {
    FiniteAbelianGroup group;  // the underlying group being paired against
    Elem components;

    bool operator==(const Character& o) const = default;
};

FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g);
Frac pairing(const Character& w, const Elem& s);
// Canonical isomorphism G -> dual(dual(G)); on coordinates it is the identity.
Character double_dual(const FiniteAbelianGroup& g, const Elem& s);

// Dual homomorphism: for h : G -> G', dual_hom(h) : dual(G') -> dual(G) with
// pairing(dual_hom(h)(w), x) = pairing(w, h(x)).
GroupHom dual_hom(const GroupHom& h);

// Direct sum with stable concatenated coordinates (not canonicalized).
FiniteAbelianGroup direct_sum(const std::vector<FiniteAbelianGroup>& parts);

}  // namespace gb
