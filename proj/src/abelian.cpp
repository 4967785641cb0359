#include "gb/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gb {

Frac Frac::of(int64_t num, int64_t den) {
    if (den <= 0) throw InvalidInput("Frac: denominator must be positive");
    num = mod_pos(num, den);
    int64_t g = gcd64(num, den);
    if (g == 0) g = 1;
    return Frac{num / g, den / g};
}

Frac Frac::operator+(const Frac& o) const {
    int64_t g = gcd64(den, o.den);
    int64_t l = checked_mul(den / g, o.den);
    return Frac::of(checked_add(checked_mul(num, l / den), checked_mul(o.num, l / o.den)), l);
}

Frac Frac::operator-(const Frac& o) const { return *this + Frac::of(-o.num, o.den); }

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int64_t> factors) {
    for (int64_t d : factors) {
        if (d < 1) throw InvalidInput("group factor must be >= 1");
        if (d > kMaxTorsion) throw ArithmeticOverflow("group factor exceeds supported bound");
        if (d > 1) factors_.push_back(d);
    }
}

int64_t FiniteAbelianGroup::order() const {
    int64_t n = 1;
    for (int64_t d : factors_) n = checked_mul(n, d);
    return n;
}

int64_t FiniteAbelianGroup::exponent() const {
    int64_t e = 1;
    for (int64_t d : factors_) e = checked_mul(e / gcd64(e, d), d);
    return e;
}

bool FiniteAbelianGroup::is_canonical() const {
    for (size_t i = 0; i + 1 < factors_.size(); ++i)
        if (factors_[i + 1] % factors_[i] != 0) return false;
    return true;
}

Elem FiniteAbelianGroup::reduce(const Elem& v) const {
    if (v.size() != factors_.size()) throw InvalidInput("element rank mismatch");
    Elem r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = mod_pos(v[i], factors_[i]);
    return r;
}

Elem FiniteAbelianGroup::add(const Elem& a, const Elem& b) const {
    if (a.size() != factors_.size() || b.size() != factors_.size()) throw InvalidInput("element rank mismatch");
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_pos(checked_add(a[i], b[i]), factors_[i]);
    return r;
}

Elem FiniteAbelianGroup::sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

Elem FiniteAbelianGroup::neg(const Elem& a) const {
    if (a.size() != factors_.size()) throw InvalidInput("element rank mismatch");
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_pos(-a[i], factors_[i]);
    return r;
}

Elem FiniteAbelianGroup::smul(int64_t n, const Elem& a) const {
    if (a.size() != factors_.size()) throw InvalidInput("element rank mismatch");
    Elem r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_pos(checked_mul(mod_pos(n, factors_[i]), a[i]), factors_[i]);
    return r;
}

bool FiniteAbelianGroup::contains(const Elem& v) const {
    if (v.size() != factors_.size()) return false;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] < 0 || v[i] >= factors_[i]) return false;
    return true;
}

int64_t FiniteAbelianGroup::element_order(const Elem& v) const {
    if (v.size() != factors_.size()) throw InvalidInput("element rank mismatch");
    int64_t o = 1;
    for (size_t i = 0; i < v.size(); ++i) {
        int64_t oi = factors_[i] / gcd64(v[i], factors_[i]);
        o = checked_mul(o / gcd64(o, oi), oi);
    }
    return o;
}

std::vector<Elem> FiniteAbelianGroup::elements() const {
    int64_t n = order();
    std::vector<Elem> out;
    out.reserve(static_cast<size_t>(n));
    for (int64_t i = 0; i < n; ++i) out.push_back(element_at(i));
    return out;
}

int64_t FiniteAbelianGroup::index_of(const Elem& v) const {
    if (!contains(v)) throw InvalidInput("index_of: element not in group");
    int64_t idx = 0;
    for (size_t i = 0; i < factors_.size(); ++i) idx = checked_add(checked_mul(idx, factors_[i]), v[i]);
    return idx;
}

Elem FiniteAbelianGroup::element_at(int64_t idx) const {
    Elem v(factors_.size());
    for (size_t i = factors_.size(); i-- > 0;) {
        v[i] = idx % factors_[i];
        idx /= factors_[i];
    }
    return v;
}

std::string FiniteAbelianGroup::to_string() const {
    if (factors_.empty()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << " x ";
        os << "Z" << factors_[i];
    }
    return os.str();
}

GroupHom::GroupHom(FiniteAbelianGroup domain, FiniteAbelianGroup codomain, IntMat matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != codomain_.rank() || matrix_.cols() != domain_.rank())
        throw InvalidInput("GroupHom: matrix shape must be codomain rank x domain rank");
    if (!well_defined()) throw InvalidInput("GroupHom: matrix does not define a homomorphism");
}

GroupHom GroupHom::identity(const FiniteAbelianGroup& g) {
    return GroupHom(g, g, IntMat::identity(g.rank()));
}

GroupHom GroupHom::zero(const FiniteAbelianGroup& dom, const FiniteAbelianGroup& cod) {
    return GroupHom(dom, cod, IntMat(cod.rank(), dom.rank()));
}

bool GroupHom::well_defined() const {
    for (int i = 0; i < matrix_.rows(); ++i)
        for (int j = 0; j < matrix_.cols(); ++j)
            if (mod_pos(checked_mul(matrix_(i, j), domain_.factors()[j]), codomain_.factors()[i]) != 0)
                return false;
    return true;
}

Elem GroupHom::apply(const Elem& x) const {
    if (!domain_.contains(domain_.reduce(x))) throw InvalidInput("hom applied to element outside domain");
    return codomain_.reduce(matrix_.apply(x));
}

GroupHom GroupHom::compose(const GroupHom& inner) const {
    if (!(inner.codomain_ == domain_)) throw InvalidInput("hom composition: domain mismatch");
    IntMat m = matrix_ * inner.matrix_;
    // Reduce entries mod the codomain factors to keep coefficients small.
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = mod_pos(m(i, j), codomain_.factors()[i]);
    return GroupHom(inner.domain_, codomain_, m);
}

bool GroupHom::equals(const GroupHom& o) const {
    if (!(domain_ == o.domain_) || !(codomain_ == o.codomain_)) return false;
    for (int i = 0; i < matrix_.rows(); ++i)
        for (int j = 0; j < matrix_.cols(); ++j)
            if (mod_pos(matrix_(i, j), codomain_.factors()[i]) != mod_pos(o.matrix_(i, j), codomain_.factors()[i]))
                return false;
    return true;
}

bool GroupHom::is_injective() const { return kernel(*this).group.is_trivial(); }

bool GroupHom::is_surjective() const { return image(*this).group.order() == codomain_.order(); }

GroupHom GroupHom::inverse() const {
    if (domain_.order() != codomain_.order()) throw InvalidInput("inverse: not an isomorphism");
    IntMat m(domain_.rank(), codomain_.rank());
    for (int j = 0; j < codomain_.rank(); ++j) {
        Elem e = codomain_.zero();
        e[j] = 1;
        auto x = solve(*this, e);
        if (!x) throw InvalidInput("inverse: hom is not surjective");
        for (int i = 0; i < domain_.rank(); ++i) m(i, j) = (*x)[i];
    }
    GroupHom inv(codomain_, domain_, m);
    if (!inv.compose(*this).equals(GroupHom::identity(domain_)) ||
        !compose(inv).equals(GroupHom::identity(codomain_)))
        throw InvalidInput("inverse: hom is not an isomorphism");
    return inv;
}

namespace {

IntMat generators_matrix(const FiniteAbelianGroup& parent, const std::vector<Elem>& generators) {
    IntMat g(parent.rank(), static_cast<int>(generators.size()));
    for (size_t j = 0; j < generators.size(); ++j) {
        if (!parent.contains(parent.reduce(generators[j]))) throw InvalidInput("generator outside parent group");
        Elem r = parent.reduce(generators[j]);
        for (int i = 0; i < parent.rank(); ++i) g(i, static_cast<int>(j)) = r[i];
    }
    return g;
}

}  // namespace

SubgroupPresentation subgroup(const FiniteAbelianGroup& parent, const std::vector<Elem>& generators) {
    const int k = parent.rank();
    IntMat gen = generators_matrix(parent, generators);
    const int m = gen.cols();
    // Relation lattice: v in Z^m with gen*v = 0 mod the parent relations.
    IntMat rel_full = integer_kernel(gen.hcat(IntMat::diagonal(parent.factors())));
    IntMat rel(m, rel_full.cols());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < rel_full.cols(); ++j) rel(i, j) = rel_full(i, j);

    SmithNormalForm s = smith_normal_form(rel);
    // Z^m / rel = (+) Z_{delta_t}; columns of U^{-1} give the generator combos.
    // U is unimodular, so each column solve is exact.
    IntMat uinv(m, m);
    for (int t = 0; t < m; ++t) {
        std::vector<int64_t> e(m, 0);
        e[t] = 1;
        auto x = integer_solve(s.u, e);
        for (int i = 0; i < m; ++i) uinv(i, t) = (*x)[i];
    }
    std::vector<int64_t> deltas(m, 0);
    for (int t = 0; t < std::min(m, rel.cols()); ++t) deltas[t] = s.d(t, t);

    std::vector<int64_t> fac;
    std::vector<int> kept;
    for (int t = 0; t < m; ++t) {
        if (deltas[t] == 0) throw InvalidInput("subgroup: relation lattice not full rank");
        if (deltas[t] > 1) {
            fac.push_back(deltas[t]);
            kept.push_back(t);
        }
    }
    FiniteAbelianGroup sub(fac);
    IntMat inc(k, static_cast<int>(kept.size()));
    for (size_t c = 0; c < kept.size(); ++c) {
        std::vector<int64_t> combo = uinv.col(kept[c]);
        std::vector<int64_t> img = gen.apply(combo);
        for (int i = 0; i < k; ++i) inc(i, static_cast<int>(c)) = mod_pos(img[i], parent.factors()[i]);
    }
    return SubgroupPresentation{sub, GroupHom(sub, parent, inc)};
}

SubgroupPresentation kernel(const GroupHom& h) {
    const int k = h.domain().rank();
    // x with M x = 0 mod codomain relations: integer kernel of [M | diag(cod)],
    // projected to the x block, plus the parent relations themselves.
    IntMat n = h.matrix().hcat(IntMat::diagonal(h.codomain().factors()));
    IntMat big = integer_kernel(n);
    std::vector<Elem> gens;
    for (int j = 0; j < big.cols(); ++j) {
        Elem x(k);
        for (int i = 0; i < k; ++i) x[i] = big(i, j);
        gens.push_back(h.domain().reduce(x));
    }
    return subgroup(h.domain(), gens);
}

SubgroupPresentation image(const GroupHom& h) {
    std::vector<Elem> gens;
    for (int j = 0; j < h.domain().rank(); ++j) {
        Elem e = h.domain().zero();
        e[j] = 1;
        gens.push_back(h.apply(e));
    }
    return subgroup(h.codomain(), gens);
}

QuotientPresentation quotient(const FiniteAbelianGroup& parent, const std::vector<Elem>& generators) {
    const int k = parent.rank();
    IntMat gen = generators_matrix(parent, generators);
    IntMat lattice = gen.hcat(IntMat::diagonal(parent.factors()));
    SmithNormalForm s = smith_normal_form(lattice);

    std::vector<int64_t> fac;
    std::vector<int> kept;
    for (int i = 0; i < k; ++i) {
        int64_t di = s.d(i, i);
        if (di == 0) throw InvalidInput("quotient: relation lattice not full rank");
        if (di > 1) {
            fac.push_back(di);
            kept.push_back(i);
        }
    }
    FiniteAbelianGroup q(fac);
    IntMat proj(static_cast<int>(kept.size()), k);
    for (size_t r = 0; r < kept.size(); ++r)
        for (int j = 0; j < k; ++j) proj(static_cast<int>(r), j) = mod_pos(s.u(kept[r], j), fac[r]);
    return QuotientPresentation{q, GroupHom(parent, q, proj)};
}

std::optional<Elem> solve(const GroupHom& h, const Elem& y) {
    if (!h.codomain().contains(h.codomain().reduce(y))) throw InvalidInput("solve: rhs outside codomain");
    IntMat n = h.matrix().hcat(IntMat::diagonal(h.codomain().factors()));
    std::vector<int64_t> rhs = h.codomain().reduce(y);
    auto z = integer_solve(n, rhs);
    if (!z) return std::nullopt;
    Elem x(h.domain().rank());
    for (int i = 0; i < h.domain().rank(); ++i) x[i] = (*z)[i];
    return h.domain().reduce(x);
}

FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g) { return FiniteAbelianGroup(g.factors()); }

Frac pairing(const Character& w, const Elem& s) {
    if (w.components.size() != s.size() || !w.group.contains(w.group.reduce(s)))
        throw InvalidInput("pairing: mismatched groups");
    Frac acc;
    for (size_t i = 0; i < s.size(); ++i)
        acc = acc + Frac::of(checked_mul(w.components[i], s[i]), w.group.factors()[i]);
    return acc;
}

Character double_dual(const FiniteAbelianGroup& g, const Elem& s) {
    // Characters of dual(G) use the same coordinates; dd(s)(w) = pairing(w, s).
    return Character{dual_group(g), g.reduce(s)};
}

GroupHom dual_hom(const GroupHom& h) {
    const auto& dd = h.domain().factors();
    const auto& cd = h.codomain().factors();
    IntMat m(h.domain().rank(), h.codomain().rank());
    for (int j = 0; j < h.domain().rank(); ++j)
        for (int i = 0; i < h.codomain().rank(); ++i) {
            int64_t num = checked_mul(dd[j], h.matrix()(i, j));
            if (num % cd[i] != 0) throw InvalidInput("dual_hom: hom not well defined");
            m(j, i) = mod_pos(num / cd[i], dd[j]);
        }
    return GroupHom(dual_group(h.codomain()), dual_group(h.domain()), m);
}

FiniteAbelianGroup direct_sum(const std::vector<FiniteAbelianGroup>& parts) {
    std::vector<int64_t> fac;
    for (const auto& p : parts) fac.insert(fac.end(), p.factors().begin(), p.factors().end());
    return FiniteAbelianGroup(fac);
}

}  // namespace gb
