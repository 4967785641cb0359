#include "gb/cech.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gb {

namespace {

std::string simplex_str(const Simplex& s) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ")";
    return os.str();
}

bool valid_simplex(const Simplex& s, int patches) {
    if (s.empty() || s.size() > 3) return false;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= patches) return false;
        if (i > 0 && s[i] <= s[i - 1]) return false;
    }
    return true;
}

std::vector<Simplex> codim1_faces(const Simplex& s) {
    std::vector<Simplex> out;
    if (s.size() < 2) return out;
    for (size_t drop = 0; drop < s.size(); ++drop) {
        Simplex t;
        for (size_t i = 0; i < s.size(); ++i)
            if (i != drop) t.push_back(s[i]);
        out.push_back(t);
    }
    return out;
}

bool is_face(const Simplex& t, const Simplex& s) {
    return std::includes(s.begin(), s.end(), t.begin(), t.end());
}

}  // namespace

int CoverComplex::n_comps(const Simplex& s) const {
    auto it = comps.find(s);
    return it == comps.end() ? 0 : it->second;
}

int CoverComplex::face(const Simplex& s, const Simplex& t, int comp) const {
    if (t == s) return comp;
    if (!is_face(t, s) || t.empty())
        throw InvalidInput("face: " + simplex_str(t) + " is not a face of " + simplex_str(s));
    if (t.size() + 1 == s.size()) {
        auto it = faces.find({s, t});
        if (it == faces.end()) throw InvalidInput("face map missing for " + simplex_str(s) + " -> " + simplex_str(t));
        return it->second.at(comp);
    }
    // Compose through the first codimension-1 face containing t; validation
    // guarantees path independence.
    for (const Simplex& u : codim1_faces(s))
        if (is_face(t, u)) return face(u, t, face(s, u, comp));
    throw InvalidInput("face: no chain from " + simplex_str(s) + " to " + simplex_str(t));
}

std::vector<Simplex> CoverComplex::simplices(int degree) const {
    std::vector<Simplex> out;
    for (const auto& [s, n] : comps)
        if (static_cast<int>(s.size()) == degree + 1) out.push_back(s);
    return out;
}

void CoverComplex::validate() const {
    if (patches < 1) throw InvalidInput("cover needs at least one patch");
    for (int i = 0; i < patches; ++i)
        if (!has({i})) throw InvalidInput("patch " + std::to_string(i) + " has no components");
    for (const auto& [s, n] : comps) {
        if (!valid_simplex(s, patches)) throw InvalidInput("invalid simplex " + simplex_str(s));
        if (n < 1) throw InvalidInput("simplex " + simplex_str(s) + " stored with no components");
        for (const Simplex& t : codim1_faces(s)) {
            if (!has(t))
                throw InvalidInput("simplex " + simplex_str(s) + " nonempty but face " + simplex_str(t) + " empty");
            auto it = faces.find({s, t});
            if (it == faces.end()) throw InvalidInput("face map missing for " + simplex_str(s) + " -> " + simplex_str(t));
            if (static_cast<int>(it->second.size()) != n)
                throw InvalidInput("face map size mismatch for " + simplex_str(s) + " -> " + simplex_str(t));
            for (int c : it->second)
                if (c < 0 || c >= n_comps(t)) throw InvalidInput("face map out of range for " + simplex_str(s));
        }
    }
    for (const auto& [key, fmap] : faces) {
        if (!has(key.first) || !has(key.second) || key.second.size() + 1 != key.first.size() ||
            !is_face(key.second, key.first))
            throw InvalidInput("extraneous face map entry");
        (void)fmap;
    }
    // Face maps commute: all paths from a triple to a vertex agree.
    for (const auto& [s, n] : comps) {
        if (s.size() != 3) continue;
        for (int v : s) {
            std::vector<int> expected(n, -1);
            for (const Simplex& u : codim1_faces(s)) {
                if (!is_face({v}, u)) continue;
                for (int c = 0; c < n; ++c) {
                    int r = face(u, {v}, face(s, u, c));
                    if (expected[c] == -1) expected[c] = r;
                    else if (expected[c] != r)
                        throw InvalidInput("face maps do not commute on " + simplex_str(s));
                }
            }
        }
    }
}

GroupHom BundlePresentation::transport(int a, int b, int comp) const {
    if (a == b) return GroupHom::identity(fiber(a));
    Simplex p = {std::min(a, b), std::max(a, b)};
    auto it = glue.find({p, comp});
    if (it == glue.end())
        throw InvalidInput("missing gluing for " + simplex_str(p) + " component " + std::to_string(comp));
    if (a < b) return it->second;
    return it->second.inverse();
}

void BundlePresentation::validate() const {
    complex.validate();
    if (static_cast<int>(fibers.size()) != complex.patches)
        throw InvalidInput("presentation needs one fiber group per patch");
    for (const Simplex& s : complex.simplices(1)) {
        int i = s[0], j = s[1];
        for (int c = 0; c < complex.n_comps(s); ++c) {
            auto it = glue.find({s, c});
            if (it == glue.end())
                throw InvalidInput("missing gluing for " + simplex_str(s) + " component " + std::to_string(c));
            const GroupHom& t = it->second;
            if (!(t.domain() == fiber(j)) || !(t.codomain() == fiber(i)))
                throw InvalidInput("gluing for " + simplex_str(s) + " has wrong domain or codomain");
            if (!t.is_isomorphism()) throw InvalidInput("gluing for " + simplex_str(s) + " is not an isomorphism");
        }
    }
    for (const auto& [key, t] : glue) {
        if (!complex.has(key.first) || key.first.size() != 2 || key.second < 0 ||
            key.second >= complex.n_comps(key.first))
            throw InvalidInput("extraneous gluing entry");
        (void)t;
    }
    // Cocycle compatibility over triple overlaps: theta_ij . theta_jk = theta_ik.
    for (const Simplex& s : complex.simplices(2)) {
        int i = s[0], j = s[1], k = s[2];
        for (int c = 0; c < complex.n_comps(s); ++c) {
            GroupHom tij = transport(i, j, complex.face(s, {i, j}, c));
            GroupHom tjk = transport(j, k, complex.face(s, {j, k}, c));
            GroupHom tik = transport(i, k, complex.face(s, {i, k}, c));
            if (!tij.compose(tjk).equals(tik))
                throw InvalidInput("gluing cocycle compatibility fails on " + simplex_str(s) + " component " +
                                   std::to_string(c));
        }
    }
}

Elem SectionGroup::component(const Elem& value, int comp) const {
    int r = fiber.rank();
    return Elem(value.begin() + static_cast<size_t>(comp) * r, value.begin() + static_cast<size_t>(comp + 1) * r);
}

void SectionGroup::set_component(Elem& value, int comp, const Elem& v) const {
    int r = fiber.rank();
    if (static_cast<int>(v.size()) != r) throw InvalidInput("section component has wrong rank");
    std::copy(v.begin(), v.end(), value.begin() + static_cast<size_t>(comp) * r);
}

SectionGroup sections(const BundlePresentation& b, const Simplex& s) {
    if (!valid_simplex(s, b.complex.patches) || !b.complex.has(s))
        throw InvalidInput("sections: invalid simplex " + simplex_str(s));
    SectionGroup g;
    g.simplex = s;
    g.n_comps = b.complex.n_comps(s);
    g.fiber = b.fiber(s[0]);
    g.group = direct_sum(std::vector<FiniteAbelianGroup>(g.n_comps, g.fiber));
    return g;
}

GroupHom restriction(const BundlePresentation& b, const Simplex& s, const Simplex& t) {
    if (!b.complex.has(s) || !b.complex.has(t) || !is_face(t, s) || t == s)
        throw InvalidInput("restriction: " + simplex_str(t) + " is not a proper face of " + simplex_str(s));
    SectionGroup src = sections(b, t);
    SectionGroup dst = sections(b, s);
    IntMat m(dst.group.rank(), src.group.rank());
    const int rs = src.fiber.rank(), rd = dst.fiber.rank();
    for (int c = 0; c < dst.n_comps; ++c) {
        int f = b.complex.face(s, t, c);
        GroupHom tr = GroupHom::identity(dst.fiber);
        if (t[0] != s[0]) tr = b.transport(s[0], t[0], b.complex.face(s, Simplex{s[0], t[0]}, c));
        for (int r = 0; r < rd; ++r)
            for (int q = 0; q < rs; ++q) m(c * rd + r, f * rs + q) = tr.matrix()(r, q);
    }
    return GroupHom(src.group, dst.group, m);
}

Elem CochainSpace::pack(const CechCochain& c) const {
    if (c.degree != degree) throw InvalidInput("cochain degree mismatch");
    Elem out = total.zero();
    int off = 0;
    for (size_t i = 0; i < simplices.size(); ++i) {
        auto it = c.values.find(simplices[i]);
        if (it != c.values.end()) {
            Elem v = parts[i].group.reduce(it->second);
            std::copy(v.begin(), v.end(), out.begin() + off);
        }
        off += parts[i].group.rank();
    }
    return out;
}

CechCochain CochainSpace::unpack(const Elem& v) const {
    CechCochain c;
    c.degree = degree;
    int off = 0;
    for (size_t i = 0; i < simplices.size(); ++i) {
        int r = parts[i].group.rank();
        c.values[simplices[i]] = Elem(v.begin() + off, v.begin() + off + r);
        off += r;
    }
    return c;
}

CochainSpace cochain_space(const BundlePresentation& b, int degree) {
    if (degree < 0 || degree > 2) throw InvalidInput("cochain degree must be 0, 1 or 2");
    CochainSpace sp;
    sp.degree = degree;
    sp.simplices = b.complex.simplices(degree);
    int off = 0;
    std::vector<FiniteAbelianGroup> groups;
    for (const Simplex& s : sp.simplices) {
        sp.parts.push_back(sections(b, s));
        sp.offsets.push_back(off);
        off += sp.parts.back().group.rank();
        groups.push_back(sp.parts.back().group);
    }
    sp.total = direct_sum(groups);
    return sp;
}

GroupHom differential(const BundlePresentation& b, int degree) {
    if (degree != 0 && degree != 1) throw InvalidInput("differential degree must be 0 or 1");
    CochainSpace src = cochain_space(b, degree);
    CochainSpace dst = cochain_space(b, degree + 1);
    IntMat m(dst.total.rank(), src.total.rank());
    auto src_offset = [&](const Simplex& t) {
        for (size_t i = 0; i < src.simplices.size(); ++i)
            if (src.simplices[i] == t) return src.offsets[i];
        throw InvalidInput("differential: missing face simplex");
    };
    for (size_t di = 0; di < dst.simplices.size(); ++di) {
        const Simplex& s = dst.simplices[di];
        // Sign convention: d0(b)_ij = b_i - b_j and d1(g)_ijk = g_jk - g_ik + g_ij,
        // so the coboundary relation between isomorphic trivializations reads
        // eta_ij = beta_i + gamma_ij - beta_j. Faces are in drop order, which
        // flips the alternating signs in degree 0.
        std::vector<Simplex> fs = codim1_faces(s);
        for (size_t fi = 0; fi < fs.size(); ++fi) {
            int sign = (fi % 2 == 0) ? 1 : -1;
            if (degree == 0) sign = -sign;
            IntMat r = restriction(b, s, fs[fi]).matrix();
            int co = src_offset(fs[fi]);
            for (int i = 0; i < r.rows(); ++i)
                for (int j = 0; j < r.cols(); ++j)
                    m(dst.offsets[di] + i, co + j) = checked_add(m(dst.offsets[di] + i, co + j), sign * r(i, j));
        }
    }
    return GroupHom(src.total, dst.total, m);
}

Elem eval_ordered(const BundlePresentation& b, const CechCochain& c, const std::vector<int>& tuple, int comp) {
    if (c.degree == 1) {
        if (tuple.size() != 2) throw InvalidInput("eval_ordered: need a pair for a degree-1 cochain");
        int a = tuple[0], a2 = tuple[1];
        if (a == a2) return b.fiber(a).zero();
        Simplex p = {std::min(a, a2), std::max(a, a2)};
        SectionGroup sg = sections(b, p);
        auto it = c.values.find(p);
        Elem stored = it == c.values.end() ? sg.group.zero() : sg.group.reduce(it->second);
        Elem v = sg.component(stored, comp);
        if (a < a2) return v;
        GroupHom t = b.transport(a, p[0], comp);  // H_min -> H_a
        return b.fiber(a).neg(t.apply(v));
    }
    if (c.degree == 2) {
        if (tuple.size() != 3) throw InvalidInput("eval_ordered: need a triple for a degree-2 cochain");
        Simplex s = tuple;
        std::sort(s.begin(), s.end());
        if (s[0] == s[1] || s[1] == s[2]) return b.fiber(tuple[0]).zero();
        int sign = 1;
        std::vector<int> t = tuple;
        for (size_t i = 0; i < t.size(); ++i)
            for (size_t j = i + 1; j < t.size(); ++j)
                if (t[i] > t[j]) {
                    std::swap(t[i], t[j]);
                    sign = -sign;
                }
        SectionGroup sg = sections(b, s);
        auto it = c.values.find(s);
        Elem stored = it == c.values.end() ? sg.group.zero() : sg.group.reduce(it->second);
        Elem v = sg.component(stored, comp);
        if (tuple[0] != s[0]) {
            GroupHom tr = b.transport(tuple[0], s[0], b.complex.face(s, Simplex{s[0], tuple[0]}, comp));
            v = tr.apply(v);
        }
        return b.fiber(tuple[0]).smul(sign, v);
    }
    throw InvalidInput("eval_ordered: degree must be 1 or 2");
}

bool is_cocycle(const BundlePresentation& b, const CechCochain& c) { return !cocycle_defect(b, c).has_value(); }

std::optional<Simplex> cocycle_defect(const BundlePresentation& b, const CechCochain& c) {
    if (c.degree != 1) throw InvalidInput("cocycle check expects a degree-1 cochain");
    CochainSpace c1 = cochain_space(b, 1);
    CochainSpace c2 = cochain_space(b, 2);
    if (c2.total.rank() == 0) return std::nullopt;
    Elem image = differential(b, 1).apply(c1.pack(c));
    for (size_t i = 0; i < c2.simplices.size(); ++i) {
        int r = c2.parts[i].group.rank();
        for (int q = 0; q < r; ++q)
            if (image[c2.offsets[i] + q] != 0) return c2.simplices[i];
    }
    return std::nullopt;
}

std::optional<CechCochain> coboundary_witness(const BundlePresentation& b, const CechCochain& gamma) {
    if (auto bad = cocycle_defect(b, gamma))
        throw InvalidInput("coboundary_witness: not a cocycle, identity fails on " + simplex_str(*bad));
    GroupHom d0 = differential(b, 0);
    auto x = solve(d0, cochain_space(b, 1).pack(gamma));
    if (!x) return std::nullopt;
    return cochain_space(b, 0).unpack(*x);
}

Cohomology::Cohomology(const BundlePresentation& b, int degree) : degree_(degree) {
    if (degree != 0 && degree != 1) throw InvalidInput("cohomology degree must be 0 or 1");
    space_ = cochain_space(b, degree);
    GroupHom d = differential(b, degree);
    auto ker = kernel(d);
    incl_ = ker.inclusion;
    std::vector<Elem> image_in_kernel;
    if (degree == 1) {
        GroupHom d0 = differential(b, 0);
        const FiniteAbelianGroup& c0 = d0.domain();
        for (int j = 0; j < c0.rank(); ++j) {
            Elem e = c0.zero();
            e[j] = 1;
            auto k = solve(incl_, d0.apply(e));
            if (!k) throw InvalidInput("cohomology: d1 . d0 != 0");
            image_in_kernel.push_back(*k);
        }
    }
    auto q = quotient(ker.group, image_in_kernel);
    proj_ = q.projection;
    group_ = q.group;
}

Elem Cohomology::coords(const CechCochain& z) const {
    auto k = solve(incl_, space_.pack(z));
    if (!k) throw InvalidInput("coords: cochain is not a cocycle");
    return proj_.apply(*k);
}

CechCochain Cohomology::representative(const Elem& h) const {
    auto k = solve(proj_, group_.reduce(h));
    if (!k) throw InvalidInput("representative: class outside H^n");
    return space_.unpack(incl_.apply(*k));
}

Simplex Refinement::image_simplex(const Simplex& s) const {
    std::set<int> im;
    for (int p : s) im.insert(patch_map.at(p));
    return Simplex(im.begin(), im.end());
}

void Refinement::validate(const CoverComplex& coarse) const {
    fine.validate();
    coarse.validate();
    if (static_cast<int>(patch_map.size()) != fine.patches)
        throw InvalidInput("refinement: patch map size mismatch");
    for (int p : patch_map)
        if (p < 0 || p >= coarse.patches) throw InvalidInput("refinement: patch map out of range");
    for (const auto& [s, n] : fine.comps) {
        Simplex im = image_simplex(s);
        if (!coarse.has(im))
            throw InvalidInput("refinement: image simplex " + simplex_str(im) + " is empty in the coarse cover");
        for (int c = 0; c < n; ++c) {
            auto it = comp_lift.find({s, c});
            if (it == comp_lift.end())
                throw InvalidInput("refinement: missing component lift for " + simplex_str(s));
            if (it->second < 0 || it->second >= coarse.n_comps(im))
                throw InvalidInput("refinement: component lift out of range for " + simplex_str(s));
        }
        for (const Simplex& t : codim1_faces(s)) {
            Simplex imt = image_simplex(t);
            for (int c = 0; c < n; ++c) {
                int via_fine = comp_lift.at({t, fine.face(s, t, c)});
                int via_coarse = coarse.face(im, imt, comp_lift.at({s, c}));
                if (via_fine != via_coarse)
                    throw InvalidInput("refinement: component lifts inconsistent with faces on " + simplex_str(s));
            }
        }
    }
}

Refinement identity_refinement(const CoverComplex& c) {
    Refinement r;
    r.fine = c;
    r.patch_map.resize(c.patches);
    for (int i = 0; i < c.patches; ++i) r.patch_map[i] = i;
    for (const auto& [s, n] : c.comps)
        for (int k = 0; k < n; ++k) r.comp_lift[{s, k}] = k;
    return r;
}

BundlePresentation refine_presentation(const BundlePresentation& coarse, const Refinement& r) {
    r.validate(coarse.complex);
    BundlePresentation fine;
    fine.complex = r.fine;
    for (int i = 0; i < r.fine.patches; ++i) fine.fibers.push_back(coarse.fiber(r.patch_map[i]));
    for (const Simplex& s : r.fine.simplices(1)) {
        int a = r.patch_map[s[0]], b2 = r.patch_map[s[1]];
        for (int c = 0; c < r.fine.n_comps(s); ++c) {
            int cc = r.comp_lift.at({s, c});
            if (a == b2) {
                fine.glue.insert({{s, c}, GroupHom::identity(coarse.fiber(a))});
            } else {
                Simplex im = r.image_simplex(s);
                Simplex p = {std::min(a, b2), std::max(a, b2)};
                int pc = coarse.complex.face(im, p, cc);
                fine.glue.insert({{s, c}, coarse.transport(a, b2, pc)});
            }
        }
    }
    fine.validate();
    return fine;
}

CechCochain refine_cochain(const BundlePresentation& coarse, const Refinement& r, const CechCochain& c) {
    BundlePresentation fine = refine_presentation(coarse, r);
    CechCochain out;
    out.degree = c.degree;
    for (const Simplex& s : r.fine.simplices(c.degree)) {
        SectionGroup sg = sections(fine, s);
        Elem v = sg.group.zero();
        for (int comp = 0; comp < sg.n_comps; ++comp) {
            int cc = r.comp_lift.at({s, comp});
            if (c.degree == 0) {
                Simplex im = r.image_simplex(s);
                SectionGroup src = sections(coarse, im);
                auto it = c.values.find(im);
                Elem stored = it == c.values.end() ? src.group.zero() : src.group.reduce(it->second);
                sg.set_component(v, comp, src.component(stored, cc));
            } else {
                std::vector<int> tuple;
                for (int p : s) tuple.push_back(r.patch_map[p]);
                sg.set_component(v, comp, eval_ordered(coarse, c, tuple, cc));
            }
        }
        out.values[s] = v;
    }
    return out;
}

GroupHom induced_h1(const BundlePresentation& coarse, const Refinement& r) {
    BundlePresentation fine = refine_presentation(coarse, r);
    Cohomology hc(coarse, 1);
    Cohomology hf(fine, 1);
    IntMat m(hf.group().rank(), hc.group().rank());
    for (int j = 0; j < hc.group().rank(); ++j) {
        Elem e = hc.group().zero();
        e[j] = 1;
        Elem col = hf.coords(refine_cochain(coarse, r, hc.representative(e)));
        for (int i = 0; i < hf.group().rank(); ++i) m(i, j) = col[i];
    }
    return GroupHom(hc.group(), hf.group(), m);
}

CechCochain cochain_add(const BundlePresentation& b, const CechCochain& x, const CechCochain& y) {
    if (x.degree != y.degree) throw InvalidInput("cochain_add: degree mismatch");
    CochainSpace sp = cochain_space(b, x.degree);
    return sp.unpack(sp.total.add(sp.pack(x), sp.pack(y)));
}

CechCochain cochain_sub(const BundlePresentation& b, const CechCochain& x, const CechCochain& y) {
    if (x.degree != y.degree) throw InvalidInput("cochain_sub: degree mismatch");
    CochainSpace sp = cochain_space(b, x.degree);
    return sp.unpack(sp.total.sub(sp.pack(x), sp.pack(y)));
}

CechCochain zero_cochain(const BundlePresentation& b, int degree) {
    CochainSpace sp = cochain_space(b, degree);
    return sp.unpack(sp.zero());
}

}  // namespace gb
