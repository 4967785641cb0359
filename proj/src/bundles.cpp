#include "gb/bundles.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace gb {

namespace {

std::string point_str(int u) { return "point " + std::to_string(u); }

// All subsets of `items` of size 1..3, each sorted.
std::vector<Simplex> small_subsets(const std::vector<int>& items) {
    std::vector<Simplex> out;
    const size_t n = items.size();
    for (size_t i = 0; i < n; ++i) {
        out.push_back({items[i]});
        for (size_t j = i + 1; j < n; ++j) {
            out.push_back({items[i], items[j]});
            for (size_t k = j + 1; k < n; ++k) out.push_back({items[i], items[j], items[k]});
        }
    }
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int root(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void join(int a, int b) {
        a = root(a);
        b = root(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

bool presentations_equal(const BundlePresentation& a, const BundlePresentation& b) {
    if (a.complex.patches != b.complex.patches || a.complex.comps != b.complex.comps ||
        a.complex.faces != b.complex.faces)
        return false;
    if (a.fibers.size() != b.fibers.size()) return false;
    for (size_t i = 0; i < a.fibers.size(); ++i)
        if (!(a.fibers[i] == b.fibers[i])) return false;
    if (a.glue.size() != b.glue.size()) return false;
    auto it1 = a.glue.begin();
    auto it2 = b.glue.begin();
    for (; it1 != a.glue.end(); ++it1, ++it2) {
        if (it1->first != it2->first) return false;
        if (!it1->second.equals(it2->second)) return false;
    }
    return true;
}

void PrincipalBundle::validate() const {
    presentation.validate();
    if (cocycle.degree != 1) throw InvalidInput("principal bundle cocycle must have degree 1");
    for (const auto& [s, v] : cocycle.values) {
        if (!presentation.complex.has(s) || s.size() != 2) throw InvalidInput("cocycle entry on an invalid simplex");
        (void)v;
    }
    if (auto bad = cocycle_defect(presentation, cocycle)) {
        std::ostringstream os;
        os << "transition data violates the cocycle identity on (" << (*bad)[0] << "," << (*bad)[1] << ","
           << (*bad)[2] << ")";
        throw InvalidInput(os.str());
    }
}

Elem PrincipalBundle::class_coords() const { return Cohomology(presentation, 1).coords(cocycle); }

bool PointedCover::point_in(int point, int patch) const {
    const auto& ps = patches_of.at(point);
    return std::binary_search(ps.begin(), ps.end(), patch);
}

int PointedCover::component(int point, const Simplex& s) const {
    auto it = comp_assign.find({point, s});
    if (it == comp_assign.end()) throw InvalidInput("missing component assignment for " + point_str(point));
    return it->second;
}

void PointedCover::validate(const CoverComplex& c) const {
    if (static_cast<int>(patches_of.size()) != n_points) throw InvalidInput("pointed cover size mismatch");
    for (int u = 0; u < n_points; ++u) {
        const auto& ps = patches_of[u];
        if (ps.empty()) throw InvalidInput(point_str(u) + " lies in no patch");
        if (!std::is_sorted(ps.begin(), ps.end()) || std::adjacent_find(ps.begin(), ps.end()) != ps.end())
            throw InvalidInput(point_str(u) + " has an unsorted or duplicated patch list");
        for (int p : ps)
            if (p < 0 || p >= c.patches) throw InvalidInput(point_str(u) + " lies in an unknown patch");
        for (const Simplex& s : small_subsets(ps)) {
            if (!c.has(s)) throw InvalidInput(point_str(u) + " claims membership in an empty intersection");
            int comp = component(u, s);
            if (comp < 0 || comp >= c.n_comps(s))
                throw InvalidInput(point_str(u) + " has an out-of-range component assignment");
            if (s.size() >= 2)
                for (size_t drop = 0; drop < s.size(); ++drop) {
                    Simplex t;
                    for (size_t i = 0; i < s.size(); ++i)
                        if (i != drop) t.push_back(s[i]);
                    if (c.face(s, t, comp) != component(u, t))
                        throw InvalidInput(point_str(u) + " has component assignments inconsistent with faces");
                }
        }
    }
    for (const auto& [key, comp] : comp_assign) {
        if (key.first < 0 || key.first >= n_points) throw InvalidInput("component assignment for unknown point");
        for (int p : key.second)
            if (!point_in(key.first, p)) throw InvalidInput("component assignment outside the point's patches");
        (void)comp;
    }
}

GroupHom point_transport(const BundlePresentation& b, const PointedCover& pc, int point, int to_patch,
                         int from_patch) {
    if (!pc.point_in(point, to_patch) || !pc.point_in(point, from_patch))
        throw InvalidInput(point_str(point) + " does not lie in the requested patches");
    if (to_patch == from_patch) return GroupHom::identity(b.fiber(to_patch));
    Simplex p = {std::min(to_patch, from_patch), std::max(to_patch, from_patch)};
    return b.transport(to_patch, from_patch, pc.component(point, p));
}

const FiniteAbelianGroup& point_fiber(const BundlePresentation& b, const PointedCover& pc, int point) {
    return b.fiber(pc.least_patch(point));
}

GluedSpace::GluedSpace(PointedCover pc, PrincipalBundle bundle) : pc_(std::move(pc)), bundle_(std::move(bundle)) {
    bundle_.validate();
    pc_.validate(bundle_.presentation.complex);
    const BundlePresentation& pres = bundle_.presentation;

    struct Node {
        int point, patch;
        int64_t elem;
    };
    std::vector<Node> nodes;
    std::map<std::tuple<int, int, int64_t>, int> node_id;
    for (int u = 0; u < pc_.n_points; ++u)
        for (int i : pc_.patches_of[u])
            for (int64_t e = 0; e < pres.fiber(i).order(); ++e) {
                node_id[{u, i, e}] = static_cast<int>(nodes.size());
                nodes.push_back({u, i, e});
            }

    UnionFind uf(static_cast<int>(nodes.size()));
    for (int u = 0; u < pc_.n_points; ++u) {
        const auto& ps = pc_.patches_of[u];
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b2 = a + 1; b2 < ps.size(); ++b2) {
                int i = ps[a], j = ps[b2];
                int comp = pc_.component(u, {i, j});
                Elem gij = eval_ordered(pres, bundle_.cocycle, {i, j}, comp);
                GroupHom theta = pres.transport(i, j, comp);
                const FiniteAbelianGroup& hi = pres.fiber(i);
                const FiniteAbelianGroup& hj = pres.fiber(j);
                for (int64_t te = 0; te < hj.order(); ++te) {
                    Elem t = hj.element_at(te);
                    Elem s = hi.add(gij, theta.apply(t));
                    uf.join(node_id.at({u, i, hi.index_of(s)}), node_id.at({u, j, te}));
                }
            }
    }

    std::map<int, int> class_id;
    for (size_t n = 0; n < nodes.size(); ++n) {
        int r = uf.root(static_cast<int>(n));
        if (!class_id.count(r)) {
            class_id[r] = static_cast<int>(base_of_.size());
            base_of_.push_back(nodes[r].point);
        }
        int cls = class_id[r];
        const Node& nd = nodes[n];
        class_of_[{nd.point, nd.patch, nd.elem}] = cls;
        Elem value = pres.fiber(nd.patch).element_at(nd.elem);
        auto [it, inserted] = phi_.insert({{cls, nd.patch}, value});
        if (!inserted && it->second != value)
            throw InvalidInput("incompatible pointed cover: phi_" + std::to_string(nd.patch) +
                               " fails to be injective over " + point_str(nd.point));
    }

    for (int u = 0; u < pc_.n_points; ++u) {
        int64_t expect = point_fiber(pres, pc_, u).order();
        if (static_cast<int64_t>(fiber_classes(u).size()) != expect)
            throw InvalidInput("incompatible pointed cover: wrong fibre count over " + point_str(u));
    }
}

std::vector<int> GluedSpace::fiber_classes(int point) const {
    std::vector<int> out;
    for (int c = 0; c < n_classes(); ++c)
        if (base_of_[c] == point) out.push_back(c);
    return out;
}

Elem GluedSpace::phi(int cls, int patch) const {
    auto it = phi_.find({cls, patch});
    if (it == phi_.end()) throw InvalidInput("phi: class not defined over that patch");
    return it->second;
}

int GluedSpace::phi_inverse(int point, int patch, const Elem& value) const {
    const FiniteAbelianGroup& h = bundle_.presentation.fiber(patch);
    auto it = class_of_.find({point, patch, h.index_of(h.reduce(value))});
    if (it == class_of_.end()) throw InvalidInput("phi_inverse: no such fiber element");
    return it->second;
}

int GluedSpace::act_via_patch(const Elem& s, int cls, int patch) const {
    int u = base_of_.at(cls);
    if (!pc_.point_in(u, patch)) throw InvalidInput("act: patch does not contain the base point");
    const FiniteAbelianGroup& su = point_fiber(bundle_.presentation, pc_, u);
    if (s.size() != su.factors().size()) throw InvalidInput("act: base mismatch between s and x");
    GroupHom tr = point_transport(bundle_.presentation, pc_, u, patch, pc_.least_patch(u));
    const FiniteAbelianGroup& hp = bundle_.presentation.fiber(patch);
    Elem moved = hp.add(tr.apply(su.reduce(s)), phi(cls, patch));
    return phi_inverse(u, patch, moved);
}

int GluedSpace::act(const Elem& s, int cls) const {
    return act_via_patch(s, cls, pc_.least_patch(base_of_.at(cls)));
}

GluedSpace glue_total_space(const PointedCover& pc, const PrincipalBundle& b) { return GluedSpace(pc, b); }

PrincipalAxiomsReport check_principal_axioms(const GluedSpace& g) {
    return check_principal_axioms(g, [&g](const Elem& s, int x) { return g.act(s, x); });
}

PrincipalAxiomsReport check_principal_axioms(const GluedSpace& g,
                                             const std::function<int(const Elem&, int)>& act) {
    const BundlePresentation& pres = g.bundle().presentation;
    const PointedCover& pc = g.pointed_cover();
    PrincipalAxiomsReport rep;
    rep.free = true;
    rep.orbit_transitive = true;
    rep.equivariant = true;

    for (int u = 0; u < pc.n_points; ++u) {
        const FiniteAbelianGroup& su = point_fiber(pres, pc, u);
        std::vector<int> fiber = g.fiber_classes(u);
        for (int x : fiber) {
            std::set<int> orbit;
            for (const Elem& s : su.elements()) {
                int y = act(s, x);
                orbit.insert(y);
                if (y == x && !(s == su.zero())) rep.free = false;
                for (int i : pc.patches_of[u]) {
                    GroupHom tr = point_transport(pres, pc, u, i, pc.least_patch(u));
                    const FiniteAbelianGroup& hi = pres.fiber(i);
                    if (g.phi(y, i) != hi.add(tr.apply(s), g.phi(x, i))) rep.equivariant = false;
                }
            }
            if (orbit != std::set<int>(fiber.begin(), fiber.end())) rep.orbit_transitive = false;
        }
    }
    return rep;
}

BundleIsoResult iso_bundles(const PrincipalBundle& b1, const PrincipalBundle& b2) {
    if (!presentations_equal(b1.presentation, b2.presentation))
        throw InvalidInput("iso_bundles: presentations differ; refine to a common cover first");
    b1.validate();
    b2.validate();
    BundleIsoResult out;
    Cohomology h1(b1.presentation, 1);
    out.h1 = h1.group();
    out.coords1 = h1.coords(b1.cocycle);
    out.coords2 = h1.coords(b2.cocycle);
    out.witness = coboundary_witness(b1.presentation, cochain_sub(b1.presentation, b2.cocycle, b1.cocycle));
    return out;
}

BundleIsoResult iso_bundles(const PrincipalBundle& b1, const Refinement& r1, const PrincipalBundle& b2,
                            const Refinement& r2) {
    BundlePresentation f1 = refine_presentation(b1.presentation, r1);
    BundlePresentation f2 = refine_presentation(b2.presentation, r2);
    if (!presentations_equal(f1, f2))
        throw InvalidInput("iso_bundles: refinements do not produce a common presentation");
    PrincipalBundle a{f1, refine_cochain(b1.presentation, r1, b1.cocycle)};
    PrincipalBundle b{f2, refine_cochain(b2.presentation, r2, b2.cocycle)};
    return iso_bundles(a, b);
}

EquivariantMapResult equivariant_map_implies_iso(const GluedSpace& g1, const GluedSpace& g2,
                                                 const std::vector<int>& omega) {
    const BundlePresentation& pres = g1.bundle().presentation;
    const PointedCover& pc = g1.pointed_cover();
    if (!presentations_equal(pres, g2.bundle().presentation) || pc.patches_of != g2.pointed_cover().patches_of ||
        pc.comp_assign != g2.pointed_cover().comp_assign)
        throw InvalidInput("equivariant map: spaces live over different pointed covers");
    if (static_cast<int>(omega.size()) != g1.n_classes())
        throw InvalidInput("equivariant map: wrong domain size");
    for (int x = 0; x < g1.n_classes(); ++x) {
        if (omega[x] < 0 || omega[x] >= g2.n_classes()) throw InvalidInput("equivariant map: range error");
        if (g2.base_of(omega[x]) != g1.base_of(x)) throw InvalidInput("equivariant map: not base-preserving");
    }

    EquivariantMapResult res;
    for (int x = 0; x < g1.n_classes(); ++x) {
        int u = g1.base_of(x);
        const FiniteAbelianGroup& su = point_fiber(pres, pc, u);
        for (const Elem& s : su.elements())
            if (omega[g1.act(s, x)] != g2.act(s, omega[x])) {
                res.reject_reason = "not equivariant over " + point_str(u);
                return res;
            }
    }

    // Extract beta_i(u) = phi'_i(Omega(sigma_i(u))); a continuous witness is
    // constant on each patch component.
    CechCochain beta = zero_cochain(pres, 0);
    for (const Simplex& s : pres.complex.simplices(0)) {
        int i = s[0];
        SectionGroup sg = sections(pres, s);
        Elem value = sg.group.zero();
        std::vector<bool> seen(sg.n_comps, false);
        for (int u = 0; u < pc.n_points; ++u) {
            if (!pc.point_in(u, i)) continue;
            int comp = pc.component(u, s);
            int sigma = g1.phi_inverse(u, i, pres.fiber(i).zero());
            Elem b = g2.phi(omega[sigma], i);
            if (!seen[comp]) {
                sg.set_component(value, comp, b);
                seen[comp] = true;
            } else if (sg.component(value, comp) != b) {
                res.reject_reason = "translation sections not constant on a component of patch " + std::to_string(i);
                return res;
            }
        }
        beta.values[s] = value;
    }

    CechCochain delta = cochain_sub(pres, g2.bundle().cocycle, g1.bundle().cocycle);
    GroupHom d0 = differential(pres, 0);
    CochainSpace c0 = cochain_space(pres, 0);
    CochainSpace c1 = cochain_space(pres, 1);
    if (d0.apply(c0.pack(beta)) != c1.pack(delta)) {
        res.reject_reason = "extracted sections do not implement an isomorphism";
        return res;
    }
    res.accepted = true;
    res.beta = beta;
    return res;
}

void SigmaTrivialSystem::validate() const {
    if (static_cast<int64_t>(action.size()) != h.order()) throw InvalidInput("action table has wrong height");
    for (const auto& row : action) {
        if (static_cast<int>(row.size()) != n_points) throw InvalidInput("action table has wrong width");
        for (int y : row)
            if (y < 0 || y >= n_points) throw InvalidInput("action table entry out of range");
    }
    for (int x = 0; x < n_points; ++x)
        if (action[h.index_of(h.zero())][x] != x) throw InvalidInput("identity fails to act trivially");
    for (const Elem& s : h.elements())
        for (const Elem& t : h.elements()) {
            int64_t si = h.index_of(s), ti = h.index_of(t), sti = h.index_of(h.add(s, t));
            for (int x = 0; x < n_points; ++x)
                if (action[sti][x] != action[si][action[ti][x]]) throw InvalidInput("action table is not additive");
        }
}

int SigmaTrivialSystem::apply(const Elem& s, int x) const { return action[h.index_of(h.reduce(s))][x]; }

std::vector<int> SigmaTrivialSystem::orbit_of() const {
    std::vector<int> orbit(n_points, -1);
    int next = 0;
    for (int x = 0; x < n_points; ++x) {
        if (orbit[x] != -1) continue;
        for (const Elem& s : h.elements()) {
            int y = apply(s, x);
            if (orbit[y] == -1) orbit[y] = next;
        }
        ++next;
    }
    return orbit;
}

std::vector<Elem> SigmaTrivialSystem::stabilizer(int point) const {
    std::vector<Elem> out;
    for (const Elem& s : h.elements())
        if (apply(s, point) == point) out.push_back(s);
    return out;
}

SigmaTrivialResult sigma_trivial_bundle(const SigmaTrivialSystem& sys, const SigmaChartSpec& charts) {
    sys.validate();
    std::vector<int> orbit = sys.orbit_of();
    int n_orbits = orbit.empty() ? 0 : *std::max_element(orbit.begin(), orbit.end()) + 1;
    if (n_orbits == 0) throw InvalidInput("sigma trivial system has no points");

    std::vector<int> reps(n_orbits, -1);
    for (int x = 0; x < sys.n_points; ++x)
        if (reps[orbit[x]] == -1) reps[orbit[x]] = x;

    // Stabilizers are constant on orbits (H abelian); quotients are canonical.
    std::vector<std::vector<Elem>> stab(n_orbits);
    std::vector<QuotientPresentation> fib(n_orbits);
    for (int o = 0; o < n_orbits; ++o) {
        stab[o] = sys.stabilizer(reps[o]);
        for (int x = 0; x < sys.n_points; ++x)
            if (orbit[x] == o && sys.stabilizer(x) != stab[o])
                throw InvalidInput("stabilizers vary within an orbit");
        fib[o] = quotient(sys.h, stab[o]);
    }

    const int n_charts = static_cast<int>(charts.charts.size());
    if (n_charts == 0) throw InvalidInput("chart specification is empty");
    std::vector<bool> covered(n_orbits, false);
    for (int c = 0; c < n_charts; ++c) {
        const auto& os = charts.charts[c];
        if (os.empty() || !std::is_sorted(os.begin(), os.end()) ||
            std::adjacent_find(os.begin(), os.end()) != os.end())
            throw InvalidInput("chart orbit lists must be sorted, nonempty and duplicate-free");
        for (int o : os) {
            if (o < 0 || o >= n_orbits) throw InvalidInput("chart references an unknown orbit");
            covered[o] = true;
            if (stab[o] != stab[os[0]]) throw InvalidInput("chart mixes orbits with different stabilizers");
            auto it = charts.base_point.find({c, o});
            if (it == charts.base_point.end()) throw InvalidInput("chart is missing a base point");
            if (it->second < 0 || it->second >= sys.n_points || orbit[it->second] != o)
                throw InvalidInput("chart base point lies outside its orbit");
        }
    }
    for (int o = 0; o < n_orbits; ++o)
        if (!covered[o]) throw InvalidInput("orbit " + std::to_string(o) + " is not covered by any chart");

    // Component of an orbit within a chart; default is one component per orbit.
    auto chart_comp = [&](int c, int o) {
        auto it = charts.chart_component.find({c, o});
        if (it != charts.chart_component.end()) return it->second;
        const auto& os = charts.charts[c];
        return static_cast<int>(std::find(os.begin(), os.end(), o) - os.begin());
    };
    std::vector<int> chart_n_comps(n_charts);
    for (int c = 0; c < n_charts; ++c) {
        std::set<int> ids;
        for (int o : charts.charts[c]) ids.insert(chart_comp(c, o));
        chart_n_comps[c] = static_cast<int>(ids.size());
        for (int k = 0; k < chart_n_comps[c]; ++k)
            if (!ids.count(k)) throw InvalidInput("chart component ids must be contiguous from 0");
    }

    SigmaTrivialResult out;
    out.orbit_reps = reps;
    BundlePresentation& pres = out.presentation;
    pres.complex.patches = n_charts;

    auto shared_orbits = [&](const Simplex& s) {
        std::vector<int> acc = charts.charts[s[0]];
        for (size_t i = 1; i < s.size(); ++i) {
            std::vector<int> next;
            std::set_intersection(acc.begin(), acc.end(), charts.charts[s[i]].begin(), charts.charts[s[i]].end(),
                                  std::back_inserter(next));
            acc = next;
        }
        return acc;
    };
    auto orbit_position = [](const std::vector<int>& list, int o) {
        return static_cast<int>(std::find(list.begin(), list.end(), o) - list.begin());
    };

    std::vector<Simplex> all;
    for (int c = 0; c < n_charts; ++c) all.push_back({c});
    for (int c = 0; c < n_charts; ++c)
        for (int d = c + 1; d < n_charts; ++d) {
            all.push_back({c, d});
            for (int e = d + 1; e < n_charts; ++e) all.push_back({c, d, e});
        }
    for (const Simplex& s : all) {
        std::vector<int> sh = shared_orbits(s);
        if (sh.empty()) continue;
        pres.complex.comps[s] = s.size() == 1 ? chart_n_comps[s[0]] : static_cast<int>(sh.size());
        if (s.size() >= 2)
            for (size_t drop = 0; drop < s.size(); ++drop) {
                Simplex t;
                for (size_t i = 0; i < s.size(); ++i)
                    if (i != drop) t.push_back(s[i]);
                std::vector<int> fmap;
                if (t.size() == 1) {
                    for (int o : sh) fmap.push_back(chart_comp(t[0], o));
                } else {
                    std::vector<int> sht = shared_orbits(t);
                    for (int o : sh) fmap.push_back(orbit_position(sht, o));
                }
                pres.complex.faces[{s, t}] = fmap;
            }
    }

    for (int c = 0; c < n_charts; ++c) pres.fibers.push_back(fib[charts.charts[c][0]].group);
    for (const Simplex& s : pres.complex.simplices(1))
        for (int k = 0; k < pres.complex.n_comps(s); ++k)
            pres.glue.insert({{s, k}, GroupHom::identity(pres.fiber(s[0]))});

    // Transition over a shared orbit: the class of the group element carrying
    // chart i's base point to chart j's.
    out.bundle.presentation = pres;
    out.bundle.cocycle = zero_cochain(pres, 1);
    for (const Simplex& s : pres.complex.simplices(1)) {
        std::vector<int> sh = shared_orbits(s);
        SectionGroup sg = sections(pres, s);
        Elem value = sg.group.zero();
        for (size_t k = 0; k < sh.size(); ++k) {
            int o = sh[k];
            int xi = charts.base_point.at({s[0], o});
            int xj = charts.base_point.at({s[1], o});
            std::optional<Elem> t;
            for (const Elem& cand : sys.h.elements())
                if (sys.apply(cand, xi) == xj) {
                    t = cand;
                    break;
                }
            if (!t) throw InvalidInput("chart base points not in the same orbit");
            sg.set_component(value, static_cast<int>(k), fib[o].projection.apply(*t));
        }
        out.bundle.cocycle.values[s] = value;
    }
    out.bundle.validate();

    out.points.n_points = n_orbits;
    out.points.patches_of.resize(n_orbits);
    for (int o = 0; o < n_orbits; ++o)
        for (int c = 0; c < n_charts; ++c)
            if (std::binary_search(charts.charts[c].begin(), charts.charts[c].end(), o))
                out.points.patches_of[o].push_back(c);
    for (int o = 0; o < n_orbits; ++o)
        for (const Simplex& s : small_subsets(out.points.patches_of[o]))
            out.points.comp_assign[{o, s}] =
                s.size() == 1 ? chart_comp(s[0], o) : orbit_position(shared_orbits(s), o);
    out.points.validate(pres.complex);
    return out;
}

SigmaTrivialResult sigma_trivial_bundle(const SigmaTrivialSystem& sys) {
    std::vector<int> orbit = sys.orbit_of();
    int n_orbits = orbit.empty() ? 0 : *std::max_element(orbit.begin(), orbit.end()) + 1;
    std::vector<int> reps(n_orbits, -1);
    for (int x = 0; x < sys.n_points; ++x)
        if (reps[orbit[x]] == -1) reps[orbit[x]] = x;
    SigmaChartSpec charts;
    for (int o = 0; o < n_orbits; ++o) {
        charts.charts.push_back({o});
        charts.base_point[{o, o}] = reps[o];
    }
    return sigma_trivial_bundle(sys, charts);
}

CechCochain trivialization_from_sections(const GluedSpace& g) {
    const BundlePresentation& pres = g.bundle().presentation;
    const PointedCover& pc = g.pointed_cover();
    CechCochain out = zero_cochain(pres, 1);
    for (const Simplex& s : pres.complex.simplices(1)) {
        int i = s[0], j = s[1];
        SectionGroup sg = sections(pres, s);
        Elem value = sg.group.zero();
        for (int comp = 0; comp < sg.n_comps; ++comp) {
            std::optional<Elem> val;
            for (int u = 0; u < pc.n_points; ++u) {
                if (!pc.point_in(u, i) || !pc.point_in(u, j) || pc.component(u, s) != comp) continue;
                int sigma_j = g.phi_inverse(u, j, pres.fiber(j).zero());
                Elem gij = g.phi(sigma_j, i);
                if (!val) val = gij;
                else if (*val != gij)
                    throw InvalidInput("recovered transition section is not constant on a component");
            }
            if (!val) throw InvalidInput("overlap component without base points; cannot recover the transition");
            sg.set_component(value, comp, *val);
        }
        out.values[s] = value;
    }
    return out;
}

}  // namespace gb
