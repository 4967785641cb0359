#include "gb/locunit.hpp"

#include <algorithm>
#include <sstream>

namespace gb {

namespace {

std::string loc_str(int patch, int point) {
    return "patch " + std::to_string(patch) + ", point " + std::to_string(point);
}

// Scalar value of a matrix required to be a multiple of the identity.
Complex scalar_of(const CxMat& m, double tol, const std::string& where) {
    Complex c = m(0, 0);
    CxMat defect = m - c * CxMat::Identity(m.rows(), m.cols());
    if (defect.cwiseAbs().maxCoeff() > tol)
        throw NotLocallyUnitary("commutant element is not scalar at " + where);
    return c;
}

// Snap a multiplicative scalar family on S_u to an exact character.
Elem snap_character(const FiniteAbelianGroup& g, const std::function<Complex(int64_t)>& value, double tol,
                    const std::string& where) {
    Elem chi = dual_group(g).zero();
    for (int r = 0; r < g.rank(); ++r) {
        Elem gen = g.zero();
        gen[r] = 1;
        auto k = snap_root_of_unity(value(g.index_of(gen)), g.factors()[r], tol);
        if (!k)
            throw NotLocallyUnitary("scalar at " + where +
                                    " does not snap to a root of unity of the fiber order");
        chi[r] = *k;
    }
    // The snapped character reproduces every scalar, not just the generators.
    const double check_tol = std::max(100 * tol, 1e-7);
    for (const Elem& s : g.elements()) {
        Complex expect = unit_phase(pairing(Character{g, chi}, s));
        if (std::abs(expect - value(g.index_of(s))) > check_tol)
            throw NotLocallyUnitary("scalar family at " + where + " is not multiplicative");
    }
    return chi;
}

// Rewrite a character of the point's canonical fiber as a character of the
// patch fiber, through the point's fiber identification.
Elem character_to_patch(const BundlePresentation& pres, const PointedCover& pc, int point, int patch,
                        const Elem& chi) {
    GroupHom t = point_transport(pres, pc, point, pc.least_patch(point), patch);  // H_patch -> S_u
    return dual_hom(t).apply(chi);
}

Elem character_to_point(const BundlePresentation& pres, const PointedCover& pc, int point, int patch,
                        const Elem& chi_patch) {
    GroupHom t = point_transport(pres, pc, point, patch, pc.least_patch(point));  // S_u -> H_patch
    return dual_hom(t).apply(chi_patch);
}

}  // namespace

BundlePresentation dual_presentation(const BundlePresentation& b) {
    b.validate();
    BundlePresentation d;
    d.complex = b.complex;
    for (const auto& f : b.fibers) d.fibers.push_back(dual_group(f));
    for (const auto& [key, theta] : b.glue) d.glue.insert({key, dual_hom(theta.inverse())});
    d.validate();
    return d;
}

const UnitaryActionDatum& LocallyUnitaryDatum::lift(int patch, int point) const {
    auto it = lifts.find({patch, point});
    if (it == lifts.end()) throw InvalidInput("missing unitary family at " + loc_str(patch, point));
    return it->second;
}

void LocallyUnitaryDatum::validate(double tol) const {
    presentation.validate();
    points.validate(presentation.complex);
    if (static_cast<int>(actions.size()) != points.n_points)
        throw InvalidInput("need one action per base point");
    for (int u = 0; u < points.n_points; ++u) {
        const ActionDatum& a = actions[u];
        if (!(a.group == point_fiber(presentation, points, u)))
            throw InvalidInput("action group mismatch at point " + std::to_string(u));
        if (a.fiber.kind != FiberAlgebra::Kind::Matrix)
            throw InvalidInput("locally unitary data requires MATRIX fibers");
        a.validate(tol);
        for (int i : points.patches_of[u]) {
            const UnitaryActionDatum& l = lift(i, u);
            if (!(l.group == a.group) || l.n != a.fiber.n)
                throw InvalidInput("unitary family shape mismatch at " + loc_str(i, u));
            l.validate(tol);
            for (int64_t s = 0; s < a.group.order(); ++s)
                for (int bb = 0; bb < a.fiber.dim(); ++bb) {
                    CxMat e = a.fiber.basis_matrix(bb);
                    if ((l.u[s] * e * l.u[s].adjoint() - a.apply(s, e)).cwiseAbs().maxCoeff() > tol)
                        throw InvalidInput("unitary family fails to implement the action at " + loc_str(i, u));
                }
        }
    }
    for (const auto& [key, l] : lifts) {
        if (key.second < 0 || key.second >= points.n_points || !points.point_in(key.second, key.first))
            throw InvalidInput("unitary family attached outside the pointed cover");
        (void)l;
    }
}

TransitionClass extract_transition_class(const LocallyUnitaryDatum& d, double tol) {
    d.validate(tol);
    TransitionClass out;
    out.dual = dual_presentation(d.presentation);

    out.cocycle = zero_cochain(out.dual, 1);
    for (const Simplex& s : out.dual.complex.simplices(1)) {
        int i = s[0], j = s[1];
        SectionGroup sg = sections(out.dual, s);
        Elem value = sg.group.zero();
        std::vector<bool> seen(sg.n_comps, false);
        std::vector<Elem> expect(sg.n_comps);
        for (int u = 0; u < d.points.n_points; ++u) {
            if (!d.points.point_in(u, i) || !d.points.point_in(u, j)) continue;
            int comp = d.points.component(u, s);
            const FiniteAbelianGroup& su = point_fiber(d.presentation, d.points, u);
            const UnitaryActionDatum& ui = d.lift(i, u);
            const UnitaryActionDatum& uj = d.lift(j, u);
            std::ostringstream ctx;
            ctx << "(" << i << "," << j << ") point " << u;
            // gamma_ij(u)(s) = scalar of (u^i_s)^* u^j_s; Schur forces it scalar.
            std::vector<Complex> scal(su.order());
            for (int64_t k = 0; k < su.order(); ++k)
                scal[k] = scalar_of(CxMat(ui.u[k].adjoint() * uj.u[k]), std::max(100 * tol, 1e-7), ctx.str());
            Elem chi = snap_character(
                su, [&](int64_t k) { return scal[k]; }, tol, ctx.str());
            out.point_characters[{s, u}] = chi;
            Elem in_patch = character_to_patch(d.presentation, d.points, u, i, chi);
            if (!seen[comp]) {
                seen[comp] = true;
                expect[comp] = in_patch;
                sg.set_component(value, comp, in_patch);
            } else if (expect[comp] != in_patch) {
                throw DiscontinuousSection("transition character varies across component " +
                                           std::to_string(comp) + " of " + ctx.str());
            }
        }
        for (int c = 0; c < sg.n_comps; ++c)
            if (!seen[c])
                throw InvalidInput("overlap component without base points: cannot extract the transition");
        out.cocycle.values[s] = value;
    }

    PrincipalBundle check{out.dual, out.cocycle};
    check.validate();  // exact cocycle identity
    Cohomology h1(out.dual, 1);
    out.h1 = h1.group();
    out.class_coords = h1.coords(out.cocycle);
    return out;
}

SpectrumBundle spectrum_bundle(const LocallyUnitaryDatum& d, double tol) {
    SpectrumBundle out;
    out.transition = extract_transition_class(d, tol);
    out.bundle = PrincipalBundle{out.transition.dual, out.transition.cocycle};
    out.bundle.validate();

    out.fibers_match_spectrum = true;
    out.transition_relation = true;
    const double check_tol = std::max(100 * tol, 1e-7);

    for (int u = 0; u < d.points.n_points; ++u) {
        const FiniteAbelianGroup& su = point_fiber(d.presentation, d.points, u);
        FiniteAbelianGroup dual = dual_group(su);
        for (int i : d.points.patches_of[u]) {
            auto spec = spectrum_enumerate(d.lift(i, u), tol);
            if (!spec.complete || !spec.pairwise_inequivalent) out.fibers_match_spectrum = false;
            CrossedProductAlgebra alg(d.actions[u], tol);
            for (size_t w = 0; w < spec.characters.size(); ++w) {
                Representation psi;
                psi.carrier = d.lift(i, u).n;
                for (int bb = 0; bb < d.actions[u].fiber.dim(); ++bb)
                    psi.pi_basis.push_back(d.actions[u].fiber.basis_matrix(bb));
                for (const Elem& s : su.elements())
                    psi.u_group.push_back(unit_phase(pairing(Character{su, spec.characters[w]}, s)) *
                                          d.lift(i, u).u[su.index_of(s)]);
                if (intertwiner_space(alg, psi, spec.irreps[w], tol).dimension != 1)
                    out.fibers_match_spectrum = false;
            }
        }
        const auto& ps = d.points.patches_of[u];
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b2 = a + 1; b2 < ps.size(); ++b2) {
                int i = ps[a], j = ps[b2];
                Elem gamma = out.transition.point_characters.at({Simplex{i, j}, u});
                for (const Elem& w : dual.elements()) {
                    Elem wg = dual.add(w, gamma);
                    for (const Elem& s : su.elements()) {
                        CxMat mj = unit_phase(pairing(Character{su, w}, s)) * d.lift(j, u).u[su.index_of(s)];
                        CxMat mi = unit_phase(pairing(Character{su, wg}, s)) * d.lift(i, u).u[su.index_of(s)];
                        if ((mj - mi).cwiseAbs().maxCoeff() > check_tol) out.transition_relation = false;
                    }
                }
            }
    }
    return out;
}

void PointwiseEquivalence::validate(const LocallyUnitaryDatum& v, const LocallyUnitaryDatum& w,
                                    double tol) const {
    if (!presentations_equal(v.presentation, w.presentation) ||
        v.points.patches_of != w.points.patches_of || v.points.comp_assign != w.points.comp_assign)
        throw InvalidInput("equivalence: the two data live over different bases");
    if (static_cast<int>(u.size()) != v.points.n_points)
        throw InvalidInput("equivalence: need one unitary family per base point");
    for (int p = 0; p < v.points.n_points; ++p) {
        ExteriorEquivalence e{point_fiber(v.presentation, v.points, p), u[p]};
        e.validate(v.actions[p], w.actions[p], tol);
    }
}

CechCochain equivalence_to_iso(const PointwiseEquivalence& e, const LocallyUnitaryDatum& v,
                               const LocallyUnitaryDatum& w, double tol) {
    v.validate(tol);
    w.validate(tol);
    e.validate(v, w, tol);

    BundlePresentation dual = dual_presentation(v.presentation);
    CechCochain beta = zero_cochain(dual, 0);
    for (const Simplex& s : dual.complex.simplices(0)) {
        int i = s[0];
        SectionGroup sg = sections(dual, s);
        Elem value = sg.group.zero();
        std::vector<bool> seen(sg.n_comps, false);
        std::vector<Elem> expect(sg.n_comps);
        for (int u = 0; u < v.points.n_points; ++u) {
            if (!v.points.point_in(u, i)) continue;
            int comp = v.points.component(u, s);
            const FiniteAbelianGroup& su = point_fiber(v.presentation, v.points, u);
            std::string ctx = loc_str(i, u);
            // beta_i(x)(s) = scalar of v^i_s (w^i_s)^* u_s, the adjoint of the
            // uniqueness theorem's commutant element, oriented so that the
            // reconstruction below round-trips exactly.
            std::vector<Complex> scal(su.order());
            for (int64_t k = 0; k < su.order(); ++k)
                scal[k] = scalar_of(CxMat(v.lift(i, u).u[k] * w.lift(i, u).u[k].adjoint() * e.u[u][k]),
                                    std::max(100 * tol, 1e-7), ctx);
            Elem chi = snap_character(
                su, [&](int64_t k) { return scal[k]; }, tol, ctx);
            Elem in_patch = character_to_patch(v.presentation, v.points, u, i, chi);
            if (!seen[comp]) {
                seen[comp] = true;
                expect[comp] = in_patch;
                sg.set_component(value, comp, in_patch);
            } else if (expect[comp] != in_patch) {
                throw InternalInconsistency("witness sections vary across a component of patch " +
                                            std::to_string(i));
            }
        }
        beta.values[s] = value;
    }

    // eta_ij = beta_i + gamma_ij - beta_j must hold exactly.
    TransitionClass gv = extract_transition_class(v, tol);
    TransitionClass gw = extract_transition_class(w, tol);
    GroupHom d0 = differential(dual, 0);
    CochainSpace c0 = cochain_space(dual, 0);
    CochainSpace c1 = cochain_space(dual, 1);
    if (d0.apply(c0.pack(beta)) != c1.total.sub(c1.pack(gw.cocycle), c1.pack(gv.cocycle)))
        throw InternalInconsistency("extracted sections fail eta = gamma + d0(beta)");
    return beta;
}

PointwiseEquivalence iso_to_equivalence(const CechCochain& beta, const LocallyUnitaryDatum& v,
                                        const LocallyUnitaryDatum& w, double tol) {
    v.validate(tol);
    w.validate(tol);
    if (!presentations_equal(v.presentation, w.presentation) ||
        v.points.patches_of != w.points.patches_of || v.points.comp_assign != w.points.comp_assign)
        throw InvalidInput("iso_to_equivalence: the two data live over different bases");

    BundlePresentation dual = dual_presentation(v.presentation);
    TransitionClass gv = extract_transition_class(v, tol);
    TransitionClass gw = extract_transition_class(w, tol);
    {
        GroupHom d0 = differential(dual, 0);
        CochainSpace c0 = cochain_space(dual, 0);
        CochainSpace c1 = cochain_space(dual, 1);
        if (beta.degree != 0 ||
            d0.apply(c0.pack(beta)) != c1.total.sub(c1.pack(gw.cocycle), c1.pack(gv.cocycle)))
            throw InvalidWitness("sections do not implement an isomorphism of the spectrum bundles");
    }

    PointwiseEquivalence out;
    out.u.resize(v.points.n_points);
    const double check_tol = std::max(100 * tol, 1e-7);
    for (int u = 0; u < v.points.n_points; ++u) {
        const FiniteAbelianGroup& su = point_fiber(v.presentation, v.points, u);
        std::vector<CxMat> family;
        bool first = true;
        for (int i : v.points.patches_of[u]) {
            SectionGroup sg = sections(dual, {i});
            Elem stored = sg.group.reduce(beta.values.at({i}));
            Elem chi_patch = sg.component(stored, v.points.component(u, {i}));
            Elem chi = character_to_point(v.presentation, v.points, u, i, chi_patch);
            std::vector<CxMat> cand;
            for (const Elem& s : su.elements()) {
                Complex phase = unit_phase(pairing(Character{su, chi}, s));
                cand.push_back(phase * w.lift(i, u).u[su.index_of(s)] *
                               v.lift(i, u).u[su.index_of(s)].adjoint());
            }
            if (first) {
                family = cand;
                first = false;
            } else {
                for (size_t k = 0; k < cand.size(); ++k)
                    if ((cand[k] - family[k]).cwiseAbs().maxCoeff() > check_tol)
                        throw InvalidWitness("reconstructed unitaries disagree across patches at point " +
                                             std::to_string(u));
            }
        }
        out.u[u] = family;
    }
    out.validate(v, w, check_tol);
    return out;
}

TakaiReport takai_pipeline(const PointedCover& pc, const PrincipalBundle& b, DualSign sign, double tol) {
    TakaiReport rep;
    rep.sign = sign;
    GluedSpace g(pc, b);
    const BundlePresentation& pres = b.presentation;

    rep.datum.presentation = dual_presentation(pres);
    rep.datum.points = pc;
    rep.fibre_isos_ok = true;
    rep.dual_action_ok = true;
    rep.local_unitaries_ok = true;

    for (int u = 0; u < pc.n_points; ++u) {
        const FiniteAbelianGroup& su = point_fiber(pres, pc, u);
        FiniteAbelianGroup dual = dual_group(su);
        std::vector<int> xu = g.fiber_classes(u);
        const int m = static_cast<int>(xu.size());
        auto pos_of = [&](int cls) {
            return static_cast<int>(std::find(xu.begin(), xu.end(), cls) - xu.begin());
        };

        // FUNCTIONS(X_u) x|_lt S_u and its matrix model: each fibre is a full
        // matrix algebra (Stone-von Neumann over the glued torsor).
        std::vector<std::vector<int>> perms;
        for (const Elem& s : su.elements()) {
            std::vector<int> p(m);
            for (int x = 0; x < m; ++x) p[x] = pos_of(g.act(s, xu[x]));
            perms.push_back(p);
        }
        CrossedProductAlgebra fibre_alg(action_from_permutations(su, m, perms), tol);
        CxMat phi = CxMat::Zero(m * m, fibre_alg.dim());
        for (const Elem& s : su.elements())
            for (int x = 0; x < m; ++x) {
                int64_t col = su.index_of(s) * m + x;
                int target_col = pos_of(g.act(su.neg(s), xu[x]));
                phi(x * m + target_col, col) = 1.0;
            }
        VerifiedIsomorphism iso = verify_star_isomorphism(ops_of(fibre_alg), matrix_algebra_ops(m), phi, tol,
                                                          std::max<int64_t>(su.exponent(), 2));
        auto wd = wedderburn_decompose(fibre_alg, tol);
        rep.fiber_matrix_sizes.push_back(m);
        rep.fiber_center_dims.push_back(wd.center_dimension);
        if (!iso.ok(tol) || wd.dims != std::vector<int>{m} || wd.center_dimension != 1)
            rep.fibre_isos_ok = false;

        // The dual action on the matrix model: E_xy scales by w(delta(x,y))
        // (conjugated under the default sign), delta the torsor difference.
        int i0 = pc.least_patch(u);
        std::vector<CxMat> dual_maps;
        for (const Elem& wch : dual.elements()) {
            CxMat dm = CxMat::Zero(m * m, m * m);
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y) {
                    Elem delta = su.sub(g.phi(xu[x], i0), g.phi(xu[y], i0));
                    Complex f = unit_phase(pairing(Character{su, wch}, delta));
                    if (sign == DualSign::Conjugated) f = std::conj(f);
                    dm(x * m + y, x * m + y) = f;
                }
            dual_maps.push_back(dm);
        }
        rep.datum.actions.push_back(action_from_linear_maps(dual, FiberAlgebra::matrix(m), dual_maps));

        // Patch unitaries from the trivializations: diag_x of w(phi_i(x)),
        // conjugated under the default sign.
        for (int i : pc.patches_of[u]) {
            GroupHom tr = point_transport(pres, pc, u, i0, i);
            UnitaryActionDatum lift;
            lift.group = dual;
            lift.n = m;
            for (const Elem& wch : dual.elements()) {
                CxMat um = CxMat::Zero(m, m);
                for (int x = 0; x < m; ++x) {
                    Elem t = tr.apply(g.phi(xu[x], i));
                    Complex f = unit_phase(pairing(Character{su, wch}, t));
                    if (sign == DualSign::Conjugated) f = std::conj(f);
                    um(x, x) = f;
                }
                lift.u.push_back(um);
            }
            rep.datum.lifts.insert({{i, u}, lift});
        }
    }

    rep.datum.validate(tol);

    TransitionClass recovered = extract_transition_class(rep.datum, tol);
    rep.recovered_cocycle = recovered.cocycle;

    // The double dual presentation is the input presentation on the nose, so
    // classes compare coordinatewise.
    if (!presentations_equal(recovered.dual, pres))
        throw InternalInconsistency("double dual presentation does not match the input presentation");
    Cohomology h1(pres, 1);
    CechCochain expected = b.cocycle;
    if (sign == DualSign::Plain) {
        CochainSpace c1 = cochain_space(pres, 1);
        Elem packed = c1.pack(expected);
        expected = c1.unpack(c1.total.sub(c1.total.zero(), packed));
    }
    rep.recovered_class = recovered.class_coords;
    rep.expected_class = h1.coords(expected);
    rep.input_class = h1.coords(b.cocycle);
    rep.pass = rep.fibre_isos_ok && rep.dual_action_ok && rep.local_unitaries_ok &&
               rep.recovered_class == rep.expected_class;
    return rep;
}

}  // namespace gb
