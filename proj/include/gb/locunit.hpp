#pragma once

#include "gb/bundles.hpp"
#include "gb/cstar.hpp"

namespace gb {

// The dual bundle presentation: fibers dual(H_i), gluings the duals of the
// inverse gluings, so that pairing(theta-hat w, theta s) = pairing(w, s).
BundlePresentation dual_presentation(const BundlePresentation& b);

// A locally unitary action over a pointed, sheafed base: per point an action
// of S_u on MATRIX(n_u), and per patch containing the point a multiplicative
// unitary family implementing it. The patch families are indexed by the
// point's canonical fiber S_u (the fiber of its least patch).
struct LocallyUnitaryDatum {
    BundlePresentation presentation;
    PointedCover points;
    std::vector<ActionDatum> actions;                         // per point
    std::map<std::pair<int, int>, UnitaryActionDatum> lifts;  // (patch, point) -> u^i at the point

    const UnitaryActionDatum& lift(int patch, int point) const;
    void validate(double tol = kDefaultTol) const;
};

// The transition characters gamma_ij(u)(s) = scalar of (u^i_s)^* u^j_s,
// snapped to exact characters, checked constant across overlap components,
// assembled into a cocycle on the dual presentation.
struct TransitionClass {
    BundlePresentation dual;
    CechCochain cocycle;  // degree 1, values in the dual fibers
    Elem class_coords;
    FiniteAbelianGroup h1;
    // Per (overlap simplex, point): the extracted character of S_u.
    std::map<std::pair<Simplex, int>, Elem> point_characters;
};

TransitionClass extract_transition_class(const LocallyUnitaryDatum& d, double tol = kDefaultTol);

// The spectrum realized as a principal S-hat-bundle: the extracted cocycle as
// its transition data, with per-point representation tables checked against
// spectrum_enumerate and the transition relation psi_j(w) = psi_i(w gamma_ij).
struct SpectrumBundle {
    PrincipalBundle bundle;  // over the dual presentation
    TransitionClass transition;
    bool fibers_match_spectrum = false;
    bool transition_relation = false;
};

SpectrumBundle spectrum_bundle(const LocallyUnitaryDatum& d, double tol = kDefaultTol);

// An exterior equivalence between two locally unitary actions, one unitary
// family per base point (indexed by the point's canonical fiber).
struct PointwiseEquivalence {
    std::vector<std::vector<CxMat>> u;  // [point][group element index]

    // Pointwise conditions at every point: cocycle identity and
    // beta = Ad u . alpha.
    void validate(const LocallyUnitaryDatum& v, const LocallyUnitaryDatum& w, double tol = kDefaultTol) const;
};

// beta_i(x)(s) = scalar of pi(v_s^i (w_s^i)^* u_s): the section family turning
// the equivalence into a bundle isomorphism witness from the spectrum bundle
// of (alpha, v) to that of (beta, w); satisfies eta = gamma + d0(beta).
CechCochain equivalence_to_iso(const PointwiseEquivalence& e, const LocallyUnitaryDatum& v,
                               const LocallyUnitaryDatum& w, double tol = kDefaultTol);

// u_s = beta_i(x)(s) w_s^i (v_s^i)^*: the equivalence reconstructed from a
// bundle isomorphism witness; verified patch-independent.
PointwiseEquivalence iso_to_equivalence(const CechCochain& beta, const LocallyUnitaryDatum& v,
                                        const LocallyUnitaryDatum& w, double tol = kDefaultTol);

// Sign convention for the dual action: the conjugated form
// lt-hat_w(f)(s) = conj(w(s)) f(s) is the default; Plain drops the conjugate,
// which composes the recovered classes with character inversion.
enum class DualSign { Conjugated, Plain };

struct TakaiReport {
    DualSign sign = DualSign::Conjugated;
    std::vector<int> fiber_matrix_sizes;  // per point
    std::vector<int> fiber_center_dims;   // per point, 1 for full matrix algebras
    bool fibre_isos_ok = false;
    bool dual_action_ok = false;
    bool local_unitaries_ok = false;
    LocallyUnitaryDatum datum;  // the assembled locally unitary dual system
    CechCochain recovered_cocycle;
    Elem recovered_class;
    Elem expected_class;  // class of the (sign-adjusted) double dual of the input cocycle
    Elem input_class;
    bool pass = false;
};

// The existence pipeline: per point build FUNCTIONS(X_u) x| S_u, verify the
// Stone-von Neumann matrix model, install the dual S-hat-action and the
// patchwise unitaries u_w(delta_s (x) 1_x) = conj(w(phi_i(x))) delta_s (x) 1_x,
// extract the transition class, and compare with the double dual of the
// input class.
TakaiReport takai_pipeline(const PointedCover& pc, const PrincipalBundle& b,
                           DualSign sign = DualSign::Conjugated, double tol = kDefaultTol);

}  // namespace gb
