#include "gb/commands.hpp"

#include <sstream>

#include "gb/covers.hpp"

namespace gb {

namespace {

std::string elem_str(const Elem& e) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
    os << "]";
    return os.str();
}

std::string dims_str(const std::vector<int>& d) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << "]";
    return os.str();
}

json phases_to_json(const std::vector<std::vector<Complex>>& phases) {
    json out = json::array();
    for (const auto& row : phases) {
        json r = json::array();
        for (Complex c : row) r.push_back(complex_to_json(c));
        out.push_back(r);
    }
    return out;
}

json characters_to_json(const std::map<std::pair<Simplex, int>, Elem>& table) {
    json out = json::array();
    for (const auto& [key, chi] : table) {
        json e;
        e["patches"] = key.first;
        e["point"] = key.second;
        e["character"] = chi;
        out.push_back(e);
    }
    return out;
}

Report verify_unitary_iso(const json& file, double tol) {
    Report rep;
    rep.command = "verify unitary-iso";
    int systems = action_system_count(file);
    json results = json::array();
    bool all_pass = true;
    std::string first_fail;
    for (int p = 0; p < systems; ++p) {
        ActionInstance inst = parse_action(file, p);
        json r;
        r["point"] = p;
        UnitaryLift lift = is_unitary_action(inst.action, tol);
        if (lift.status == UnitaryLift::Status::Obstructed) {
            // Report the obstructing phase on the first offending pair.
            Complex worst(1, 0);
            for (const auto& row : lift.phases)
                for (Complex c : row)
                    if (std::abs(c - Complex(1, 0)) > std::abs(worst - Complex(1, 0))) worst = c;
            r["status"] = "OBSTRUCTED";
            r["phase"] = complex_to_json(worst);
            r["phases"] = phases_to_json(lift.phases);
            all_pass = false;
            if (first_fail.empty()) {
                std::ostringstream os;
                os << "OBSTRUCTED phase " << (std::abs(worst - Complex(-1, 0)) < 1e-9 ? "-1" : "non-trivial");
                first_fail = os.str();
            }
        } else if (lift.status == UnitaryLift::Status::NotPointwiseInner) {
            r["status"] = "NOT_POINTWISE_INNER";
            r["detail"] = lift.detail;
            all_pass = false;
            if (first_fail.empty()) first_fail = "NOT_POINTWISE_INNER";
        } else {
            auto iso = unitary_tensor_iso(*lift.lift, tol);
            r["status"] = "LIFTED";
            r["mult_defect"] = iso.iso.mult_defect <= tol ? 0.0 : iso.iso.mult_defect;
            r["star_defect"] = iso.iso.star_defect <= tol ? 0.0 : iso.iso.star_defect;
            r["bijective"] = iso.iso.bijective;
            r["exact_phase"] = iso.iso.exact_phase;
            json us = json::array();
            for (const CxMat& m : lift.lift->u) us.push_back(cxmat_to_json(m));
            r["lift"] = us;
            if (!iso.iso.ok(tol)) {
                all_pass = false;
                if (first_fail.empty()) first_fail = "tensor isomorphism verification failed";
            }
        }
        results.push_back(r);
    }
    rep.body["systems"] = results;
    rep.verdict = all_pass ? "PASS" : "FAIL";
    rep.exit_code = all_pass ? 0 : 1;
    rep.summary = all_pass ? "unitary tensor isomorphism verified" : "FAIL " + first_fail;
    return rep;
}

Report verify_locunit(const json& file, double tol) {
    Report rep;
    rep.command = "verify locunit";
    LocunitInstance inst = parse_locunit(file);
    try {
        SpectrumBundle sb = spectrum_bundle(inst.datum, tol);
        rep.body["h1"] = group_to_json(sb.transition.h1);
        rep.body["class"] = sb.transition.class_coords;
        rep.body["cocycle"] = cochain_to_json(sb.transition.cocycle);
        rep.body["point_characters"] = characters_to_json(sb.transition.point_characters);
        rep.body["fibers_match_spectrum"] = sb.fibers_match_spectrum;
        rep.body["transition_relation"] = sb.transition_relation;
        bool ok = sb.fibers_match_spectrum && sb.transition_relation;
        rep.verdict = ok ? "PASS" : "FAIL";
        rep.exit_code = ok ? 0 : 1;
        rep.summary = (ok ? "spectrum bundle class = " : "FAIL class = ") +
                      elem_str(sb.transition.class_coords) + " in H1 = " + sb.transition.h1.to_string();
    } catch (const NotLocallyUnitary& e) {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL NotLocallyUnitary: ") + e.what();
        rep.body["error"] = e.what();
    } catch (const DiscontinuousSection& e) {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL DiscontinuousSection: ") + e.what();
        rep.body["error"] = e.what();
    }
    return rep;
}

Report verify_equivalence(const json& file, double tol) {
    Report rep;
    rep.command = "verify equivalence";
    EquivalenceInstance inst = parse_equivalence(file);
    try {
        CechCochain beta = equivalence_to_iso(inst.u, inst.alpha, inst.beta, tol);
        SpectrumBundle sa = spectrum_bundle(inst.alpha, tol);
        SpectrumBundle sb = spectrum_bundle(inst.beta, tol);
        auto iso = iso_bundles(sa.bundle, sb.bundle);

        PointwiseEquivalence rebuilt = iso_to_equivalence(beta, inst.alpha, inst.beta, tol);
        CechCochain again = equivalence_to_iso(rebuilt, inst.alpha, inst.beta, tol);
        BundlePresentation dual = dual_presentation(inst.alpha.presentation);
        CochainSpace c0 = cochain_space(dual, 0);
        bool round_trip = c0.pack(again) == c0.pack(beta);

        rep.body["beta"] = cochain_to_json(beta);
        rep.body["alpha_class"] = sa.transition.class_coords;
        rep.body["beta_class"] = sb.transition.class_coords;
        rep.body["classes_equal"] = iso.isomorphic();
        rep.body["round_trip"] = round_trip;
        bool ok = iso.isomorphic() && round_trip;
        rep.verdict = ok ? "PASS" : "FAIL";
        rep.exit_code = ok ? 0 : 1;
        rep.summary = ok ? "equivalence induces a spectrum bundle isomorphism (round trip exact)"
                         : "FAIL: witness checks failed";
    } catch (const NotLocallyUnitary& e) {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL NotLocallyUnitary: ") + e.what();
        rep.body["error"] = e.what();
    } catch (const InternalInconsistency& e) {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL InternalInconsistency: ") + e.what();
        rep.body["error"] = e.what();
    } catch (const InvalidWitness& e) {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL InvalidWitness: ") + e.what();
        rep.body["error"] = e.what();
    }
    return rep;
}

Report verify_takai(const json& file, double tol, const std::string& dual_sign) {
    Report rep;
    rep.command = "verify takai";
    PointedInstance inst = parse_pointed(file);
    DualSign sign = DualSign::Conjugated;
    if (dual_sign == "plain") sign = DualSign::Plain;
    else if (dual_sign != "conj")
        throw InvalidInput("--dual-sign must be 'conj' or 'plain'");

    TakaiReport tk = takai_pipeline(inst.points, inst.bundle, sign, tol);
    rep.body["dual_sign"] = dual_sign;
    rep.body["fiber_matrix_sizes"] = tk.fiber_matrix_sizes;
    rep.body["fiber_center_dims"] = tk.fiber_center_dims;
    rep.body["fibre_isos_ok"] = tk.fibre_isos_ok;
    rep.body["dual_action_ok"] = tk.dual_action_ok;
    rep.body["local_unitaries_ok"] = tk.local_unitaries_ok;
    rep.body["recovered_cocycle"] = cochain_to_json(tk.recovered_cocycle);
    rep.body["recovered_class"] = tk.recovered_class;
    rep.body["expected_class"] = tk.expected_class;
    rep.body["input_class"] = tk.input_class;
    rep.verdict = tk.pass ? "PASS" : "FAIL";
    rep.exit_code = tk.pass ? 0 : 1;
    rep.summary = tk.pass ? "PASS, recovered class = double-dual of input class"
                          : "FAIL: recovered class " + elem_str(tk.recovered_class) + " != expected " +
                                elem_str(tk.expected_class);
    return rep;
}

}  // namespace

json Report::to_json() const {
    json out;
    out["command"] = command;
    out["verdict"] = verdict;
    out["summary"] = summary;
    for (const auto& [k, v] : body.items()) out[k] = v;
    return out;
}

Report cmd_cohomology(const json& file, int degree) {
    Report rep;
    rep.command = "cohomology";
    BundleInstance inst = parse_bundle(file);
    Cohomology h(inst.bundle.presentation, degree);
    rep.body["degree"] = degree;
    rep.body["invariant_factors"] = group_to_json(h.group());
    json reps = json::array();
    for (int j = 0; j < h.group().rank(); ++j) {
        Elem e = h.group().zero();
        e[j] = 1;
        reps.push_back(cochain_to_json(h.representative(e)));
    }
    rep.body["representatives"] = reps;
    if (degree == 1) rep.body["bundle_class"] = h.coords(inst.bundle.cocycle);
    rep.verdict = "PASS";
    rep.exit_code = 0;
    rep.summary = "H" + std::to_string(degree) + " = " + h.group().to_string();
    return rep;
}

Report cmd_bundle_iso(const json& a, const json& b) {
    Report rep;
    rep.command = "iso";
    BundleInstance ba = parse_bundle(a);
    BundleInstance bb = parse_bundle(b);
    BundleIsoResult res = iso_bundles(ba.bundle, bb.bundle);
    rep.body["h1"] = group_to_json(res.h1);
    rep.body["class_a"] = res.coords1;
    rep.body["class_b"] = res.coords2;
    if (res.isomorphic()) {
        rep.body["witness"] = cochain_to_json(*res.witness);
        rep.verdict = "PASS";
        rep.exit_code = 0;
        rep.summary = "PASS: isomorphic, coboundary witness attached";
    } else {
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = "FAIL: classes " + elem_str(res.coords1) + " vs " + elem_str(res.coords2) +
                      " in H1 = " + res.h1.to_string();
    }
    return rep;
}

Report cmd_xprod(const json& file, int point, const std::string& mode) {
    Report rep;
    rep.command = "xprod " + mode;
    ActionInstance inst = parse_action(file, point);
    rep.body["point"] = point;
    if (mode == "build") {
        CrossedProductAlgebra alg(inst.action);
        auto w = wedderburn_decompose(alg);
        rep.body["dimension"] = alg.dim();
        rep.body["center_dimension"] = w.center_dimension;
        rep.verdict = "PASS";
        rep.exit_code = 0;
        rep.summary = "crossed product dimension " + std::to_string(alg.dim()) + ", center dimension " +
                      std::to_string(w.center_dimension);
    } else if (mode == "spectrum") {
        UnitaryLift lift = is_unitary_action(inst.action);
        if (lift.status != UnitaryLift::Status::Lifted) {
            rep.body["status"] = lift.status == UnitaryLift::Status::Obstructed ? "OBSTRUCTED" : "NOT_POINTWISE_INNER";
            if (lift.status == UnitaryLift::Status::Obstructed) rep.body["phases"] = phases_to_json(lift.phases);
            rep.verdict = "FAIL";
            rep.exit_code = 1;
            rep.summary = "FAIL: action is not unitary (" + std::string(rep.body["status"]) + ")";
            return rep;
        }
        SpectrumResult spec = spectrum_enumerate(*lift.lift);
        std::vector<int> dims;
        for (const auto& r : spec.irreps) dims.push_back(r.carrier);
        rep.body["irreps"] = dims.size();
        rep.body["dims"] = dims;
        rep.body["sum_of_squares"] = spec.sum_dim_squares;
        rep.body["complete"] = spec.complete;
        rep.body["pairwise_inequivalent"] = spec.pairwise_inequivalent;
        json chars = json::array();
        for (const Elem& c : spec.characters) chars.push_back(c);
        rep.body["characters"] = chars;
        bool ok = spec.complete && spec.pairwise_inequivalent;
        rep.verdict = ok ? "PASS" : "FAIL";
        rep.exit_code = ok ? 0 : 1;
        std::ostringstream os;
        os << dims.size() << " irreps, dims " << dims_str(dims) << ", sum-of-squares " << spec.sum_dim_squares
           << " = dim " << (ok ? "PASS" : "FAIL");
        rep.summary = os.str();
    } else if (mode == "decompose") {
        CrossedProductAlgebra alg(inst.action);
        auto w = wedderburn_decompose(alg);
        rep.body["dims"] = w.dims;
        rep.body["center_dimension"] = w.center_dimension;
        rep.verdict = "PASS";
        rep.exit_code = 0;
        rep.summary = "summands " + dims_str(w.dims);
    } else {
        throw InvalidInput("xprod mode must be build, spectrum or decompose");
    }
    return rep;
}

Report cmd_verify(const json& file, const std::string& what, double tol, const std::string& dual_sign) {
    if (what == "unitary-iso") return verify_unitary_iso(file, tol);
    if (what == "equivalence") return verify_equivalence(file, tol);
    if (what == "locunit") return verify_locunit(file, tol);
    if (what == "takai") return verify_takai(file, tol, dual_sign);
    throw InvalidInput("verify mode must be unitary-iso, equivalence, locunit or takai");
}

Report run_guarded(const std::string& command, const std::function<Report()>& fn) {
    try {
        return fn();
    } catch (const NumericalFailure& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "ERROR";
        rep.exit_code = 3;
        rep.summary = std::string("ERROR NumericalFailure: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    } catch (const NotLocallyUnitary& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL NotLocallyUnitary: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    } catch (const DiscontinuousSection& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL DiscontinuousSection: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    } catch (const InvalidWitness& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL InvalidWitness: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    } catch (const InternalInconsistency& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "FAIL";
        rep.exit_code = 1;
        rep.summary = std::string("FAIL InternalInconsistency: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    } catch (const std::exception& e) {
        Report rep;
        rep.command = command;
        rep.verdict = "ERROR";
        rep.exit_code = 2;
        rep.summary = std::string("ERROR: ") + e.what();
        rep.body["error"] = e.what();
        return rep;
    }
}

}  // namespace gb
