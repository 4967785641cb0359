#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gb/commands.hpp"
#include "gb/covers.hpp"

using namespace gb;

namespace {

std::string fixtures_dir() {
    const char* env = std::getenv("GB_FIXTURES");
    return env ? std::string(env) + "/v1/" : "fixtures/v1/";
}

json load(const std::string& name) {
    std::ifstream in(fixtures_dir() + name);
    REQUIRE(in.good());
    json doc;
    in >> doc;
    return doc;
}

// Runs the gb binary; returns (exit code, stdout bytes).
std::pair<int, std::string> run_gb(const std::string& args) {
    const char* bin = std::getenv("GB_BIN");
    REQUIRE(bin != nullptr);
    std::string out_path = "gb_cli_out.tmp";
    std::string cmd = std::string(bin) + " " + args + " > " + out_path + " 2> gb_cli_err.tmp";
    int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, ss.str()};
}

}  // namespace

TEST_CASE("schema round trip: serialized bundles parse back to equal data") {
    for (auto& b : {covers::trivial_circle_bundle(3), covers::moebius_bundle(4)}) {
        json doc = bundle_to_json(b);
        BundleInstance parsed = parse_bundle(doc);
        CHECK(presentations_equal(parsed.bundle.presentation, b.presentation));
        CochainSpace c1 = cochain_space(b.presentation, 1);
        CHECK(c1.pack(parsed.bundle.cocycle) == c1.pack(b.cocycle));
    }
    PrincipalBundle moeb = covers::moebius_bundle(2);
    json pointed = pointed_to_json(moeb, covers::three_arc_points(moeb.presentation));
    PointedInstance pi = parse_pointed(pointed);
    CHECK(pi.points.n_points == 3);
}

TEST_CASE("schema validation: unknown fields and bad payloads are rejected") {
    json doc = load("circle_z2_trivial.json");
    doc["extra"] = 1;
    CHECK_THROWS_AS(parse_bundle(doc), InvalidInput);

    json doc2 = load("circle_z2_trivial.json");
    doc2["schema"] = 2;
    CHECK_THROWS_AS(parse_bundle(doc2), InvalidInput);

    json doc3 = load("circle_z2_trivial.json");
    doc3["kind"] = "cover";
    CHECK_THROWS_AS(parse_bundle(doc3), InvalidInput);

    // A cocycle entry violating the identity on a cover with triple overlaps
    // is rejected by validation.
    json doc4 = load("circle_z2_moebius.json");
    doc4["cocycle"][0]["value"] = json::array({5});  // out of range gets reduced; bad patch errors
    CHECK_NOTHROW(parse_bundle(doc4));
    doc4["cocycle"][0]["patches"] = json::array({0, 5});
    CHECK_THROWS_AS(parse_bundle(doc4), InvalidInput);
}

TEST_CASE("action files: all forms parse and dispatch") {
    CHECK(parse_action(load("action_diag_z2.json"), 0).action.fiber.n == 2);
    CHECK(parse_action(load("action_pauli.json"), 0).action.group == FiniteAbelianGroup({2, 2}));
    CHECK(parse_action(load("action_translation_z2.json"), 0).action.fiber.kind ==
          FiberAlgebra::Kind::Functions);
    CHECK(parse_action(load("action_group_z2.json"), 0).action.fiber.dim() == 1);
    CHECK_THROWS_AS(parse_action(load("action_diag_z2.json"), 3), InvalidInput);
}

TEST_CASE("locunit and equivalence files parse into valid data") {
    LocunitInstance li = parse_locunit(load("locunit_circle_nontrivial.json"));
    CHECK(extract_transition_class(li.datum).class_coords == Elem{1});

    EquivalenceInstance ei = parse_equivalence(load("equivalence_circle.json"));
    CechCochain beta = equivalence_to_iso(ei.u, ei.alpha, ei.beta);
    CHECK(beta.degree == 0);
}

TEST_CASE("in-process commands produce the documented verdicts") {
    Report h = cmd_cohomology(load("circle_z2_moebius.json"), 1);
    CHECK(h.summary == "H1 = Z2");
    CHECK(h.exit_code == 0);

    Report h0 = cmd_cohomology(load("single_patch_z5.json"), 1);
    CHECK(h0.summary == "H1 = 0");

    Report ok = cmd_bundle_iso(load("circle_z2_110.json"), load("circle_z2_trivial.json"));
    CHECK(ok.verdict == "PASS");
    Report no = cmd_bundle_iso(load("circle_z2_100.json"), load("circle_z2_trivial.json"));
    CHECK(no.verdict == "FAIL");
    CHECK(no.body["class_a"] == json::array({1}));
    CHECK(no.body["class_b"] == json::array({0}));

    Report spec = cmd_xprod(load("action_diag_z2.json"), 0, "spectrum");
    CHECK(spec.summary == "2 irreps, dims [2,2], sum-of-squares 8 = dim PASS");

    Report build = cmd_xprod(load("action_pauli.json"), 0, "build");
    CHECK(build.body["dimension"] == 16);
    CHECK(build.body["center_dimension"] == 1);

    Report dec = cmd_xprod(load("action_group_z2.json"), 0, "decompose");
    CHECK(dec.summary == "summands [1,1]");

    Report pauli = cmd_verify(load("action_pauli.json"), "unitary-iso", 1e-9, "conj");
    CHECK(pauli.verdict == "FAIL");
    CHECK(pauli.summary == "FAIL OBSTRUCTED phase -1");

    Report tak = cmd_verify(load("pointed_z2_moebius.json"), "takai", 1e-9, "conj");
    CHECK(tak.verdict == "PASS");
    CHECK(tak.summary == "PASS, recovered class = double-dual of input class");

    Report takp = cmd_verify(load("pointed_z2_moebius.json"), "takai", 1e-9, "plain");
    CHECK(takp.verdict == "PASS");

    Report lu = cmd_verify(load("locunit_circle_coboundary.json"), "locunit", 1e-9, "conj");
    CHECK(lu.verdict == "PASS");
    CHECK(lu.body["class"] == json::array({0}));

    Report eq = cmd_verify(load("equivalence_circle.json"), "equivalence", 1e-9, "conj");
    CHECK(eq.verdict == "PASS");
    CHECK(eq.body["round_trip"] == true);
}

TEST_CASE("failure reports carry machine-checkable counterexamples") {
    // The obstructed Pauli report carries the full phase table; the (-1)
    // entry revalidates against the library.
    Report pauli = cmd_verify(load("action_pauli.json"), "unitary-iso", 1e-9, "conj");
    const json& phases = pauli.body["systems"][0]["phases"];
    ActionInstance inst = parse_action(load("action_pauli.json"), 0);
    UnitaryLift lift = is_unitary_action(inst.action);
    FiniteAbelianGroup z22({2, 2});
    for (int64_t s = 0; s < 4; ++s)
        for (int64_t t = 0; t < 4; ++t) {
            Complex reported(phases[s][t][0].get<double>(), phases[s][t][1].get<double>());
            CHECK(std::abs(reported - lift.phases[s][t]) < 1e-9);
        }

    // A distinct-class iso report names coordinates that the library confirms.
    Report no = cmd_bundle_iso(load("circle_z2_100.json"), load("circle_z2_trivial.json"));
    BundleInstance a = parse_bundle(load("circle_z2_100.json"));
    CHECK(no.body["class_a"].get<std::vector<int64_t>>() == a.bundle.class_coords());
}

TEST_CASE("cli binary: exit codes follow the verdicts") {
    std::string fx = fixtures_dir();
    CHECK(run_gb("cohomology " + fx + "circle_z2_trivial.json").first == 0);
    CHECK(run_gb("iso " + fx + "circle_z2_100.json " + fx + "circle_z2_trivial.json").first == 1);
    CHECK(run_gb("cohomology " + fx + "malformed.json").first == 2);
    CHECK(run_gb("verify " + fx + "action_pauli.json unitary-iso").first == 1);
    CHECK(run_gb("verify " + fx + "pointed_z2_trivial.json takai").first == 0);
    CHECK(run_gb("xprod " + fx + "action_diag_z2.json spectrum").first == 0);
    CHECK(run_gb("xprod " + fx + "action_translation_z2.json spectrum").first == 1);
}

TEST_CASE("cli binary: reports are byte-identical across runs") {
    std::string fx = fixtures_dir();
    std::vector<std::string> cmds = {
        "cohomology " + fx + "circle_z2_moebius.json",
        "iso " + fx + "circle_z2_110.json " + fx + "circle_z2_trivial.json",
        "xprod " + fx + "action_diag_z2.json spectrum",
        "verify " + fx + "action_pauli.json unitary-iso",
        "verify " + fx + "locunit_circle_nontrivial.json locunit",
        "verify " + fx + "pointed_z2_moebius.json takai",
    };
    for (const std::string& c : cmds) {
        auto first = run_gb(c);
        auto second = run_gb(c);
        CHECK(first.second == second.second);
        CHECK(first.first == second.first);
        CHECK_FALSE(first.second.empty());
    }
}
