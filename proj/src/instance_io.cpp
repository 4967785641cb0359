#include "gb/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace gb {

namespace {

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::set<std::string>& required,
                  const std::string& where) {
    if (!obj.is_object()) throw InvalidInput(where + ": expected an object");
    for (const auto& [k, v] : obj.items()) {
        if (!allowed.count(k)) throw InvalidInput(where + ": unknown field '" + k + "'");
        (void)v;
    }
    for (const std::string& k : required)
        if (!obj.count(k)) throw InvalidInput(where + ": missing field '" + k + "'");
}

void require_schema(const json& doc, const std::string& kind) {
    if (!doc.is_object()) throw InvalidInput("instance file must be a JSON object");
    if (!doc.count("schema") || !doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1)
        throw InvalidInput("instance file must declare \"schema\": 1");
    if (!doc.count("kind") || doc["kind"] != kind)
        throw InvalidInput("instance file has kind '" + std::string(doc.value("kind", "?")) +
                           "', expected '" + kind + "'");
}

Simplex parse_simplex(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) throw InvalidInput(where + ": patches must be a nonempty array");
    Simplex s;
    for (const auto& v : arr) s.push_back(v.get<int>());
    return s;
}

Simplex simplex_from_key(const std::string& key) {
    Simplex s;
    std::istringstream is(key);
    std::string tok;
    while (std::getline(is, tok, ',')) s.push_back(std::stoi(tok));
    return s;
}

std::vector<int64_t> parse_int_vector(const json& arr, const std::string& where) {
    if (!arr.is_array()) throw InvalidInput(where + ": expected an integer array");
    std::vector<int64_t> v;
    for (const auto& x : arr) v.push_back(x.get<int64_t>());
    return v;
}

IntMat parse_int_matrix(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) throw InvalidInput(where + ": expected a nonempty integer matrix");
    int rows = static_cast<int>(arr.size());
    int cols = static_cast<int>(arr[0].size());
    IntMat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(arr[r].size()) != cols) throw InvalidInput(where + ": ragged matrix");
        for (int c = 0; c < cols; ++c) m(r, c) = arr[r][c].get<int64_t>();
    }
    return m;
}

Complex parse_complex(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) throw InvalidInput(where + ": complex numbers are [re, im] pairs");
    return Complex(v[0].get<double>(), v[1].get<double>());
}

CxMat parse_cxmat(const json& arr, const std::string& where) {
    if (!arr.is_array() || arr.empty()) throw InvalidInput(where + ": expected a complex matrix");
    int rows = static_cast<int>(arr.size());
    int cols = static_cast<int>(arr[0].size());
    CxMat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(arr[r].size()) != cols) throw InvalidInput(where + ": ragged matrix");
        for (int c = 0; c < cols; ++c) m(r, c) = parse_complex(arr[r][c], where);
    }
    return m;
}

CoverComplex parse_cover_complex(const json& cov) {
    require_keys(cov, {"patches", "simplices"}, {"patches", "simplices"}, "cover");
    CoverComplex c;
    c.patches = cov["patches"].get<int>();
    for (const auto& sj : cov["simplices"]) {
        require_keys(sj, {"patches", "components", "faces"}, {"patches", "components"}, "simplex");
        Simplex s = parse_simplex(sj["patches"], "simplex");
        int n = sj["components"].get<int>();
        c.comps[s] = n;
        if (s.size() >= 2) {
            if (!sj.count("faces")) throw InvalidInput("simplex of size >= 2 needs face maps");
            for (const auto& [key, fmap] : sj["faces"].items()) {
                Simplex t = simplex_from_key(key);
                c.faces[{s, t}] = std::vector<int>();
                for (const auto& v : fmap) c.faces[{s, t}].push_back(v.get<int>());
            }
        } else if (sj.count("faces")) {
            throw InvalidInput("vertices have no face maps");
        }
    }
    return c;
}

BundlePresentation parse_presentation(const json& doc) {
    BundlePresentation b;
    b.complex = parse_cover_complex(doc.at("cover"));
    if (!doc.count("fibers")) throw InvalidInput("missing 'fibers'");
    for (const auto& f : doc["fibers"]) b.fibers.push_back(FiniteAbelianGroup(parse_int_vector(f, "fibers")));
    if (static_cast<int>(b.fibers.size()) != b.complex.patches)
        throw InvalidInput("need one fiber per patch");
    std::set<std::pair<Simplex, int>> given;
    if (doc.count("glue"))
        for (const auto& gj : doc["glue"]) {
            require_keys(gj, {"patches", "component", "matrix"}, {"patches", "component", "matrix"}, "glue");
            Simplex s = parse_simplex(gj["patches"], "glue");
            int comp = gj["component"].get<int>();
            if (s.size() != 2) throw InvalidInput("glue entries live on patch pairs");
            b.glue.insert({{s, comp},
                           GroupHom(b.fibers.at(s[1]), b.fibers.at(s[0]), parse_int_matrix(gj["matrix"], "glue"))});
            given.insert({s, comp});
        }
    // Omitted gluings default to the identity; fibers must agree.
    for (const Simplex& s : b.complex.simplices(1))
        for (int c = 0; c < b.complex.n_comps(s); ++c)
            if (!given.count({s, c})) {
                if (!(b.fibers.at(s[0]) == b.fibers.at(s[1])))
                    throw InvalidInput("omitted gluing needs equal fibers on both patches");
                b.glue.insert({{s, c}, GroupHom::identity(b.fibers.at(s[0]))});
            }
    b.validate();
    return b;
}

CechCochain parse_cocycle(const BundlePresentation& b, const json& doc) {
    CechCochain c = zero_cochain(b, 1);
    if (doc.count("cocycle"))
        for (const auto& ej : doc["cocycle"]) {
            require_keys(ej, {"patches", "component", "value"}, {"patches", "component", "value"}, "cocycle");
            Simplex s = parse_simplex(ej["patches"], "cocycle");
            if (s.size() != 2 || !b.complex.has(s)) throw InvalidInput("cocycle entry on an invalid simplex");
            SectionGroup sg = sections(b, s);
            int comp = ej["component"].get<int>();
            if (comp < 0 || comp >= sg.n_comps) throw InvalidInput("cocycle component out of range");
            Elem v = sg.fiber.reduce(parse_int_vector(ej["value"], "cocycle"));
            Elem whole = sg.group.reduce(c.values[s]);
            sg.set_component(whole, comp, v);
            c.values[s] = whole;
        }
    return c;
}

PointedCover parse_points(const CoverComplex& complex, const json& doc) {
    if (!doc.count("points")) throw InvalidInput("missing 'points'");
    PointedCover pc;
    for (const auto& pj : doc["points"]) {
        require_keys(pj, {"patches", "components"}, {"patches", "components"}, "point");
        int id = pc.n_points++;
        std::vector<int> ps;
        for (const auto& v : pj["patches"]) ps.push_back(v.get<int>());
        pc.patches_of.push_back(ps);
        for (const auto& [key, comp] : pj["components"].items())
            pc.comp_assign[{id, simplex_from_key(key)}] = comp.get<int>();
    }
    pc.validate(complex);
    return pc;
}

// Unitary families, permutations or abstract maps, indexed by group element.
std::vector<CxMat> parse_element_matrices(const FiniteAbelianGroup& g, const json& arr, int n,
                                          const std::string& where) {
    std::vector<CxMat> out(g.order());
    std::vector<bool> seen(g.order(), false);
    for (const auto& ej : arr) {
        require_keys(ej, {"element", "matrix"}, {"element", "matrix"}, where);
        Elem e = g.reduce(parse_int_vector(ej["element"], where));
        CxMat m = parse_cxmat(ej["matrix"], where);
        if (m.rows() != n || m.cols() != n) throw InvalidInput(where + ": matrix has wrong shape");
        int64_t idx = g.index_of(e);
        if (seen[idx]) throw InvalidInput(where + ": duplicate element entry");
        seen[idx] = true;
        out[idx] = m;
    }
    for (int64_t i = 0; i < g.order(); ++i)
        if (!seen[i]) throw InvalidInput(where + ": missing entry for a group element");
    return out;
}

ActionDatum parse_action_datum(const FiniteAbelianGroup& g, const json& aj, const std::string& where) {
    require_keys(aj, {"trivial", "unitaries", "permutations", "maps", "fiber"}, {"fiber"}, where);
    const json& fj = aj.at("fiber");
    require_keys(fj, {"type", "n", "points"}, {"type"}, where + ".fiber");
    std::string type = fj.at("type").get<std::string>();
    FiberAlgebra fiber;
    if (type == "matrix") fiber = FiberAlgebra::matrix(fj.at("n").get<int>());
    else if (type == "functions") fiber = FiberAlgebra::functions(fj.at("points").get<int>());
    else throw InvalidInput(where + ": fiber type must be 'matrix' or 'functions'");

    int specified = aj.count("trivial") + aj.count("unitaries") + aj.count("permutations") + aj.count("maps");
    if (specified != 1) throw InvalidInput(where + ": specify exactly one action form");
    if (aj.count("trivial")) {
        if (aj["trivial"] != true) throw InvalidInput(where + ": 'trivial' must be true");
        return trivial_action(g, fiber);
    }
    if (aj.count("unitaries")) {
        if (fiber.kind != FiberAlgebra::Kind::Matrix) throw InvalidInput(where + ": unitaries need a matrix fiber");
        return action_from_unitaries(g, parse_element_matrices(g, aj["unitaries"], fiber.n, where));
    }
    if (aj.count("permutations")) {
        if (fiber.kind != FiberAlgebra::Kind::Functions)
            throw InvalidInput(where + ": permutations need a functions fiber");
        std::vector<std::vector<int>> perms(g.order());
        std::vector<bool> seen(g.order(), false);
        for (const auto& ej : aj["permutations"]) {
            require_keys(ej, {"element", "map"}, {"element", "map"}, where);
            int64_t idx = g.index_of(g.reduce(parse_int_vector(ej["element"], where)));
            if (seen[idx]) throw InvalidInput(where + ": duplicate element entry");
            seen[idx] = true;
            for (const auto& v : ej["map"]) perms[idx].push_back(v.get<int>());
        }
        for (int64_t i = 0; i < g.order(); ++i)
            if (!seen[i]) throw InvalidInput(where + ": missing entry for a group element");
        return action_from_permutations(g, fiber.n, perms);
    }
    std::vector<CxMat> maps = parse_element_matrices(g, aj["maps"], fiber.dim(), where);
    return action_from_linear_maps(g, fiber, maps);
}

LocallyUnitaryDatum parse_locunit_payload(const json& doc, const BundlePresentation& pres,
                                          const PointedCover& pc, const json& systems, const json& lifts) {
    LocallyUnitaryDatum d;
    d.presentation = pres;
    d.points = pc;
    d.actions.resize(pc.n_points);
    std::vector<bool> seen(pc.n_points, false);
    for (const auto& sj : systems) {
        require_keys(sj, {"point", "action"}, {"point", "action"}, "system");
        int p = sj["point"].get<int>();
        if (p < 0 || p >= pc.n_points) throw InvalidInput("system for unknown point");
        if (seen[p]) throw InvalidInput("duplicate system for a point");
        seen[p] = true;
        d.actions[p] = parse_action_datum(point_fiber(pres, pc, p), sj["action"], "system");
    }
    for (int p = 0; p < pc.n_points; ++p)
        if (!seen[p]) throw InvalidInput("missing system for point " + std::to_string(p));
    for (const auto& lj : lifts) {
        require_keys(lj, {"patch", "point", "unitaries"}, {"patch", "point", "unitaries"}, "lift");
        int patch = lj["patch"].get<int>(), point = lj["point"].get<int>();
        if (point < 0 || point >= pc.n_points) throw InvalidInput("lift for unknown point");
        UnitaryActionDatum u;
        u.group = point_fiber(pres, pc, point);
        u.n = d.actions[point].fiber.n;
        u.u = parse_element_matrices(u.group, lj["unitaries"], u.n, "lift");
        d.lifts.insert({{patch, point}, u});
    }
    (void)doc;
    return d;
}

}  // namespace

std::string instance_kind(const json& doc) {
    if (!doc.is_object() || !doc.count("kind") || !doc["kind"].is_string())
        throw InvalidInput("instance file must carry a string 'kind'");
    return doc["kind"].get<std::string>();
}

CoverInstance parse_cover(const json& doc) {
    require_schema(doc, "cover");
    require_keys(doc, {"schema", "kind", "cover", "fibers", "glue"}, {"cover", "fibers"}, "cover file");
    return CoverInstance{parse_presentation(doc)};
}

BundleInstance parse_bundle(const json& doc) {
    require_schema(doc, "bundle");
    require_keys(doc, {"schema", "kind", "cover", "fibers", "glue", "cocycle"}, {"cover", "fibers"},
                 "bundle file");
    BundlePresentation pres = parse_presentation(doc);
    PrincipalBundle b{pres, parse_cocycle(pres, doc)};
    b.validate();
    return BundleInstance{b};
}

PointedInstance parse_pointed(const json& doc) {
    require_schema(doc, "pointed");
    require_keys(doc, {"schema", "kind", "cover", "fibers", "glue", "cocycle", "points"},
                 {"cover", "fibers", "points"}, "pointed file");
    BundlePresentation pres = parse_presentation(doc);
    PrincipalBundle b{pres, parse_cocycle(pres, doc)};
    b.validate();
    return PointedInstance{b, parse_points(pres.complex, doc)};
}

int action_system_count(const json& doc) {
    require_schema(doc, "action");
    return static_cast<int>(doc.at("systems").size());
}

ActionInstance parse_action(const json& doc, int point) {
    require_schema(doc, "action");
    require_keys(doc, {"schema", "kind", "systems"}, {"systems"}, "action file");
    const json& systems = doc["systems"];
    if (!systems.is_array() || systems.empty()) throw InvalidInput("action file needs at least one system");
    if (point < 0 || point >= static_cast<int>(systems.size()))
        throw InvalidInput("requested point is out of range");
    const json& sj = systems[point];
    require_keys(sj, {"group", "action"}, {"group", "action"}, "system");
    FiniteAbelianGroup g(parse_int_vector(sj["group"], "group"));
    return ActionInstance{parse_action_datum(g, sj["action"], "system"), point};
}

LocunitInstance parse_locunit(const json& doc) {
    require_schema(doc, "locunit");
    require_keys(doc, {"schema", "kind", "cover", "fibers", "glue", "points", "systems", "lifts"},
                 {"cover", "fibers", "points", "systems", "lifts"}, "locunit file");
    BundlePresentation pres = parse_presentation(doc);
    PointedCover pc = parse_points(pres.complex, doc);
    LocunitInstance out{parse_locunit_payload(doc, pres, pc, doc["systems"], doc["lifts"])};
    out.datum.validate();
    return out;
}

EquivalenceInstance parse_equivalence(const json& doc) {
    require_schema(doc, "equivalence");
    require_keys(doc, {"schema", "kind", "base", "alpha", "beta", "u"}, {"base", "alpha", "beta", "u"},
                 "equivalence file");
    const json& base = doc["base"];
    require_keys(base, {"cover", "fibers", "glue", "points"}, {"cover", "fibers", "points"}, "base");
    BundlePresentation pres = parse_presentation(base);
    PointedCover pc = parse_points(pres.complex, base);

    auto side = [&](const json& sj, const std::string& where) {
        require_keys(sj, {"systems", "lifts"}, {"systems", "lifts"}, where);
        LocallyUnitaryDatum d = parse_locunit_payload(sj, pres, pc, sj["systems"], sj["lifts"]);
        d.validate();
        return d;
    };
    EquivalenceInstance out{side(doc["alpha"], "alpha"), side(doc["beta"], "beta"), {}};

    out.u.u.resize(pc.n_points);
    std::vector<bool> seen(pc.n_points, false);
    for (const auto& uj : doc["u"]) {
        require_keys(uj, {"point", "unitaries"}, {"point", "unitaries"}, "u");
        int p = uj["point"].get<int>();
        if (p < 0 || p >= pc.n_points) throw InvalidInput("equivalence entry for unknown point");
        if (seen[p]) throw InvalidInput("duplicate equivalence entry");
        seen[p] = true;
        out.u.u[p] =
            parse_element_matrices(point_fiber(pres, pc, p), uj["unitaries"], out.alpha.actions[p].fiber.n, "u");
    }
    for (int p = 0; p < pc.n_points; ++p)
        if (!seen[p]) throw InvalidInput("missing equivalence entry for point " + std::to_string(p));
    return out;
}

json group_to_json(const FiniteAbelianGroup& g) { return json(g.factors()); }

json cochain_to_json(const CechCochain& c) {
    json out = json::array();
    for (const auto& [s, v] : c.values) {
        json entry;
        entry["patches"] = s;
        entry["value"] = v;
        out.push_back(entry);
    }
    return out;
}

namespace {
double clean_small(double x) {
    double r = std::round(x * 1e12) / 1e12;
    return r == 0.0 ? 0.0 : r;
}
}  // namespace

json complex_to_json(Complex z) { return json::array({clean_small(z.real()), clean_small(z.imag())}); }

json cxmat_to_json(const CxMat& m) {
    json out = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

json presentation_to_json(const BundlePresentation& b) {
    json doc;
    json cov;
    cov["patches"] = b.complex.patches;
    cov["simplices"] = json::array();
    for (const auto& [s, n] : b.complex.comps) {
        json sj;
        sj["patches"] = s;
        sj["components"] = n;
        if (s.size() >= 2) {
            json faces;
            for (const auto& [key, fmap] : b.complex.faces) {
                if (key.first != s) continue;
                std::string fk;
                for (size_t i = 0; i < key.second.size(); ++i)
                    fk += (i ? "," : "") + std::to_string(key.second[i]);
                faces[fk] = fmap;
            }
            sj["faces"] = faces;
        }
        cov["simplices"].push_back(sj);
    }
    doc["cover"] = cov;
    doc["fibers"] = json::array();
    for (const auto& f : b.fibers) doc["fibers"].push_back(f.factors());
    json glue = json::array();
    for (const auto& [key, theta] : b.glue) {
        bool ident = theta.equals(GroupHom::identity(b.fibers.at(key.first[0])));
        if (ident && b.fibers.at(key.first[0]) == b.fibers.at(key.first[1])) continue;
        json gj;
        gj["patches"] = key.first;
        gj["component"] = key.second;
        json m = json::array();
        for (int r = 0; r < theta.matrix().rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < theta.matrix().cols(); ++c) row.push_back(theta.matrix()(r, c));
            m.push_back(row);
        }
        gj["matrix"] = m;
        glue.push_back(gj);
    }
    if (!glue.empty()) doc["glue"] = glue;
    return doc;
}

json bundle_to_json(const PrincipalBundle& b) {
    json doc;
    doc["schema"] = 1;
    doc["kind"] = "bundle";
    json body = presentation_to_json(b.presentation);
    for (auto& [k, v] : body.items()) doc[k] = v;
    json coc = json::array();
    for (const auto& [s, whole] : b.cocycle.values) {
        SectionGroup sg = sections(b.presentation, s);
        for (int c = 0; c < sg.n_comps; ++c) {
            Elem v = sg.component(sg.group.reduce(whole), c);
            if (v == sg.fiber.zero()) continue;
            json ej;
            ej["patches"] = s;
            ej["component"] = c;
            ej["value"] = v;
            coc.push_back(ej);
        }
    }
    if (!coc.empty()) doc["cocycle"] = coc;
    return doc;
}

json pointed_to_json(const PrincipalBundle& b, const PointedCover& pc) {
    json doc = bundle_to_json(b);
    doc["kind"] = "pointed";
    json points = json::array();
    for (int u = 0; u < pc.n_points; ++u) {
        json pj;
        pj["patches"] = pc.patches_of[u];
        json comps;
        for (const auto& [key, c] : pc.comp_assign) {
            if (key.first != u) continue;
            std::string sk;
            for (size_t i = 0; i < key.second.size(); ++i) sk += (i ? "," : "") + std::to_string(key.second[i]);
            comps[sk] = c;
        }
        pj["components"] = comps;
        points.push_back(pj);
    }
    doc["points"] = points;
    return doc;
}

}  // namespace gb
