#pragma once

#include <nlohmann/json.hpp>

#include "gb/bundles.hpp"
#include "gb/locunit.hpp"

namespace gb {

using json = nlohmann::ordered_json;

// Versioned instance files ("schema": 1) with top-level "kind" in
// {cover, bundle, pointed, action, locunit, equivalence}. Groups are
// invariant-factor lists, homs integer matrices, complex numbers [re, im]
// pairs, characters integer vectors. Unknown fields are rejected.

std::string instance_kind(const json& doc);

struct CoverInstance {
    BundlePresentation presentation;
};
struct BundleInstance {
    PrincipalBundle bundle;
};
struct PointedInstance {
    PrincipalBundle bundle;
    PointedCover points;
};
struct ActionInstance {
    ActionDatum action;  // single-point dynamical systems, possibly several
    int point = 0;
};
struct LocunitInstance {
    LocallyUnitaryDatum datum;
};
struct EquivalenceInstance {
    LocallyUnitaryDatum alpha;
    LocallyUnitaryDatum beta;
    PointwiseEquivalence u;
};

CoverInstance parse_cover(const json& doc);
BundleInstance parse_bundle(const json& doc);
PointedInstance parse_pointed(const json& doc);
// Multi-point action files carry a list of systems; `point` selects one.
ActionInstance parse_action(const json& doc, int point);
int action_system_count(const json& doc);
LocunitInstance parse_locunit(const json& doc);
EquivalenceInstance parse_equivalence(const json& doc);

// Serialization helpers used by reports and fixture generation.
json group_to_json(const FiniteAbelianGroup& g);
json cochain_to_json(const CechCochain& c);
json complex_to_json(Complex z);
json cxmat_to_json(const CxMat& m);

json presentation_to_json(const BundlePresentation& b);
json bundle_to_json(const PrincipalBundle& b);
json pointed_to_json(const PrincipalBundle& b, const PointedCover& pc);

}  // namespace gb
