#!/usr/bin/env python3
"""Regenerates the JSON instance fixtures under fixtures/v1/."""

import json
import math
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures", "v1")


def three_arc_cover(m):
    return {
        "patches": 3,
        "simplices": [
            {"patches": [0], "components": 1},
            {"patches": [1], "components": 1},
            {"patches": [2], "components": 1},
            {"patches": [0, 1], "components": 1, "faces": {"0": [0], "1": [0]}},
            {"patches": [0, 2], "components": 1, "faces": {"0": [0], "2": [0]}},
            {"patches": [1, 2], "components": 1, "faces": {"1": [0], "2": [0]}},
        ],
    }, [[m], [m], [m]]


def circle_points():
    return [
        {"patches": [0, 1], "components": {"0": 0, "1": 0, "0,1": 0}},
        {"patches": [1, 2], "components": {"1": 0, "2": 0, "1,2": 0}},
        {"patches": [0, 2], "components": {"0": 0, "2": 0, "0,2": 0}},
    ]


def circle_bundle(m, g01, g12, g02, kind="bundle", points=False):
    cover, fibers = three_arc_cover(m)
    doc = {"schema": 1, "kind": kind, "cover": cover, "fibers": fibers}
    cocycle = []
    for (pair, v) in ((([0, 1]), g01), (([1, 2]), g12), (([0, 2]), g02)):
        if v % m:
            cocycle.append({"patches": pair, "component": 0, "value": [v % m]})
    if cocycle:
        doc["cocycle"] = cocycle
    if points:
        doc["points"] = circle_points()
    return doc


def cx(z):
    return [round(z.real, 15), round(z.imag, 15)]


def cxmat(rows):
    return [[cx(complex(v)) for v in row] for row in rows]


def scalar_lift(chi):
    """Unitary family over Z2 at n = 1: u_s = (-1)^(chi*s)."""
    return [
        {"element": [0], "matrix": cxmat([[1]])},
        {"element": [1], "matrix": cxmat([[-1 if chi else 1]])},
    ]


def circle_locunit(t01, t12, t02, kind="locunit"):
    """Scalar data over the pointed circle whose pairwise twists are given."""
    cover, fibers = three_arc_cover(2)
    doc = {
        "schema": 1,
        "kind": kind,
        "cover": cover,
        "fibers": fibers,
        "points": circle_points(),
        "systems": [
            {"point": p, "action": {"fiber": {"type": "matrix", "n": 1}, "trivial": True}}
            for p in range(3)
        ],
        "lifts": [],
    }
    # Point p sits in two patches; the twist goes on the higher patch's lift.
    twists = [t01, t12, t02]
    patch_pairs = [(0, 1), (1, 2), (0, 2)]
    for p, (lo, hi) in enumerate(patch_pairs):
        doc["lifts"].append({"patch": lo, "point": p, "unitaries": scalar_lift(0)})
        doc["lifts"].append({"patch": hi, "point": p, "unitaries": scalar_lift(twists[p])})
    return doc


def locunit_payload(doc):
    return {"systems": doc["systems"], "lifts": doc["lifts"]}


def write(name, doc):
    path = os.path.join(OUT, name)
    with open(path, "w") as f:
        json.dump(doc, f, indent=2)
        f.write("\n")
    print("wrote", path)


def main():
    os.makedirs(OUT, exist_ok=True)

    # Bundles over the three-arc circle.
    write("circle_z2_trivial.json", circle_bundle(2, 0, 0, 0))
    write("circle_z2_110.json", circle_bundle(2, 1, 1, 0))
    write("circle_z2_100.json", circle_bundle(2, 1, 0, 0))
    write("circle_z2_moebius.json", circle_bundle(2, 0, 0, 1))
    for m in (3, 4, 5):
        write(f"circle_z{m}_trivial.json", circle_bundle(m, 0, 0, 0))
        write(f"circle_z{m}_moebius.json", circle_bundle(m, 0, 0, 1))

    single = {
        "schema": 1,
        "kind": "bundle",
        "cover": {"patches": 1, "simplices": [{"patches": [0], "components": 1}]},
        "fibers": [[5]],
    }
    write("single_patch_z5.json", single)

    # Pointed variants for the takai pipeline.
    write("pointed_z2_trivial.json", circle_bundle(2, 0, 0, 0, kind="pointed", points=True))
    write("pointed_z2_moebius.json", circle_bundle(2, 0, 0, 1, kind="pointed", points=True))
    write("pointed_z3_trivial.json", circle_bundle(3, 0, 0, 0, kind="pointed", points=True))
    write("pointed_z3_moebius.json", circle_bundle(3, 0, 0, 1, kind="pointed", points=True))
    write("pointed_z4_trivial.json", circle_bundle(4, 0, 0, 0, kind="pointed", points=True))
    write("pointed_z4_moebius.json", circle_bundle(4, 0, 0, 1, kind="pointed", points=True))

    # Finite dynamical systems.
    diag = {
        "schema": 1,
        "kind": "action",
        "systems": [
            {
                "group": [2],
                "action": {
                    "fiber": {"type": "matrix", "n": 2},
                    "unitaries": [
                        {"element": [0], "matrix": cxmat([[1, 0], [0, 1]])},
                        {"element": [1], "matrix": cxmat([[1, 0], [0, -1]])},
                    ],
                },
            }
        ],
    }
    write("action_diag_z2.json", diag)

    pauli = {
        "schema": 1,
        "kind": "action",
        "systems": [
            {
                "group": [2, 2],
                "action": {
                    "fiber": {"type": "matrix", "n": 2},
                    "unitaries": [
                        {"element": [0, 0], "matrix": cxmat([[1, 0], [0, 1]])},
                        {"element": [0, 1], "matrix": cxmat([[1, 0], [0, -1]])},
                        {"element": [1, 0], "matrix": cxmat([[0, 1], [1, 0]])},
                        {"element": [1, 1], "matrix": cxmat([[0, -1], [1, 0]])},
                    ],
                },
            }
        ],
    }
    write("action_pauli.json", pauli)

    w = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    z3diag = {
        "schema": 1,
        "kind": "action",
        "systems": [
            {
                "group": [3],
                "action": {
                    "fiber": {"type": "matrix", "n": 2},
                    "unitaries": [
                        {"element": [0], "matrix": cxmat([[1, 0], [0, 1]])},
                        {"element": [1], "matrix": cxmat([[1, 0], [0, w]])},
                        {"element": [2], "matrix": cxmat([[1, 0], [0, w * w]])},
                    ],
                },
            }
        ],
    }
    write("action_z3_diag.json", z3diag)

    group_z2 = {
        "schema": 1,
        "kind": "action",
        "systems": [
            {"group": [2], "action": {"fiber": {"type": "matrix", "n": 1}, "trivial": True}}
        ],
    }
    write("action_group_z2.json", group_z2)

    translation = {
        "schema": 1,
        "kind": "action",
        "systems": [
            {
                "group": [2],
                "action": {
                    "fiber": {"type": "functions", "points": 2},
                    "permutations": [
                        {"element": [0], "map": [0, 1]},
                        {"element": [1], "map": [1, 0]},
                    ],
                },
            }
        ],
    }
    write("action_translation_z2.json", translation)

    # Locally unitary circle data: twists (1,1,0) are a coboundary, (1,0,0) not.
    write("locunit_circle_coboundary.json", circle_locunit(1, 1, 0))
    write("locunit_circle_nontrivial.json", circle_locunit(1, 0, 0))
    write("locunit_circle_trivial.json", circle_locunit(0, 0, 0))

    # An exterior equivalence between the coboundary data and the trivial data:
    # u is the character family (1, chi, 1).
    cover, fibers = three_arc_cover(2)
    equivalence = {
        "schema": 1,
        "kind": "equivalence",
        "base": {"cover": cover, "fibers": fibers, "points": circle_points()},
        "alpha": locunit_payload(circle_locunit(1, 1, 0)),
        "beta": locunit_payload(circle_locunit(0, 0, 0)),
        "u": [
            {"point": 0, "unitaries": scalar_lift(0)},
            {"point": 1, "unitaries": scalar_lift(1)},
            {"point": 2, "unitaries": scalar_lift(0)},
        ],
    }
    write("equivalence_circle.json", equivalence)

    malformed = os.path.join(OUT, "malformed.json")
    with open(malformed, "w") as f:
        f.write("{ this is not json\n")
    print("wrote", malformed)


if __name__ == "__main__":
    main()
