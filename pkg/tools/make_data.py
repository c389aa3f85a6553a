"""Regenerate the bundled JSON corpus under src/glab/data."""

from __future__ import annotations

import json
from pathlib import Path

from glab.groupoid import (
    cyclic_group,
    disjoint_union,
    group_groupoid,
    pair_groupoid,
    symmetric_group_table,
)

DATA = Path(__file__).resolve().parents[1] / "src" / "glab" / "data"


def write(name, obj):
    (DATA / name).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    z2 = group_groupoid(["e", "a"], [[0, 1], [1, 0]])
    z3 = cyclic_group(3, prefix="b")
    write("r2.json", pair_groupoid(["p", "q"]).to_dict())
    write("z2.json", z2.to_dict())
    write("z3.json", z3.to_dict())
    write("z2_z3.json", disjoint_union(z2, z3).to_dict())
    write(
        "z2_swap.action.json",
        {
            "elements": ["e", "a"],
            "cayley": [[0, 1], [1, 0]],
            "space": ["p", "q"],
            "act": {"e": {"p": "p", "q": "q"}, "a": {"p": "q", "q": "p"}},
        },
    )
    names, table, perms = symmetric_group_table(3)
    pts = ["1", "2", "3"]
    write(
        "s3_points.action.json",
        {
            "elements": names,
            "cayley": table.tolist(),
            "space": pts,
            "act": {n: {pts[i]: pts[p[i]] for i in range(3)} for n, p in zip(names, perms)},
        },
    )
    # sample inputs for the command line
    write("r2_f.json", {"groupoid": "r2.json", "coeffs": {"(p,p)": [1, 0], "(p,q)": [0.5, -0.5], "(q,p)": [2, 0]}})
    write("r2_h_one.json", {"h": {a: [1, 0] for a in ["(p,p)", "(q,q)", "(p,q)", "(q,p)"]}})
    write("r2_h_units.json", {"h": {"(p,p)": [1, 0], "(q,q)": [1, 0]}})
    write("r2_net.json", {"net": [{"h": {"(p,p)": [1, 0], "(q,q)": [1, 0]}},
                                  {"h": {a: [1, 0] for a in ["(p,p)", "(q,q)", "(p,q)", "(q,p)"]}}],
                          "eps": 1e-6})
    write("z2_z3_net.json", {"net": [{"h": {a: [1, 0] for a in disjoint_union(z2, z3).arrows}}], "eps": 1e-6})


if __name__ == "__main__":
    main()
