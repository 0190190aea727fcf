#!/usr/bin/env python3
"""Regenerates scenes/demo: BIM and scanned meshes, manifest, demo session log.

The scanned meshes are subdivided boxes with seeded vertex noise; the flange
scan stays within tolerance of its BIM box, the bracket scan is ~38% too tall.
"""

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent / "scenes" / "demo"


def box(size, cells=1, noise=0.0, rng=None):
    """Closed box [0,sx]x[0,sy]x[0,sz], each face split into cells x cells quads."""
    sx, sy, sz = size
    verts, index, faces = [], {}, []

    def vid(p):
        key = tuple(round(c, 9) for c in p)
        if key not in index:
            q = list(p)
            if noise and rng is not None:
                q = [c + rng.uniform(-noise, noise) for c in q]
            index[key] = len(verts)
            verts.append(q)
        return index[key]

    # (origin, u edge, v edge) per face, wound so (u x v) points outward.
    sides = [
        ((0, 0, 0), (0, sy, 0), (sx, 0, 0)),    # z = 0
        ((0, 0, sz), (sx, 0, 0), (0, sy, 0)),   # z = sz
        ((0, 0, 0), (sx, 0, 0), (0, 0, sz)),    # y = 0
        ((0, sy, 0), (0, 0, sz), (sx, 0, 0)),   # y = sy
        ((0, 0, 0), (0, 0, sz), (0, sy, 0)),    # x = 0
        ((sx, 0, 0), (0, sy, 0), (0, 0, sz)),   # x = sx
    ]
    for o, u, v in sides:
        def pt(i, j):
            return [o[k] + u[k] * i / cells + v[k] * j / cells for k in range(3)]
        for i in range(cells):
            for j in range(cells):
                a, b = vid(pt(i, j)), vid(pt(i + 1, j))
                c, d = vid(pt(i + 1, j + 1)), vid(pt(i, j + 1))
                faces.append((a, b, c))
                faces.append((a, c, d))
    return verts, faces


def write_obj(path, name, verts, faces):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# {name}\no {name}\n")
        for v in verts:
            f.write("v {:.6f} {:.6f} {:.6f}\n".format(*v))
        for a, b, c in faces:
            f.write(f"f {a + 1} {b + 1} {c + 1}\n")


def pose(t, deg=0.0, axis=(0, 0, 1)):
    h = math.radians(deg) / 2
    s = math.sin(h)
    q = [math.cos(h), axis[0] * s, axis[1] * s, axis[2] * s]
    return {"translation": list(t), "rotation": [round(c, 15) for c in q]}


def main():
    rng = random.Random(20190301)
    assets = ROOT / "assets"
    assets.mkdir(parents=True, exist_ok=True)
    (ROOT / "logs").mkdir(exist_ok=True)

    write_obj(assets / "flange_bim.obj", "flange_bim", *box((90.0, 89.5, 47.0)))
    write_obj(assets / "flange_scan.obj", "flange_scan", *box((90.9, 90.8, 48.1), cells=12, noise=0.15, rng=rng))
    write_obj(assets / "bracket_bim.obj", "bracket_bim", *box((120.0, 40.0, 30.0)))
    write_obj(assets / "bracket_scan.obj", "bracket_scan", *box((121.0, 40.5, 48.5), cells=12, noise=0.15, rng=rng))

    manifest = {
        "scene_id": "demo",
        "par_time_ms": 20000,
        "snap": {"snap_radius_mm": None, "max_angle_deg": 30.0, "threshold": 0.25},
        "grading": {"accuracy_weight": 0.7, "speed_weight": 0.3},
        "assets": {
            "bracket_bim": "assets/bracket_bim.obj",
            "bracket_scan": "assets/bracket_scan.obj",
            "flange_bim": "assets/flange_bim.obj",
            "flange_scan": "assets/flange_scan.obj",
        },
        "parts": [
            {"part_id": "flange", "mesh_asset": "flange_scan", "initial_pose": pose((-400.0, 200.0, 150.0), 20.0)},
            {"part_id": "bracket", "mesh_asset": "bracket_scan", "initial_pose": pose((600.0, 250.0, 150.0))},
        ],
        "slots": [
            {"slot_id": "flange_slot", "expected_part": "flange", "target_pose": pose((0.0, 0.0, 0.0)),
             "bim_asset": "flange_bim"},
            {"slot_id": "bracket_slot", "expected_part": "bracket", "target_pose": pose((300.0, 0.0, 0.0), 90.0),
             "bim_asset": "bracket_bim"},
        ],
    }
    (ROOT / "scene.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")

    events = [
        {"timestamp_ms": 0, "kind": "Grab", "part_id": "flange"},
        {"timestamp_ms": 2500, "kind": "Move", "part_id": "flange", "pose": pose((-200.0, 100.0, 80.0), 10.0)},
        {"timestamp_ms": 5000, "kind": "Move", "part_id": "flange", "pose": pose((3.25, -2.5, 1.5), 4.0)},
        {"timestamp_ms": 5200, "kind": "Release", "part_id": "flange"},
        {"timestamp_ms": 7000, "kind": "Grab", "part_id": "bracket"},
        {"timestamp_ms": 9000, "kind": "Move", "part_id": "bracket", "pose": pose((302.0, 1.0, 0.0), 88.0)},
        {"timestamp_ms": 9500, "kind": "Release", "part_id": "bracket"},
        {"timestamp_ms": 11000, "kind": "FlagDefective", "part_id": "bracket"},
        {"timestamp_ms": 20000, "kind": "EndSession"},
    ]
    with open(ROOT / "logs" / "demo.jsonl", "w", encoding="utf-8") as f:
        for e in events:
            f.write(json.dumps(e, separators=(",", ":")) + "\n")

    # Object 2 rows of the scan-vs-BIM experiment, as metrics records.
    data = ROOT.parent.parent / "data"
    data.mkdir(exist_ok=True)
    keys = ["total_surface_mm2", "normal_x", "normal_y", "normal_z", "dim_x_mm", "dim_y_mm", "dim_z_mm"]
    rows = {
        "object2_bim.json": [28404.4, 0.52, 0.53, 0.18, 90.0, 89.5, 47.0],
        "object2_scanned.json": [27911.9, 0.57, 0.57, 0.24, 90.9, 92.3, 55.1],
    }
    for name, vals in rows.items():
        (data / name).write_text(json.dumps(dict(zip(keys, vals)), indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
