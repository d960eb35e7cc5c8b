#!/usr/bin/env python3
# Copyright 2026 The WheelArm Authors
# SPDX-License-Identifier: Apache-2.0
"""Build data/gen3.json (body-frame screw axes + home pose) from the Kinova
Gen3 7-DOF joint origins (xyz, rpy) as published in the manufacturer URDF."""
import json
import sys

import numpy as np

PI = np.pi
# (xyz, rpy) of each joint frame relative to its parent, joint axis is local z.
JOINTS = [
    ((0.0, 0.0, 0.15643), (PI, 0.0, 0.0)),
    ((0.0, 0.005375, -0.12838), (PI / 2, 0.0, 0.0)),
    ((0.0, -0.21038, -0.006375), (-PI / 2, 0.0, 0.0)),
    ((0.0, 0.006375, -0.21038), (PI / 2, 0.0, 0.0)),
    ((0.0, -0.20843, -0.006375), (-PI / 2, 0.0, 0.0)),
    ((0.0, 0.00017505, -0.10593), (PI / 2, 0.0, 0.0)),
    ((0.0, -0.10593, -0.00017505), (-PI / 2, 0.0, 0.0)),
]
FLANGE = ((0.0, 0.0, -0.061525), (PI, 0.0, 0.0))
# Two-finger gripper tool centre point along the flange z axis.
TCP_OFFSET = 0.12
LIMITS = [(-PI, PI), (-2.41, 2.41), (-PI, PI), (-2.66, 2.66),
          (-PI, PI), (-2.23, 2.23), (-PI, PI)]


def rpy(r, p, y):
    cr, sr, cp, sp, cy, sy = np.cos(r), np.sin(r), np.cos(p), np.sin(p), np.cos(y), np.sin(y)
    rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]])
    ry = np.array([[cp, 0, sp], [0, 1, 0], [-sp, 0, cp]])
    rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]])
    return rz @ ry @ rx


def tf(xyz, angles):
    t = np.eye(4)
    t[:3, :3] = rpy(*angles)
    t[:3, 3] = xyz
    return t


def adjoint(t):
    r, p = t[:3, :3], t[:3, 3]
    px = np.array([[0, -p[2], p[1]], [p[2], 0, -p[0]], [-p[1], p[0], 0]])
    ad = np.zeros((6, 6))
    ad[:3, :3] = r
    ad[3:, 3:] = r
    ad[3:, :3] = px @ r
    return ad


def main():
    t = np.eye(4)
    space = []
    for xyz, angles in JOINTS:
        t = t @ tf(xyz, angles)
        w = t[:3, 2]
        p = t[:3, 3]
        space.append(np.concatenate([w, -np.cross(w, p)]))
    t = t @ tf(*FLANGE)
    tcp = np.eye(4)
    tcp[2, 3] = TCP_OFFSET
    home = t @ tcp
    home[np.abs(home) < 1e-12] = 0.0
    inv = np.linalg.inv(home)
    body = [adjoint(inv) @ s for s in space]
    clean = lambda v: [0.0 if abs(x) < 1e-12 else round(float(x), 12) for x in v]
    doc = {
        "format": "wheelarm-chain/1",
        "name": "kinova_gen3_7dof",
        "screw_axes": [clean(b) for b in body],
        "home_pose": [clean(row) for row in home],
        "joint_limits_rad": [[float(lo), float(hi)] for lo, hi in LIMITS],
    }
    lines = ["{"]
    lines.append('  "format": "%s",' % doc["format"])
    lines.append('  "name": "%s",' % doc["name"])
    for key in ("screw_axes", "home_pose", "joint_limits_rad"):
        rows = ",\n".join("    " + json.dumps(r) for r in doc[key])
        tail = "," if key != "joint_limits_rad" else ""
        lines.append('  "%s": [\n%s\n  ]%s' % (key, rows, tail))
    lines.append("}")
    sys.stdout.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
