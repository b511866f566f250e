#!/usr/bin/env python3
"""Regenerates the cross-section fixtures in this directory."""

import json
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent


def circle(cr, cz, radius, n):
    return [[cr + radius * math.cos(2 * math.pi * i / n), cz + radius * math.sin(2 * math.pi * i / n)]
            for i in range(n)]


def half_disc(radius, n_arc):
    # (0,-R) -> equator -> (0,R); the axis segment closes the curve.
    pts = []
    for i in range(n_arc + 1):
        t = -math.pi / 2 + math.pi * i / n_arc
        pts.append([radius * math.cos(t), radius * math.sin(t)])
    pts[0][0] = 0.0
    pts[-1][0] = 0.0
    return pts


def d_shape(r0, radius, n_arc):
    pts = [[r0, -radius]]
    for i in range(1, n_arc):
        t = -math.pi / 2 + math.pi * i / n_arc
        pts.append([r0 + radius * math.cos(t), radius * math.sin(t)])
    pts.append([r0, radius])
    return pts


def save(name, doc):
    (HERE / name).write_text(json.dumps(doc, indent=1) + "\n")


def main():
    save("ball.json", {"metric": "euclidean", "outer": half_disc(1.0, 1024)})
    save("torus.json", {"metric": "euclidean", "outer": circle(2.0, 0.0, 0.5, 512)})
    save("rectangle.json", {"metric": "euclidean", "outer": [[1, 0], [3, 0], [3, 1], [1, 1]]})
    save("axis_rectangle.json", {"metric": "euclidean", "outer": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    save("d_shape.json", {"metric": "euclidean", "outer": d_shape(1.0, 1.0, 1024)})
    save("annulus_big_hole.json", {"metric": "euclidean", "outer": circle(5, 0, 3, 2048),
                                   "holes": [circle(5, 0, 2, 2048)[::-1]]})
    save("annulus_small_hole.json", {"metric": "euclidean", "outer": circle(5, 0, 3, 2048),
                                     "holes": [circle(5, 0, 0.1, 2048)[::-1]]})
    save("hyperbolic_disc.json", {"metric": "hyperbolic", "outer": circle(0.5, 0.0, 0.2, 256)})
    save("sweep_torus_center.json", {"family": "torus_center", "values": [1.5, 2, 3, 4],
                                     "radius": 0.5, "points": 512, "h": 0.05})
    save("sweep_torus_scale.json", {"family": "torus_scale", "values": [1, 2, 4],
                                    "center_r": 2.0, "radius": 0.5, "points": 512, "h": 0.05})
    save("sweep_ellipse_aspect.json", {"family": "ellipse_aspect", "values": [1, 1.5, 2],
                                       "area": math.pi * 0.25, "ellipse_center_r": 3.0,
                                       "points": 512, "h": 0.05})
    save("sweep_explicit.json", {"family": "explicit", "h": 0.05,
                                 "members": [{"parameter": 1, "input": "torus.json"},
                                             {"parameter": 2, "input": "ball.json"}]})
    text = (HERE / "rectangle.json").read_text()
    (HERE / "truncated.json").write_text(text[: len(text) // 2])


if __name__ == "__main__":
    main()
