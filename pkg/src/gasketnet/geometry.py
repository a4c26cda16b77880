"""Exact lattice geometry of the subtriangles K_sigma.

The base triangle is mapped affinely onto (0,0), (1,0), (0,1).  Every
contraction is a homothety with ratio 1/2, so at scale 2**t all vertices of
K_sigma with |sigma| <= t are integer points and boundary incidence can be
decided with integer orientation tests only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import Word

# images of a_1, a_2, a_3 under the shear
CORNERS = {"1": (0, 0), "2": (1, 0), "3": (0, 1)}


@dataclass(frozen=True)
class GasketTriangle:
    word: Word
    vertices: tuple
    scale_exponent: int

    @property
    def side(self) -> int:
        return 1 << (self.scale_exponent - len(self.word))

    def sides(self):
        a, b, c = self.vertices
        return ((a, b), (b, c), (c, a))

    def contains_point(self, p) -> bool:
        (ox, oy), s = self.vertices[0], self.side
        x, y = p[0] - ox, p[1] - oy
        return x >= 0 and y >= 0 and x + y <= s


def triangle_of(sigma: Word, t: int) -> GasketTriangle:
    if len(sigma) > t:
        raise ValueError(f"scale too coarse: |{sigma}| > t={t}")
    ox = oy = 0
    for m, c in enumerate(sigma, start=1):
        cx, cy = CORNERS[c]
        w = 1 << (t - m)
        ox += cx * w
        oy += cy * w
    s = 1 << (t - len(sigma))
    return GasketTriangle(sigma, ((ox, oy), (ox + s, oy), (ox, oy + s)), t)


def orientation(p, q, r) -> int:
    v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (v > 0) - (v < 0)


def _on_segment(p, q, r) -> bool:
    # q collinear with p, r: is it inside their bounding box
    return (min(p[0], r[0]) <= q[0] <= max(p[0], r[0])
            and min(p[1], r[1]) <= q[1] <= max(p[1], r[1]))


def segments_intersect(s1, s2) -> bool:
    """Closed-segment intersection test, exact for integer endpoints."""
    p1, q1 = s1
    p2, q2 = s2
    o1 = orientation(p1, q1, p2)
    o2 = orientation(p1, q1, q2)
    o3 = orientation(p2, q2, p1)
    o4 = orientation(p2, q2, q1)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(p1, p2, q1):
        return True
    if o2 == 0 and _on_segment(p1, q2, q1):
        return True
    if o3 == 0 and _on_segment(p2, p1, q2):
        return True
    if o4 == 0 and _on_segment(p2, q1, q2):
        return True
    return False


def boundaries_touch(a: GasketTriangle, b: GasketTriangle) -> bool:
    if a.scale_exponent != b.scale_exponent:
        raise ValueError(
            f"triangles at different scales: {a.scale_exponent} != {b.scale_exponent}")
    return any(segments_intersect(s, r) for s in a.sides() for r in b.sides())


def is_nested(inner: GasketTriangle, outer: GasketTriangle) -> bool:
    return all(outer.contains_point(p) for p in inner.vertices)
