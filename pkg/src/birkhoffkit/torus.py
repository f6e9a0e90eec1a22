"""The parallelogram spanned by three fixed points of ``RW`` on the torus.

For a positive mixed word ``W`` write ``RW = (a b; c d)`` and ``t = a + d``.
The points ``O = 0``, ``M = (d-1, -c)/(t-2)`` and ``N = (a-1, c)/(t-2)`` are
fixed by ``RW``; together with ``O' = (1, 0)`` they bound a parallelogram
whose sides are

* ``r1 = [O, M]`` and ``r0 = [O', M]`` (``RW`` maps ``r1`` onto ``r0``),
* ``s0 = [O, N]`` and ``s1 = [O', N]`` (``RW`` maps ``s1`` onto ``s0``).

Everything here is exact: coordinates are :class:`fractions.Fraction` and the
containment and eigen-direction tests reduce to integer sign evaluations.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

import numpy as np

from .errors import AmbiguousCrossing, DegenerateEmbedding, NotHyperbolic
from .points import TorusPointQ, fixed_numerators
from .sl2z import (
    R,
    IntMatrix2,
    is_mixed,
    mat_pow,
    positive_word,
    require_mixed,
    word_to_matrix,
)

__all__ = [
    "Location", "Containment", "ParallelogramData", "OrbitRecord",
    "formula_fixed_points", "build_parallelogram", "parallelogram_from_rw",
    "is_degenerate_word", "locate", "point_in_parallelogram",
    "enumerate_periodic_orbits", "intersection_histogram", "stable_tangency_count",
    "sign_quadratic",
]


class Location(enum.IntEnum):
    """Position of a torus point relative to the parallelogram.

    Ordered so that the strongest incidence wins when several plane lifts
    are tested.
    """

    OUTSIDE = 0
    INTERIOR = 1
    R0 = 2
    R1 = 3
    S0 = 4
    S1 = 5
    VERTEX = 6

    @property
    def containment(self) -> Containment:
        if self is Location.OUTSIDE:
            return Containment.OUTSIDE
        if self is Location.INTERIOR:
            return Containment.INTERIOR
        return Containment.BOUNDARY


class Containment(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


Vec = tuple  # (Fraction, Fraction)


def is_degenerate_word(w: str) -> bool:
    """``W = R L^n`` or ``L^n R`` (n >= 1): the vertices M and N coincide."""
    n = len(w) - 1
    return n >= 1 and w in ("R" + "L" * n, "L" * n + "R")


@dataclass(frozen=True)
class ParallelogramData:
    word: str
    rw: IntMatrix2
    lift_o: Vec
    lift_o2: Vec
    lift_m: Vec
    lift_n: Vec
    embedding: str  # "generic" or "degenerate_mn"

    @property
    def t(self) -> int:
        return self.rw.trace

    @property
    def O(self) -> TorusPointQ:  # noqa: N802 - vertex names
        return TorusPointQ(*self.lift_o)

    @property
    def M(self) -> TorusPointQ:  # noqa: N802
        return TorusPointQ(*self.lift_m)

    @property
    def N(self) -> TorusPointQ:  # noqa: N802
        return TorusPointQ(*self.lift_n)

    @property
    def generic(self) -> bool:
        return self.embedding == "generic"

    @property
    def sides(self) -> dict[str, tuple[Vec, Vec]]:
        return {
            "r1": (self.lift_o, self.lift_m),
            "r0": (self.lift_o2, self.lift_m),
            "s0": (self.lift_o, self.lift_n),
            "s1": (self.lift_o2, self.lift_n),
        }

    def vertex_orbits(self) -> dict[str, TorusPointQ]:
        """Boundary orbit labels and their torus points (M absorbs N if equal)."""
        out = {"O": self.O, "M": self.M}
        if self.generic:
            out["N"] = self.N
        return out

    def to_dict(self) -> dict:
        def fmt(v):
            return [str(v[0]), str(v[1])]

        return {
            "word": self.word,
            "rw": str(self.rw),
            "trace": self.t,
            "vertices": {"O": fmt(self.lift_o), "O'": fmt(self.lift_o2),
                         "M": fmt(self.lift_m), "N": fmt(self.lift_n)},
            "torus_vertices": {"O": str(self.O), "M": str(self.M), "N": str(self.N)},
            "sides": {k: [fmt(a), fmt(b)] for k, (a, b) in self.sides.items()},
            "embedding": self.embedding,
        }


def formula_fixed_points(rw: IntMatrix2) -> list[TorusPointQ]:
    """The points ``k/(t-2) * (d-1, -c)``, deduplicated and sorted.

    When ``gcd(d-1, c, t-2) > 1`` the list collapses to fewer than ``t-2``
    points; callers compare its length with ``t - 2``.
    """
    t = rw.trace
    if t < 3:
        raise NotHyperbolic(f"trace {t} < 3")
    q = t - 2
    pts = {TorusPointQ(Fraction(k * (rw.d - 1), q), Fraction(-k * rw.c, q)) for k in range(q)}
    for p in pts:
        if p.image(rw) != p:  # pragma: no cover - algebraic identity
            raise ArithmeticError(f"{p} is not fixed by {rw}")
    return sorted(pts)


def build_parallelogram(w: str) -> ParallelogramData:
    w = require_mixed(w)
    rw = R @ word_to_matrix(w)
    a, c, d = rw.a, rw.c, rw.d
    q = rw.trace - 2
    o, o2 = (Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))
    m = (Fraction(d - 1, q), Fraction(-c, q))
    n = (Fraction(a - 1, q), Fraction(c, q))

    # N in the closed triangle (0,0),(1,0),(1,1); M in (0,0),(1,0),(0,-1)
    assert 0 <= n[1] <= n[0] <= 1, n
    assert m[0] >= 0 and m[1] <= 0 and m[1] >= m[0] - 1, m
    # RW maps r1 onto r0 - (1,0) and s1 onto s0 + (a,c)
    assert rw.apply(*m) == (m[0] - 1, m[1])
    assert rw.apply(*o2) == (a, c)
    assert rw.apply(*n) == (n[0] + a, n[1] + c)
    # a parallelogram: M + N = O + O'
    assert (m[0] + n[0], m[1] + n[1]) == o2

    by_word = is_degenerate_word(w)
    tm, tn, to = TorusPointQ(*m), TorusPointQ(*n), TorusPointQ(*o)
    by_coords = tm == tn
    if to in (tm, tn) or by_word != by_coords:
        raise ArithmeticError(f"embedding tests disagree for {w}")
    return ParallelogramData(w, rw, o, o2, m, n, "degenerate_mn" if by_word else "generic")


def parallelogram_from_rw(rw: IntMatrix2) -> ParallelogramData:
    """Parallelogram for a matrix given in the form ``R W``.

    Raises ``ValueError`` when ``R^-1 rw`` is not a positive mixed word; a
    conjugate of such a matrix is not accepted as is.
    """
    rest = R.inverse() @ rw
    try:
        w = positive_word(rest)
    except ValueError as exc:
        raise ValueError(f"{rw} is not of the form R*W with W a positive word") from exc
    if not is_mixed(w):
        raise ValueError(f"{rw} is not of the form R*W with W mixed")
    return build_parallelogram(w)


# -- containment -----------------------------------------------------------

# plane lifts of a point of [0,1)^2 that can meet the parallelogram, which
# lies in [0,1] x (-1,1)
_OFFSETS = ((0, 0), (0, -1), (1, 0), (1, -1))


def _scaled_vertices(p: ParallelogramData):
    """Integer vertices over the common denominator ``t - 2``; CCW order O, M, O', N."""
    q = p.t - 2
    a, c, d = p.rw.a, p.rw.c, p.rw.d
    return q, [(0, 0), (d - 1, -c), (q, 0), (a - 1, c)]


# edge k joins vertex k to vertex k+1; names in that order
_EDGE_NAMES = (Location.R1, Location.R0, Location.S1, Location.S0)


def _classify_crosses(crosses) -> Location:
    if any(x < 0 for x in crosses):
        return Location.OUTSIDE
    zeros = [k for k, x in enumerate(crosses) if x == 0]
    if not zeros:
        return Location.INTERIOR
    if len(zeros) == 1:
        return _EDGE_NAMES[zeros[0]]
    return Location.VERTEX


def locate(p: ParallelogramData, pt: TorusPointQ) -> Location:
    q, verts = _scaled_vertices(p)
    best = Location.OUTSIDE
    for ox, oy in _OFFSETS:
        x = (pt.x + ox) * q
        y = (pt.y + oy) * q
        crosses = []
        for k in range(4):
            (x1, y1), (x2, y2) = verts[k], verts[(k + 1) % 4]
            crosses.append((x2 - x1) * (y - y1) - (y2 - y1) * (x - x1))
        best = max(best, _classify_crosses(crosses))
    return best


def point_in_parallelogram(p: ParallelogramData, pt: TorusPointQ) -> Containment:
    """Interior (open diagonal O-O' included), boundary (sides, vertices) or outside."""
    return locate(p, pt).containment


def _locate_many(p: ParallelogramData, den: int, xs, ys):
    """Vectorised :func:`locate` for points ``(xs/den, ys/den)``; returns codes."""
    q, verts = _scaled_vertices(p)
    big = (4 * den * q) ** 2 >= 2**62
    if big:
        xs, ys = xs.astype(object), ys.astype(object)
    best = np.zeros(len(xs), dtype=np.int8)
    for ox, oy in _OFFSETS:
        px = (xs + ox * den) * q
        py = (ys + oy * den) * q
        crosses = []
        for k in range(4):
            (x1, y1), (x2, y2) = verts[k], verts[(k + 1) % 4]
            cx = (x2 - x1) * (py - y1 * den) - (y2 - y1) * (px - x1 * den)
            crosses.append(np.sign(cx).astype(np.int8))
        cs = np.stack(crosses)
        inside = (cs >= 0).all(axis=0)
        nzero = (cs == 0).sum(axis=0)
        code = np.where(inside, Location.INTERIOR, Location.OUTSIDE).astype(np.int8)
        for k, name in enumerate(_EDGE_NAMES):
            code = np.where(inside & (nzero == 1) & (cs[k] == 0), np.int8(name), code)
        code = np.where(inside & (nzero >= 2), np.int8(Location.VERTEX), code)
        best = np.maximum(best, code)
    return best


# -- periodic orbits -------------------------------------------------------

class OrbitRecord(NamedTuple):
    """One periodic orbit of ``RW`` and its crossings with the section.

    ``passes`` counts the orbit points lying in the open parallelogram plus,
    under the ``"wall"`` policy, the points on the sides ``r1`` and ``s1``;
    ``intersection = period + passes``.  ``side_points`` is the number of
    orbit points lying on an open side.
    """

    representative: TorusPointQ
    period: int
    passes: int
    intersection: int
    boundary_flag: bool
    side_points: int = 0


_SIDE_POLICIES = ("raise", "wall")


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n) if n % k == 0]


def _orbit_arrays(p: ParallelogramData, n: int):
    """Orbits of least period ``n``: (den, rep_x, rep_y, passes, boundary, side_points)."""
    rw = p.rw
    den, xs, ys = fixed_numerators(rw, n)
    keep = np.ones(len(xs), dtype=bool)
    for k in _divisors(n):
        mk = mat_pow(rw, k)
        a, b, c, d = (v % den for v in (mk.a, mk.b, mk.c, mk.d))
        fixed = ((a * xs + b * ys - xs) % den == 0) & ((c * xs + d * ys - ys) % den == 0)
        keep &= ~fixed
    xs, ys = xs[keep], ys[keep]
    a, b, c, d = (v % den for v in (rw.a, rw.b, rw.c, rw.d))
    cx, cy = xs, ys
    key = xs * den + ys
    passes = np.zeros(len(xs), dtype=np.int64)
    sides = np.zeros(len(xs), dtype=np.int64)
    vertex = np.zeros(len(xs), dtype=bool)
    for _ in range(n):
        code = _locate_many(p, den, cx, cy)
        passes += code == Location.INTERIOR
        sides += (code >= Location.R0) & (code <= Location.S1)
        passes += (code == Location.R1) | (code == Location.S1)
        vertex |= code == Location.VERTEX
        cx, cy = (a * cx + b * cy) % den, (c * cx + d * cy) % den
        key = np.minimum(key, cx * den + cy)
    assert (cx == xs).all() and (cy == ys).all()
    _, first = np.unique(key, return_index=True)
    rep = key[first]
    return den, rep // den, rep % den, passes[first], vertex[first], sides[first]


def _check_sides(boundary, sides, on_side: str, n: int):
    if on_side not in _SIDE_POLICIES:
        raise ValueError(f"on_side must be one of {_SIDE_POLICIES}")
    if on_side == "raise" and (sides[~boundary] > 0).any():
        count = int((sides[~boundary] > 0).sum())
        raise AmbiguousCrossing(f"{count} orbit(s) of period {n} meet an open side")


def enumerate_periodic_orbits(
    p: ParallelogramData | IntMatrix2, max_period: int, on_side: str = "raise"
) -> list[OrbitRecord]:
    """All orbits of ``RW`` with least period at most ``max_period``.

    ``on_side="raise"`` refuses orbits that touch an open side of the
    parallelogram.  ``on_side="wall"`` counts them through the vertical walls
    of the pair of pants: the wall over ``r1`` (resp. ``s1``) is glued by the
    return map to the one under ``r0`` (resp. ``s0``), and an orbit running
    along a wall crosses the smoothed surface once per visit to ``r1`` or
    ``s1``, exactly as its nearby orbits on either side do.
    """
    if isinstance(p, IntMatrix2):
        p = parallelogram_from_rw(p)
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    records = []
    for n in range(1, max_period + 1):
        den, rx, ry, passes, boundary, sides = _orbit_arrays(p, n)
        _check_sides(boundary, sides, on_side, n)
        for x, y, k, bd, sd in zip(rx, ry, passes, boundary, sides):
            records.append(OrbitRecord(
                TorusPointQ(Fraction(int(x), den), Fraction(int(y), den)),
                n, int(k), n + int(k), bool(bd), int(sd)))
    return records


def intersection_histogram(p: ParallelogramData, max_period: int, on_side: str = "wall"):
    """Orbit counts without building records.

    Returns ``(hist, n_boundary, n_side)`` where ``hist[(period, intersection)]``
    counts non-boundary orbits and ``n_side`` is the number of those meeting
    an open side.
    """
    hist: dict[tuple[int, int], int] = {}
    n_boundary = n_side = 0
    for n in range(1, max_period + 1):
        _, _, _, passes, boundary, sides = _orbit_arrays(p, n)
        _check_sides(boundary, sides, on_side, n)
        n_boundary += int(boundary.sum())
        n_side += int((sides[~boundary] > 0).sum())
        vals, counts = np.unique(passes[~boundary], return_counts=True)
        for k, cnt in zip(vals, counts):
            hist[(n, n + int(k))] = int(cnt)
    return hist, n_boundary, n_side


# -- stable direction ------------------------------------------------------

def sign_quadratic(p: Fraction, q: Fraction, dsc: int) -> int:
    """Sign of ``p + q*sqrt(dsc)`` for a non-square ``dsc > 0``."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0 or sp == sq:
        return sp if sp else sq
    if sp == 0:
        return sq
    # opposite signs: compare p^2 with q^2 dsc
    diff = p * p - q * q * dsc
    return sp if diff > 0 else sq


def _cross_with_stable(e: Vec, rw: IntMatrix2, sign: int) -> int:
    """Sign of ``cross(e, sign * v)`` with ``v = (b, mu - a)`` the stable eigenvector.

    ``mu = (t - sqrt(t^2 - 4)) / 2``, so the cross product is
    ``e_x (mu - a) - e_y b = (e_x (t - 2a) - 2 e_y b)/2 - (e_x/2) sqrt(t^2-4)``.
    """
    t = rw.trace
    ex, ey = e
    p = Fraction(ex * (t - 2 * rw.a) - 2 * ey * rw.b, 2)
    q = Fraction(-ex, 2)
    return sign * sign_quadratic(p, q, t * t - 4)


def stable_tangency_count(w: str) -> int:
    """Number of vertex sectors of the parallelogram met by the stable line of ``RW``.

    A sector at a vertex runs counterclockwise from the edge to the next
    vertex to the edge to the previous one; the stable line (both rays) is
    tested against each of the four sectors, O and O' being the two sectors
    at O.
    """
    p = build_parallelogram(w)
    if not p.generic:
        raise DegenerateEmbedding(f"M and N coincide for {p.word}")
    t = p.t
    dsc = t * t - 4
    assert isqrt(dsc) ** 2 != dsc, "t^2 - 4 is never a square for t >= 3"
    verts = [p.lift_o, p.lift_m, p.lift_o2, p.lift_n]
    count = 0
    for k, v in enumerate(verts):
        nxt, prv = verts[(k + 1) % 4], verts[k - 1]
        e1 = (nxt[0] - v[0], nxt[1] - v[1])
        e2 = (prv[0] - v[0], prv[1] - v[1])
        for sign in (1, -1):
            # ray inside the sector: e1 x ray > 0 and ray x e2 > 0
            if _cross_with_stable(e1, p.rw, sign) > 0 and -_cross_with_stable(e2, p.rw, sign) > 0:
                count += 1
    return count
