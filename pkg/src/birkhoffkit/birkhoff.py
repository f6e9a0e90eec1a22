"""Euler-characteristic and boundary bookkeeping for Birkhoff surfaces.

Surfaces are tracked only through the data that Fried sums act on: the Euler
characteristic measured in the blown-up manifold, and for every boundary
orbit the classes ``(longitude, meridian)`` of the boundary circles on the
boundary torus of the blow-up.  The genus follows from
``chi = 2 - 2 genus - #circles``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from math import gcd

from .errors import (
    AlreadyMinimal,
    CapExceeded,
    CertificateFailure,
    IncoherentOrientation,
    UnsupportedOrbifold,
)
from .sl2z import (
    R,
    IntMatrix2,
    cyclic_normal_form,
    mat_pow,
    require_mixed,
    word_to_matrix,
)
from .torus import build_parallelogram, intersection_histogram, stable_tangency_count

__all__ = [
    "BoundaryEntry", "SurfaceData", "EMPTY_SURFACE", "HORIZONTAL_TORUS",
    "resolve_multicurve_on_torus", "puncture_classes", "fried_sum_data",
    "pair_of_pants_data", "genus_one_section", "FirstReturn", "first_return_matrix",
    "DescentStep", "DescentChain", "minakawa_step", "descent_chain",
    "OrbifoldCensus", "orbifold_section_census", "AuditRow", "LefschetzAudit",
    "lefschetz_audit", "GHYS_COST_PER_EDGE",
]

#: Ghys-distance cost of one added letter (three orbits removed)
GHYS_COST_PER_EDGE = 3
#: default upper bound on the audit period
AUDIT_PERIOD_CAP = 6

MERIDIAN = (0, 1)


@dataclass(frozen=True)
class BoundaryEntry:
    """Boundary circles of a surface along one periodic orbit.

    ``multiplicity`` is the signed wrapping number of the whole boundary
    along the orbit; ``circle_class`` is the primitive class of each of the
    ``circles`` parallel circles on the boundary torus.
    """

    orbit: str
    multiplicity: int
    circles: int
    circle_class: tuple[int, int]

    def __post_init__(self):
        if self.circles < 1:
            raise ValueError("an entry needs at least one circle")
        if gcd(*self.circle_class) != 1:
            raise ValueError(f"circle class {self.circle_class} is not primitive")
        if self.multiplicity != self.circles * self.circle_class[0]:
            raise ValueError("multiplicity must equal circles * longitude")

    def classes(self) -> list[tuple[int, int]]:
        return [self.circle_class] * self.circles

    def to_dict(self) -> dict:
        return {"orbit": self.orbit, "multiplicity": self.multiplicity,
                "circles": self.circles, "class": list(self.circle_class)}


@dataclass(frozen=True)
class SurfaceData:
    euler_blowup: int
    boundary: tuple[BoundaryEntry, ...] = ()
    empty: bool = False

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if self.empty:
            return
        twice_genus = 2 - self.euler_blowup - self.boundary_circle_count
        if twice_genus < 0 or twice_genus % 2:
            raise ValueError(
                f"chi = {self.euler_blowup} with {self.boundary_circle_count} circles "
                "is not an orientable surface")

    @property
    def boundary_circle_count(self) -> int:
        return sum(e.circles for e in self.boundary)

    @property
    def boundary_orbit_count(self) -> int:
        return len({e.orbit for e in self.boundary})

    @property
    def genus(self) -> int:
        return (2 - self.euler_blowup - self.boundary_circle_count) // 2

    def entry(self, orbit: str) -> BoundaryEntry:
        for e in self.boundary:
            if e.orbit == orbit:
                return e
        raise KeyError(orbit)

    def to_dict(self) -> dict:
        return {"euler": self.euler_blowup, "genus": None if self.empty else self.genus,
                "boundary": [e.to_dict() for e in self.boundary]}


EMPTY_SURFACE = SurfaceData(0, (), empty=True)
HORIZONTAL_TORUS = SurfaceData(0, ())


def _half_plane(v) -> int:
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half_plane(u), _half_plane(v)
    if hu != hv:
        return hu - hv
    cr = u[0] * v[1] - u[1] * v[0]
    return -1 if cr > 0 else (1 if cr < 0 else 0)


def _in_open_half_plane(classes) -> bool:
    dirs = sorted({(x // gcd(x, y), y // gcd(x, y)) for x, y in classes},
                  key=cmp_to_key(_angle_cmp))
    if len(dirs) == 1:
        return True
    for u, v in zip(dirs, dirs[1:] + dirs[:1]):
        if u[0] * v[1] - u[1] * v[0] < 0:
            return True
    return False


def resolve_multicurve_on_torus(classes) -> tuple[tuple[int, int], int]:
    """Oriented resolution of essential curves on a torus.

    Returns the total class and the number of parallel circles left after
    resolving every crossing compatibly with the orientations.  Refuses
    classes that do not lie in a common open half-plane: then some crossings
    resolve into inessential circles and the count is not the gcd.

    >>> resolve_multicurve_on_torus([(2, 1), (0, 1)])
    ((2, 2), 2)
    """
    classes = [tuple(c) for c in classes]
    if not classes or any(c == (0, 0) for c in classes):
        raise ValueError("classes must be non-empty and nonzero")
    if not _in_open_half_plane(classes):
        raise IncoherentOrientation(f"classes {classes} are not coherently oriented")
    total = (sum(c[0] for c in classes), sum(c[1] for c in classes))
    return total, gcd(*total)


def puncture_classes(surface: SurfaceData) -> dict[str, list[tuple[int, int]]]:
    out: dict[str, list[tuple[int, int]]] = {}
    for e in surface.boundary:
        out.setdefault(e.orbit, []).extend(e.classes())
    return out


def fried_sum_data(s1: SurfaceData, s2: SurfaceData, punctures=()) -> SurfaceData:
    """Euler characteristic and boundary of the Fried sum of two surfaces.

    ``punctures`` lists ``(index, orbit)`` pairs: surface ``index`` (0 or 1)
    crosses the boundary orbit ``orbit`` of the other surface once.  Each
    crossing removes a disc, so that both surfaces live in the same blown-up
    manifold, and contributes a meridian circle along that orbit.
    """
    surfaces = (s1, s2)
    if s2.empty and not punctures:
        return s1
    if s1.empty and not punctures:
        return s2
    euler = s1.euler_blowup + s2.euler_blowup
    per_orbit: dict[str, list[tuple[int, int]]] = {}
    for s in surfaces:
        for orbit, cls in puncture_classes(s).items():
            per_orbit.setdefault(orbit, []).extend(cls)
    for index, orbit in punctures:
        other = surfaces[1 - index]
        if orbit not in {e.orbit for e in other.boundary}:
            raise ValueError(f"{orbit} is not a boundary orbit of surface {1 - index}")
        if orbit in {e.orbit for e in surfaces[index].boundary}:
            raise ValueError(f"surface {index} cannot cross its own boundary orbit {orbit}")
        euler -= 1
        per_orbit.setdefault(orbit, []).append(MERIDIAN)
    entries = []
    for orbit, cls in per_orbit.items():
        (p, q), count = resolve_multicurve_on_torus(cls)
        entries.append(BoundaryEntry(orbit, p, count, (p // count, q // count)))
    return SurfaceData(euler, tuple(entries))


# -- the pair of pants and the genus-one section ----------------------------

# The class of the boundary circle along gamma_O is (2, q) with q fixed only
# mod 2 by the component count; (2, 1) is stored.
_GAMMA_O = BoundaryEntry("gamma_O", 2, 1, (2, 1))


def _pants_euler_by_cells() -> int:
    # parallelogram + two walls (r1 glued to r0, s1 glued to s0), joined
    # along the four sides
    faces, arcs = 3, 4
    return faces - arcs


def pair_of_pants_data(w: str) -> SurfaceData:
    """The pair of pants built on the parallelogram of ``RW``."""
    p = build_parallelogram(w)
    chi = _pants_euler_by_cells()
    if p.generic:
        # each stable prong on the boundary is a singularity of index -1/2
        tangencies = stable_tangency_count(p.word)
        if Fraction(-tangencies, 2) != chi:  # pragma: no cover
            raise CertificateFailure(f"{tangencies} tangencies disagree with chi = {chi}")
        boundary = (
            _GAMMA_O,
            BoundaryEntry("gamma_M", -1, 1, (-1, 0)),
            BoundaryEntry("gamma_N", -1, 1, (-1, 0)),
        )
    else:
        boundary = (_GAMMA_O, BoundaryEntry("gamma_M", -2, 2, (-1, 0)))
    pants = SurfaceData(chi, boundary)
    assert pants.genus == 0 and pants.boundary_circle_count == 3
    return pants


def genus_one_section(w: str) -> SurfaceData:
    """Fried sum of a horizontal torus with the pair of pants of ``w``."""
    pants = pair_of_pants_data(w)
    punctures = [(0, e.orbit) for e in pants.boundary]
    section = fried_sum_data(HORIZONTAL_TORUS, pants, punctures)
    if section.genus != 1 or section.boundary_orbit_count > 3:  # pragma: no cover
        raise CertificateFailure(f"unexpected section {section.to_dict()}")
    return section


@dataclass(frozen=True)
class FirstReturn:
    """First-return matrix with the homology basis certificate."""

    matrix: IntMatrix2
    alpha: tuple[int, int]
    beta: tuple[int, int]
    alpha_image: tuple[int, int]
    beta_image: tuple[int, int]

    def to_dict(self) -> dict:
        return {"matrix": str(self.matrix), "alpha": list(self.alpha), "beta": list(self.beta),
                "alpha_image": list(self.alpha_image), "beta_image": list(self.beta_image)}


def first_return_matrix(w: str) -> FirstReturn:
    w = require_mixed(w)
    rw = R @ word_to_matrix(w)
    a, b, c, d = rw.a, rw.b, rw.c, rw.d
    alpha, beta = (d, -c), (d - b, a - c)
    alpha_image, beta_image = rw.apply(*alpha), rw.apply(*beta)
    if alpha_image != (1, 0) or beta_image != (1, 1):
        raise CertificateFailure(f"basis images {alpha_image}, {beta_image} for {w}")
    basis = IntMatrix2(d, d - b, -c, a - c)
    f = basis.inverse()
    if f != IntMatrix2(a - c, b - d, c, d) or f != word_to_matrix(w):
        raise CertificateFailure(f"first-return matrix {f} differs from W for {w}")
    return FirstReturn(f, alpha, beta, alpha_image, beta_image)


# -- trace descent -----------------------------------------------------------

@dataclass(frozen=True)
class DescentStep:
    before: str
    generator: str
    after: str
    trace_before: int
    trace_after: int

    def to_dict(self) -> dict:
        return {"before": self.before, "generator": self.generator, "after": self.after,
                "trace_before": self.trace_before, "trace_after": self.trace_after}


@dataclass(frozen=True)
class DescentChain:
    start: str
    steps: tuple[DescentStep, ...] = field(default_factory=tuple)

    @property
    def ghys_bound(self) -> int:
        return GHYS_COST_PER_EDGE * len(self.steps)

    @property
    def final(self) -> str:
        return self.steps[-1].after if self.steps else cyclic_normal_form(self.start)

    def to_json_list(self) -> list[dict]:
        return [s.to_dict() for s in self.steps]


def minakawa_step(w: str) -> tuple[str, str]:
    """Peel one letter off a rotation of ``w`` keeping the rest mixed.

    The majority letter is peeled (R on ties) from the leftmost rotation of
    the canonical form that starts with it; the remainder is returned in
    canonical form and has strictly smaller trace, at least 3.
    """
    w = cyclic_normal_form(require_mixed(w))
    if len(w) == 2:
        raise AlreadyMinimal(f"{w} has trace 3")
    g = "R" if w.count("R") >= w.count("L") else "L"
    k = next(i for i in range(len(w)) if w[i] == g)
    return g, cyclic_normal_form(w[k + 1:] + w[:k])


def descent_chain(w: str) -> DescentChain:
    w = cyclic_normal_form(require_mixed(w))
    steps = []
    cur, t_cur = w, word_to_matrix(w).trace
    while len(cur) > 2:
        g, nxt = minakawa_step(cur)
        t_nxt = word_to_matrix(nxt).trace
        if not 3 <= t_nxt < t_cur:  # pragma: no cover
            raise CertificateFailure(f"trace does not drop from {cur} to {nxt}")
        steps.append(DescentStep(cur, g, nxt, t_cur, t_nxt))
        cur, t_cur = nxt, t_nxt
    return DescentChain(w, tuple(steps))


# -- orbifold census ---------------------------------------------------------

@dataclass(frozen=True)
class OrbifoldCensus:
    genus: int
    orders: tuple[int, ...]
    curve_count: int
    pieces: dict
    surface: SurfaceData

    def to_dict(self) -> dict:
        return {"orbifold_genus": self.genus, "orders": list(self.orders),
                "curve_count": self.curve_count, "pieces": dict(self.pieces),
                **self.surface.to_dict()}


def orbifold_section_census(g: int, orders) -> OrbifoldCensus:
    """Euler-characteristic census of the genus-one section of a geodesic flow.

    Supported orbifolds have genus ``g >= 1`` and ``n >= 1`` cone points, all
    of order at least 3.
    """
    orders = tuple(int(k) for k in orders)
    n = len(orders)
    if g < 1 or n < 1 or any(k < 3 for k in orders):
        raise UnsupportedOrbifold(
            f"need genus >= 1 and at least one cone point, all orders >= 3; got g={g}, {orders}")
    euler_orbifold = 2 - 2 * g - sum(1 - Fraction(1, k) for k in orders)
    assert euler_orbifold < 0, "orbifold must be hyperbolic"
    pieces = {"handles": -4 * g, "cones": 1 - n, "sigma": -4}
    curves = 4 * g + n + 3
    chi = sum(pieces.values())
    if chi != -curves:  # pragma: no cover - arithmetic identity
        raise CertificateFailure(f"census identity fails for g={g}, n={n}")
    boundary = tuple(BoundaryEntry(f"geodesic_{i + 1}", -1, 1, (-1, 0)) for i in range(curves))
    return OrbifoldCensus(g, orders, curves, pieces, SurfaceData(chi, boundary))


# -- Lefschetz audit ---------------------------------------------------------

@dataclass(frozen=True)
class AuditRow:
    m: int
    lhs: int
    interior_sum: int
    residual: int


@dataclass(frozen=True)
class LefschetzAudit:
    word: str
    rows: tuple[AuditRow, ...]
    boundary_circle_count: int
    circle_periods: tuple[int, ...]
    consistent: bool
    side_orbits: int

    def to_text(self) -> str:
        header = ("m", "lhs", "interior_sum", "residual")
        body = [(str(r.m), str(r.lhs), str(r.interior_sum), str(r.residual)) for r in self.rows]
        widths = [max(len(x) for x in col) for col in zip(header, *body)]
        lines = ["  ".join(x.rjust(wd) for x, wd in zip(row, widths)) for row in [header, *body]]
        lines.append(f"# boundary circles: {self.boundary_circle_count}; fitted circle periods: "
                     f"{list(self.circle_periods)}; consistent: {self.consistent}; "
                     f"orbits along walls: {self.side_orbits}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "lhs", "interior_sum", "residual"])
        for r in self.rows:
            writer.writerow([r.m, r.lhs, r.interior_sum, r.residual])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"word": self.word,
                "rows": [r.__dict__ for r in self.rows],
                "boundary_circle_count": self.boundary_circle_count,
                "circle_periods": list(self.circle_periods),
                "consistent": self.consistent, "side_orbits": self.side_orbits}


def fit_circle_periods(residuals: list[int]) -> tuple[list[int], bool]:
    """Periods ``p_c`` with ``residual(m) = #{c : p_c | m}``, by Moebius peeling."""
    new: dict[int, int] = {}
    for m, r in enumerate(residuals, start=1):
        k = r - sum(cnt for p, cnt in new.items() if m % p == 0)
        if k < 0:
            return sorted(p for p, cnt in new.items() for _ in range(cnt)), False
        if k:
            new[m] = k
    return sorted(p for p, cnt in new.items() for _ in range(cnt)), True


def lefschetz_audit(w: str, max_m: int, cap: int = AUDIT_PERIOD_CAP) -> LefschetzAudit:
    """Compare ``tr(W^m) - 2`` with fixed points of the first return on the interior.

    A periodic orbit of ``RW`` of period ``n`` passing ``k`` times through the
    parallelogram meets the section ``n + k`` times and so gives ``n + k``
    fixed points of the ``m``-th return whenever ``n + k`` divides ``m``.
    The residual counts fixed points on the collapsed boundary circles.
    """
    w = require_mixed(w)
    if max_m < 1:
        raise ValueError("max_m must be positive")
    if max_m > cap:
        raise CapExceeded(f"max_m {max_m} exceeds the audit cap {cap}")
    p = build_parallelogram(w)
    section = genus_one_section(w)
    bcc = section.boundary_circle_count
    hist, _, side_orbits = intersection_histogram(p, max_m, on_side="wall")
    wm = word_to_matrix(w)
    rows = []
    for m in range(1, max_m + 1):
        lhs = mat_pow(wm, m).trace - 2
        interior = sum(inter * cnt for (_, inter), cnt in hist.items() if m % inter == 0)
        rows.append(AuditRow(m, lhs, interior, lhs - interior))
    residuals = [r.residual for r in rows]
    periods, ok = fit_circle_periods(residuals)
    ok = ok and len(periods) <= bcc and all(0 <= r <= bcc for r in residuals)
    return LefschetzAudit(w, tuple(rows), bcc, tuple(periods), ok, side_orbits)
