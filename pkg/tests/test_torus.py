import re
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings

from birkhoffkit.errors import AmbiguousCrossing, DegenerateEmbedding
from birkhoffkit.points import TorusPointQ, fixed_point_lattice
from birkhoffkit.sl2z import IntMatrix2, mat_pow
from birkhoffkit.torus import (
    Containment, Location, build_parallelogram, enumerate_periodic_orbits,
    formula_fixed_points, intersection_histogram, is_degenerate_word, locate,
    parallelogram_from_rw, point_in_parallelogram, sign_quadratic, stable_tangency_count,
)

from conftest import all_mixed_words, mixed_words


def oracle_locate(p, pt):
    """Parametric coordinates pt = u*M + v*N over a 3x3 window of lifts."""
    (mx, my), (nx, ny) = p.lift_m, p.lift_n
    det = mx * ny - my * nx
    best = Location.OUTSIDE
    for ox in (-1, 0, 1):
        for oy in (-1, 0, 1):
            x, y = pt.x + ox, pt.y + oy
            u = (x * ny - y * nx) / det
            v = (mx * y - my * x) / det
            if not (0 <= u <= 1 and 0 <= v <= 1):
                continue
            on = {"r1": v == 0, "r0": u == 1, "s1": v == 1, "s0": u == 0}
            hits = [k for k, b in on.items() if b]
            if not hits:
                code = Location.INTERIOR
            elif len(hits) > 1:
                code = Location.VERTEX
            else:
                code = {"r1": Location.R1, "r0": Location.R0,
                        "s1": Location.S1, "s0": Location.S0}[hits[0]]
            best = max(best, code)
    return best


class TestParallelogram:
    def test_rlrl_vertices(self):
        p = build_parallelogram("RLRL")
        assert p.rw == IntMatrix2(8, 5, 3, 2)
        assert p.M == TorusPointQ(Fraction(1, 8), Fraction(5, 8))
        assert p.N == TorusPointQ(Fraction(7, 8), Fraction(3, 8))
        assert p.generic

    def test_rl_degenerate(self):
        p = build_parallelogram("RL")
        assert not p.generic and p.M == p.N
        assert set(p.vertex_orbits()) == {"O", "M"}

    @pytest.mark.parametrize("w", all_mixed_words(8))
    def test_embedding_dichotomy(self, w):
        p = build_parallelogram(w)
        distinct = len({p.O, p.M, p.N}) == 3
        assert distinct == (re.fullmatch(r"RL+|L+R", w) is None)
        assert is_degenerate_word(w) == (not distinct)

    @given(mixed_words)
    def test_side_maps(self, w):
        p = build_parallelogram(w)
        rw = p.rw
        (mx, my), (nx, ny) = p.lift_m, p.lift_n
        assert rw.apply(mx, my) == (mx - 1, my)
        assert rw.apply(1, 0) == (rw.a, rw.c)
        assert rw.apply(nx, ny) == (nx + rw.a, ny + rw.c)

    def test_from_rw(self):
        assert parallelogram_from_rw(IntMatrix2(8, 5, 3, 2)).word == "RLRL"

    def test_from_rw_refuses_conjugate_form(self):
        with pytest.raises(ValueError):
            parallelogram_from_rw(IntMatrix2(3, 8, 4, 11))

    def test_to_dict_fields(self):
        d = build_parallelogram("RRL").to_dict()
        assert {"vertices", "sides", "embedding"} <= d.keys()


class TestFormulaFixedPoints:
    @pytest.mark.parametrize("w", all_mixed_words(8))
    def test_formula_points_fixed_and_complete(self, w):
        rw = build_parallelogram(w).rw
        pts = formula_fixed_points(rw)
        assert all(q.image(rw) == q for q in pts)
        assert len(fixed_point_lattice(rw)) == rw.trace - 2
        assert set(pts) <= fixed_point_lattice(rw)


class TestLocate:
    def test_examples(self):
        p = build_parallelogram("RLRL")
        assert locate(p, TorusPointQ(Fraction(1, 3), 0)) == Location.INTERIOR
        assert locate(p, TorusPointQ(Fraction(1, 2), Fraction(1, 2))) == Location.OUTSIDE
        assert point_in_parallelogram(p, TorusPointQ(0, 0)) == Containment.BOUNDARY

    @given(mixed_words.filter(lambda w: len(w) <= 8))
    @settings(max_examples=40, deadline=None)
    def test_matches_parametric_oracle(self, w):
        p = build_parallelogram(w)
        q = p.t - 2
        for den in (q, 2 * q, 7):
            for i in range(den):
                for j in range(0, den, max(1, den // 9)):
                    pt = TorusPointQ(Fraction(i, den), Fraction(j, den))
                    assert locate(p, pt) == oracle_locate(p, pt), (w, pt)

    def test_vectorised_agrees(self):
        from birkhoffkit.torus import _locate_many
        p = build_parallelogram("RRLRL")
        den = 3 * (p.t - 2)
        xs, ys = np.meshgrid(np.arange(den), np.arange(den))
        codes = _locate_many(p, den, xs.ravel(), ys.ravel())
        for x, y, c in zip(xs.ravel(), ys.ravel(), codes):
            assert c == locate(p, TorusPointQ(Fraction(int(x), den), Fraction(int(y), den)))


def brute_orbits(w, n_max):
    """Orbit walk with exact fractions and the oracle locator; wall rule on sides."""
    p = build_parallelogram(w)
    rw = p.rw
    seen, out = set(), {}
    for n in range(1, n_max + 1):
        for pt in sorted(fixed_point_lattice(rw, n)):
            if pt in seen:
                continue
            orbit = [pt]
            while (nxt := orbit[-1].image(rw)) != pt:
                orbit.append(nxt)
            seen.update(orbit)
            codes = [oracle_locate(p, q) for q in orbit]
            passes = sum(c in (Location.INTERIOR, Location.R1, Location.S1) for c in codes)
            out[min(orbit)] = (len(orbit), passes, Location.VERTEX in codes)
    return out


class TestOrbits:
    @pytest.mark.parametrize("w,n", [("RL", 4), ("RRL", 3), ("RLRL", 2), ("RRLL", 2), ("RLLL", 2)])
    def test_wall_policy_matches_bruteforce(self, w, n):
        p = build_parallelogram(w)
        recs = enumerate_periodic_orbits(p, n, on_side="wall")
        brute = brute_orbits(w, n)
        assert len(recs) == len(brute)
        for r in recs:
            period, passes, vertex = brute[r.representative]
            assert (r.period, r.passes, r.boundary_flag) == (period, passes, vertex)
            assert r.intersection == r.period + r.passes

    def test_rlrl_period_one(self):
        recs = enumerate_periodic_orbits(build_parallelogram("RLRL"), 1)
        assert len(recs) == 8
        assert sum(r.boundary_flag for r in recs) == 3
        interior = [r for r in recs if not r.boundary_flag]
        assert sorted(r.intersection for r in interior) == [1, 1, 1, 2, 2]

    @pytest.mark.parametrize("w,n", [("RL", 3), ("RRL", 3), ("RLRL", 2), ("RRLL", 2)])
    def test_raise_policy_on_side_orbits(self, w, n):
        with pytest.raises(AmbiguousCrossing):
            enumerate_periodic_orbits(build_parallelogram(w), n)

    def test_histogram_consistent_with_records(self):
        p = build_parallelogram("RRLL")
        hist, nb, _ = intersection_histogram(p, 3)
        recs = enumerate_periodic_orbits(p, 3, on_side="wall")
        assert nb == sum(r.boundary_flag for r in recs)
        assert sum(hist.values()) == sum(not r.boundary_flag for r in recs)

    def test_accepts_matrix(self):
        assert len(enumerate_periodic_orbits(IntMatrix2(3, 2, 1, 1), 1)) == 2

    def test_every_periodic_point_counted(self):
        p = build_parallelogram("RRL")
        recs = enumerate_periodic_orbits(p, 4, on_side="wall")
        for m in range(1, 5):
            total = sum(r.period for r in recs if m % r.period == 0)
            assert total == abs(mat_pow(p.rw, m).trace - 2)


class TestStable:
    @pytest.mark.parametrize("p,q,d,expected", [
        (Fraction(1), Fraction(0), 5, 1), (Fraction(-3), Fraction(1), 5, -1),
        (Fraction(3), Fraction(-1), 5, 1), (Fraction(0), Fraction(-1), 2, -1),
        (Fraction(-2), Fraction(1), 5, 1),
    ])
    def test_sign_quadratic(self, p, q, d, expected):
        assert sign_quadratic(p, q, d) == expected
        assert expected == np.sign(float(p) + float(q) * np.sqrt(d))

    @given(mixed_words.filter(lambda w: not is_degenerate_word(w)))
    @settings(max_examples=150)
    def test_two_tangencies_float_oracle(self, w):
        p = build_parallelogram(w)
        assert stable_tangency_count(w) == 2
        rw = np.array([[p.rw.a, p.rw.b], [p.rw.c, p.rw.d]], dtype=float)
        vals, vecs = np.linalg.eig(rw)
        v = vecs[:, np.argmin(np.abs(vals))]
        verts = [np.array(x, dtype=float) for x in (p.lift_o, p.lift_m, p.lift_o2, p.lift_n)]

        def cross(a, b):
            return a[0] * b[1] - a[1] * b[0]

        count = 0
        for k in range(4):
            e1 = verts[(k + 1) % 4] - verts[k]
            e2 = verts[k - 1] - verts[k]
            for s in (1, -1):
                if cross(e1, s * v) > 0 and cross(s * v, e2) > 0:
                    count += 1
        assert count == 2

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateEmbedding):
            stable_tangency_count("RLL")
