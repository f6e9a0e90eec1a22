from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birkhoffkit.birkhoff import (
    EMPTY_SURFACE, HORIZONTAL_TORUS, BoundaryEntry, descent_chain,
    first_return_matrix, fit_circle_periods, fried_sum_data, genus_one_section,
    lefschetz_audit, minakawa_step, orbifold_section_census, pair_of_pants_data,
    resolve_multicurve_on_torus,
)
from birkhoffkit.errors import (
    AlreadyMinimal, CapExceeded, IncoherentOrientation, NotMixed, UnsupportedOrbifold,
)
from birkhoffkit.points import fixed_point_lattice
from birkhoffkit.sl2z import IntMatrix2, cyclic_normal_form, word_to_matrix

from conftest import mixed_words, np_word_matrix

nonzero_classes = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(lambda c: c != (0, 0))


class TestResolution:
    def test_two_circles_along_gamma_o(self):
        assert resolve_multicurve_on_torus([(2, 1), (0, 1)]) == ((2, 2), 2)

    def test_degenerate_m_orbit(self):
        # two negative longitudes and a meridian give one circle
        assert resolve_multicurve_on_torus([(-1, 0), (-1, 0), (0, 1)]) == ((-2, 1), 1)

    def test_opposite_classes_refused(self):
        with pytest.raises(IncoherentOrientation):
            resolve_multicurve_on_torus([(1, 0), (-1, 0)])

    def test_zero_class_refused(self):
        with pytest.raises(ValueError):
            resolve_multicurve_on_torus([(0, 0)])

    @given(st.lists(nonzero_classes, min_size=1, max_size=5))
    def test_component_count_is_gcd(self, classes):
        try:
            (p, q), n = resolve_multicurve_on_torus(classes)
        except IncoherentOrientation:
            return
        assert (p, q) == (sum(c[0] for c in classes), sum(c[1] for c in classes))
        assert n == gcd(p, q) >= 1


class TestSurfaces:
    def test_boundary_entry_validation(self):
        with pytest.raises(ValueError):
            BoundaryEntry("x", 2, 1, (2, 2))

    def test_empty_is_neutral(self):
        pants = pair_of_pants_data("RLRL")
        assert fried_sum_data(pants, EMPTY_SURFACE) == pants
        assert fried_sum_data(EMPTY_SURFACE, pants) == pants

    def test_puncture_must_hit_boundary_orbit(self):
        with pytest.raises(ValueError):
            fried_sum_data(HORIZONTAL_TORUS, pair_of_pants_data("RRL"), [(0, "gamma_Z")])

    def test_pants_generic(self):
        pants = pair_of_pants_data("RLRL")
        assert pants.euler_blowup == -1 and pants.genus == 0
        assert [e.orbit for e in pants.boundary] == ["gamma_O", "gamma_M", "gamma_N"]

    def test_pants_degenerate(self):
        pants = pair_of_pants_data("RL")
        assert pants.euler_blowup == -1
        assert pants.entry("gamma_M").circles == 2

    def test_section_generic(self):
        # chi = -4, two boundary components along gamma_O and four in total
        s = genus_one_section("RLRL")
        assert (s.euler_blowup, s.boundary_circle_count, s.genus) == (-4, 4, 1)
        assert s.entry("gamma_O").circles == 2

    def test_section_degenerate(self):
        s = genus_one_section("RL")
        assert (s.euler_blowup, s.boundary_circle_count, s.genus) == (-3, 3, 1)
        assert s.boundary_orbit_count == 2

    @given(mixed_words)
    @settings(max_examples=80)
    def test_euler_is_additive(self, w):
        pants = pair_of_pants_data(w)
        s = genus_one_section(w)
        assert s.euler_blowup == HORIZONTAL_TORUS.euler_blowup + pants.euler_blowup \
            - len(pants.boundary)

    @given(mixed_words)
    def test_genus_identity(self, w):
        s = genus_one_section(w)
        assert s.euler_blowup == 2 - 2 * 1 - s.boundary_circle_count

    def test_json_shape(self):
        d = genus_one_section("RRL").to_dict()
        assert set(d) == {"euler", "genus", "boundary"}
        assert set(d["boundary"][0]) == {"orbit", "multiplicity", "circles", "class"}


class TestFirstReturn:
    def test_rl(self):
        assert first_return_matrix("RL").matrix == IntMatrix2(2, 1, 1, 1)

    def test_rlrl(self):
        assert first_return_matrix("RLRL").matrix == IntMatrix2(5, 3, 3, 2)

    @given(mixed_words)
    def test_equals_word_matrix(self, w):
        fr = first_return_matrix(w)
        m = np_word_matrix(w)
        assert [[fr.matrix.a, fr.matrix.b], [fr.matrix.c, fr.matrix.d]] == m.tolist()
        assert fr.alpha_image == (1, 0) and fr.beta_image == (1, 1)

    def test_requires_mixed(self):
        with pytest.raises(NotMixed):
            first_return_matrix("RRR")


class TestDescent:
    def test_rrll(self):
        chain = descent_chain("RRLL")
        assert [s.after for s in chain.steps] == ["RLL", "RL"]
        assert chain.ghys_bound == 6

    def test_rl_is_minimal(self):
        assert descent_chain("RL").steps == ()
        with pytest.raises(AlreadyMinimal):
            minakawa_step("RL")

    @given(mixed_words)
    def test_strict_descent_to_rl(self, w):
        chain = descent_chain(w)
        assert len(chain.steps) == len(w) - 2
        assert chain.final == "RL"
        traces = [int(np_word_matrix(w).trace())] + [s.trace_after for s in chain.steps]
        assert all(a > b for a, b in zip(traces, traces[1:]))
        assert traces[-1] == 3
        for s in chain.steps:
            # the removed letter is one letter of some rotation
            assert len(s.after) == len(s.before) - 1
            assert s.before.count(s.generator) == s.after.count(s.generator) + 1


    @given(mixed_words)
    def test_trace_drop_is_an_entry_of_the_remainder(self, w):
        # R W' has trace tr W' + c(W'); L W' has trace tr W' + b(W')
        for step in descent_chain(w).steps:
            rots = [step.before[i:] + step.before[:i] for i in range(len(step.before))]
            rot = next(r for r in rots if r[0] == step.generator
                       and cyclic_normal_form(r[1:]) == step.after)
            rest = word_to_matrix(rot[1:])
            entry = rest.c if step.generator == "R" else rest.b
            assert step.trace_before - step.trace_after == entry


class TestOrbifold:
    def test_example(self):
        c = orbifold_section_census(3, (3, 3, 3, 3))
        assert c.surface.euler_blowup == -19
        assert c.surface.boundary_circle_count == 19
        assert c.surface.genus == 1

    @pytest.mark.parametrize("g,orders", [(0, (3,)), (1, ()), (2, (2, 3))])
    def test_unsupported(self, g, orders):
        with pytest.raises(UnsupportedOrbifold):
            orbifold_section_census(g, orders)

    @given(st.integers(1, 10), st.lists(st.integers(3, 12), min_size=1, max_size=10))
    def test_identity(self, g, orders):
        c = orbifold_section_census(g, orders)
        n = len(orders)
        assert -4 * g + (1 - n) - 4 == c.surface.euler_blowup == -(4 * g + n + 3)
        assert c.surface.genus == 1


class TestAudit:
    def test_fit_periods(self):
        assert fit_circle_periods([2, 4, 2, 4]) == ([1, 1, 2, 2], True)
        assert fit_circle_periods([2, 1]) == ([1, 1], False)

    def test_rlrl_first_row(self):
        row = lefschetz_audit("RLRL", 1).rows[0]
        assert (row.lhs, row.interior_sum, row.residual) == (5, 3, 2)

    @pytest.mark.parametrize("w", ["RL", "RRL", "RLRL", "RRLL"])
    def test_lhs_counts_fixed_points(self, w):
        audit = lefschetz_audit(w, 3)
        for row in audit.rows:
            assert row.lhs == len(fixed_point_lattice(word_to_matrix(w), row.m))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            lefschetz_audit("RL", 7)
        assert len(lefschetz_audit("RL", 2, cap=2).rows) == 2

    def test_outputs(self):
        audit = lefschetz_audit("RRL", 2)
        assert audit.to_csv().splitlines()[0] == "m,lhs,interior_sum,residual"
        assert "residual" in audit.to_text()
        assert audit.to_dict()["consistent"] is True
