import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nanogrid_ems.errors import EmptyAggregate
from nanogrid_ems.fuzzy import (
    FuzzySystem,
    LinguisticVariable,
    Rule,
    fuzzify,
    mf_eval,
    trapezoidal,
    triangular,
)

from reference_fuzzy import infer_reference

STANDARD_TERMS = (
    ("low", triangular(0.0, 0.0, 0.5)),
    ("med", triangular(0.0, 0.5, 1.0)),
    ("high", triangular(0.5, 1.0, 1.0)),
)


def make_variable(name="x", terms=STANDARD_TERMS):
    return LinguisticVariable(name, 0.0, 1.0, terms)


def make_system(rules, out_terms=None, resolution=1001):
    output = LinguisticVariable(
        "out",
        0.0,
        1.0,
        out_terms
        or (
            ("lo", triangular(0.0, 0.0, 0.4)),
            ("mid", triangular(0.2, 0.5, 0.8)),
            ("hi", triangular(0.6, 1.0, 1.0)),
        ),
    )
    return FuzzySystem(
        "sys", (make_variable("a"), make_variable("b")), output, tuple(rules), resolution
    )


class TestMembership:
    @pytest.mark.parametrize(
        "x,expected",
        [(0.5, 1.0), (0.25, 0.5), (1.5, 0.0), (-0.1, 0.0), (0.0, 0.0), (1.0, 0.0)],
    )
    def test_triangle(self, x, expected):
        assert mf_eval(triangular(0.0, 0.5, 1.0), x) == expected

    def test_left_shoulder_peaks_at_coincident_breakpoints(self):
        mf = triangular(0.0, 0.0, 0.5)
        assert mf_eval(mf, 0.0) == 1.0
        assert mf_eval(mf, 0.25) == 0.5
        assert mf_eval(mf, 0.5) == 0.0

    def test_right_shoulder(self):
        mf = triangular(0.5, 1.0, 1.0)
        assert mf_eval(mf, 1.0) == 1.0
        assert mf_eval(mf, 0.75) == 0.5

    def test_trapezoid_plateau(self):
        mf = trapezoidal(0.0, 0.2, 0.6, 1.0)
        assert mf_eval(mf, 0.2) == 1.0
        assert mf_eval(mf, 0.4) == 1.0
        assert mf_eval(mf, 0.6) == 1.0
        assert mf_eval(mf, 0.1) == pytest.approx(0.5)
        assert mf_eval(mf, 0.8) == pytest.approx(0.5)

    @pytest.mark.parametrize(
        "points", [(0.5, 0.2, 1.0), (0.0, 0.5), (0.0, math.inf, 1.0)]
    )
    def test_invalid_breakpoints_rejected(self, points):
        from nanogrid_ems.fuzzy import MembershipFunction

        with pytest.raises(ValueError):
            MembershipFunction(tuple(points))

    @given(st.floats(min_value=-2, max_value=3), st.data())
    def test_degree_always_in_unit_interval(self, x, data):
        pts = sorted(
            data.draw(
                st.lists(
                    st.floats(min_value=0, max_value=1), min_size=3, max_size=3
                )
            )
        )
        degree = mf_eval(triangular(*pts), x)
        assert 0.0 <= degree <= 1.0


class TestFuzzify:
    def test_partition_vertex(self):
        assert fuzzify(make_variable(), 0.5) == {"low": 0.0, "med": 1.0, "high": 0.0}

    def test_overlap_midpoint(self):
        assert fuzzify(make_variable(), 0.75) == {
            "low": 0.0,
            "med": 0.5,
            "high": 0.5,
        }

    def test_left_edge(self):
        assert fuzzify(make_variable(), 0.0) == {"low": 1.0, "med": 0.0, "high": 0.0}

    def test_duplicate_term_names_rejected(self):
        with pytest.raises(ValueError):
            LinguisticVariable(
                "x", 0.0, 1.0, (("t", triangular(0, 0, 1)), ("t", triangular(0, 1, 1)))
            )

    def test_term_outside_universe_rejected(self):
        with pytest.raises(ValueError):
            LinguisticVariable("x", 0.0, 1.0, (("t", triangular(0.0, 0.5, 1.5)),))


class TestRuleValidation:
    def test_weight_range(self):
        with pytest.raises(ValueError):
            Rule((("a", "low"),), "lo", weight=1.5)

    def test_connective(self):
        with pytest.raises(ValueError):
            Rule((("a", "low"),), "lo", connective="xor")

    def test_unknown_variable_rejected_by_system(self):
        with pytest.raises(ValueError):
            make_system([Rule((("nope", "low"),), "lo")])

    def test_unknown_term_rejected_by_system(self):
        with pytest.raises(ValueError):
            make_system([Rule((("a", "tiny"),), "lo")])

    def test_unknown_consequent_rejected_by_system(self):
        with pytest.raises(ValueError):
            make_system([Rule((("a", "low"),), "nope")])


class TestInfer:
    def test_single_rule_full_triangle_centroid(self):
        # A rule firing at degree 1 leaves its consequent whole; the centroid
        # of a full triangle is the breakpoint mean.
        system = make_system(
            [Rule((("a", "low"), ("b", "low")), "mid")],
            out_terms=(("mid", triangular(0.1, 0.4, 0.9)),),
        )
        assert system.infer(0.0, 0.0) == pytest.approx((0.1 + 0.4 + 0.9) / 3, abs=1e-4)

    def test_symmetric_aggregate_gives_midpoint(self):
        system = make_system(
            [
                Rule((("a", "low"), ("b", "low")), "lo"),
                Rule((("a", "low"), ("b", "low")), "hi"),
            ],
            out_terms=(
                ("lo", triangular(0.0, 0.2, 0.4)),
                ("hi", triangular(0.6, 0.8, 1.0)),
            ),
        )
        assert system.infer(0.0, 0.0) == pytest.approx(0.5, abs=1e-9)

    def test_two_rule_case_matches_brute_force(self):
        system = make_system(
            [
                Rule((("a", "low"), ("b", "med")), "lo"),
                Rule((("a", "med"), ("b", "med")), "hi", weight=0.7),
            ]
        )
        value = system.infer(0.3, 0.55)
        oracle = infer_reference(system, 0.3, 0.55)
        assert value == pytest.approx(oracle, abs=1e-4)

    def test_or_connective_takes_max(self):
        system = make_system(
            [
                Rule((("a", "low"), ("b", "low")), "hi", connective="or"),
                Rule((("a", "high"), ("b", "high")), "lo"),
            ]
        )
        # a=0.0 gives low degree 1.0 even though b's low degree is 0.
        value = system.infer(0.0, 1.0)
        oracle = infer_reference(system, 0.0, 1.0)
        assert value == pytest.approx(oracle, abs=1e-4)

    def test_empty_aggregate_raises(self):
        system = make_system([Rule((("a", "low"), ("b", "low")), "lo")])
        with pytest.raises(EmptyAggregate):
            system.infer(1.0, 1.0)

    def test_term_with_no_sample_mass_raises(self):
        # A spike far narrower than the sample spacing never lands on the
        # midpoint grid, so its centroid is undefined there.
        system = make_system(
            [Rule((("a", "low"), ("b", "low")), "spike")],
            out_terms=(("spike", triangular(0.5, 0.5, 0.5)),),
            resolution=10,
        )
        with pytest.raises(EmptyAggregate):
            system.infer(0.0, 0.0)

    def test_output_stays_in_universe_on_grid(self):
        system = make_system(
            [
                Rule((("a", t1), ("b", t2)), out)
                for (t1, t2), out in {
                    ("low", "low"): "hi",
                    ("low", "med"): "hi",
                    ("low", "high"): "hi",
                    ("med", "low"): "hi",
                    ("med", "med"): "mid",
                    ("med", "high"): "lo",
                    ("high", "low"): "hi",
                    ("high", "med"): "mid",
                    ("high", "high"): "lo",
                }.items()
            ]
        )
        for x1 in np.linspace(0, 1, 9):
            for x2 in np.linspace(0, 1, 9):
                value = system.infer(float(x1), float(x2))
                assert 0.0 <= value <= 1.0

    def test_determinism(self):
        system = make_system(
            [
                Rule((("a", "low"), ("b", "med")), "lo"),
                Rule((("a", "med"), ("b", "high")), "hi"),
            ]
        )
        first = [system.infer(0.31, 0.62) for _ in range(3)]
        assert first[0] == first[1] == first[2]

    def test_continuity_under_tiny_perturbation(self):
        system = make_system(
            [
                Rule((("a", "low"), ("b", "low")), "lo"),
                Rule((("a", "med"), ("b", "med")), "mid"),
                Rule((("a", "high"), ("b", "high")), "hi"),
                Rule((("a", "low"), ("b", "med")), "mid"),
                Rule((("a", "med"), ("b", "low")), "mid"),
                Rule((("a", "high"), ("b", "med")), "mid"),
                Rule((("a", "med"), ("b", "high")), "mid"),
                Rule((("a", "low"), ("b", "high")), "mid"),
                Rule((("a", "high"), ("b", "low")), "mid"),
            ]
        )
        width = system.output.hi - system.output.lo
        for x1 in np.linspace(0.0, 1.0 - 1e-9, 7):
            for x2 in np.linspace(0.0, 1.0 - 1e-9, 7):
                base = system.infer(float(x1), float(x2))
                bumped = system.infer(float(x1) + 1e-9, float(x2))
                assert abs(bumped - base) < 1e-6 * width

    @pytest.mark.parametrize("factor", [0.25, 0.5, 0.9])
    def test_common_weight_scaling_keeps_centroid(self, factor):
        rules = [
            Rule((("a", "low"), ("b", "low")), "lo", weight=1.0),
            Rule((("a", "med"), ("b", "med")), "mid", weight=0.8),
            Rule((("a", "high"), ("b", "high")), "hi", weight=0.6),
        ]
        scaled = [
            Rule(r.antecedent, r.consequent, r.connective, r.weight * factor)
            for r in rules
        ]
        base = make_system(rules)
        shrunk = make_system(scaled)
        for x1, x2 in [(0.2, 0.2), (0.5, 0.5), (0.8, 0.8), (0.4, 0.7)]:
            assert shrunk.infer(x1, x2) == pytest.approx(
                base.infer(x1, x2), abs=1e-12
            )

    def test_matches_reference_on_seeded_random_cases(self):
        rng = random.Random(7)
        for _ in range(10):
            system, x1, x2 = _random_case(rng)
            width = system.output.hi - system.output.lo
            assert system.infer(x1, x2) == pytest.approx(
                infer_reference(system, x1, x2, 200_000), abs=1e-4 * width
            )


def _random_case(rng):
    """Random covering partitions, a full rule table and a random input."""

    def partition():
        k1 = rng.uniform(0.25, 0.45)
        k2 = rng.uniform(0.55, 0.75)
        return (
            ("low", triangular(0.0, 0.0, k2)),
            ("med", triangular(k1, (k1 + k2) / 2, k2)),
            ("high", triangular(k1, 1.0, 1.0)),
        )

    lo = rng.uniform(-2.0, 0.0)
    hi = lo + rng.uniform(0.5, 3.0)

    def out_term():
        points = sorted(rng.uniform(lo, hi) for _ in range(rng.choice([3, 4])))
        return tuple(points)

    out_terms = []
    for i in range(3):
        pts = out_term()
        mf = triangular(*pts) if len(pts) == 3 else trapezoidal(*pts)
        out_terms.append((f"t{i}", mf))
    output = LinguisticVariable("out", lo, hi, tuple(out_terms))

    rules = tuple(
        Rule(
            antecedent=(("a", t1), ("b", t2)),
            consequent=f"t{rng.randrange(3)}",
            connective=rng.choice(["and", "and", "or"]),
            weight=rng.uniform(0.3, 1.0),
        )
        for t1 in ("low", "med", "high")
        for t2 in ("low", "med", "high")
    )
    system = FuzzySystem(
        "rand", (make_variable("a", partition()), make_variable("b", partition())),
        output, rules,
    )
    return system, rng.random(), rng.random()
