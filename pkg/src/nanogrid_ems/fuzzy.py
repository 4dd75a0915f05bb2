"""Two-input Mamdani-style fuzzy inference with centroid defuzzification.

Membership functions are piecewise linear (triangles and trapezoids).
A rule's activation is the min (AND) or max (OR) of its antecedent
degrees; the consequent term is scaled by ``weight * activation`` and
the scaled consequents are aggregated pointwise with max.  The crisp
output is the centroid of the aggregate, integrated by the midpoint
rule over a fixed number of uniform samples of the output universe, so
identical inputs always produce bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyAggregate

AND = "and"
OR = "or"

# Aggregates whose integral falls below this are a rule-base coverage bug.
_EMPTY_INTEGRAL = 1e-12


@dataclass(frozen=True)
class MembershipFunction:
    """Triangle (3 breakpoints) or trapezoid (4 breakpoints).

    Coincident breakpoints express shoulders: ``tri(a, a, c)`` is a left
    shoulder, ``tri(a, c, c)`` a right shoulder.
    """

    points: tuple[float, ...]

    def __post_init__(self):
        if len(self.points) not in (3, 4):
            raise ValueError("membership function needs 3 or 4 breakpoints")
        if not all(math.isfinite(p) for p in self.points):
            raise ValueError("breakpoints must be finite")
        if any(b < a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("breakpoints must be non-decreasing")

    @property
    def kind(self) -> str:
        return "tri" if len(self.points) == 3 else "trap"


def triangular(a: float, b: float, c: float) -> MembershipFunction:
    return MembershipFunction((float(a), float(b), float(c)))


def trapezoidal(a: float, b: float, c: float, d: float) -> MembershipFunction:
    return MembershipFunction((float(a), float(b), float(c), float(d)))


def mf_eval(mf: MembershipFunction, x: float) -> float:
    """Degree of membership of ``x``, exact at breakpoints, 0 outside support."""
    pts = mf.points
    if len(pts) == 3:
        left, top_lo, right = pts
        top_hi = top_lo
    else:
        left, top_lo, top_hi, right = pts
    if x < left or x > right:
        return 0.0
    if top_lo <= x <= top_hi:
        return 1.0
    if x < top_lo:
        return (x - left) / (top_lo - left)
    return (right - x) / (right - top_hi)


@dataclass(frozen=True)
class LinguisticVariable:
    """Named variable over a real interval with ordered, named terms."""

    name: str
    lo: float
    hi: float
    terms: tuple[tuple[str, MembershipFunction], ...]

    def __post_init__(self):
        if not self.terms:
            raise ValueError(f"variable {self.name!r} needs at least one term")
        names = [t for t, _ in self.terms]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate term names in {self.name!r}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"bad universe for {self.name!r}")
        for term, mf in self.terms:
            if mf.points[0] < self.lo or mf.points[-1] > self.hi:
                raise ValueError(
                    f"term {term!r} of {self.name!r} extends outside the universe"
                )

    def term_names(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.terms)

    def term(self, name: str) -> MembershipFunction:
        for t, mf in self.terms:
            if t == name:
                return mf
        raise KeyError(name)


def fuzzify(var: LinguisticVariable, x: float) -> dict[str, float]:
    """Degree of every term at ``x``; degrees need not sum to 1."""
    return {t: mf_eval(mf, x) for t, mf in var.terms}


@dataclass(frozen=True)
class Rule:
    """IF <antecedent clauses joined by one connective> THEN <output term>."""

    antecedent: tuple[tuple[str, str], ...]  # (variable name, term name)
    consequent: str
    connective: str = AND
    weight: float = 1.0

    def __post_init__(self):
        if self.connective not in (AND, OR):
            raise ValueError(f"unknown connective {self.connective!r}")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError("rule weight must lie in [0, 1]")
        if not 1 <= len(self.antecedent) <= 2:
            raise ValueError("rules take one or two antecedent clauses")


@dataclass(eq=True)
class FuzzySystem:
    """Two inputs, one output, and a rule base; immutable after construction."""

    name: str
    inputs: tuple[LinguisticVariable, LinguisticVariable]
    output: LinguisticVariable
    rules: tuple[Rule, ...]
    resolution: int = 1001

    _xs: np.ndarray = field(default=None, init=False, repr=False, compare=False)
    _term_values: dict = field(default=None, init=False, repr=False, compare=False)
    _term_centroids: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.inputs) != 2:
            raise ValueError("exactly two input variables are supported")
        if self.resolution < 3:
            raise ValueError("resolution must be at least 3")
        by_name = {v.name: v for v in self.inputs}
        if len(by_name) != 2:
            raise ValueError("input variables must have distinct names")
        out_terms = set(self.output.term_names())
        for rule in self.rules:
            for var, term in rule.antecedent:
                if var not in by_name:
                    raise ValueError(f"rule references unknown variable {var!r}")
                if term not in by_name[var].term_names():
                    raise ValueError(f"variable {var!r} has no term {term!r}")
            if rule.consequent not in out_terms:
                raise ValueError(f"output has no term {rule.consequent!r}")

    def _ensure_sampled(self):
        if self._xs is not None:
            return
        n = self.resolution
        dx = (self.output.hi - self.output.lo) / n
        xs = self.output.lo + (np.arange(n, dtype=float) + 0.5) * dx
        self._xs = xs
        self._term_values = {
            term: np.array([mf_eval(mf, float(x)) for x in xs])
            for term, mf in self.output.terms
        }
        self._term_centroids = {}

    def term_centroid(self, term: str) -> float:
        """Centroid of one output term alone, on the same sample grid as infer."""
        self._ensure_sampled()
        if term not in self._term_centroids:
            values = self._term_values[term]
            mass = float(values.sum())
            if mass <= 0.0:
                raise EmptyAggregate(
                    f"term {term!r} of {self.name!r} has no mass on the sample grid"
                )
            self._term_centroids[term] = float(np.dot(self._xs, values) / mass)
        return self._term_centroids[term]

    def infer(self, x1: float, x2: float) -> float:
        """Crisp output for the two (already clamped) crisp inputs.

        Raises EmptyAggregate when no rule fires, which is unreachable for
        a rule base covering the whole input grid.
        """
        self._ensure_sampled()
        in1, in2 = self.inputs
        degrees = {
            in1.name: fuzzify(in1, x1),
            in2.name: fuzzify(in2, x2),
        }
        strengths: dict[str, float] = {}
        for rule in self.rules:
            clause = [degrees[var][term] for var, term in rule.antecedent]
            activation = min(clause) if rule.connective == AND else max(clause)
            fired = rule.weight * activation
            if fired > strengths.get(rule.consequent, 0.0):
                strengths[rule.consequent] = fired

        active = [(t, s) for t, s in strengths.items() if s > 0.0]
        if not active:
            raise EmptyAggregate(f"no rule of {self.name!r} fired at ({x1}, {x2})")
        dx = (self.output.hi - self.output.lo) / self.resolution

        if len(active) == 1:
            # A uniformly scaled term keeps its centroid; evaluating it on the
            # unscaled samples avoids spurious last-ulp drift.
            term, strength = active[0]
            values = self._term_values[term]
            if strength * float(values.sum()) * dx < _EMPTY_INTEGRAL:
                raise EmptyAggregate(
                    f"aggregate of {self.name!r} integrates to ~0 at ({x1}, {x2})"
                )
            return self.term_centroid(term)

        aggregate = None
        for term, strength in active:
            scaled = strength * self._term_values[term]
            if aggregate is None:
                aggregate = scaled
            else:
                np.maximum(aggregate, scaled, out=aggregate)

        total = float(aggregate.sum())
        if total * dx < _EMPTY_INTEGRAL:
            raise EmptyAggregate(
                f"aggregate of {self.name!r} integrates to ~0 at ({x1}, {x2})"
            )
        return float(np.dot(self._xs, aggregate) / total)


def infer(system: FuzzySystem, in1: float, in2: float) -> float:
    """Functional alias for FuzzySystem.infer."""
    return system.infer(in1, in2)
