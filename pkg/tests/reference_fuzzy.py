"""Brute-force reference for the fuzzy pipeline, kept independent of the
package implementation: membership functions are evaluated vectorially from
their breakpoints, every rule contributes its own scaled consequent, and the
centroid comes from plain Riemann summation on a fine grid."""

import numpy as np

FINE_SAMPLES = 1_000_000


def membership_curve(points, xs):
    pts = tuple(points)
    if len(pts) == 3:
        a, b, c = pts
        top_lo = top_hi = b
        d = c
    else:
        a, top_lo, top_hi, d = pts
    out = np.zeros_like(xs)
    if top_lo > a:
        rising = (xs >= a) & (xs < top_lo)
        out[rising] = (xs[rising] - a) / (top_lo - a)
    if d > top_hi:
        falling = (xs > top_hi) & (xs <= d)
        out[falling] = (d - xs[falling]) / (d - top_hi)
    out[(xs >= top_lo) & (xs <= top_hi)] = 1.0
    return out


def membership_at(points, x):
    return float(membership_curve(points, np.array([float(x)]))[0])


def infer_reference(system, x1, x2, samples=FINE_SAMPLES):
    """Crisp output of the same rule semantics on a fine Riemann grid."""
    in1, in2 = system.inputs
    degrees = {
        in1.name: {t: membership_at(mf.points, x1) for t, mf in in1.terms},
        in2.name: {t: membership_at(mf.points, x2) for t, mf in in2.terms},
    }
    xs = np.linspace(system.output.lo, system.output.hi, samples, endpoint=False)
    aggregate = np.zeros_like(xs)
    fired_any = False
    for rule in system.rules:
        clause = [degrees[var][term] for var, term in rule.antecedent]
        activation = min(clause) if rule.connective == "and" else max(clause)
        strength = rule.weight * activation
        if strength <= 0.0:
            continue
        fired_any = True
        curve = membership_curve(system.output.term(rule.consequent).points, xs)
        np.maximum(aggregate, strength * curve, out=aggregate)
    if not fired_any:
        raise ArithmeticError("reference aggregate is empty")
    total = aggregate.sum()
    if total == 0.0:
        raise ArithmeticError("reference aggregate is empty")
    return float((xs * aggregate).sum() / total)


def calibrated_shift_reference(system, bound, x1, x2, samples=FINE_SAMPLES):
    """Reference for the calibrated guard output."""
    xs = np.linspace(system.output.lo, system.output.hi, samples, endpoint=False)
    zero_curve = membership_curve(system.output.term("zero").points, xs)
    large_curve = membership_curve(system.output.term("large").points, xs)
    c0 = float((xs * zero_curve).sum() / zero_curve.sum())
    c1 = float((xs * large_curve).sum() / large_curve.sum())
    raw = infer_reference(system, x1, x2, samples)
    frac = (raw - c0) / (c1 - c0)
    return bound * min(1.0, max(0.0, frac))
