"""Analytic overlay lines, computed locally from n and gamma.

The dashed guides on the figures come from closed-form expressions, never
from the plotted data: an undoped ring decays at n*gamma/2 per period,
the fully doped thermodynamic gap is gamma + 2, the alternating staggered
one is 2*gamma + 3, and every dense doping pattern obeys the uniform
upper bound 3*gamma + 3.  Which expression applies is decided from the
doping pattern string alone.
"""

from __future__ import annotations


def undoped_gap(n, gamma):
    """Decay rate per period of an undoped ring of n qubits."""
    return n * gamma / 2.0


def fully_doped_gap(gamma):
    """Thermodynamic-limit gap when every bond is doped."""
    return gamma + 2.0


def staggered_gap(gamma):
    """Thermodynamic-limit gap of the alternating doping pattern."""
    return 2.0 * gamma + 3.0


def dense_upper_bound(gamma):
    """Uniform gap upper bound for dense doping patterns."""
    return 3.0 * gamma + 3.0


_DOPED_CHARS = frozenset("xX●")
_UNDOPED_CHARS = frozenset("oO0○")


def classify_pattern(text):
    """Coarse class of a doping pattern string.

    Returns one of "undoped", "full", "staggered" (strictly alternating),
    "dense" (no two adjacent undoped bonds on the ring), or "other".
    """
    bits = []
    for char in text:
        if char in _DOPED_CHARS:
            bits.append(True)
        elif char in _UNDOPED_CHARS:
            bits.append(False)
        else:
            raise ValueError(f"unrecognized pattern character {char!r} in {text!r}")
    if not bits:
        raise ValueError("empty doping pattern")
    n = len(bits)
    if not any(bits):
        return "undoped"
    if all(bits):
        return "full"
    if all(bits[j] != bits[(j + 1) % n] for j in range(n)):
        return "staggered"
    if all(bits[j] or bits[(j + 1) % n] for j in range(n)):
        return "dense"
    return "other"


def overlay_for(pattern, n, gammas):
    """Overlay curve for one data series, or None when no formula applies.

    Returns (label, values) with one value per entry of gammas.  The
    undoped and thermodynamic formulas are exact limits; the dense bound
    is labeled as a bound.
    """
    kind = classify_pattern(pattern)
    if kind == "undoped":
        return f"nγ/2 (n={n})", [undoped_gap(n, g) for g in gammas]
    if kind == "full":
        return "γ+2", [fully_doped_gap(g) for g in gammas]
    if kind == "staggered":
        return "2γ+3", [staggered_gap(g) for g in gammas]
    if kind == "dense":
        return "3γ+3 (bound)", [dense_upper_bound(g) for g in gammas]
    return None
