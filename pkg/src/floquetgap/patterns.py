"""Doping patterns: which ring sites receive Haar single-qubit rotations.

A pattern is a boolean mask over n ring sites; True marks a doped (rotated)
site.  Literals use 'x'/'o' or the filled/open circles, leftmost character
is site 0:  "xoxoxo" == staggered doping on six sites.

Canonical generators:

    undoped              no doped sites
    full                 every site doped
    staggered            doped on the even sites: x o x o ...
    block_staggered(k)   repeating block of k undoped then one doped site
    contiguous(n_h)      first n_h sites doped
    explicit(bits)       any given mask

Note staggered places its doped sites on the even sublattice while
block_staggered(1) places them on the odd one; the two agree up to a
one-site rotation of the ring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "DopingPattern",
    "make_pattern",
    "parse_pattern",
    "format_pattern",
    "longest_undoped_arc",
    "is_dense",
    "is_staggered_like",
    "gap_lower_bound_general",
    "DEFAULT_LOWER_BOUND_COEFF",
    "PATTERN_KINDS",
]

PATTERN_KINDS = (
    "undoped",
    "full",
    "staggered",
    "block_staggered",
    "contiguous",
    "explicit",
)

DEFAULT_LOWER_BOUND_COEFF = 0.25

_DOPED_CHARS = {"x": True, "X": True, "●": True}  # ● filled circle
_UNDOPED_CHARS = {"o": False, "O": False, "○": False, "0": False}  # ○


@dataclass(frozen=True)
class DopingPattern:
    """Mask of doped sites on a ring."""

    n: int
    doped: tuple[bool, ...]

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2:
            raise ValueError(f"pattern needs an even ring size, got n={self.n}")
        if len(self.doped) != self.n:
            raise ValueError("mask length must equal n")

    @property
    def doped_count(self) -> int:
        return sum(self.doped)

    @property
    def doped_sites(self) -> tuple[int, ...]:
        return tuple(j for j, d in enumerate(self.doped) if d)

    @property
    def doping_fraction(self) -> Fraction:
        return Fraction(self.doped_count, self.n)

    def __str__(self) -> str:
        return format_pattern(self)


def parse_pattern(text: str, n: int | None = None) -> DopingPattern:
    """Parse a pattern literal; leftmost character is site 0."""
    text = text.strip()
    mask = []
    for j, ch in enumerate(text):
        if ch in _DOPED_CHARS:
            mask.append(True)
        elif ch in _UNDOPED_CHARS:
            mask.append(False)
        else:
            raise ValueError(f"invalid pattern character {ch!r} at site {j}")
    if n is not None and n != len(mask):
        raise ValueError(f"pattern literal has {len(mask)} sites, expected {n}")
    return DopingPattern(len(mask), tuple(mask))


def format_pattern(p: DopingPattern) -> str:
    return "".join("x" if d else "o" for d in p.doped)


def make_pattern(
    kind: str,
    n: int,
    *,
    k: int | None = None,
    n_h: int | None = None,
    bits: Sequence[bool] | None = None,
) -> DopingPattern:
    """Build one of the canonical pattern kinds (see module docstring)."""
    if kind == "undoped":
        return DopingPattern(n, (False,) * n)
    if kind == "full":
        return DopingPattern(n, (True,) * n)
    if kind == "staggered":
        return DopingPattern(n, tuple(j % 2 == 0 for j in range(n)))
    if kind == "block_staggered":
        if k is None or k < 1:
            raise ValueError("block_staggered needs a block length k >= 1")
        if n % (k + 1):
            raise ValueError(
                f"block_staggered(k={k}) needs (k+1) | n, got n={n}"
            )
        return DopingPattern(n, tuple(j % (k + 1) == k for j in range(n)))
    if kind == "contiguous":
        if n_h is None or not 0 <= n_h <= n:
            raise ValueError("contiguous needs 0 <= n_h <= n")
        return DopingPattern(n, tuple(j < n_h for j in range(n)))
    if kind == "explicit":
        if bits is None:
            raise ValueError("explicit needs a bits mask")
        return DopingPattern(n, tuple(bool(b) for b in bits))
    raise ValueError(f"unknown pattern kind {kind!r}")


def longest_undoped_arc(p: DopingPattern) -> int:
    """Longest circular run of consecutive undoped sites."""
    if p.doped_count == 0:
        return p.n
    if p.doped_count == p.n:
        return 0
    # walk the ring starting just after some doped site
    start = p.doped.index(True)
    best = run = 0
    for step in range(1, p.n + 1):
        if p.doped[(start + step) % p.n]:
            best = max(best, run)
            run = 0
        else:
            run += 1
    return best


def is_dense(p: DopingPattern) -> bool:
    """Dense doping: no two adjacent undoped sites anywhere on the ring."""
    return longest_undoped_arc(p) <= 1


def _doped_runs_between_undoped(p: DopingPattern) -> list[int]:
    """Lengths of maximal circular runs of doped sites, when both doped and
    undoped sites exist."""
    runs = []
    start = p.doped.index(False)
    run = 0
    for step in range(1, p.n + 1):
        if p.doped[(start + step) % p.n]:
            run += 1
        else:
            if run:
                runs.append(run)
            run = 0
    return runs


def is_staggered_like(p: DopingPattern) -> bool:
    """Dense and every doped run between undoped sites has length 1 or 2.

    The fully doped pattern has no undoped sites to separate, so it is not
    counted as staggered-like.
    """
    if not is_dense(p):
        return False
    if p.doped_count == p.n:
        return False
    return all(r in (1, 2) for r in _doped_runs_between_undoped(p))


def gap_lower_bound_general(
    p: DopingPattern,
    gamma: float,
    coeff: float = DEFAULT_LOWER_BOUND_COEFF,
) -> float:
    """General doped-pattern lower bound c * (n / n_h - 1) * gamma.

    Vacuous (zero) for full doping; refuses undoped patterns, whose gap is
    set by the orbit floor instead.
    """
    if p.doped_count == 0:
        raise ValueError("lower bound needs at least one doped site")
    if gamma < 0:
        raise ValueError(f"damping rate must be nonnegative, got {gamma}")
    if coeff <= 0:
        raise ValueError(f"bound coefficient must be positive, got {coeff}")
    return coeff * (p.n / p.doped_count - 1.0) * gamma
