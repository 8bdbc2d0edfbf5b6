"""Exact arithmetic on N-qubit Pauli strings and their conjugation orbits.

A Pauli string is stored in symplectic form: two n-bit integers ``x_bits``
and ``z_bits`` plus a sign in {+1, -1}.  Site j carries

    I if (x_j, z_j) == (0, 0),   X if (1, 0),
    Z if (0, 1),                 Y if (1, 1),

with the Hermitian convention  sigma(x, z) = i^(x.z) X^x Z^z  per site, so
every stored string is Hermitian and conjugation by Clifford maps keeps the
sign in {+1, -1}.  Global phases +/-i appear only transiently inside
products and are tracked exactly.

Basis index convention used throughout the package: the coefficient vector
over the 4^n Pauli basis is indexed by

    index = sum_j 4^j * d_j,   d_j = x_j + 2 * z_j   (site 0 least significant)

i.e. per-site digits order (I, X, Z, Y).  In the binary expansion of the
index the x bits sit at even positions and the z bits at odd positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Protocol

__all__ = [
    "PauliString",
    "PauliProduct",
    "PauliOrbit",
    "weight",
    "multiply",
    "enumerate_orbit",
    "orbit_weight_spectrum",
    "parse_pauli",
    "format_pauli",
    "index_of",
    "from_index",
    "ORBIT_SPECTRUM_MAX_QUBITS",
]

ORBIT_SPECTRUM_MAX_QUBITS = 10

_SITE_LETTERS = "IXZY"  # letter of digit d = x + 2z
_LETTER_DIGITS = {"I": 0, "X": 1, "Z": 2, "Y": 3}
_PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class PauliString:
    """Hermitian n-qubit Pauli operator with a +/-1 sign."""

    n: int
    x_bits: int
    z_bits: int
    sign: int = 1

    def __post_init__(self) -> None:
        if self.n <= 0:
            raise ValueError(f"need at least one site, got n={self.n}")
        mask = (1 << self.n) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit vectors exceed the declared site count")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def support(self) -> tuple[int, ...]:
        bits = self.x_bits | self.z_bits
        return tuple(j for j in range(self.n) if (bits >> j) & 1)

    def site_letter(self, j: int) -> str:
        d = ((self.x_bits >> j) & 1) + 2 * ((self.z_bits >> j) & 1)
        return _SITE_LETTERS[d]

    def with_sign(self, sign: int) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, sign)

    def negate(self) -> "PauliString":
        return self.with_sign(-self.sign)

    def bits_key(self) -> tuple[int, int]:
        """Key identifying the string modulo sign."""
        return (self.x_bits, self.z_bits)

    def commutes_with(self, other: "PauliString") -> bool:
        if self.n != other.n:
            raise ValueError("site count mismatch")
        anti = (self.x_bits & other.z_bits).bit_count() + (
            self.z_bits & other.x_bits
        ).bit_count()
        return anti % 2 == 0

    def __str__(self) -> str:
        return format_pauli(self)


@dataclass(frozen=True)
class PauliProduct:
    """Result of a Pauli product: a sign-free string and an exact phase.

    ``phase`` is one of 1, -1, 1j, -1j (exact complex values) and absorbs
    the signs of both factors; ``string`` always carries sign +1.
    """

    string: PauliString
    phase: complex


def weight(s: PauliString) -> int:
    """Number of non-identity sites."""
    return s.weight


def multiply(a: PauliString, b: PauliString) -> PauliProduct:
    """Exact product a * b with the phase tracked in {1, -1, i, -i}."""
    if a.n != b.n:
        raise ValueError(f"site count mismatch: {a.n} != {b.n}")
    xc = a.x_bits ^ b.x_bits
    zc = a.z_bits ^ b.z_bits
    # Phase exponent of i: canonical forms contribute |x&z| each, commuting
    # Z^za past X^xb contributes (-1)^|za & xb|.
    k = (
        (a.x_bits & a.z_bits).bit_count()
        + (b.x_bits & b.z_bits).bit_count()
        - (xc & zc).bit_count()
        + 2 * (a.z_bits & b.x_bits).bit_count()
    ) % 4
    phase = _PHASES[k]
    if a.sign * b.sign < 0:
        phase = -phase
    return PauliProduct(PauliString(a.n, xc, zc, 1), phase)


def parse_pauli(text: str) -> PauliString:
    """Parse textual Pauli notation, e.g. "-YXZIII" or "+XI".

    Leading sign is optional; both the ASCII hyphen and the Unicode minus
    are accepted.  The leftmost letter is site 0.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty Pauli literal")
    sign = 1
    if text[0] in "+-−":
        if text[0] != "+":
            sign = -1
        text = text[1:]
    if not text:
        raise ValueError("Pauli literal has a sign but no letters")
    x = z = 0
    for j, ch in enumerate(text):
        try:
            d = _LETTER_DIGITS[ch]
        except KeyError:
            raise ValueError(f"invalid Pauli letter {ch!r} at site {j}") from None
        x |= (d & 1) << j
        z |= (d >> 1) << j
    return PauliString(len(text), x, z, sign)


def format_pauli(s: PauliString) -> str:
    """Inverse of parse_pauli; emits an ASCII '-' for negative signs."""
    letters = "".join(s.site_letter(j) for j in range(s.n))
    return ("-" if s.sign < 0 else "") + letters


def index_of(s: PauliString) -> int:
    """Basis index of the string (sign ignored): interleaved (x, z) bits."""
    # x bits occupy even binary positions, z bits odd ones.
    return _interleave(s.x_bits) | (_interleave(s.z_bits) << 1)


def from_index(n: int, index: int, sign: int = 1) -> PauliString:
    if not 0 <= index < 4**n:
        raise ValueError(f"index {index} out of range for n={n}")
    return PauliString(n, _deinterleave(index), _deinterleave(index >> 1), sign)


def _interleave(bits: int) -> int:
    out = 0
    j = 0
    while bits:
        out |= (bits & 1) << (2 * j)
        bits >>= 1
        j += 1
    return out


def _deinterleave(bits: int) -> int:
    out = 0
    j = 0
    while bits:
        out |= (bits & 1) << j
        bits >>= 2
        j += 1
    return out


class ConjugatingCircuit(Protocol):
    """Anything that conjugates Pauli strings (duck-typed circuit)."""

    n: int

    def conjugate_string(self, s: PauliString) -> PauliString: ...


@dataclass(frozen=True)
class PauliOrbit:
    """Closed orbit of a Pauli string under repeated circuit conjugation.

    ``elements`` hold sign-free strings in visit order; ``closure_sign`` is
    the +/-1 picked up when the circuit maps the last element back to the
    first.  ``avg_weight`` is exact (a Fraction).
    """

    elements: tuple[PauliString, ...]
    closure_sign: int
    avg_weight: Fraction = field(init=False)

    def __post_init__(self) -> None:
        total = sum(e.weight for e in self.elements)
        object.__setattr__(self, "avg_weight", Fraction(total, len(self.elements)))

    @property
    def length(self) -> int:
        return len(self.elements)


def enumerate_orbit(s: PauliString, circuit: ConjugatingCircuit) -> PauliOrbit:
    """Walk s, C(s), C^2(s), ... until the bits repeat.

    Signs are tracked separately: elements are stored sign-free and the
    orbit closes with C^L(s) = closure_sign * s.  The orbit length cannot
    exceed 4^n because conjugation permutes the sign-free strings.
    """
    if s.n != circuit.n:
        raise ValueError(f"site count mismatch: {s.n} != {circuit.n}")
    if s.is_identity:
        raise ValueError("identity string has no nontrivial orbit")
    start = s.with_sign(1)
    elements = [start]
    current = start
    ceiling = 4**s.n
    for _ in range(ceiling):
        nxt = circuit.conjugate_string(current)
        if nxt.bits_key() == start.bits_key():
            return PauliOrbit(tuple(elements), nxt.sign)
        elements.append(nxt.with_sign(1))
        current = nxt.with_sign(1)
    raise AssertionError("orbit failed to close within 4^n steps")


def orbit_weight_spectrum(
    circuit: ConjugatingCircuit,
) -> list[tuple[int, Fraction]]:
    """Partition all nontrivial strings into orbits of the circuit.

    Returns (orbit_id, avg_weight / n) pairs sorted by normalized weight
    (ties broken by orbit id).  The orbit id is the smallest basis index in
    the orbit.  Exact rational arithmetic throughout.
    """
    n = circuit.n
    if n > ORBIT_SPECTRUM_MAX_QUBITS:
        raise ValueError(
            f"orbit spectrum over 4^{n} strings refused "
            f"(guard: n <= {ORBIT_SPECTRUM_MAX_QUBITS})"
        )
    visited = bytearray(4**n)
    spectrum: list[tuple[int, Fraction]] = []
    for idx in range(1, 4**n):
        if visited[idx]:
            continue
        start = from_index(n, idx)
        members = [idx]
        visited[idx] = 1
        current = start
        total_weight = current.weight
        while True:
            nxt = circuit.conjugate_string(current).with_sign(1)
            key = index_of(nxt)
            if key == idx:
                break
            assert not visited[key], "conjugation must permute strings"
            visited[key] = 1
            members.append(key)
            total_weight += nxt.weight
            current = nxt
        spectrum.append((min(members), Fraction(total_weight, len(members) * n)))
    spectrum.sort(key=lambda item: (item[1], item[0]))
    return spectrum
