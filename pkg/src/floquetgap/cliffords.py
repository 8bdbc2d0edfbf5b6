"""Two-qubit Clifford tableaux and brickwork circuits of them.

A two-qubit Clifford is stored by the signed images of the generators
X1, Z1, X2, Z2 (qubit 1 = first site of the bond).  From those we expand
the full 16-entry conjugation table over two-site Paulis with exact signs,
which is what both the per-string conjugation and the vectorized
permutation kernels consume.

The distinguished entangling gate used by the Floquet model is
iSWAP . (H x H); its tableau is frozen below and pinned by a dense oracle
in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .paulis import PauliString, from_index, index_of, multiply

__all__ = [
    "TwoQubitTableau",
    "CliffordCircuit",
    "LC_CLASSES",
    "fixed_gate_tableau",
    "named_tableau",
    "classify_lc",
    "sample_tableau",
    "sample_class_tableau",
    "fixed_brickwork",
    "sampled_brickwork",
    "conjugate_through_circuit",
    "undoped_gap",
    "layer_bonds",
]

LC_CLASSES = ("identity", "swap", "cz", "iswap")

_DIGITS_TO_XZ = tuple((d & 1, d >> 1) for d in range(4))


@dataclass(frozen=True)
class TwoQubitTableau:
    """Signed symplectic tableau on two qubits.

    ``images`` maps each of the 15 nontrivial two-site basis indices to a
    (index, sign) pair; index 0 maps to itself.  Constructed from generator
    images via ``from_generators`` which also validates the symplectic
    relations.
    """

    images: tuple[tuple[int, int], ...]  # 16 entries of (index, sign)

    def __post_init__(self) -> None:
        if len(self.images) != 16 or self.images[0] != (0, 1):
            raise ValueError("tableau must have 16 entries fixing the identity")
        perm = [idx for idx, _ in self.images]
        if sorted(perm) != list(range(16)):
            raise ValueError("tableau images must permute the two-site strings")

    @staticmethod
    def from_generators(
        x1: PauliString,
        z1: PauliString,
        x2: PauliString,
        z2: PauliString,
    ) -> "TwoQubitTableau":
        gens = (x1, z1, x2, z2)
        for g in gens:
            if g.n != 2 or g.is_identity:
                raise ValueError("generator images must be nontrivial 2-site strings")
        _check_symplectic(gens)
        images: list[tuple[int, int]] = []
        for idx in range(16):
            d0 = idx & 3
            d1 = idx >> 2
            (xa, za), (xb, zb) = _DIGITS_TO_XZ[d0], _DIGITS_TO_XZ[d1]
            # P = i^(x.z) X1^xa Z1^za X2^xb Z2^zb ; conjugation respects
            # products, and multiply() already reports phases relative to
            # the Hermitian canonical form of each partial product.
            phase = 1j ** (xa * za + xb * zb)
            acc = PauliString(2, 0, 0, 1)
            for bit, gen in zip((xa, za, xb, zb), gens):
                if bit:
                    prod = multiply(acc, gen)
                    acc = prod.string
                    phase *= prod.phase
            if phase == 1:
                sign = 1
            elif phase == -1:
                sign = -1
            else:
                raise AssertionError("conjugated Hermitian string got phase +/-i")
            images.append((index_of(acc), sign))
        return TwoQubitTableau(tuple(images))

    def image(self, pair_index: int) -> tuple[int, int]:
        return self.images[pair_index]

    def then(self, after: "TwoQubitTableau") -> "TwoQubitTableau":
        """Tableau of conjugating by self first, then by `after`."""
        images = []
        for idx in range(16):
            mid, s1 = self.images[idx]
            out, s2 = after.images[mid]
            images.append((out, s1 * s2))
        return TwoQubitTableau(tuple(images))

    def conjugate_pair(self, s: PauliString) -> PauliString:
        """Conjugate a 2-site string through the tableau."""
        idx, sgn = self.images[index_of(s)]
        out = from_index(2, idx)
        return out.with_sign(sgn * s.sign)

    def single_site_images(self) -> dict[tuple[int, str], tuple[int, str, int]]:
        """Map (site, letter) -> (site, letter, sign) for single-site inputs
        whose image is also single-site; used by the LC classifier."""
        out = {}
        for site in (0, 1):
            for d in (1, 2, 3):
                idx = d << (2 * site)
                img, sgn = self.images[idx]
                lo, hi = img & 3, img >> 2
                if lo and not hi:
                    out[(site, "IXZY"[d])] = (0, "IXZY"[lo], sgn)
                elif hi and not lo:
                    out[(site, "IXZY"[d])] = (1, "IXZY"[hi], sgn)
        return out

    def is_support_preserving(self) -> bool:
        """True iff every single-site Pauli maps to a single-site Pauli."""
        return len(self.single_site_images()) == 6

    def is_weight_preserving(self) -> bool:
        """True iff conjugation preserves the weight of all 16 strings."""
        for idx in range(16):
            img, _ = self.images[idx]
            w_in = (1 if idx & 3 else 0) + (1 if idx >> 2 else 0)
            w_out = (1 if img & 3 else 0) + (1 if img >> 2 else 0)
            if w_in != w_out:
                return False
        return True


def _check_symplectic(gens: tuple[PauliString, ...]) -> None:
    """Generator images must reproduce the X/Z commutation pattern."""
    x1, z1, x2, z2 = gens
    pairs = [(x1, z1), (x2, z2)]
    for a, b in pairs:
        if a.commutes_with(b):
            raise ValueError("paired generator images must anticommute")
    for a in (x1, z1):
        for b in (x2, z2):
            if not a.commutes_with(b):
                raise ValueError("cross-pair generator images must commute")


def _tableau_from_letters(spec: dict[str, str]) -> TwoQubitTableau:
    from .paulis import parse_pauli

    return TwoQubitTableau.from_generators(
        parse_pauli(spec["x1"]),
        parse_pauli(spec["z1"]),
        parse_pauli(spec["x2"]),
        parse_pauli(spec["z2"]),
    )


@lru_cache(maxsize=None)
def fixed_gate_tableau() -> TwoQubitTableau:
    """Tableau of iSWAP . (H x H), frozen and oracle-pinned in the tests.

    Generator images: X1 -> +IZ, Z1 -> +ZY, X2 -> +ZI, Z2 -> +YZ
    (left letter = first qubit of the bond).
    """
    return _tableau_from_letters({"x1": "IZ", "z1": "ZY", "x2": "ZI", "z2": "YZ"})


@lru_cache(maxsize=None)
def named_tableau(name: str) -> TwoQubitTableau:
    """Canonical representatives: identity, swap, cz, iswap, fixed."""
    table = {
        "identity": {"x1": "XI", "z1": "ZI", "x2": "IX", "z2": "IZ"},
        "swap": {"x1": "IX", "z1": "IZ", "x2": "XI", "z2": "ZI"},
        "cz": {"x1": "XZ", "z1": "ZI", "x2": "ZX", "z2": "IZ"},
        "iswap": {"x1": "ZY", "z1": "IZ", "x2": "YZ", "z2": "ZI"},
    }
    if name == "fixed":
        return fixed_gate_tableau()
    if name not in table:
        raise ValueError(f"unknown gate name {name!r}")
    return _tableau_from_letters(table[name])


def classify_lc(t: TwoQubitTableau) -> str:
    """Local-Clifford equivalence class: identity, swap, cz or iswap.

    All single-site images single-site: the class is decided by whether
    images stay on their own site (identity) or all hop (swap).  Otherwise
    each site contributes exactly one single-site image and the gate is cz
    when that image stays on the same site, iswap when it hops.
    """
    singles = t.single_site_images()
    from_site0 = [v for (site, _), v in singles.items() if site == 0]
    if len(singles) == 6:
        stays = sum(1 for v in from_site0 if v[0] == 0)
        if stays == 3:
            return "identity"
        if stays == 0:
            return "swap"
        raise AssertionError("support-preserving tableau mixing site labels")
    if len(from_site0) != 1:
        raise AssertionError(
            f"expected one single-site image per site, got {len(from_site0)}"
        )
    return "cz" if from_site0[0][0] == 0 else "iswap"


def _nontrivial_two_site_strings() -> list[PauliString]:
    return [from_index(2, idx) for idx in range(1, 16)]


def sample_tableau(rng: np.random.Generator) -> TwoQubitTableau:
    """Uniform signed two-qubit Clifford tableau (720 x 16 possibilities).

    Rejection-free: pick the X1 image among the 15 nontrivial strings, the
    Z1 image among the 8 anticommuting ones, then the X2/Z2 images inside
    the 4-element commutant of the first pair (3 then 2 choices), and
    finally four independent signs.
    """
    strings = _nontrivial_two_site_strings()
    x1 = strings[rng.integers(0, 15)]
    z1_pool = [s for s in strings if not s.commutes_with(x1)]
    z1 = z1_pool[rng.integers(0, len(z1_pool))]
    comm = [s for s in strings if s.commutes_with(x1) and s.commutes_with(z1)]
    x2 = comm[rng.integers(0, len(comm))]
    z2_pool = [s for s in comm if not s.commutes_with(x2)]
    z2 = z2_pool[rng.integers(0, len(z2_pool))]
    signs = rng.integers(0, 2, size=4)
    gens = [
        g.with_sign(-1 if flip else 1)
        for g, flip in zip((x1, z1, x2, z2), signs)
    ]
    return TwoQubitTableau.from_generators(*gens)


def sample_class_tableau(lc_class: str, rng: np.random.Generator) -> TwoQubitTableau:
    """Uniform tableau restricted to one LC class, by rejection."""
    if lc_class not in LC_CLASSES:
        raise ValueError(f"unknown LC class {lc_class!r}")
    while True:
        t = sample_tableau(rng)
        if classify_lc(t) == lc_class:
            return t


def layer_bonds(n: int, layer: int) -> list[tuple[int, int]]:
    """Bonds of one brickwork layer on a ring of n (even) sites.

    Layer 1 couples (0,1), (2,3), ...; layer 2 couples (1,2), (3,4), ...,
    (n-1, 0).
    """
    if n < 2 or n % 2:
        raise ValueError(f"brickwork needs an even number of sites, got {n}")
    if layer == 1:
        return [(j, j + 1) for j in range(0, n, 2)]
    if layer == 2:
        return [(j, (j + 1) % n) for j in range(1, n, 2)]
    raise ValueError(f"layer must be 1 or 2, got {layer}")


@dataclass(frozen=True)
class CliffordCircuit:
    """One brickwork period: two layers of two-qubit tableaux on a ring."""

    n: int
    layer1: tuple[TwoQubitTableau, ...]
    layer2: tuple[TwoQubitTableau, ...]

    def __post_init__(self) -> None:
        if self.n % 2 or self.n < 2:
            raise ValueError(f"n must be even and positive, got {self.n}")
        if len(self.layer1) != self.n // 2 or len(self.layer2) != self.n // 2:
            raise ValueError("each layer needs one gate per bond (n/2 gates)")

    def layer_gates(self, layer: int) -> list[tuple[tuple[int, int], TwoQubitTableau]]:
        gates = self.layer1 if layer == 1 else self.layer2
        return list(zip(layer_bonds(self.n, layer), gates))

    def conjugate_string(self, s: PauliString) -> PauliString:
        """Conjugate a Pauli string through both layers (layer 1 first)."""
        if s.n != self.n:
            raise ValueError(f"string has {s.n} sites, circuit has {self.n}")
        for layer in (1, 2):
            s = self._conjugate_layer(s, layer)
        return s

    def _conjugate_layer(self, s: PauliString, layer: int) -> PauliString:
        x = z = 0
        sign = s.sign
        for (a, b), gate in self.layer_gates(layer):
            pair = (
                ((s.x_bits >> a) & 1)
                + 2 * ((s.z_bits >> a) & 1)
                + 4 * (((s.x_bits >> b) & 1) + 2 * ((s.z_bits >> b) & 1))
            )
            img, sgn = gate.images[pair]
            lo, hi = img & 3, img >> 2
            x |= (lo & 1) << a | (hi & 1) << b
            z |= (lo >> 1) << a | (hi >> 1) << b
            sign *= sgn
        return PauliString(s.n, x, z, sign)

    def layer_permutation(self, layer: int) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized action of one layer on all 4^n basis indices.

        Returns (perm, sign) with perm[i] = index of the conjugated string
        and sign[i] in {+1, -1}; both arrays have length 4^n.
        """
        size = 4**self.n
        perm = np.zeros(size, dtype=np.int64)
        sign = np.ones(size, dtype=np.float64)
        base = np.arange(size, dtype=np.int64)
        for (a, b), gate in self.layer_gates(layer):
            lut_idx = np.empty(16, dtype=np.int64)
            lut_sgn = np.empty(16, dtype=np.float64)
            for p, (img, sgn) in enumerate(gate.images):
                lut_idx[p] = img
                lut_sgn[p] = sgn
            pair = ((base >> (2 * a)) & 3) | (((base >> (2 * b)) & 3) << 2)
            img = lut_idx[pair]
            perm += ((img & 3) << (2 * a)) + ((img >> 2) << (2 * b))
            sign *= lut_sgn[pair]
        return perm, sign


def conjugate_through_circuit(s: PauliString, c: CliffordCircuit) -> PauliString:
    return c.conjugate_string(s)


def fixed_brickwork(n: int) -> CliffordCircuit:
    """Brickwork of the fixed entangling gate on every bond."""
    g = fixed_gate_tableau()
    return CliffordCircuit(n, (g,) * (n // 2), (g,) * (n // 2))


def sampled_brickwork(
    n: int,
    rng: np.random.Generator,
    lc_class: str | None = None,
) -> CliffordCircuit:
    """Brickwork with independent uniform gates, optionally class-restricted."""
    def draw() -> TwoQubitTableau:
        if lc_class is None:
            return sample_tableau(rng)
        return sample_class_tableau(lc_class, rng)

    return CliffordCircuit(
        n,
        tuple(draw() for _ in range(n // 2)),
        tuple(draw() for _ in range(n // 2)),
    )


def undoped_gap(n: int, gamma: float) -> float:
    """Exact relaxation gap of the undoped fixed-gate model: n * gamma / 2."""
    if n % 2 or n < 2:
        raise ValueError(f"n must be even and positive, got {n}")
    if gamma < 0:
        raise ValueError(f"damping rate must be nonnegative, got {gamma}")
    return n * gamma / 2.0
