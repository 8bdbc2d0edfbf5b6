"""Haar-random single-qubit rotations in the Pauli transfer picture.

A rotation is kept as its 3x3 adjoint matrix r acting on Pauli coefficient
vectors in axis order (X, Y, Z):

    U sigma_j U^dag = sum_i r[i, j] sigma_i.

Sampling goes through a uniform quaternion on S^3, which pushes forward to
the Haar measure on SO(3):

    U = w*I + i(x*X + y*Y + z*Z),
    r = (w^2 - |v|^2) I + 2 v v^T - 2 w [v]_x,   v = (x, y, z),

with [v]_x the cross-product matrix.  The quaternion is retained so tests
can rebuild U and cross-check r against the dense 2x2 conjugation oracle.

The module also provides Monte Carlo estimates of two Haar averages of the
model's transfer coefficients, with their closed forms, and the expansion
of an arbitrary rotation over the nine single-site Clifford-conjugation
channels used by averaging arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SingleQubitRotation",
    "HaarLogStats",
    "sample_rotation",
    "rotation_from_quaternion",
    "identity_rotation",
    "mc_log_entry_average",
    "mc_log_bilinear_average",
    "analytic_log_entry_average",
    "analytic_log_bilinear_average",
    "clifford_decompose",
    "reassemble_from_decomposition",
    "decomposition_basis",
    "TINY_ENTRY_GUARD",
]

AXES = "XYZ"

# |entry| below this is treated as a degenerate draw and skipped (counted).
TINY_ENTRY_GUARD = 1e-300


@dataclass(frozen=True, eq=False)
class SingleQubitRotation:
    """SO(3) adjoint of a single-qubit unitary, with its quaternion."""

    r: np.ndarray  # (3, 3) float64, axis order X, Y, Z
    quaternion: tuple[float, float, float, float]  # (w, x, y, z)

    def __post_init__(self) -> None:
        if self.r.shape != (3, 3):
            raise ValueError("adjoint must be 3x3")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SingleQubitRotation):
            return NotImplemented
        return self.quaternion == other.quaternion and np.array_equal(
            self.r, other.r
        )

    def __hash__(self) -> int:
        return hash(self.quaternion)

    def entry(self, out_axis: str, in_axis: str) -> float:
        """r[out, in]: coefficient of `out_axis` in the image of `in_axis`."""
        return float(self.r[AXES.index(out_axis), AXES.index(in_axis)])


def rotation_from_quaternion(
    w: float, x: float, y: float, z: float
) -> SingleQubitRotation:
    norm = math.sqrt(w * w + x * x + y * y + z * z)
    if norm == 0:
        raise ValueError("zero quaternion")
    w, x, y, z = w / norm, x / norm, y / norm, z / norm
    v = np.array([x, y, z])
    cross = np.array(
        [
            [0.0, -z, y],
            [z, 0.0, -x],
            [-y, x, 0.0],
        ]
    )
    r = (w * w - v @ v) * np.eye(3) + 2.0 * np.outer(v, v) - 2.0 * w * cross
    return SingleQubitRotation(r, (w, x, y, z))


def identity_rotation() -> SingleQubitRotation:
    return rotation_from_quaternion(1.0, 0.0, 0.0, 0.0)


def sample_rotation(rng: np.random.Generator) -> SingleQubitRotation:
    """Haar-random rotation via a Gaussian quaternion normalized to S^3."""
    q = rng.normal(size=4)
    while (q @ q) == 0.0:
        q = rng.normal(size=4)
    return rotation_from_quaternion(*q)


@dataclass(frozen=True)
class HaarLogStats:
    """Monte Carlo summary of a Haar log-average."""

    sample_count: int
    mean: float
    stderr: float
    skipped: int
    analytic: float


def _quaternions(rng: np.random.Generator, samples: int) -> np.ndarray:
    q = rng.normal(size=(samples, 4))
    norms = np.linalg.norm(q, axis=1, keepdims=True)
    # a zero row has probability 0; regenerate defensively if it happens
    bad = norms[:, 0] == 0.0
    while bad.any():
        q[bad] = rng.normal(size=(int(bad.sum()), 4))
        norms = np.linalg.norm(q, axis=1, keepdims=True)
        bad = norms[:, 0] == 0.0
    return q / norms


def analytic_log_entry_average() -> float:
    """E[log |r_ij|] over Haar for any fixed entry: exactly -1."""
    return -1.0


def analytic_log_bilinear_average() -> float:
    """E[log |a d + b c|] for the transfer bilinear below: log 2 - 2."""
    return math.log(2.0) - 2.0


def mc_log_entry_average(samples: int, seed: int = 0) -> HaarLogStats:
    """Monte Carlo E[log |r[0, 0]|] (the X -> X adjoint entry).

    Draws with |entry| < TINY_ENTRY_GUARD are skipped and counted instead
    of being allowed to produce -inf.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    q = _quaternions(rng, samples)
    w, x, y, z = q.T
    entry = w * w + x * x - y * y - z * z  # r[0, 0]
    keep = np.abs(entry) >= TINY_ENTRY_GUARD
    vals = np.log(np.abs(entry[keep]))
    return _stats(vals, samples, analytic_log_entry_average())


def mc_log_bilinear_average(samples: int, seed: int = 0) -> HaarLogStats:
    """Monte Carlo E[log |u_zz v_yy + u_yz v_xy|] for independent Haar u, v.

    The four factors are adjoint entries of two independent rotations; this
    combination is the one-step transfer coefficient whose Haar average has
    the closed form log 2 - 2.  Degenerate V (identity) collapses it to
    log |u_zz|.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    qu = _quaternions(rng, samples)
    qv = _quaternions(rng, samples)
    wu, xu, yu, zu = qu.T
    wv, xv, yv, zv = qv.T
    u_zz = wu * wu + zu * zu - xu * xu - yu * yu  # r_u[2, 2]
    u_yz = 2 * yu * zu + 2 * wu * xu  # r_u[1, 2]
    v_yy = wv * wv + yv * yv - xv * xv - zv * zv  # r_v[1, 1]
    v_xy = 2 * xv * yv - 2 * wv * zv  # r_v[1, 0]
    val = u_zz * v_yy + u_yz * v_xy
    keep = np.abs(val) >= TINY_ENTRY_GUARD
    vals = np.log(np.abs(val[keep]))
    return _stats(vals, samples, analytic_log_bilinear_average())


def _stats(vals: np.ndarray, samples: int, analytic: float) -> HaarLogStats:
    kept = vals.size
    mean = float(vals.mean()) if kept else math.nan
    stderr = float(vals.std(ddof=1) / math.sqrt(kept)) if kept > 1 else math.inf
    return HaarLogStats(
        sample_count=samples,
        mean=mean,
        stderr=stderr,
        skipped=samples - kept,
        analytic=analytic,
    )


def _cycle_matrix(images: dict[str, tuple[str, int]]) -> np.ndarray:
    m = np.zeros((3, 3))
    for src, (dst, sign) in images.items():
        m[AXES.index(dst), AXES.index(src)] = sign
    return m


# Adjoints of the two single-qubit Cliffords used to reach all nine matrix
# entries: one cycles X -> Z -> Y -> X (all +), the other X -> -Y -> ... .
_CYCLE_XZY = _cycle_matrix({"X": ("Z", 1), "Z": ("Y", 1), "Y": ("X", 1)})
_CYCLE_XYZ = _cycle_matrix({"X": ("Y", -1), "Y": ("Z", -1), "Z": ("X", 1)})

_AXIS_CONJ = {
    "X": np.diag([1.0, -1.0, -1.0]),
    "Y": np.diag([-1.0, 1.0, -1.0]),
    "Z": np.diag([-1.0, -1.0, 1.0]),
}


def decomposition_basis() -> dict[tuple[str, str], np.ndarray]:
    """Nine basis channels: sigma-conjugations, alone and composed with the
    two 3-cycle Cliffords.  Keys are (family, axis) with family in
    {"plain", "cycle_xyz", "cycle_xzy"}.

    Their supports partition the nine matrix entries (diagonal plus the two
    permutation patterns), so expansion coefficients are unique.
    """
    basis = {}
    for axis in AXES:
        d = _AXIS_CONJ[axis]
        basis[("plain", axis)] = d
        basis[("cycle_xyz", axis)] = _CYCLE_XYZ @ d
        basis[("cycle_xzy", axis)] = _CYCLE_XZY @ d
    return basis


def clifford_decompose(rotation: SingleQubitRotation) -> dict[tuple[str, str], float]:
    """Expand the adjoint over the nine Clifford-conjugation channels.

    Solves the 9x9 linear system vec(r) = B coeffs; because the basis
    supports are disjoint the system is nonsingular and each coefficient is
    a signed matrix entry combination.
    """
    basis = decomposition_basis()
    keys = sorted(basis)
    b = np.stack([basis[k].reshape(9) for k in keys], axis=1)
    coeffs = np.linalg.solve(b, rotation.r.reshape(9))
    return {k: float(c) for k, c in zip(keys, coeffs)}


def reassemble_from_decomposition(
    coeffs: dict[tuple[str, str], float],
) -> np.ndarray:
    basis = decomposition_basis()
    out = np.zeros((3, 3))
    for k, c in coeffs.items():
        out += c * basis[k]
    return out
