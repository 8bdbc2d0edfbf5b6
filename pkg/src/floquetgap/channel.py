"""The dissipative Floquet period map and its relaxation-gap estimators.

One period acts on a real coefficient vector over the 4^n Pauli basis as

    damping . rotations_2 . clifford_layer_2 . rotations_1 . clifford_layer_1

where the Clifford layers are the fixed-gate brickwork, the rotation layers
apply independent Haar single-qubit rotations on the doped sites, and the
damping multiplies each basis coefficient by exp(-gamma * weight).  The
symmetrized variant splits the damping as exp(-gamma w / 2) before and
after the unitary stages; it is similar to the plain variant and has the
same spectrum.  The identity coefficient is preserved exactly and the gap
is read off the traceless sector:

    gap = -log(largest multiplier magnitude).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.csgraph
import scipy.sparse.linalg

from .cliffords import fixed_brickwork
from .patterns import DopingPattern
from .rotations import SingleQubitRotation, sample_rotation

__all__ = [
    "FloquetSpec",
    "HaarRealization",
    "GapEstimate",
    "EnsembleGapResult",
    "EigenmodeWeights",
    "apply_channel",
    "dense_matrix",
    "dense_gap",
    "power_gap",
    "ensemble_gap",
    "gap_eigenmode_weights",
    "realization_for",
    "weights_vector",
    "MAX_DENSE_DIMENSION",
    "MAX_POWER_QUBITS",
]

MAX_DENSE_DIMENSION = 4096
MAX_POWER_QUBITS = 12

# site digits are (I, X, Z, Y); rotations act on axes (X, Y, Z)
_AXIS_OF_DIGIT = (None, 0, 2, 1)

Seed = "int | tuple[int, ...]"


@dataclass(frozen=True)
class FloquetSpec:
    """Configuration of one dissipative Floquet model instance.

    ``haar_seed`` may be an int or a tuple of nonnegative ints; tuples are
    used by the ensemble driver to derive independent child realizations
    deterministically.
    """

    n: int
    gamma: float
    pattern: DopingPattern
    haar_seed: int | tuple[int, ...] = 0
    resample_each_period: bool = False
    symmetrized: bool = False

    def __post_init__(self) -> None:
        if self.n < 2 or self.n % 2:
            raise ValueError(f"n must be even and >= 2, got {self.n}")
        if self.pattern.n != self.n:
            raise ValueError(
                f"pattern is on {self.pattern.n} sites but spec has n={self.n}"
            )
        if not (self.gamma >= 0):
            raise ValueError(f"damping rate must be nonnegative, got {self.gamma}")
        for part in self._seed_tuple():
            if not isinstance(part, int) or part < 0:
                raise ValueError("haar_seed must be a nonnegative int or tuple")

    def _seed_tuple(self) -> tuple[int, ...]:
        if isinstance(self.haar_seed, tuple):
            return self.haar_seed
        return (self.haar_seed,)

    def entropy_for_period(self, period_index: int) -> tuple[int, ...]:
        if self.resample_each_period:
            return self._seed_tuple() + (period_index,)
        return self._seed_tuple()


@dataclass(frozen=True)
class HaarRealization:
    """Rotations drawn for one period (or for all periods when quenched).

    Draw order is fixed: layer 1 over doped sites ascending, then layer 2,
    all from a single generator seeded by the spec entropy.
    """

    n: int
    doped_sites: tuple[int, ...]
    layer1: tuple[SingleQubitRotation, ...]
    layer2: tuple[SingleQubitRotation, ...]

    def rotation(self, layer: int, site: int) -> SingleQubitRotation:
        pos = self.doped_sites.index(site)
        return (self.layer1 if layer == 1 else self.layer2)[pos]


def realization_for(spec: FloquetSpec, period_index: int = 0) -> HaarRealization:
    rng = np.random.default_rng(
        np.random.SeedSequence(spec.entropy_for_period(period_index))
    )
    doped = spec.pattern.doped_sites
    layer1 = tuple(sample_rotation(rng) for _ in doped)
    layer2 = tuple(sample_rotation(rng) for _ in doped)
    return HaarRealization(spec.n, doped, layer1, layer2)


@lru_cache(maxsize=8)
def _layer_perms(n: int):
    circuit = fixed_brickwork(n)
    return circuit.layer_permutation(1), circuit.layer_permutation(2)


@lru_cache(maxsize=8)
def weights_vector(n: int) -> np.ndarray:
    """Pauli weight of every basis index, as uint8 of length 4^n."""
    idx = np.arange(4**n, dtype=np.int64)
    w = np.zeros(4**n, dtype=np.uint8)
    for j in range(n):
        w += (((idx >> (2 * j)) & 3) != 0).astype(np.uint8)
    return w


@lru_cache(maxsize=32)
def _damping_factors(n: int, gamma: float, halved: bool) -> np.ndarray:
    w = weights_vector(n).astype(np.float64)
    scale = 0.5 if halved else 1.0
    return np.exp(-gamma * scale * w)


def _rotation_matrix4(rot: SingleQubitRotation) -> np.ndarray:
    m = np.zeros((4, 4))
    m[0, 0] = 1.0
    for di in (1, 2, 3):
        for dj in (1, 2, 3):
            m[di, dj] = rot.r[_AXIS_OF_DIGIT[di], _AXIS_OF_DIGIT[dj]]
    return m


@lru_cache(maxsize=64)
def _quenched_kernel(spec: FloquetSpec):
    return _build_kernel(spec, realization_for(spec, 0))


def _build_kernel(spec: FloquetSpec, real: HaarRealization):
    (perm1, sign1), (perm2, sign2) = _layer_perms(spec.n)
    rot1 = [
        (site, _rotation_matrix4(r)) for site, r in zip(real.doped_sites, real.layer1)
    ]
    rot2 = [
        (site, _rotation_matrix4(r)) for site, r in zip(real.doped_sites, real.layer2)
    ]
    damp = _damping_factors(spec.n, spec.gamma, spec.symmetrized)
    return perm1, sign1, perm2, sign2, rot1, rot2, damp


def _kernel_for(spec: FloquetSpec, period_index: int):
    if spec.resample_each_period:
        return _build_kernel(spec, realization_for(spec, period_index))
    return _quenched_kernel(spec)


def _permute(v: np.ndarray, perm: np.ndarray, sign: np.ndarray) -> np.ndarray:
    out = np.empty_like(v)
    if v.ndim == 1:
        out[perm] = sign * v
    else:
        out[perm] = sign[:, None] * v
    return out


def _rotate_site(v: np.ndarray, site: int, m4: np.ndarray, n: int) -> np.ndarray:
    inner = 4**site
    outer = 4 ** (n - site - 1)
    if v.ndim == 1:
        view = v.reshape(outer, 4, inner)
        return np.einsum("ab,obi->oai", m4, view).reshape(v.shape)
    batch = v.shape[1]
    view = v.reshape(outer, 4, inner, batch)
    return np.einsum("ab,obic->oaic", m4, view).reshape(v.shape)


def _scale(v: np.ndarray, factors: np.ndarray) -> np.ndarray:
    if v.ndim == 1:
        return v * factors
    return v * factors[:, None]


def apply_channel(
    spec: FloquetSpec, state: np.ndarray, period_index: int = 0
) -> np.ndarray:
    """Apply one Floquet period to a coefficient vector (or column batch).

    The input is not modified.  Accepts shape (4^n,) or (4^n, batch), real
    or complex.
    """
    v = np.asarray(state)
    if v.shape[0] != 4**spec.n:
        raise ValueError(
            f"state has leading dimension {v.shape[0]}, expected 4^{spec.n}"
        )
    perm1, sign1, perm2, sign2, rot1, rot2, damp = _kernel_for(spec, period_index)
    if spec.symmetrized:
        v = _scale(v, damp)
    v = _permute(v, perm1, sign1)
    for site, m4 in rot1:
        v = _rotate_site(v, site, m4, spec.n)
    v = _permute(v, perm2, sign2)
    for site, m4 in rot2:
        v = _rotate_site(v, site, m4, spec.n)
    v = _scale(v, damp)
    return v


@dataclass(frozen=True)
class GapEstimate:
    """Relaxation gap estimate together with how it was obtained."""

    delta: float
    method: str
    iterations: int
    residual: float
    converged: bool
    spectrum_head: tuple[float, ...] | None = None
    weight_histogram: dict[int, float] | None = None


def dense_matrix(spec: FloquetSpec, period_index: int = 0) -> np.ndarray:
    """Full 4^n x 4^n period map, assembled column by column."""
    dim = 4**spec.n
    if dim > MAX_DENSE_DIMENSION:
        raise ValueError(
            f"dense period map would be {dim}x{dim}; limit is "
            f"{MAX_DENSE_DIMENSION} columns, use the power method instead"
        )
    out = np.empty((dim, dim))
    chunk = 256
    for start in range(0, dim, chunk):
        stop = min(start + chunk, dim)
        basis = np.zeros((dim, stop - start))
        basis[np.arange(start, stop), np.arange(stop - start)] = 1.0
        out[:, start:stop] = apply_channel(spec, basis, period_index)
    return out


def dense_gap(spec: FloquetSpec) -> GapEstimate:
    """Exact gap from the full spectrum of the traceless sector.

    The sector matrix is block-triangularized by strongly connected
    components first, so sparse instances (undoped or lightly doped) cost
    far less than one big eigendecomposition.
    """
    if spec.resample_each_period:
        raise ValueError(
            "dense spectrum needs a fixed period map; "
            "per-period resampling has none"
        )
    m = dense_matrix(spec)
    if not (m[0, 1:] == 0.0).all() or m[0, 0] != 1.0:
        raise AssertionError("identity row is not exactly preserved")
    t = m[1:, 1:]
    del m
    eigs = _spectrum_by_components(t)
    mags = np.abs(eigs)
    head = tuple(float(x) for x in np.sort(mags)[::-1][:16])
    top = float(mags.max())
    if top == 0.0:
        delta = math.inf
    else:
        assert top < 1.0 + 1e-9, f"traceless multiplier {top} above 1"
        delta = max(0.0, -math.log(top))
    return GapEstimate(
        delta=delta,
        method="dense",
        iterations=0,
        residual=0.0,
        converged=True,
        spectrum_head=head,
    )


def _spectrum_by_components(t: np.ndarray) -> np.ndarray:
    graph = scipy.sparse.csr_matrix(t != 0.0)
    n_comp, labels = scipy.sparse.csgraph.connected_components(
        graph, directed=True, connection="strong"
    )
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
    eigs: list[np.ndarray] = []
    singles: list[float] = []
    for c in range(n_comp):
        members = order[bounds[c] : bounds[c + 1]]
        if members.size == 1:
            i = int(members[0])
            singles.append(t[i, i])
        else:
            sub = t[np.ix_(members, members)]
            eigs.append(scipy.linalg.eigvals(sub))
    eigs.append(np.asarray(singles, dtype=complex))
    return np.concatenate(eigs)


def power_gap(
    spec: FloquetSpec,
    max_periods: int = 5000,
    tolerance: float = 1e-8,
    window: int = 60,
) -> GapEstimate:
    """Gap from the asymptotic decay rate of a generic traceless vector.

    The vector is renormalized every period and the log-norms accumulated.
    Several windowed estimates run side by side and any may declare
    convergence:

    * the windowed slope (L_t - L_{t-window}) / window, exact once the
      dominant multiplier family consists of root-of-unity phases whose
      periods divide the window (the undoped multiplets here have periods
      2 and 4; the default window of 60 covers them with slack);
    * least-squares fits of an order-m linear recurrence on the latest
      iterates (m in FIT_ORDERS), whose companion roots recover the
      dominant magnitude for up to m dominant roots.  Order 2 handles the
      generic simple-root or complex-pair case; order 4 additionally
      handles the ring-translation families of doped chains, whose
      dominant block consists of p-th roots of a loop product (a near
      tie of p equal magnitudes that neither the slope nor the order-2
      fit can settle).

    A route converges when its estimates vary less than the effective
    tolerance over a full window (fit routes additionally require their
    residual below it, and agreement with the coarse slope).  The
    effective tolerance is tolerance * max(1, |estimate|): tied
    multiplier families split only at a relative scale, so a large gap
    cannot be pinned to a finer absolute precision.  Non-convergence
    returns the current estimate flagged, never raises.
    """
    if spec.n > MAX_POWER_QUBITS:
        raise ValueError(
            f"power method refused for n={spec.n} (> {MAX_POWER_QUBITS}); "
            "the state vector alone would be too large"
        )
    if window < 1 or max_periods < 2 * window:
        raise ValueError("need max_periods >= 2 * window and window >= 1")
    dim = 4**spec.n
    v = np.ones(dim)
    v[0] = 0.0
    v /= np.linalg.norm(v)
    history: deque[np.ndarray] = deque(maxlen=FIT_ORDERS[-1] + 1)
    step_ratios: deque[float] = deque(maxlen=FIT_ORDERS[-1])
    history.append(v)
    log_norms = [0.0]
    slope_estimates: deque[float] = deque(maxlen=window)
    fit_estimates = {m: deque(maxlen=window) for m in FIT_ORDERS}
    slope_spread = math.inf
    fit_spreads = {m: math.inf for m in FIT_ORDERS}
    fit_residuals = {m: math.inf for m in FIT_ORDERS}
    for t in range(1, max_periods + 1):
        v = apply_channel(spec, history[-1], period_index=t - 1)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            return GapEstimate(
                delta=math.inf,
                method="power",
                iterations=t,
                residual=0.0,
                converged=True,
            )
        v = v / norm
        history.append(v)
        step_ratios.append(norm)
        log_norms.append(log_norms[-1] + math.log(norm))
        coarse = None
        if t >= window:
            coarse = (log_norms[t] - log_norms[t - window]) / window
        if t >= 2 * window:
            slope_estimates.append(coarse)
            if len(slope_estimates) == window:
                slope_spread = max(slope_estimates) - min(slope_estimates)
                if slope_spread < tolerance * max(1.0, abs(coarse)):
                    return GapEstimate(
                        delta=max(0.0, -coarse),
                        method="power",
                        iterations=t,
                        residual=slope_spread,
                        converged=True,
                    )
        if t < window:
            continue
        for order in FIT_ORDERS:
            if len(step_ratios) < order:
                continue
            est, resid = _recurrence_fit(history, step_ratios, order)
            fit_residuals[order] = resid
            if est is None:
                continue
            estimates = fit_estimates[order]
            estimates.append(est)
            if len(estimates) < window:
                continue
            effective = tolerance * max(1.0, abs(est))
            fit_spreads[order] = max(estimates) - min(estimates)
            if (
                resid < effective
                and fit_spreads[order] < effective
                and abs(est - coarse) <= 0.1 * max(1.0, abs(coarse))
            ):
                return GapEstimate(
                    delta=max(0.0, -est),
                    method="power",
                    iterations=t,
                    residual=max(fit_spreads[order], resid),
                    converged=True,
                )
    if slope_estimates:
        est = slope_estimates[-1]
        residual = slope_spread
    else:
        candidates = [
            (fit_estimates[m][-1], max(fit_spreads[m], fit_residuals[m]))
            for m in FIT_ORDERS
            if fit_estimates[m]
        ]
        if candidates:
            est, residual = min(candidates, key=lambda c: c[1])
        else:
            est, residual = math.nan, math.inf
    return GapEstimate(
        delta=max(0.0, -est) if not math.isnan(est) else math.nan,
        method="power",
        iterations=max_periods,
        residual=residual,
        converged=False,
    )


@dataclass(frozen=True)
class AnnealedGapEstimate:
    """Time-averaged decay rate of a channel resampled every period."""

    delta: float
    stderr: float
    periods: int
    window_count: int


def annealed_gap(
    spec: FloquetSpec,
    periods: int = 2000,
    window: int = 60,
) -> AnnealedGapEstimate:
    """Decay rate of a resampled channel as a long-run time average.

    With fresh rotations every period there is no fixed multiplier for the
    power iteration to settle on; the decay rate is the ergodic average of
    the per-period log contraction.  After dropping one window as burn-in,
    the per-window slopes act as roughly independent samples whose mean
    gives the rate and whose spread gives a standard error.
    """
    if not spec.resample_each_period:
        raise ValueError("annealed_gap needs a spec with resample_each_period")
    if spec.n > MAX_POWER_QUBITS:
        raise ValueError(
            f"annealed route refused for n={spec.n} (> {MAX_POWER_QUBITS}); "
            "the state vector alone would be too large"
        )
    if window < 2 or periods < 3 * window:
        raise ValueError("need periods >= 3 * window and window >= 2")
    dim = 4**spec.n
    v = np.ones(dim)
    v[0] = 0.0
    v /= np.linalg.norm(v)
    log_norms = [0.0]
    for t in range(periods):
        v = apply_channel(spec, v, period_index=t)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            return AnnealedGapEstimate(
                delta=math.inf, stderr=0.0, periods=t + 1, window_count=0
            )
        v = v / norm
        log_norms.append(log_norms[-1] + math.log(norm))
    count = (periods - window) // window
    slopes = [
        (log_norms[window * (j + 2)] - log_norms[window * (j + 1)]) / window
        for j in range(count)
    ]
    arr = np.asarray(slopes)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return AnnealedGapEstimate(
        delta=max(0.0, -mean),
        stderr=stderr,
        periods=periods,
        window_count=count,
    )


FIT_ORDERS = (2, 4)


def _recurrence_fit(
    history: deque[np.ndarray],
    step_ratios: deque[float],
    order: int,
) -> tuple[float | None, float]:
    """Fit  A^m u = sum_j a_j A^j u  on the latest m + 1 unit iterates.

    With A units[i] = ratios[i] * units[i + 1] the scaled iterates are
    w_j = (prod_{i<j} ratios[i]) * units[j]; the fit runs on the unit
    directions for conditioning and the coefficients are rescaled to the
    monic polynomial x^m - sum a_j x^j afterwards.  Its companion roots
    recover up to m dominant multipliers.  Returns (log max |root|,
    relative residual); (None, inf) when the system is degenerate or the
    top root is an artifact (multipliers of the dissipative period map
    cannot exceed one).
    """
    units = list(history)[-(order + 1):]
    ratios = list(step_ratios)[-order:]
    cols = np.stack(units[:-1], axis=1)
    target = units[-1]
    coef, _, _, _ = np.linalg.lstsq(cols, target, rcond=None)
    residual = float(np.linalg.norm(cols @ coef - target))
    a = np.empty(order)
    acc = 1.0
    for j in range(order - 1, -1, -1):
        acc *= ratios[j]
        a[j] = coef[j] * acc
    if not np.all(np.isfinite(a)):
        return None, math.inf
    roots = np.roots(np.concatenate(([1.0], -a[::-1])))
    top = float(np.abs(roots).max()) if roots.size else 0.0
    if top <= 0.0 or top > 1.0 + 1e-6:
        return None, math.inf
    return math.log(top), residual


@dataclass(frozen=True)
class EnsembleGapResult:
    """Mean gap over independent Haar realizations."""

    mean: float
    stderr: float
    deltas: tuple[float, ...]
    realizations: int
    converged_count: int
    failed_count: int


def ensemble_gap(
    spec: FloquetSpec,
    realizations: int,
    method: str = "power",
    **method_kwargs,
) -> EnsembleGapResult:
    """Mean and standard error of the gap over independent realizations.

    The spec's haar_seed acts as the master seed; realization r runs with
    haar_seed (master..., r), giving a deterministic, collision-free
    derivation.  Realizations whose estimate does not converge are counted
    as failures and excluded from the statistics.
    """
    if realizations < 1:
        raise ValueError("need at least one realization")
    if method not in ("power", "dense"):
        raise ValueError(f"unknown ensemble method {method!r}")
    deltas = []
    failed = 0
    for r in range(realizations):
        child = replace(spec, haar_seed=spec._seed_tuple() + (r,))
        if method == "dense":
            est = dense_gap(child)
        else:
            est = power_gap(child, **method_kwargs)
        if est.converged and math.isfinite(est.delta):
            deltas.append(est.delta)
        else:
            failed += 1
    if not deltas:
        raise RuntimeError(
            f"all {realizations} realizations failed to produce a gap"
        )
    arr = np.asarray(deltas)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return EnsembleGapResult(
        mean=mean,
        stderr=stderr,
        deltas=tuple(deltas),
        realizations=realizations,
        converged_count=len(deltas),
        failed_count=failed,
    )


@dataclass(frozen=True)
class EigenmodeWeights:
    """Weight distribution of the slowest traceless eigenmode(s)."""

    histogram: dict[int, float]
    multiplier_magnitude: float
    delta: float
    degenerate: bool
    group_size: int


def gap_eigenmode_weights(
    spec: FloquetSpec,
    k: int = 16,
    magnitude_rel_tol: float = 1e-6,
) -> EigenmodeWeights:
    """Weight histogram |c_S|^2 of the slowest mode, via implicit ARPACK.

    When several of the k extremal eigenvalues tie in magnitude within
    magnitude_rel_tol the histogram is averaged over the tied group and
    flagged degenerate.
    """
    if spec.resample_each_period:
        raise ValueError("eigenmodes need a fixed period map")
    dim = 4**spec.n - 1
    k = min(k, dim - 2)
    if k < 1:
        raise ValueError(f"system too small for implicit eigensolver (n={spec.n})")

    def matvec(x: np.ndarray) -> np.ndarray:
        full = np.concatenate(([0.0], x))
        return apply_channel(spec, full)[1:]

    op = scipy.sparse.linalg.LinearOperator(
        (dim, dim), matvec=matvec, dtype=np.float64
    )
    # a fixed random start: symmetric vectors span too small a Krylov space
    # on the permutation-like undoped map and miss degenerate families
    v0 = np.random.default_rng(20240817).normal(size=dim)
    v0 /= np.linalg.norm(v0)
    vals, vecs = scipy.sparse.linalg.eigs(op, k=k, which="LM", v0=v0)
    mags = np.abs(vals)
    top = float(mags.max())
    if top == 0.0:
        raise RuntimeError("all extremal multipliers are zero")
    group = np.where(mags >= (1.0 - magnitude_rel_tol) * top)[0]
    w = weights_vector(spec.n)[1:]
    hist = np.zeros(spec.n + 1)
    for i in group:
        vec = vecs[:, i]
        probs = np.abs(vec) ** 2
        probs /= probs.sum()
        hist += np.bincount(w, weights=probs, minlength=spec.n + 1)
    hist /= group.size
    # drop numerically-zero bins so the histogram reflects real support
    histogram = {
        int(wt): float(p) for wt, p in enumerate(hist) if p > 1e-12
    }
    assert 0 not in histogram, "slowest traceless mode must not touch identity"
    return EigenmodeWeights(
        histogram=histogram,
        multiplier_magnitude=top,
        delta=max(0.0, -math.log(top)),
        degenerate=group.size > 1,
        group_size=int(group.size),
    )
