"""Weight-truncated period maps and what they certify.

Projecting the period map onto the span of Pauli strings with weight at
most w_t splits the analysis in two.  Structurally, the support graph of
the projected map depends only on the doping pattern: doped-site
rotations are treated as generic full 3x3 mixings, so an edge means "the
transition coefficient is nonzero for almost every draw".  Numerically,
the projected matrix for a fixed realization is extracted column by
column from the exact channel.  An acyclic support graph certifies that
the projected map is nilpotent, which feeds the truncation lower bound
on the gap; translation loops that survive the projection instead give
exact product formulas for the gap at strong damping.

Orientation note for the motif table: its strings and windows are
written in the left-propagating orientation (a motif steps two sites
toward lower site numbers per period).  The brickwork in this package
realizes the mirror image, stepping two sites toward higher numbers, so
direct evolution reproduces the table with every literal reversed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .channel import (
    FloquetSpec,
    HaarRealization,
    _layer_perms,
    apply_channel,
    realization_for,
    weights_vector,
)

__all__ = [
    "TRUNCATED_NODE_CEILING",
    "MAX_TRUNCATED_QUBITS",
    "NUMERIC_NODE_LIMIT",
    "MAX_MOTIF_CONSTANT",
    "TruncatedPropagator",
    "EigenmodeFreeness",
    "BlockSpectralBound",
    "TruncationLowerBound",
    "ProductFormulaGap",
    "TransitionGroup",
    "TransitionRule",
    "CutoffReport",
    "truncated_node_count",
    "truncated_node_indices",
    "build_truncated",
    "is_eigenmode_free",
    "feingold_varga_bound",
    "gap_lower_bound_from_truncation",
    "largest_eigenmode_free_cutoff",
    "fully_doped_formula",
    "fully_doped_thermodynamic_gap",
    "staggered_formula",
    "staggered_thermodynamic_gap",
    "staggered_like_upper_bound",
    "dense_upper_bound",
    "staggered_like_transition_table",
]

TRUNCATED_NODE_CEILING = 200_000
MAX_TRUNCATED_QUBITS = 12
NUMERIC_NODE_LIMIT = 4096

# largest per-motif constant over staggered-like return motifs whose
# dissipation slope exceeds 2 gamma; strictly below the uniform 3
MAX_MOTIF_CONSTANT = (10.0 - 2.0 * math.log(2.0)) / 3.0


@dataclass(eq=False)
class TruncatedPropagator:
    """The period map projected onto strings of weight <= w_t.

    node_indices lists the basis indices of all nontrivial strings with
    weight up to w_t, ascending.  adjacency[u, v] is nonzero when one
    period can map node u onto node v with a generically nonzero
    coefficient.  numeric_map, when present, holds the exact projected
    matrix for the spec's realization with columns as sources
    (numeric_map[:, j] is the projected image of node j).
    """

    spec: FloquetSpec
    w_t: int
    node_indices: np.ndarray
    adjacency: scipy.sparse.csr_matrix
    numeric_map: np.ndarray | None

    @property
    def node_count(self) -> int:
        return int(self.node_indices.size)


def truncated_node_count(n: int, w_t: int) -> int:
    """Number of nontrivial strings on n sites with weight <= w_t."""
    return sum(math.comb(n, w) * 3**w for w in range(1, w_t + 1))


def truncated_node_indices(n: int, w_t: int) -> np.ndarray:
    """Sorted basis indices of all nontrivial strings with weight <= w_t."""
    w = weights_vector(n)
    return np.nonzero((w >= 1) & (w <= w_t))[0].astype(np.int64)


def _wildcard_doped(arr: np.ndarray, doped_sites: tuple[int, ...]) -> np.ndarray:
    """Expand every nontrivial letter on a doped site to all of X, Y, Z.

    This is the support of a generic 3x3 rotation acting on that site.
    """
    for site in doped_sites:
        shift = 2 * site
        digit = (arr >> shift) & 3
        moving = digit != 0
        if not moving.any():
            continue
        base = arr[moving] - (digit[moving] << shift)
        arr = np.concatenate(
            [
                arr[~moving],
                base + (1 << shift),
                base + (2 << shift),
                base + (3 << shift),
            ]
        )
    return arr


def build_truncated(
    spec: FloquetSpec, w_t: int, with_numeric: bool | None = None
) -> TruncatedPropagator:
    """Construct the support graph and, when feasible, the numeric map.

    with_numeric=None fills the numeric map automatically when the spec
    is quenched and the sector is small enough; True insists (raising
    when impossible); False skips it.
    """
    n = spec.n
    if not 0 <= w_t <= n:
        raise ValueError(f"cutoff w_t={w_t} outside 0..{n}")
    if n > MAX_TRUNCATED_QUBITS:
        raise ValueError(
            f"truncated build refused for n={n} (> {MAX_TRUNCATED_QUBITS}); "
            "the permutation tables alone would be too large"
        )
    count = truncated_node_count(n, w_t)
    if count > TRUNCATED_NODE_CEILING:
        raise ValueError(
            f"truncated sector has {count} strings, over the ceiling "
            f"{TRUNCATED_NODE_CEILING}"
        )
    nodes = truncated_node_indices(n, w_t)
    (perm1, _), (perm2, _) = _layer_perms(n)
    w_vec = weights_vector(n)
    doped = spec.pattern.doped_sites

    indptr = np.zeros(nodes.size + 1, dtype=np.int64)
    cols: list[np.ndarray] = []
    for i, idx in enumerate(nodes):
        arr = perm1[np.array([idx], dtype=np.int64)]
        arr = _wildcard_doped(arr, doped)
        arr = perm2[arr]
        arr = _wildcard_doped(arr, doped)
        arr = np.unique(arr)
        arr = arr[w_vec[arr] <= w_t]
        cols.append(np.searchsorted(nodes, arr))
        indptr[i + 1] = indptr[i] + arr.size
    col_idx = (
        np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    )
    adjacency = scipy.sparse.csr_matrix(
        (np.ones(col_idx.size, dtype=np.int8), col_idx, indptr),
        shape=(nodes.size, nodes.size),
    )

    numeric = None
    can_numeric = (
        not spec.resample_each_period and nodes.size <= NUMERIC_NODE_LIMIT
    )
    if with_numeric is True and not can_numeric:
        raise ValueError(
            "numeric map unavailable: needs a quenched spec and at most "
            f"{NUMERIC_NODE_LIMIT} truncated strings"
        )
    if with_numeric is not False and can_numeric and nodes.size:
        numeric = np.empty((nodes.size, nodes.size))
        dim = 4**n
        chunk = 256
        for start in range(0, nodes.size, chunk):
            batch_nodes = nodes[start : start + chunk]
            batch = np.zeros((dim, batch_nodes.size))
            batch[batch_nodes, np.arange(batch_nodes.size)] = 1.0
            image = apply_channel(spec, batch)
            numeric[:, start : start + batch_nodes.size] = image[nodes, :]
    return TruncatedPropagator(
        spec=spec,
        w_t=w_t,
        node_indices=nodes,
        adjacency=adjacency,
        numeric_map=numeric,
    )


@dataclass(frozen=True)
class EigenmodeFreeness:
    """Nilpotency verdict for a truncated propagator.

    certified is the structural (pattern-only) verdict: the support
    graph is acyclic.  When certified, topological_order lists the node
    basis indices in dependency order; otherwise cycle holds a closed
    walk of basis indices (first node repeated at the end) as a
    counterexample.  For a quenched realization with a numeric map,
    numeric_nilpotent reports whether the projected matrix to the power
    nilpotency_power vanishes exactly.
    """

    certified: bool
    topological_order: tuple[int, ...] | None
    cycle: tuple[int, ...] | None
    numeric_nilpotent: bool | None
    nilpotency_power: int | None


def _find_cycle(
    adjacency: scipy.sparse.csr_matrix, remaining: np.ndarray
) -> tuple[int, ...]:
    """Extract one cycle among nodes that survived the peeling pass.

    Every remaining node keeps at least one remaining predecessor, so
    walking predecessors must revisit a node.
    """
    csc = adjacency.tocsc()
    in_remaining = np.zeros(adjacency.shape[0], dtype=bool)
    in_remaining[remaining] = True
    seen: dict[int, int] = {}
    path = [int(remaining[0])]
    seen[path[0]] = 0
    while True:
        current = path[-1]
        preds = csc.indices[csc.indptr[current] : csc.indptr[current + 1]]
        preds = preds[in_remaining[preds]]
        prev = int(preds[0])
        if prev in seen:
            cycle = path[seen[prev] :]
            cycle.reverse()
            return tuple(cycle) + (cycle[0],)
        seen[prev] = len(path)
        path.append(prev)


def is_eigenmode_free(tp: TruncatedPropagator) -> EigenmodeFreeness:
    """Certify that the truncated map has no eigenmodes (is nilpotent).

    Structurally this is acyclicity of the support graph, checked by
    peeling zero-indegree nodes; the surviving order is the certificate.
    With a numeric map present, the projected matrix is additionally
    raised to the node count and required to vanish exactly (structural
    zeros propagate exactly through the channel arithmetic).
    """
    adj = tp.adjacency
    m = adj.shape[0]
    indegree = np.asarray(adj.sum(axis=0)).ravel().astype(np.int64)
    order: list[int] = []
    stack = [i for i in range(m) if indegree[i] == 0]
    while stack:
        u = stack.pop()
        order.append(u)
        row = adj.indices[adj.indptr[u] : adj.indptr[u + 1]]
        for v in row:
            indegree[v] -= 1
            if indegree[v] == 0:
                stack.append(int(v))
    if len(order) < m:
        remaining = np.nonzero(indegree > 0)[0]
        cycle_pos = _find_cycle(adj, remaining)
        cycle = tuple(int(tp.node_indices[p]) for p in cycle_pos)
        return EigenmodeFreeness(
            certified=False,
            topological_order=None,
            cycle=cycle,
            numeric_nilpotent=None,
            nilpotency_power=None,
        )
    topo = tuple(int(tp.node_indices[p]) for p in order)
    numeric_ok = None
    power = None
    if tp.numeric_map is not None and m:
        matrix = scipy.sparse.csr_matrix(tp.numeric_map)
        matrix.eliminate_zeros()
        power = m
        accum = None
        base = matrix
        exponent = m
        while exponent:
            if exponent & 1:
                accum = base if accum is None else accum @ base
                accum.eliminate_zeros()
                if accum.count_nonzero() == 0:
                    break
            exponent >>= 1
            if exponent:
                base = base @ base
                base.eliminate_zeros()
        numeric_ok = accum is not None and accum.count_nonzero() == 0
    elif tp.numeric_map is not None:
        numeric_ok = True
        power = 0
    return EigenmodeFreeness(
        certified=True,
        topological_order=topo,
        cycle=None,
        numeric_nilpotent=numeric_ok,
        nilpotency_power=power,
    )


@dataclass(frozen=True)
class BlockSpectralBound:
    """Spectral-radius bounds for [[A, B], [C, D]] with nilpotent A."""

    coarse: float
    sharp: float


def feingold_varga_bound(
    rho_d: float, norm_b: float, norm_c: float
) -> BlockSpectralBound:
    """Bound the spectral radius of a 2x2 block matrix with nilpotent A.

    For K = [[A, B], [C, D]] with A nilpotent and any induced norm, the
    coarse bound is rho(D) + sqrt(|B| |C|) and the sharp intermediate
    form is (rho(D) + sqrt(rho(D)^2 + 4 |B| |C|)) / 2.
    """
    if rho_d < 0 or norm_b < 0 or norm_c < 0:
        raise ValueError("block bounds need nonnegative inputs")
    product = norm_b * norm_c
    coarse = rho_d + math.sqrt(product)
    sharp = (rho_d + math.sqrt(rho_d**2 + 4.0 * product)) / 2.0
    return BlockSpectralBound(coarse=coarse, sharp=sharp)


@dataclass(frozen=True)
class TruncationLowerBound:
    """Certified lower bound (w/2 + 1) * gamma from an empty cutoff sector."""

    value: float
    cutoff: int
    certificate: EigenmodeFreeness | None
    strong_dissipation: bool


def gap_lower_bound_from_truncation(
    spec: FloquetSpec, w: int, strong_dissipation: bool = False
) -> TruncationLowerBound:
    """Gap lower bound (w/2 + 1) * gamma once cutoff w is eigenmode-free.

    The certificate is established here by building the truncated
    support graph; an uncertifiable cutoff is refused.  The caller
    asserts the strong-dissipation context (exp(-w gamma / 2) small)
    through the flag, which is recorded on the result.
    """
    if w < 0:
        raise ValueError("cutoff must be nonnegative")
    certificate = None
    if w >= 1:
        tp = build_truncated(spec, w, with_numeric=False)
        certificate = is_eigenmode_free(tp)
        if not certificate.certified:
            raise ValueError(
                f"cutoff {w} is not eigenmode-free for this pattern; "
                f"counterexample cycle through node {certificate.cycle[0]}"
            )
    return TruncationLowerBound(
        value=(w / 2.0 + 1.0) * spec.gamma,
        cutoff=w,
        certificate=certificate,
        strong_dissipation=strong_dissipation,
    )


@dataclass(frozen=True)
class CutoffReport:
    """Largest structurally certified cutoff for a pattern."""

    largest_certified: int
    clean_sites: int
    clean_ratio: float


def largest_eigenmode_free_cutoff(
    spec: FloquetSpec, max_cutoff: int | None = None
) -> CutoffReport:
    """Scan cutoffs upward and report the last eigenmode-free one.

    The ratio to the clean-site count is reported as measured; no
    universal constant is asserted.
    """
    limit = spec.n if max_cutoff is None else min(max_cutoff, spec.n)
    largest = 0
    for w in range(1, limit + 1):
        tp = build_truncated(spec, w, with_numeric=False)
        if not is_eigenmode_free(tp).certified:
            break
        largest = w
    clean = spec.n - spec.pattern.doped_count
    ratio = largest / clean if clean else math.nan
    return CutoffReport(
        largest_certified=largest, clean_sites=clean, clean_ratio=ratio
    )


@dataclass(frozen=True)
class ProductFormulaGap:
    """Strong-damping gap from a translation-loop coefficient product.

    degenerate marks a draw in which some factor vanished exactly, where
    the product formula loses meaning (a measure-zero event).
    """

    delta: float
    degenerate: bool


def fully_doped_formula(
    realization: HaarRealization, gamma: float
) -> ProductFormulaGap:
    """Exact strong-damping gap of the fully doped ring.

    The weight-1 sector splits into two sublattice translation loops; the
    slower loop sets the gap:

        delta = gamma - (2/n) * max(S_even, S_odd),

    where S collects log |v1_j v2_{j+1}| around one loop and v is the
    Z -> X entry of the corresponding rotation.
    """
    n = realization.n
    if realization.doped_sites != tuple(range(n)):
        raise ValueError("formula needs a fully doped realization")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    v1 = np.array([rot.r[0, 2] for rot in realization.layer1])
    v2 = np.array([rot.r[0, 2] for rot in realization.layer2])
    with np.errstate(divide="ignore"):
        l1 = np.log(np.abs(v1))
        l2 = np.log(np.abs(v2))
    even_loop = l1[1::2].sum() + l2[0::2].sum()
    odd_loop = l1[0::2].sum() + l2[1::2].sum()
    delta = gamma - (2.0 / n) * max(even_loop, odd_loop)
    degenerate = bool(np.any(v1 == 0.0) or np.any(v2 == 0.0))
    return ProductFormulaGap(delta=float(delta), degenerate=degenerate)


def fully_doped_thermodynamic_gap(gamma: float) -> float:
    """Large-n limit of the fully doped gap: each log factor averages -1."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return gamma + 2.0


def staggered_formula(
    realization: HaarRealization, gamma: float
) -> ProductFormulaGap:
    """Exact strong-damping gap of the staggered (alternating) ring.

    The weight-2 sector supports a single translation loop visiting every
    doped site; each step multiplies in three rotation entries (Z -> X in
    layer 1 at the pivot, Y -> X in layer 2 at the pivot, Z -> Y in layer
    2 two sites on), giving

        delta = 2 gamma - (2/n) * sum over doped s of
                log |r1_s[X,Z]| + log |r2_s[X,Y]| + log |r2_s[Y,Z]|.
    """
    n = realization.n
    if realization.doped_sites != tuple(range(0, n, 2)):
        raise ValueError("formula needs a staggered (even-site) realization")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    a = np.array([rot.r[0, 2] for rot in realization.layer1])
    c = np.array([rot.r[0, 1] for rot in realization.layer2])
    b = np.array([rot.r[1, 2] for rot in realization.layer2])
    factors = np.concatenate([a, b, c])
    with np.errstate(divide="ignore"):
        total = np.log(np.abs(factors)).sum()
    delta = 2.0 * gamma - (2.0 / n) * total
    return ProductFormulaGap(
        delta=float(delta), degenerate=bool(np.any(factors == 0.0))
    )


def staggered_thermodynamic_gap(gamma: float) -> float:
    """Large-n limit of the staggered gap: three -1 log-averages per step."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return 2.0 * gamma + 3.0


def staggered_like_upper_bound(gamma: float) -> float:
    """Strong-damping gap upper bound for staggered-like patterns."""
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return 3.0 * gamma + 3.0


def dense_upper_bound(gamma: float) -> float:
    """Strong-damping gap upper bound for dense patterns (no undoped pair).

    The motif-resolved constant never exceeds MAX_MOTIF_CONSTANT, so the
    uniform 3 gamma + 3 stays valid across motifs.
    """
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    return 3.0 * gamma + 3.0


@dataclass(frozen=True)
class TransitionGroup:
    """Inputs that may only transition to the listed output strings."""

    inputs: tuple[str, ...]
    output_form: str
    outputs: frozenset[str]


@dataclass(frozen=True)
class TransitionRule:
    """Allowed 3-site string transitions inside one 4-site doping window.

    The window literal uses x for doped and o for undoped.  In the
    left-propagating orientation the window covers sites (s-2 .. s+1)
    for an input occupying (s, s+1, s+2); outputs land on (s-2 .. s).
    Groups partition the inputs: a transition may not cross groups.
    """

    label: str
    window: str
    groups: tuple[TransitionGroup, ...]

    def outputs_for(self, input_string: str) -> frozenset[str]:
        for group in self.groups:
            if input_string in group.inputs:
                return group.outputs
        raise KeyError(f"{input_string} is not an input of rule {self.label}")


def _expand_form(form: str) -> frozenset[str]:
    """Expand a 3-letter form where P and Q range over X, Y, Z."""
    pools = ["XYZ" if ch in "PQ" else ch for ch in form]
    return frozenset(
        a + b + c for a in pools[0] for b in pools[1] for c in pools[2]
    )


def staggered_like_transition_table() -> tuple[TransitionRule, ...]:
    """The five-window transition relation for weight-3 local motifs.

    Each rule lists, for one 4-site doping window, which contiguous
    3-site strings can map into which under a single period, assuming
    the support never exceeds three consecutive sites.  P and Q in an
    output form range independently over the nontrivial letters.
    """
    return (
        TransitionRule(
            label="i",
            window="oxox",
            groups=(
                TransitionGroup(
                    inputs=("XXZ", "XXY", "XIX"),
                    output_form="{XXZ,YXZ}",
                    outputs=frozenset({"XXZ", "YXZ"}),
                ),
            ),
        ),
        TransitionRule(
            label="i'",
            window="xxox",
            groups=(
                TransitionGroup(
                    inputs=("XXZ", "XXY", "XIX"),
                    output_form="{XXZ,YXZ,ZXZ}",
                    outputs=frozenset({"XXZ", "YXZ", "ZXZ"}),
                ),
            ),
        ),
        TransitionRule(
            label="ii",
            window="xoxo",
            groups=(
                TransitionGroup(
                    inputs=("YXZ", "YIX"),
                    output_form="PIQ",
                    outputs=_expand_form("PIQ"),
                ),
                TransitionGroup(
                    inputs=("XXY", "ZXZ", "ZIX"),
                    output_form="PZQ",
                    outputs=_expand_form("PZQ"),
                ),
            ),
        ),
        TransitionRule(
            label="ii'",
            window="xoxx",
            groups=(
                TransitionGroup(
                    inputs=("YXZ", "YXY", "YIX"),
                    output_form="PIQ",
                    outputs=_expand_form("PIQ"),
                ),
                TransitionGroup(
                    inputs=("XXZ", "XXY", "XIX", "ZXZ", "ZXY", "ZIX"),
                    output_form="PZQ",
                    outputs=_expand_form("PZQ"),
                ),
            ),
        ),
        TransitionRule(
            label="iii",
            window="oxxo",
            groups=(
                TransitionGroup(
                    inputs=("XXY", "YXZ", "YIX", "ZXZ", "ZIX"),
                    output_form="{ZIP,XPQ,YPQ}",
                    outputs=(
                        _expand_form("ZIP")
                        | _expand_form("XPQ")
                        | _expand_form("YPQ")
                    ),
                ),
            ),
        ),
    )
