"""Return-cycle search for block-doped brickwork rings.

A ``block_staggered(k)`` ring repeats a block of ``k`` undoped sites followed
by one doped site.  Slow modes at this doping density come from localized
Pauli strings that the period map carries onto translates of themselves, so
that the string returns to an equivalent position after finitely many steps.
The search enumerates every localized string up to a weight cutoff, builds
the one-step support graph in a frame that quotients out the joint
translation symmetry of the brickwork and the doping pattern, and reports
the smallest cutoff whose graph contains a directed cycle, together with a
representative cycle.

States are pairs ``(literal, offset)``: the literal is the base-4 packed
string with nontrivial first and last letter, and the offset is the position
of the first letter modulo the translation period ``lcm(2, k + 1)``.  The
weight is capped by the cutoff and the span by cutoff plus ``SPAN_MARGIN``;
known return cycles stay within that window.  Damping only rescales branch
amplitudes, so the graph and the reported cutoffs are independent of the
damping rate.  Doped rotations enter as wildcards: a nontrivial letter on a
doped site may turn into any nontrivial letter, and each such event
contributes one rotation coefficient to the branch amplitude.  The search is
chain-based; the ring size only sets the divisibility precondition and the
period of the retiled string on the closed ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .channel import _layer_perms

MIN_CUTOFF = 2
MAX_CUTOFF = 12
SPAN_MARGIN = 2
STATE_CEILING = 32_000_000
CHUNK_ROWS = 200_000

_LETTERS = "IXZY"
_DIGIT_MASK = np.int64(0x5555555555555555)
_OFFSET_BITS = 5

_PAIR_LUT: np.ndarray | None = None


def _pair_lut() -> np.ndarray:
    """Image table of the fixed gate on packed two-site Pauli digits."""
    global _PAIR_LUT
    if _PAIR_LUT is None:
        perm, _ = _layer_perms(2)[0]
        _PAIR_LUT = np.asarray(perm, dtype=np.int64)
    return _PAIR_LUT


def _weights(contents: np.ndarray) -> np.ndarray:
    support = (contents | (contents >> np.int64(1))) & _DIGIT_MASK
    return np.bitwise_count(support.astype(np.uint64)).astype(np.int64)


def _support_slots(contents: np.ndarray, width: int) -> tuple[np.ndarray, np.ndarray]:
    """First and last nontrivial slot per row; empty rows get (width, -1)."""
    first = np.full(contents.shape, width, dtype=np.int64)
    last = np.full(contents.shape, -1, dtype=np.int64)
    for slot in range(width):
        nontrivial = ((contents >> np.int64(2 * slot)) & 3) != 0
        first = np.where(nontrivial & (first == width), slot, first)
        last = np.where(nontrivial, slot, last)
    return first, last


def _apply_layer(contents: np.ndarray, starts: list[int], lut: np.ndarray) -> np.ndarray:
    for slot in starts:
        pair = (contents >> np.int64(2 * slot)) & 15
        contents = contents + ((lut[pair] - pair) << np.int64(2 * slot))
    return contents


def _literal_text(literal: int) -> str:
    letters = []
    while literal:
        letters.append(_LETTERS[literal & 3])
        literal >>= 2
    return "".join(letters)


def _pack_literal(text: str) -> int:
    literal = 0
    for slot, letter in enumerate(text.upper()):
        literal |= _LETTERS.index(letter) << (2 * slot)
    return literal


def _literal_spans(cutoff: int, cap: int):
    """Yield packed literals per span, nontrivial ends, weight at most cutoff."""
    yield np.array([1, 2, 3], dtype=np.int64)
    ends = np.array([1, 2, 3], dtype=np.int64)
    for span in range(2, cap + 1):
        middles = np.arange(4 ** (span - 2), dtype=np.int64)
        literals = (
            ends[:, None, None]
            | (middles[None, :, None] << np.int64(2))
            | (ends[None, None, :] << np.int64(2 * (span - 1)))
        ).ravel()
        if span > cutoff:
            literals = literals[_weights(literals) <= cutoff]
        yield literals


def _node_estimate(cutoff: int, period: int) -> int:
    cap = cutoff + SPAN_MARGIN
    literals = 3 + sum(9 * 4 ** (span - 2) for span in range(2, cap + 1))
    return literals * period


def _step_chunk(
    literals: np.ndarray,
    offset: int,
    k: int,
    period: int,
    cutoff: int,
    cap: int,
    with_factors: bool,
) -> tuple[np.ndarray, ...]:
    """One period map for a chunk of literals anchored at a common offset.

    The chunk is embedded on an open window with the first letter at slot 2,
    wide enough that no gate straddles the boundary with nontrivial input.
    Returns per-branch arrays (ids, literal, offset, drift[, factors]) after
    dropping branches that violate the weight cutoff or the span cap.
    """
    width = cap + 5
    lut = _pair_lut()
    doped_slots = [s for s in range(width) if (offset + s - 2) % (k + 1) == k]
    layer1 = [s for s in range(width - 1) if (s - offset) % 2 == 0]
    layer2 = [s for s in range(width - 1) if (s - offset) % 2 == 1]

    contents = literals << np.int64(4)
    ids = np.arange(literals.shape[0], dtype=np.int64)
    factors = np.zeros(literals.shape[0], dtype=np.int64) if with_factors else None

    contents = _apply_layer(contents, layer1, lut)
    for slot in doped_slots:
        digit = (contents >> np.int64(2 * slot)) & 3
        moving = digit != 0
        if not moving.any():
            continue
        staying = ~moving
        base = contents[moving] & ~(np.int64(3) << np.int64(2 * slot))
        variants = [base | (np.int64(letter) << np.int64(2 * slot)) for letter in (1, 2, 3)]
        moved_ids = ids[moving]
        contents = np.concatenate([contents[staying], *variants])
        ids = np.concatenate([ids[staying], moved_ids, moved_ids, moved_ids])
        if factors is not None:
            bumped = factors[moving] + 1
            factors = np.concatenate([factors[staying], bumped, bumped, bumped])
    contents = _apply_layer(contents, layer2, lut)

    first, last = _support_slots(contents, width)
    weights = _weights(contents)
    keep = (last >= 0) & (weights <= cutoff) & (last - first + 1 <= cap)
    contents, ids, first = contents[keep], ids[keep], first[keep]
    if factors is not None:
        factors = factors[keep]
    out = contents >> (2 * first)
    drift = first - 2
    offsets = (offset + drift) % period

    for slot in range(cap):
        digit = (out >> np.int64(2 * slot)) & 3
        moving = (digit != 0) & ((offsets + slot) % (k + 1) == k)
        if not moving.any():
            continue
        staying = ~moving
        base = out[moving] & ~(np.int64(3) << np.int64(2 * slot))
        variants = [base | (np.int64(letter) << np.int64(2 * slot)) for letter in (1, 2, 3)]
        out = np.concatenate([out[staying], *variants])
        triple = lambda a: np.concatenate([a[staying], a[moving], a[moving], a[moving]])
        ids, offsets, drift = triple(ids), triple(offsets), triple(drift)
        if factors is not None:
            bumped = factors[moving] + 1
            factors = np.concatenate([factors[staying], bumped, bumped, bumped])

    if factors is None:
        return ids, out, offsets, drift
    return ids, out, offsets, drift, factors


def _step_images(
    literals: np.ndarray,
    offset: int,
    k: int,
    period: int,
    cutoff: int,
    cap: int,
    with_factors: bool = False,
) -> tuple[np.ndarray, ...]:
    """Chunked wrapper around the vectorized period map."""
    pieces = []
    for low in range(0, literals.shape[0], CHUNK_ROWS):
        part = _step_chunk(
            literals[low : low + CHUNK_ROWS], offset, k, period, cutoff, cap, with_factors
        )
        part = (part[0] + low,) + part[1:]
        pieces.append(part)
    return tuple(np.concatenate(cols) for cols in zip(*pieces))


def string_successors(
    text: str, offset: int, k: int, w: int
) -> tuple[tuple[str, int, int], ...]:
    """Images of one localized string under a single period-map step.

    The string is given in ascending site order with its first letter at a
    position congruent to ``offset`` modulo ``lcm(2, k + 1)``.  Returns
    deduplicated ``(string, offset, drift)`` triples for every branch whose
    weight stays within ``w`` and whose span stays within ``w +
    SPAN_MARGIN``, sorted for reproducibility.
    """
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
        raise ValueError("block length k must be a positive integer")
    if not MIN_CUTOFF <= w <= MAX_CUTOFF:
        raise ValueError(
            f"weight cutoff w must lie in [{MIN_CUTOFF}, {MAX_CUTOFF}], got {w}"
        )
    period = lcm(2, k + 1)
    if not 0 <= offset < period:
        raise ValueError(f"offset must lie in [0, {period}) for block length {k}")
    cleaned = text.upper()
    if (
        not cleaned
        or any(letter not in _LETTERS for letter in cleaned)
        or cleaned[0] == "I"
        or cleaned[-1] == "I"
    ):
        raise ValueError(
            "string must use letters IXZY with nontrivial first and last letter"
        )
    cap = w + SPAN_MARGIN
    if len(cleaned) > cap:
        raise ValueError(f"string span {len(cleaned)} exceeds the cap {cap}")
    literal = np.array([_pack_literal(cleaned)], dtype=np.int64)
    _, out, offsets, drift = _step_images(literal, offset, k, period, w, cap)
    triples = {
        (_literal_text(int(l)), int(o), int(d))
        for l, o, d in zip(out, offsets, drift)
    }
    return tuple(sorted(triples))


@dataclass(frozen=True)
class CycleStep:
    """One step of a return cycle, described at its starting state.

    string:  letters of the starting string in ascending site order
    offset:  position of its first letter modulo the translation period
    drift:   sites the first letter moves during the step
    amplitude_factors: fewest rotation coefficients over branches that
        realize the step
    """

    string: str
    offset: int
    drift: int
    amplitude_factors: int


@dataclass(frozen=True)
class ReturnCycle:
    """A closed walk in the support graph, one entry per step."""

    k: int
    w_star: int
    period: int
    translation: int
    translation_period: int
    steps: tuple[CycleStep, ...]

    @property
    def strings(self) -> tuple[str, ...]:
        return tuple(step.string for step in self.steps)

    @property
    def amplitude_factors(self) -> tuple[int, ...]:
        return tuple(step.amplitude_factors for step in self.steps)


@dataclass(frozen=True)
class ScanRecord:
    """Outcome of scanning one cutoff: node count and cycle existence."""

    cutoff: int
    node_count: int
    cycle_found: bool


@dataclass(frozen=True)
class CycleSearchResult:
    """Smallest cutoff with a return cycle, or a not-found report."""

    k: int
    n: int
    cutoff: int
    found: bool
    w_star: int | None
    cycle: ReturnCycle | None
    scans: tuple[ScanRecord, ...]

    def ring_return_steps(self) -> int | None:
        """Steps until the retiled string regains its exact ring position."""
        if self.cycle is None:
            return None
        repeats = self.n // gcd(abs(self.cycle.translation), self.n)
        return self.cycle.period * repeats


def _scan_cutoff(k: int, cutoff: int, period: int):
    """Build the support graph at one cutoff and locate recurrent nodes."""
    cap = cutoff + SPAN_MARGIN
    literals = np.concatenate(list(_literal_spans(cutoff, cap)))
    literals.sort()
    keys = ((literals[:, None] << _OFFSET_BITS) | np.arange(period, dtype=np.int64)).ravel()
    node_count = keys.shape[0]

    sources, targets = [], []
    for offset in range(period):
        ids, out, offsets, _ = _step_images(literals, offset, k, period, cutoff, cap)
        src = np.searchsorted(keys, (literals[ids] << _OFFSET_BITS) | offset)
        tgt_keys = (out << _OFFSET_BITS) | offsets
        tgt = np.searchsorted(keys, tgt_keys)
        if not np.array_equal(keys[tgt], tgt_keys):
            raise AssertionError("period map produced a string outside the node set")
        sources.append(src)
        targets.append(tgt)
    combined = np.concatenate(
        [s * node_count + t for s, t in zip(sources, targets)]
    )
    combined = np.unique(combined)
    src_idx = (combined // node_count).astype(np.int64)
    tgt_idx = (combined % node_count).astype(np.int64)

    graph = csr_matrix(
        (np.ones(combined.shape[0], dtype=np.int8), (src_idx, tgt_idx)),
        shape=(node_count, node_count),
    )
    _, labels = connected_components(graph, directed=True, connection="strong")
    sizes = np.bincount(labels)
    recurrent = sizes[labels] > 1
    recurrent[src_idx[src_idx == tgt_idx]] = True
    return keys, graph, labels, recurrent


def _shortest_cycle(graph: csr_matrix, labels: np.ndarray, start: int) -> list[int]:
    """Shortest closed walk through a recurrent node, by breadth-first search."""
    indptr, indices = graph.indptr, graph.indices
    home = labels[start]
    if start in indices[indptr[start] : indptr[start + 1]]:
        return [start, start]
    parent: dict[int, int] = {}
    frontier = [start]
    seen = {start}
    while frontier:
        upcoming = []
        for node in frontier:
            for succ in indices[indptr[node] : indptr[node + 1]]:
                succ = int(succ)
                if labels[succ] != home:
                    continue
                if succ == start:
                    chain = [node]
                    while chain[-1] != start:
                        chain.append(parent[chain[-1]])
                    chain.reverse()
                    return chain + [start]
                if succ not in seen:
                    seen.add(succ)
                    parent[succ] = node
                    upcoming.append(succ)
        frontier = upcoming
    raise AssertionError("recurrent node has no return walk")


def _extract_cycle(
    k: int, period: int, cutoff: int, keys: np.ndarray, graph: csr_matrix,
    labels: np.ndarray, recurrent: np.ndarray,
) -> ReturnCycle:
    cap = cutoff + SPAN_MARGIN
    nodes = np.flatnonzero(recurrent)
    literals = keys[nodes] >> _OFFSET_BITS
    offsets = keys[nodes] & ((1 << _OFFSET_BITS) - 1)
    weights = _weights(literals)
    spans = _support_slots(literals, cap)[1] + 1
    order = np.lexsort((offsets, literals, spans, weights))
    start = int(nodes[order[0]])

    path = _shortest_cycle(graph, labels, start)
    steps = []
    for here, there in zip(path[:-1], path[1:]):
        literal, offset = int(keys[here]) >> _OFFSET_BITS, int(keys[here]) & 31
        goal_literal = int(keys[there]) >> _OFFSET_BITS
        goal_offset = int(keys[there]) & 31
        _, out, offs, drift, factors = _step_images(
            np.array([literal], dtype=np.int64), offset, k, period, cutoff, cap,
            with_factors=True,
        )
        hits = np.flatnonzero((out == goal_literal) & (offs == goal_offset))
        best = hits[np.lexsort((np.abs(drift[hits]), factors[hits]))[0]]
        steps.append(
            CycleStep(
                string=_literal_text(literal),
                offset=offset,
                drift=int(drift[best]),
                amplitude_factors=int(factors[best]),
            )
        )
    return ReturnCycle(
        k=k,
        w_star=cutoff,
        period=len(steps),
        translation=sum(step.drift for step in steps),
        translation_period=period,
        steps=tuple(steps),
    )


def cycle_search(k: int, w: int, n: int) -> CycleSearchResult:
    """Scan cutoffs 2..w for the smallest supporting a return cycle.

    The ring size n must be even and a multiple of the block period k + 1;
    the scan itself runs on the open chain and is exact for any such ring
    large enough to hold the cycle window.
    """
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or k < 1:
        raise ValueError("block length k must be a positive integer")
    if not isinstance(w, (int, np.integer)) or isinstance(w, bool):
        raise ValueError("weight cutoff w must be an integer")
    if not MIN_CUTOFF <= w <= MAX_CUTOFF:
        raise ValueError(
            f"weight cutoff w must lie in [{MIN_CUTOFF}, {MAX_CUTOFF}], got {w}"
        )
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2 or n % 2:
        raise ValueError("ring size n must be a positive even integer")
    if n % (k + 1):
        raise ValueError(f"ring size {n} is not a multiple of the block period {k + 1}")

    period = lcm(2, k + 1)
    estimate = _node_estimate(w, period)
    if estimate > STATE_CEILING:
        raise ValueError(
            f"scanning cutoff {w} at block length {k} would visit about "
            f"{estimate:,} states, above the ceiling of {STATE_CEILING:,}"
        )

    scans: list[ScanRecord] = []
    for cutoff in range(MIN_CUTOFF, w + 1):
        keys, graph, labels, recurrent = _scan_cutoff(k, cutoff, period)
        found = bool(recurrent.any())
        scans.append(ScanRecord(cutoff=cutoff, node_count=keys.shape[0], cycle_found=found))
        if found:
            cycle = _extract_cycle(k, period, cutoff, keys, graph, labels, recurrent)
            return CycleSearchResult(
                k=k, n=n, cutoff=w, found=True, w_star=cutoff, cycle=cycle,
                scans=tuple(scans),
            )
    return CycleSearchResult(
        k=k, n=n, cutoff=w, found=False, w_star=None, cycle=None, scans=tuple(scans)
    )
