"""Pauli algebra tests against dense matrix oracles."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floquetgap.paulis import (
    PauliString,
    enumerate_orbit,
    format_pauli,
    from_index,
    index_of,
    multiply,
    orbit_weight_spectrum,
    parse_pauli,
    weight,
)
from oracles import pauli_matrix

LETTERS = "IXZY"


def random_string(rng: np.random.Generator, n: int) -> PauliString:
    letters = "".join(rng.choice(list(LETTERS)) for _ in range(n))
    sign = int(rng.choice([1, -1]))
    return parse_pauli(("" if sign > 0 else "-") + letters)


def test_weight_counts_nonidentity_sites():
    assert weight(parse_pauli("XIZY")) == 3
    assert weight(parse_pauli("IIII")) == 0
    assert weight(parse_pauli("-Y")) == 1


def test_parse_format_round_trip():
    for text in ["XIZY", "-YXZIII", "+ZZ", "I", "-I"]:
        s = parse_pauli(text)
        canonical = format_pauli(s)
        assert parse_pauli(canonical) == s
    assert format_pauli(parse_pauli("XIZY")) == "XIZY"
    assert format_pauli(parse_pauli("-YXZIII")) == "-YXZIII"
    # unicode minus accepted on input, normalized on output
    assert format_pauli(parse_pauli("−YXZIII")) == "-YXZIII"


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_pauli("XQ")
    with pytest.raises(ValueError):
        parse_pauli("")
    with pytest.raises(ValueError):
        parse_pauli("-")


def test_index_round_trip_exhaustive_small():
    for n in (1, 2, 3):
        seen = set()
        for letters in product(LETTERS, repeat=n):
            s = parse_pauli("".join(letters))
            idx = index_of(s)
            assert 0 <= idx < 4**n
            assert idx not in seen
            seen.add(idx)
            assert from_index(n, idx) == s
        assert len(seen) == 4**n


def test_index_digit_convention():
    # site 0 is the least significant base-4 digit, digits order I, X, Z, Y
    assert index_of(parse_pauli("X")) == 1
    assert index_of(parse_pauli("Z")) == 2
    assert index_of(parse_pauli("Y")) == 3
    assert index_of(parse_pauli("IX")) == 4
    assert index_of(parse_pauli("YZ")) == 3 + 2 * 4


def test_multiply_single_qubit_table():
    prod = multiply(parse_pauli("X"), parse_pauli("Z"))
    assert format_pauli(prod.string) == "Y"
    assert prod.phase == -1j
    prod = multiply(parse_pauli("Z"), parse_pauli("X"))
    assert prod.phase == 1j
    prod = multiply(parse_pauli("X"), parse_pauli("X"))
    assert format_pauli(prod.string) == "I"
    assert prod.phase == 1


def test_multiply_matches_dense_oracle_exhaustive_two_sites():
    strings = [parse_pauli("".join(p)) for p in product(LETTERS, repeat=2)]
    for a in strings:
        for b in strings:
            prod = multiply(a, b)
            expected = pauli_matrix(a) @ pauli_matrix(b)
            got = prod.phase * pauli_matrix(prod.string)
            assert np.array_equal(got, expected)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 4**4 - 1), st.integers(0, 4**4 - 1), st.booleans(), st.booleans())
def test_multiply_matches_dense_oracle_random_four_sites(ia, ib, sa, sb):
    a = from_index(4, ia, 1 if sa else -1)
    b = from_index(4, ib, 1 if sb else -1)
    prod = multiply(a, b)
    expected = pauli_matrix(a) @ pauli_matrix(b)
    assert np.array_equal(prod.phase * pauli_matrix(prod.string), expected)
    assert prod.phase in (1, -1, 1j, -1j)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 4**3 - 1), st.integers(0, 4**3 - 1))
def test_commutation_matches_dense(ia, ib):
    a = from_index(3, ia)
    b = from_index(3, ib)
    ab = pauli_matrix(a) @ pauli_matrix(b)
    ba = pauli_matrix(b) @ pauli_matrix(a)
    assert a.commutes_with(b) == bool(np.array_equal(ab, ba))


class _LetterCycleCircuit:
    """Toy conjugator: X -> Y -> Z -> X on every site, flipping the sign on Z -> X."""

    def __init__(self, n: int):
        self.n = n

    def conjugate_string(self, s: PauliString) -> PauliString:
        # digits: X(1) -> Y(3), Y(3) -> Z(2), Z(2) -> X(1)
        x = z = 0
        sign = s.sign
        for j in range(s.n):
            d = ((s.x_bits >> j) & 1) + 2 * ((s.z_bits >> j) & 1)
            nd = {0: 0, 1: 3, 3: 2, 2: 1}[d]
            if d == 2:
                sign = -sign
            x |= (nd & 1) << j
            z |= (nd >> 1) << j
        return PauliString(s.n, x, z, sign)


def test_enumerate_orbit_toy_circuit():
    orbit = enumerate_orbit(parse_pauli("X"), _LetterCycleCircuit(1))
    assert [format_pauli(e) for e in orbit.elements] == ["X", "Y", "Z"]
    assert orbit.length == 3
    assert orbit.closure_sign == -1
    assert orbit.avg_weight == Fraction(1)


def test_enumerate_orbit_rejects_identity():
    with pytest.raises(ValueError):
        enumerate_orbit(parse_pauli("II"), _LetterCycleCircuit(2))


def test_orbit_weight_spectrum_toy_circuit():
    spec = orbit_weight_spectrum(_LetterCycleCircuit(2))
    # 15 nontrivial strings on 2 sites fall into 5 letter-cycle orbits
    assert len(spec) == 5
    assert sum(1 for _ in spec) == 5
    weights = [w for _, w in spec]
    assert weights == sorted(weights)
    assert weights[0] == Fraction(1, 2)
    # orbits of two-site strings have average weight 2 except the pure ones
    assert weights.count(Fraction(1, 2)) == 2
    assert weights.count(Fraction(1)) == 3
    ids = [i for i, _ in spec]
    assert len(set(ids)) == 5


def test_orbit_weight_spectrum_guard():
    with pytest.raises(ValueError):
        orbit_weight_spectrum(_LetterCycleCircuit(11))
