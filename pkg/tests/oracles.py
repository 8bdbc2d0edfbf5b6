"""Independent dense-matrix oracles shared by the test suite.

Everything here goes through explicit 2^n x 2^n complex matrices built with
numpy.kron, deliberately avoiding the symplectic bit tricks used by the
package itself, so agreement is meaningful.
"""

from __future__ import annotations

import numpy as np

from floquetgap.paulis import PauliString

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)

SITE_MATS = {"I": I2, "X": X, "Y": Y, "Z": Z}

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
ISWAP_DENSE = np.array(
    [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
)
FIXED_GATE_DENSE = ISWAP_DENSE @ np.kron(HADAMARD, HADAMARD)


def pauli_matrix(s: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string; site 0 is the first kron factor."""
    out = np.array([[1.0 + 0j]])
    for j in range(s.n):
        out = np.kron(out, SITE_MATS[s.site_letter(j)])
    return s.sign * out


def letters_matrix(letters: str, sign: int = 1) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for ch in letters:
        out = np.kron(out, SITE_MATS[ch])
    return sign * out


def su2_from_quaternion(w: float, x: float, y: float, z: float) -> np.ndarray:
    """U = w*I + i(x*X + y*Y + z*Z) for a unit quaternion."""
    return w * I2 + 1j * (x * X + y * Y + z * Z)


def adjoint_from_unitary(u: np.ndarray) -> np.ndarray:
    """3x3 rotation r with  u sigma_j u^dag = sum_i r[i, j] sigma_i."""
    sigmas = (X, Y, Z)
    r = np.empty((3, 3))
    for jj, sj in enumerate(sigmas):
        img = u @ sj @ u.conj().T
        for ii, si in enumerate(sigmas):
            val = np.trace(si @ img) / 2
            assert abs(val.imag) < 1e-12
            r[ii, jj] = val.real
    return r


def embed_unitary(u: np.ndarray, sites: tuple[int, ...], n: int) -> np.ndarray:
    """Expand a k-site unitary (given on adjacent conceptual slots) to n sites.

    ``sites`` lists the physical site of each slot in order; sites may be
    non-adjacent or wrap around.  Built by summing over matrix units so it
    stays oracle-simple.
    """
    k = len(sites)
    dim = 2**n
    out = np.zeros((dim, dim), dtype=complex)
    others = [j for j in range(n) if j not in sites]
    for a in range(2**k):
        for b in range(2**k):
            amp = u[a, b]
            if amp == 0:
                continue
            # all basis pairs whose bits on `sites` are a (row) / b (col)
            for rest in range(2 ** len(others)):
                row = col = 0
                for slot, site in enumerate(sites):
                    row |= ((a >> (k - 1 - slot)) & 1) << (n - 1 - site)
                    col |= ((b >> (k - 1 - slot)) & 1) << (n - 1 - site)
                for slot, site in enumerate(others):
                    bit = (rest >> slot) & 1
                    row |= bit << (n - 1 - site)
                    col |= bit << (n - 1 - site)
                out[row, col] += amp
    return out


def conjugate_pauli_dense(u: np.ndarray, p: np.ndarray) -> np.ndarray:
    return u @ p @ u.conj().T


def match_signed_pauli(mat: np.ndarray, candidates) -> tuple[str, int]:
    """Find which signed Pauli string equals `mat` among candidate letters."""
    for letters in candidates:
        ref = letters_matrix(letters)
        if np.allclose(mat, ref, atol=1e-10):
            return letters, 1
        if np.allclose(mat, -ref, atol=1e-10):
            return letters, -1
    raise AssertionError("matrix is not a signed Pauli string from candidates")
