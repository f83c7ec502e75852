"""Dense complex linear algebra for two-qubit states and four-qubit composites.

Index conventions used throughout the package:
  * a two-qubit basis ket |ab> sits at index 2*a + b,
  * a four-qubit basis ket |q0 q1 q2 q3> sits at index 8*q0 + 4*q1 + 2*q2 + q3,
    with the system labels of the four qubits carried separately.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
RECONSTRUCTION_TOL = 1e-10

# Standard maximally entangled two-qubit vectors, |00>,|01>,|10>,|11> order.
PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)
PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


class StateError(ValueError):
    """Base class for state validation failures."""


class NotHermitian(StateError):
    pass


class NotPositive(StateError):
    def __init__(self, most_negative: float):
        super().__init__(f"matrix has negative eigenvalue {most_negative:.3e}")
        self.most_negative = most_negative


class TraceNotOne(StateError):
    def __init__(self, trace: complex):
        super().__init__(f"trace is {trace}, expected 1")
        self.trace = trace


class NotNormalized(StateError):
    pass


def ket(bits: str) -> np.ndarray:
    """Computational basis ket for a bit string, e.g. ket('01')."""
    index = int(bits, 2)
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[index] = 1.0
    return vec


def projector(vec: np.ndarray) -> np.ndarray:
    """|v><v| for a (not necessarily normalized) vector."""
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; left factor owns the most significant indices."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 4x4 two-qubit density matrix with its spectrum attached."""

    matrix: np.ndarray
    eigenvalues: np.ndarray  # real, descending

    @property
    def rank_profile(self) -> np.ndarray:
        return self.eigenvalues


@dataclass(frozen=True)
class FourQubitState:
    """16x16 composite operator with explicit qubit ordering.

    Sub-normalized matrices (trace < 1) are legal and flagged, since a
    filtering operation produces one before renormalization.
    """

    matrix: np.ndarray
    system_order: tuple[str, ...]
    normalized: bool


def hermitian_eig(entries: np.ndarray, tol: float = DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (eigenvalues, eigenvectors) with eigenvectors in columns;
    reconstruction sum(l_i v_i v_i^dag) matches the input to high accuracy.
    """
    entries = np.asarray(entries, dtype=complex)
    if np.max(np.abs(entries - entries.conj().T)) > tol:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(entries)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def validate_density(entries: np.ndarray, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Check Hermiticity, positivity and unit trace of a 4x4 matrix."""
    entries = np.asarray(entries, dtype=complex)
    if entries.shape != (4, 4):
        raise StateError(f"expected 4x4 matrix, got {entries.shape}")
    if not np.all(np.isfinite(entries.view(float))):
        raise StateError("matrix contains non-finite entries")
    vals, _ = hermitian_eig(entries, tol=tol)
    if vals[-1] < -tol:
        raise NotPositive(float(vals[-1]))
    trace = entries.trace()
    if abs(trace - 1.0) > tol:
        raise TraceNotOne(complex(trace))
    mat = entries.copy()
    mat.setflags(write=False)
    vals.setflags(write=False)
    return DensityMatrix(matrix=mat, eigenvalues=vals)


def pure_density(vec: np.ndarray, tol: float = DEFAULT_TOL) -> DensityMatrix:
    """Density matrix of a normalized pure two-qubit state."""
    return validate_density(projector(vec), tol=tol)


def schmidt_decompose(state: np.ndarray, dims: tuple[int, int],
                      tol: float = DEFAULT_TOL):
    """Schmidt decomposition of a pure bipartite vector.

    Returns (coefficients, left, right): coefficients descending and
    nonnegative, left[:, i] / right[:, i] the local Schmidt vectors, so that
    state = sum_i c_i kron(left[:, i], right[:, i]).
    """
    state = np.asarray(state, dtype=complex)
    da, db = dims
    if state.shape != (da * db,):
        raise StateError(f"state length {state.shape} does not match dims {dims}")
    if abs(np.linalg.norm(state) - 1.0) > tol:
        raise NotNormalized("state is not unit norm")
    mat = state.reshape(da, db)
    u, s, vh = np.linalg.svd(mat)
    k = min(da, db)
    return s[:k].copy(), u[:, :k].copy(), vh[:k, :].T.copy()


def permute_systems(matrix: np.ndarray, current_order: tuple[str, ...],
                    target_order: tuple[str, ...]) -> np.ndarray:
    """Reindex a multi-qubit operator so qubit k of the output is system
    target_order[k]."""
    if sorted(current_order) != sorted(target_order):
        raise StateError(f"orders {current_order} and {target_order} differ")
    n = len(current_order)
    src = [current_order.index(label) for label in target_order]
    t = np.asarray(matrix, dtype=complex).reshape((2,) * (2 * n))
    t = t.transpose(src + [s + n for s in src])
    return t.reshape(2 ** n, 2 ** n).copy()


def permute_vector(vec: np.ndarray, current_order: tuple[str, ...],
                   target_order: tuple[str, ...]) -> np.ndarray:
    """Same relabeling as permute_systems, for pure-state vectors."""
    if sorted(current_order) != sorted(target_order):
        raise StateError(f"orders {current_order} and {target_order} differ")
    n = len(current_order)
    src = [current_order.index(label) for label in target_order]
    t = np.asarray(vec, dtype=complex).reshape((2,) * n)
    return t.transpose(src).reshape(2 ** n).copy()


def partial_transpose(matrix: np.ndarray, party: str = "B") -> np.ndarray:
    """Partial transpose of a two-qubit operator over one party.

    A negative eigenvalue of the result certifies entanglement (two-qubit
    PPT criterion).
    """
    t = np.asarray(matrix, dtype=complex).reshape(2, 2, 2, 2)
    if party == "B":
        t = t.transpose(0, 3, 2, 1)
    elif party == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise StateError(f"party must be 'A' or 'B', got {party!r}")
    return t.reshape(4, 4).copy()


def reshape_to_matrix(state: np.ndarray) -> np.ndarray:
    """2x2 coefficient matrix of a two-qubit vector: entry (a, b) is the
    |ab> amplitude.  Vanishing determinant is equivalent to the state being
    a product state."""
    return np.asarray(state, dtype=complex).reshape(2, 2).copy()


def product_determinant(state: np.ndarray) -> complex:
    m = reshape_to_matrix(state)
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases
