"""Range extraction and product-state geometry of two-qubit mixed states.

A two-qubit mixed state is purifiable (given at least two copies) exactly
when its range is two-dimensional and contains a single product ray.  This
module classifies ranges of every rank and constructs explicit product
bases where they exist.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .states import DensityMatrix, StateError, kron, product_determinant

RANK_TOL = 1e-9
DEGENERACY_TOL = 1e-8
QUAD_ZERO_TOL = 1e-10
PRODUCT_DET_TOL = 1e-9


class DegenerateBasis(StateError):
    pass


class RangeKind(enum.Enum):
    DIM1_PRODUCT = "dim1_product"
    DIM1_ENTANGLED = "dim1_entangled"
    DIM2_SINGLE_PRODUCT_RAY = "dim2_single_product_ray"
    DIM2_PRODUCT_SPANNED_TWO_RAYS = "dim2_product_spanned_two_rays"
    DIM2_PRODUCT_SPANNED_CONTINUUM = "dim2_product_spanned_continuum"
    DIM3_PRODUCT_SPANNED = "dim3_product_spanned"
    DIM4_FULL_SPACE = "dim4_full_space"


@dataclass(frozen=True)
class ProductRay:
    """A product direction |a> x |b| inside a subspace."""

    factor_a: np.ndarray
    factor_b: np.ndarray

    def vector(self) -> np.ndarray:
        return kron(self.factor_a, self.factor_b)


@dataclass(frozen=True)
class Subspace:
    """Orthonormal basis (rows) of the range, with rank-cut diagnostics.

    kept_eigenvalues are the eigenvalues above the rank cut; dropped_max is
    the largest eigenvalue below it (0.0 when nothing was dropped), so
    callers can see how fragile the rank verdict is.
    """

    basis: np.ndarray  # (dim, 4), rows orthonormal
    kept_eigenvalues: np.ndarray
    dropped_max: float
    tol: float

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True)
class RangeClass:
    kind: RangeKind
    rays: tuple[ProductRay, ...] = ()


def range_basis(state: DensityMatrix, rank_tol: float = RANK_TOL) -> Subspace:
    """Eigenvectors above the relative eigenvalue cut rank_tol * lambda_max."""
    vals = state.eigenvalues
    vecs_needed = np.linalg.eigh(state.matrix)
    vecs = vecs_needed[1][:, ::-1]
    cut = rank_tol * vals[0]
    keep = vals > cut
    dim = int(np.sum(keep))
    dropped = vals[~keep]
    return Subspace(
        basis=vecs[:, :dim].T.copy(),
        kept_eigenvalues=vals[:dim].copy(),
        dropped_max=float(dropped[0]) if dropped.size else 0.0,
        tol=rank_tol,
    )


def _rank1_factor(vec: np.ndarray) -> ProductRay:
    """Best product approximation of a two-qubit vector (top singular pair),
    with the phase fixed so the product reproduces the input direction."""
    vec = vec / np.linalg.norm(vec)
    u, _, vh = np.linalg.svd(vec.reshape(2, 2))
    fa, fb = u[:, 0], vh[0, :]
    overlap = np.vdot(kron(fa, fb), vec)
    if abs(overlap) > 1e-14:
        fb = fb * (overlap / abs(overlap))
    return ProductRay(factor_a=fa, factor_b=fb)


def _quadratic_coefficients(sub: Subspace):
    """Coefficients of det(a V + b W) = c20 a^2 + c11 ab + c02 b^2 for the
    reshaped basis matrices V, W of a 2-dim subspace."""
    v, w = sub.basis[0], sub.basis[1]

    def det2(m):
        return m[0] * m[3] - m[1] * m[2]

    c20 = det2(v)
    c02 = det2(w)
    c11 = det2(v + w) - c20 - c02
    return c20, c11, c02


def classify_2d_subspace(sub: Subspace,
                         degeneracy_tol: float = DEGENERACY_TOL,
                         quad_zero_tol: float = QUAD_ZERO_TOL) -> RangeClass:
    """Product-state content of a 2-dim subspace of C^2 x C^2.

    The product members a v + b w are the projective roots of the quadratic
    det(a V + b W).  Identically zero quadratic -> every member is product
    (continuum); a double root -> exactly one product ray (the purifiable,
    W-class geometry); otherwise two distinct product rays span the space.
    """
    if sub.dim != 2:
        raise StateError(f"expected 2-dim subspace, got dim {sub.dim}")
    gram = sub.basis.conj() @ sub.basis.T
    if np.max(np.abs(gram - np.eye(2))) > 1e-8:
        raise DegenerateBasis("basis is not orthonormal")

    c20, c11, c02 = _quadratic_coefficients(sub)
    scale = abs(c20) + abs(c11) + abs(c02)
    if scale <= quad_zero_tol:
        return RangeClass(kind=RangeKind.DIM2_PRODUCT_SPANNED_CONTINUUM)

    disc = c11 * c11 - 4.0 * c20 * c02
    v, w = sub.basis[0], sub.basis[1]

    def ray_of(a, b):
        cand = a * v + b * w
        return _rank1_factor(cand / np.linalg.norm(cand))

    if abs(disc) <= degeneracy_tol * scale * scale:
        # Double root; pick the better-conditioned projective representation.
        cand1 = (-c11, 2.0 * c20)
        cand2 = (2.0 * c02, -c11)
        a, b = max(cand1, cand2, key=lambda ab: abs(ab[0]) + abs(ab[1]))
        return RangeClass(kind=RangeKind.DIM2_SINGLE_PRODUCT_RAY,
                          rays=(ray_of(a, b),))

    sq = np.sqrt(disc)
    if (c11.conjugate() * sq).real < 0.0:
        sq = -sq
    t = -(c11 + sq) / 2.0
    # Projective roots (t, c20) and (c02, t); stable even when one root
    # escapes to a basis direction.
    return RangeClass(kind=RangeKind.DIM2_PRODUCT_SPANNED_TWO_RAYS,
                      rays=(ray_of(t, c20), ray_of(c02, t)))


def product_basis_dim3(sub: Subspace) -> tuple[ProductRay, ProductRay, ProductRay]:
    """Spanning set of three product states for any 3-dim subspace.

    Writing the orthocomplement vector in its Schmidt bases as
    a|00> + b|11> (a >= b >= 0), the states |10>, |01> and
    (b|0> - a|1>)(|0> + |1>)/sqrt(2) are orthogonal to it, all product, and
    linearly independent; they are returned in the original bases.
    """
    if sub.dim != 3:
        raise StateError(f"expected 3-dim subspace, got dim {sub.dim}")
    perp = scipy.linalg.null_space(sub.basis.conj())
    if perp.shape[1] != 1:
        raise StateError("orthocomplement is not one-dimensional")
    psi = perp[:, 0]
    u, s, vh = np.linalg.svd(psi.reshape(2, 2))
    a0, a1 = u[:, 0], u[:, 1]
    b0, b1 = vh[0, :], vh[1, :]
    alpha, beta = s[0], s[1]
    third_a = beta * a0 - alpha * a1
    third_b = (b0 + b1) / np.sqrt(2.0)
    return (
        ProductRay(factor_a=a1, factor_b=b0),
        ProductRay(factor_a=a0, factor_b=b1),
        ProductRay(factor_a=third_a, factor_b=third_b),
    )


def classify_range(state: DensityMatrix,
                   rank_tol: float = RANK_TOL,
                   degeneracy_tol: float = DEGENERACY_TOL,
                   quad_zero_tol: float = QUAD_ZERO_TOL,
                   product_tol: float = PRODUCT_DET_TOL) -> RangeClass:
    """Classify the range of a state by dimension and product content."""
    sub = range_basis(state, rank_tol=rank_tol)
    if sub.dim == 1:
        vec = sub.basis[0]
        if abs(product_determinant(vec)) <= product_tol:
            return RangeClass(kind=RangeKind.DIM1_PRODUCT,
                              rays=(_rank1_factor(vec),))
        return RangeClass(kind=RangeKind.DIM1_ENTANGLED)
    if sub.dim == 2:
        return classify_2d_subspace(sub, degeneracy_tol=degeneracy_tol,
                                    quad_zero_tol=quad_zero_tol)
    if sub.dim == 3:
        return RangeClass(kind=RangeKind.DIM3_PRODUCT_SPANNED,
                          rays=product_basis_dim3(sub))
    return RangeClass(kind=RangeKind.DIM4_FULL_SPACE)


def purifiable_single_copy(state: DensityMatrix,
                           rank_tol: float = RANK_TOL) -> tuple[bool, str]:
    """A single copy is never purifiable unless the state is already a pure
    entangled state: a rank >= 2 state would force the local filters below
    full local rank, destroying the shared entanglement."""
    cls = classify_range(state, rank_tol=rank_tol)
    if cls.kind == RangeKind.DIM1_ENTANGLED:
        return True, "already a pure entangled state"
    if cls.kind == RangeKind.DIM1_PRODUCT:
        return False, "pure product state carries no entanglement"
    return False, ("mixed state: purifying filters would need full local rank "
                   "yet must merge distinct range states")


def purifiable_n_copies(state: DensityMatrix, n: int,
                        rank_tol: float = RANK_TOL,
                        degeneracy_tol: float = DEGENERACY_TOL) -> bool:
    """True exactly when n >= 2 and the range is rank 2 with a single
    product ray (the W-class geometry)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < 2:
        return False
    cls = classify_range(state, rank_tol=rank_tol,
                         degeneracy_tol=degeneracy_tol)
    return cls.kind == RangeKind.DIM2_SINGLE_PRODUCT_RAY
