"""W-class normal form of purifiable rank-2 two-qubit states.

Every rank-2 state whose range holds a single product ray is, up to local
unitaries, p |Phi><Phi| + (1-p) |00><00| with
Phi = alpha|01> + beta|10> + gamma|00| and real nonnegative coefficients.
This module computes that normal form and rebuilds states from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ranges
from .states import DensityMatrix, StateError, kron, projector, validate_density

GAMMA_SNAP = 1e-12
PEEL_TOL = 1e-8


class NotWClass(StateError):
    pass


class RankDeficientPeel(StateError):
    pass


class InvalidParameters(StateError):
    pass


@dataclass(frozen=True)
class WCanonicalForm:
    """Local unitaries and parameters of the normal form.

    (u_a x u_b) rho (u_a x u_b)^dag
        = p |Phi><Phi| + (1-p) |00><00|,
    Phi = alpha|01> + beta|10> + gamma|00>, alpha, beta > 0, gamma >= 0.
    """

    u_a: np.ndarray
    u_b: np.ndarray
    p: float
    alpha: float
    beta: float
    gamma: float


def _unitary_sending_to_zero(factor: np.ndarray) -> np.ndarray:
    """2x2 unitary u with u |factor> = |0>."""
    f0, f1 = factor
    return np.array([[np.conj(f0), np.conj(f1)], [-f1, f0]], dtype=complex)


def _check_form(form: WCanonicalForm, tol: float = 1e-9) -> None:
    for u in (form.u_a, form.u_b):
        if np.max(np.abs(u.conj().T @ u - np.eye(2))) > 1e-10:
            raise InvalidParameters("local basis change is not unitary")
    if not (0.0 < form.p < 1.0):
        raise InvalidParameters(f"p={form.p} outside (0, 1)")
    if form.alpha <= 0.0 or form.beta <= 0.0 or form.gamma < 0.0:
        raise InvalidParameters("require alpha, beta > 0 and gamma >= 0")
    norm2 = form.alpha ** 2 + form.beta ** 2 + form.gamma ** 2
    if abs(norm2 - 1.0) > tol:
        raise InvalidParameters(f"alpha^2+beta^2+gamma^2 = {norm2}, expected 1")


def phi_vector(alpha: float, beta: float, gamma: float) -> np.ndarray:
    return np.array([gamma, alpha, beta, 0.0], dtype=complex)


def reconstruct(form: WCanonicalForm, tol: float = 1e-9) -> DensityMatrix:
    """Density matrix realizing a canonical form."""
    _check_form(form, tol=tol)
    phi = phi_vector(form.alpha, form.beta, form.gamma)
    zero = np.zeros(4, dtype=complex)
    zero[0] = 1.0
    canon = form.p * projector(phi) + (1.0 - form.p) * projector(zero)
    u = kron(form.u_a, form.u_b)
    return validate_density(u.conj().T @ canon @ u, tol=tol)


def w_canonicalize(state: DensityMatrix,
                   rank_tol: float = ranges.RANK_TOL,
                   degeneracy_tol: float = ranges.DEGENERACY_TOL,
                   peel_tol: float = PEEL_TOL) -> WCanonicalForm:
    """Reduce a purifiable rank-2 state to its W-class normal form.

    Steps: rotate the unique product ray onto |00>; peel the largest
    |00><00| component that keeps the remainder positive (the remainder is
    then rank 1 by construction); read Phi off the remainder; absorb the
    three amplitude phases into diagonal phases of the local unitaries.
    """
    cls = ranges.classify_range(state, rank_tol=rank_tol,
                                degeneracy_tol=degeneracy_tol)
    if cls.kind != ranges.RangeKind.DIM2_SINGLE_PRODUCT_RAY:
        raise NotWClass(f"range class is {cls.kind.value}, "
                        "need a single product ray in a rank-2 range")
    ray = cls.rays[0]
    u_a = _unitary_sending_to_zero(ray.factor_a)
    u_b = _unitary_sending_to_zero(ray.factor_b)
    u = kron(u_a, u_b)
    rotated = u @ state.matrix @ u.conj().T

    vals, vecs = np.linalg.eigh(rotated)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    # Pseudo-inverse on the rank-2 support.
    inv = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        inv += np.outer(vecs[:, i], vecs[:, i].conj()) / vals[i]
    one_minus_p = 1.0 / inv[0, 0].real
    if not (0.0 < one_minus_p < 1.0):
        raise NotWClass(f"peeled |00><00| weight {one_minus_p} outside (0, 1)")

    remainder = rotated.copy()
    remainder[0, 0] -= one_minus_p
    rvals, rvecs = np.linalg.eigh(remainder)
    rvals, rvecs = rvals[::-1], rvecs[:, ::-1]
    if abs(rvals[1]) > peel_tol or rvals[0] <= 0.0:
        raise RankDeficientPeel(
            f"peel remainder spectrum {rvals} is not rank-1 positive")
    p = float(rvals[0])
    phi = rvecs[:, 0]

    if abs(phi[3]) > 1e-6:
        raise NotWClass(f"|11> amplitude {abs(phi[3]):.3e} inconsistent with "
                        "a single product ray at |00>")
    c00, c01, c10 = phi[0], phi[1], phi[2]
    alpha, beta = abs(c01), abs(c10)
    gamma = abs(c00)
    if gamma < GAMMA_SNAP:
        gamma = 0.0
    norm = np.sqrt(alpha ** 2 + beta ** 2 + gamma ** 2)
    alpha, beta, gamma = alpha / norm, beta / norm, gamma / norm

    # Diagonal phase freedom: 4 local phases cover the 3 amplitude phases.
    b0 = -np.angle(c00) if gamma > 0.0 else 0.0
    b1 = -np.angle(c01)
    a1 = -np.angle(c10) - b0
    phase_a = np.diag(np.exp(1j * np.array([0.0, a1])))
    phase_b = np.diag(np.exp(1j * np.array([b0, b1])))

    form = WCanonicalForm(
        u_a=phase_a @ u_a,
        u_b=phase_b @ u_b,
        p=p,
        alpha=float(alpha),
        beta=float(beta),
        gamma=float(gamma),
    )
    _check_form(form)
    return form


def random_w_form(rng: np.random.Generator,
                  p_range: tuple[float, float] = (0.05, 0.95),
                  min_alpha_beta: float = 0.01,
                  with_unitaries: bool = True) -> WCanonicalForm:
    """Random normal form: p uniform, (alpha, beta, gamma) uniform on the
    positive octant of the unit sphere subject to alpha*beta > min_alpha_beta,
    optionally composed with Haar-random local unitaries."""
    from .states import haar_unitary

    while True:
        triple = np.abs(rng.standard_normal(3))
        triple /= np.linalg.norm(triple)
        alpha, beta, gamma = triple
        if alpha * beta > min_alpha_beta:
            break
    p = rng.uniform(*p_range)
    if with_unitaries:
        u_a, u_b = haar_unitary(2, rng), haar_unitary(2, rng)
    else:
        u_a = u_b = np.eye(2, dtype=complex)
    return WCanonicalForm(u_a=u_a, u_b=u_b, p=float(p),
                          alpha=float(alpha), beta=float(beta),
                          gamma=float(gamma))
