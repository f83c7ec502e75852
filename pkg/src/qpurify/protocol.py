"""Optimal pairwise purification protocol for W-class two-qubit states.

One party holds qubits A and A' (one from each state), the other holds B
and B'.  In the canonical bases, the optimal local filters keep only the
|01> and |10> levels of each party's pair and rebalance the two surviving
amplitudes; the success probability is
2 p q min{alpha^2 beta'^2, alpha'^2 beta^2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ranges
from .canonical import WCanonicalForm, phi_vector, reconstruct, w_canonicalize
from .states import (DensityMatrix, NotNormalized, StateError, kron,
                     permute_systems, schmidt_decompose)

MIN_TIE_TOL = 1e-12
RANK1_REL_TOL = 1e-10
PROBABILITY_TOL = 1e-9
SCHMIDT_TOL = 1e-9

SYSTEM_ORDER_INPUT = ("A", "B", "Ap", "Bp")
SYSTEM_ORDER_PROTOCOL = ("A", "Ap", "B", "Bp")


class ProtocolError(StateError):
    pass


class InvalidForm(ProtocolError):
    pass


class OutputNotRankOne(ProtocolError):
    pass


class ProbabilityMismatch(ProtocolError):
    pass


class NotMaximallyEntangled(ProtocolError):
    pass


class ProductState(ProtocolError):
    pass


@dataclass(frozen=True)
class ProtocolOperators:
    """Local filters of the optimal protocol, already composed with the
    canonicalizing local unitaries of the two input states.

    m_aa acts on qubits (A, A'), n_bb on (B, B'); both have operator norm
    at most 1.  expected_probability is the analytic optimum."""

    m_aa: np.ndarray
    n_bb: np.ndarray
    expected_probability: float
    canon_a: WCanonicalForm
    canon_b: WCanonicalForm
    min_tie: bool


@dataclass(frozen=True)
class PurificationReport:
    verdict: str  # "purifiable" | "not_purifiable"
    probability: float
    reason: str | None = None
    operators: ProtocolOperators | None = None
    output_state: np.ndarray | None = None  # normalized 16-vector, (A,A',B,B')
    output_matrix: np.ndarray | None = None  # unnormalized filtered 16x16
    schmidt_margin: float | None = None

    @property
    def purifiable(self) -> bool:
        return self.verdict == "purifiable"


def build_protocol(canon_a: WCanonicalForm,
                   canon_b: WCanonicalForm) -> ProtocolOperators:
    """Optimal filters for a pair of canonical forms.

    In the canonical frames m = min{ab', a'b} (1/(ab') |01><01| +
    1/(a'b) |10><10|) and n = |01><01| + |10><10|; both are pre-composed
    here with the canonicalizing unitaries so they apply to the raw states.
    """
    for c in (canon_a, canon_b):
        if not (0.0 < c.p < 1.0) or c.alpha * c.beta <= 0.0:
            raise InvalidForm("need p in (0,1) and alpha*beta > 0")
    x = canon_a.alpha * canon_b.beta
    y = canon_b.alpha * canon_a.beta
    mv = min(x, y)
    m_canon = np.diag([0.0, mv / x, mv / y, 0.0]).astype(complex)
    n_canon = np.diag([0.0, 1.0, 1.0, 0.0]).astype(complex)
    m = m_canon @ kron(canon_a.u_a, canon_b.u_a)
    n = n_canon @ kron(canon_a.u_b, canon_b.u_b)
    prob = 2.0 * canon_a.p * canon_b.p * mv * mv
    return ProtocolOperators(
        m_aa=m,
        n_bb=n,
        expected_probability=float(prob),
        canon_a=canon_a,
        canon_b=canon_b,
        min_tie=abs(x - y) <= MIN_TIE_TOL,
    )


def _certify_output(out: np.ndarray, expected: float,
                    rank1_tol: float, prob_tol: float, schmidt_tol: float):
    prob = float(out.trace().real)
    if abs(prob - expected) > prob_tol:
        raise ProbabilityMismatch(
            f"channel trace {prob} vs expected {expected}")
    vals, vecs = np.linalg.eigh(out)
    vals, vecs = vals[::-1], vecs[:, ::-1]
    if vals[0] <= 0.0 or vals[1] > rank1_tol * vals[0]:
        raise OutputNotRankOne(f"output spectrum head {vals[:2]}")
    vec = vecs[:, 0]
    coeffs = np.linalg.svd(vec.reshape(4, 4), compute_uv=False)
    ideal = np.array([np.sqrt(0.5), np.sqrt(0.5), 0.0, 0.0])
    margin = float(np.max(np.abs(coeffs - ideal)))
    if margin > schmidt_tol:
        raise NotMaximallyEntangled(f"Schmidt coefficients {coeffs}")
    return prob, vec, margin


def apply_protocol(rho: DensityMatrix, sigma: DensityMatrix,
                   ops: ProtocolOperators,
                   input_tol: float = 1e-8,
                   rank1_tol: float = RANK1_REL_TOL,
                   prob_tol: float = PROBABILITY_TOL,
                   schmidt_tol: float = SCHMIDT_TOL) -> PurificationReport:
    """Apply the filters exactly and certify the outcome.

    The certification errors flag implementation inconsistencies, not
    physical failures: for consistent inputs the output must be rank 1 with
    the analytic trace and balanced Schmidt coefficients across AA'|BB'.
    """
    for state, canon, name in ((rho, ops.canon_a, "rho"),
                               (sigma, ops.canon_b, "sigma")):
        residual = np.linalg.norm(state.matrix - reconstruct(canon).matrix)
        if residual > input_tol:
            raise InvalidForm(f"{name} differs from its canonical form "
                              f"(residual {residual:.3e})")
    big = kron(rho.matrix, sigma.matrix)
    big = permute_systems(big, SYSTEM_ORDER_INPUT, SYSTEM_ORDER_PROTOCOL)
    f = kron(ops.m_aa, ops.n_bb)
    out = f @ big @ f.conj().T
    prob, vec, margin = _certify_output(out, ops.expected_probability,
                                        rank1_tol, prob_tol, schmidt_tol)
    return PurificationReport(
        verdict="purifiable",
        probability=prob,
        operators=ops,
        output_state=vec,
        output_matrix=out,
        schmidt_margin=margin,
    )


def purify_pair(rho: DensityMatrix, sigma: DensityMatrix,
                rank_tol: float = ranges.RANK_TOL,
                degeneracy_tol: float = ranges.DEGENERACY_TOL,
                **apply_kwargs) -> PurificationReport:
    """Decide purifiability of a pair and, when possible, run the optimal
    protocol end to end."""
    for state, name in ((rho, "rho"), (sigma, "sigma")):
        cls = ranges.classify_range(state, rank_tol=rank_tol,
                                    degeneracy_tol=degeneracy_tol)
        if cls.kind != ranges.RangeKind.DIM2_SINGLE_PRODUCT_RAY:
            reason = (f"{name}: range class {cls.kind.value} is not a "
                      "rank-2 range with a single product ray")
            if cls.kind == ranges.RangeKind.DIM1_ENTANGLED:
                reason += ("; the state is already pure and entangled, use "
                           "procrustean_step to concentrate it")
            return PurificationReport(verdict="not_purifiable",
                                      probability=0.0, reason=reason)
    canon_a = w_canonicalize(rho, rank_tol=rank_tol,
                             degeneracy_tol=degeneracy_tol)
    canon_b = w_canonicalize(sigma, rank_tol=rank_tol,
                             degeneracy_tol=degeneracy_tol)
    ops = build_protocol(canon_a, canon_b)
    return apply_protocol(rho, sigma, ops, **apply_kwargs)


def optimal_probability(canon_a: WCanonicalForm,
                        canon_b: WCanonicalForm) -> float:
    """Analytic optimum 2 p q min{a^2 b'^2, a'^2 b^2}."""
    return 2.0 * canon_a.p * canon_b.p * min(
        (canon_a.alpha * canon_b.beta) ** 2,
        (canon_b.alpha * canon_a.beta) ** 2)


def procrustean_step(pure: np.ndarray, dims: tuple[int, int],
                     tol: float = 1e-12):
    """Filter turning a known entangled pure state into a maximally
    entangled one with probability 2 c2^2 (c2 the smaller Schmidt
    coefficient).  The filter acts on the first factor, damping the larger
    Schmidt direction and projecting out any further ones."""
    try:
        coeffs, left, _right = schmidt_decompose(pure, dims)
    except NotNormalized:
        raise
    c1, c2 = float(coeffs[0]), float(coeffs[1])
    if c2 <= tol:
        raise ProductState("state has a single Schmidt coefficient")
    da = dims[0]
    filt = np.zeros((da, da), dtype=complex)
    filt += (c2 / c1) * np.outer(left[:, 0], left[:, 0].conj())
    filt += np.outer(left[:, 1], left[:, 1].conj())
    return filt, 2.0 * c2 * c2
