"""Independent numerical verifiers: product-state counting on 2-dim
subspaces and a seeded search over all product filters.

Both deliberately avoid the analytic machinery they are meant to check:
the zero counter samples determinants on the projective line instead of
solving the classification quadratic, and the protocol search optimizes
raw filter entries without ever seeing canonical forms or the probability
formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .ranges import Subspace
from .states import DensityMatrix, StateError, kron, permute_systems

SQRT_HALF = np.sqrt(0.5)
CONTINUUM_GRID_FRACTION = 0.25
ZERO_DET_TOL = 1e-10
DISTINCT_RAY_TOL = 1e-5  # minimum projective sine distance between zeros


@dataclass(frozen=True)
class ProductZeroCount:
    """Distinct determinant zeros found on the projective line of a 2-dim
    subspace; continuum means the determinant vanished along a curve."""

    count: int
    continuum: bool
    zeros: tuple[tuple[float, float], ...]  # (theta, phi) locations


def _det_grid(v: np.ndarray, w: np.ndarray, theta: np.ndarray,
              phi: np.ndarray) -> np.ndarray:
    a = np.cos(theta)[:, None]
    b = (np.sin(theta)[:, None] * np.exp(1j * phi)[None, :])
    s = a[..., None] * v + b[..., None] * w
    return np.abs(s[..., 0] * s[..., 3] - s[..., 1] * s[..., 2])


def _state_at(v, w, theta, phi):
    s = np.cos(theta) * v + np.sin(theta) * np.exp(1j * phi) * w
    return s / np.linalg.norm(s)


def sample_product_zeros(sub: Subspace, grid_points: int = 48,
                         zero_tol: float = ZERO_DET_TOL) -> ProductZeroCount:
    """Count product states in a 2-dim subspace by scanning |det| over the
    projective line cos(t) v + e^{i f} sin(t) w and refining grid minima."""
    if sub.dim != 2:
        raise StateError(f"expected 2-dim subspace, got dim {sub.dim}")
    v, w = sub.basis[0], sub.basis[1]
    theta = np.linspace(0.0, np.pi / 2.0, grid_points)
    phi = np.linspace(0.0, 2.0 * np.pi, 2 * grid_points, endpoint=False)
    grid = _det_grid(v, w, theta, phi)

    if np.mean(grid < 1e-8) > CONTINUUM_GRID_FRACTION:
        return ProductZeroCount(count=0, continuum=True, zeros=())

    # Local minima with wraparound in phi; theta edges allowed.
    padded = np.pad(grid, ((1, 1), (0, 0)), constant_values=np.inf)
    padded = np.concatenate([padded[:, -1:], padded, padded[:, :1]], axis=1)
    center = padded[1:-1, 1:-1]
    is_min = np.ones_like(grid, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == dj == 0:
                continue
            is_min &= center <= padded[1 + di:padded.shape[0] - 1 + di,
                                       1 + dj:padded.shape[1] - 1 + dj]
    candidates = np.argwhere(is_min)
    order = np.argsort(grid[candidates[:, 0], candidates[:, 1]])
    candidates = candidates[order]

    def det_at(x):
        s = np.cos(x[0]) * v + np.sin(x[0]) * np.exp(1j * x[1]) * w
        return abs(s[0] * s[3] - s[1] * s[2])

    def sine_dist(s1, s2):
        return np.sqrt(max(0.0, 1.0 - abs(np.vdot(s1, s2)) ** 2))

    zeros: list[tuple[float, float]] = []
    states: list[np.ndarray] = []
    examined: list[np.ndarray] = []
    refinements = 0
    for i, j in candidates:
        if refinements >= 12:
            break
        st0 = _state_at(v, w, theta[i], phi[j])
        # Skip grid minima that duplicate an already-examined direction
        # (exact-zero rows produce whole curves of tied candidates).
        if any(sine_dist(st0, other) < 3e-2 for other in examined):
            continue
        examined.append(st0)
        refinements += 1
        res = scipy.optimize.minimize(
            det_at, x0=np.array([theta[i], phi[j]]), method="Nelder-Mead",
            options={"xatol": 1e-11, "fatol": 1e-16, "maxiter": 250})
        if res.fun > zero_tol:
            continue
        st = _state_at(v, w, res.x[0], res.x[1])
        if all(sine_dist(st, other) > DISTINCT_RAY_TOL for other in states):
            states.append(st)
            zeros.append((float(res.x[0]), float(res.x[1])))

    if len(zeros) == 1:
        # A second zero closer than the grid resolution would have merged
        # into the same minimum.  Deflate by the distance to the found zero
        # and re-minimize; a true double zero re-converges onto itself.
        x1 = np.array(zeros[0])
        s1 = states[0]

        def deflated(x):
            st = _state_at(v, w, x[0], x[1])
            return det_at(x) / max(sine_dist(st, s1), 1e-12)

        for radius in (3e-2, 3e-3, 3e-4):
            for angle in np.linspace(0.0, 2.0 * np.pi, 6, endpoint=False):
                start = x1 + radius * np.array([np.cos(angle), np.sin(angle)])
                res = scipy.optimize.minimize(
                    deflated, x0=start, method="Nelder-Mead",
                    options={"xatol": 1e-12, "fatol": 1e-18, "maxiter": 250})
                st = _state_at(v, w, res.x[0], res.x[1])
                if (det_at(res.x) <= zero_tol
                        and sine_dist(st, s1) > DISTINCT_RAY_TOL):
                    states.append(st)
                    zeros.append((float(res.x[0]), float(res.x[1])))
                    break
            if len(zeros) > 1:
                break
    return ProductZeroCount(count=len(zeros), continuum=False,
                            zeros=tuple(zeros))


@dataclass(frozen=True)
class SearchConfig:
    """Budget and thresholds of the protocol search; identical configs
    (including the seed) give bit-identical results."""

    seed: int
    restarts: int = 64
    iterations_per_restart: int = 2000
    purity_eps: float = 1e-6
    entanglement_eps: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1 or self.iterations_per_restart < 1:
            raise ValueError("counts must be >= 1")
        for eps in (self.purity_eps, self.entanglement_eps):
            if not (0.0 < eps < 1.0):
                raise ValueError("eps must lie in (0, 1)")


@dataclass(frozen=True)
class SearchResult:
    best_probability: float
    best_m: np.ndarray
    best_n: np.ndarray
    output_purity: float
    output_schmidt_gap: float
    feasible: bool
    restart_index: int


class _Channel:
    """Exact filtered-output statistics of rho x sigma for batches of
    product filters, via the rank-k Gram representation."""

    def __init__(self, rho: DensityMatrix, sigma: DensityMatrix):
        big = kron(rho.matrix, sigma.matrix)
        big = permute_systems(big, ("A", "B", "Ap", "Bp"),
                              ("A", "Ap", "B", "Bp"))
        vals, vecs = np.linalg.eigh(big)
        keep = vals > 1e-12
        self.weights = vals[keep]
        self.vectors = vecs[:, keep].T.reshape(-1, 4, 4)  # (k, AA', BB')
        self.sqrt_w = np.sqrt(self.weights)

    def evaluate(self, m: np.ndarray, n: np.ndarray):
        """Per batch entry: channel trace, output purity and the largest
        deviation of the top two output Schmidt coefficients from
        1/sqrt(2)."""
        u = np.einsum("rab,kbc,rdc->rkad", m, self.vectors, n)
        h = np.einsum("rkad,rlad->rkl", u.conj(), u)
        h *= self.sqrt_w[:, None] * self.sqrt_w[None, :]
        evals, evecs = np.linalg.eigh(h)
        evals = np.maximum(evals, 0.0)
        total = evals.sum(axis=1)
        safe = np.maximum(total, 1e-150)  # squared below; avoid underflow
        purity = (evals ** 2).sum(axis=1) / safe ** 2
        top = evecs[:, :, -1]
        tmat = np.einsum("rk,rkad->rad", top * self.sqrt_w[None, :], u)
        sv = np.linalg.svd(tmat, compute_uv=False)
        norms = np.maximum(np.linalg.norm(sv, axis=1), 1e-300)
        sv = sv / norms[:, None]
        gap = np.maximum(np.abs(sv[:, 0] - SQRT_HALF),
                         np.abs(sv[:, 1] - SQRT_HALF))
        return total, purity, gap


def _spectral_normalize(op: np.ndarray) -> np.ndarray:
    top = np.linalg.svd(op, compute_uv=False)[0]
    return op / max(top, 1e-300)


class _Refiner:
    """One restart of the penalty-ramped alternating refinement.

    With one filter and the target maximally entangled direction held
    fixed, (aligned weight) - kappa * (leaked weight) is an exact quadratic
    form in the other filter, so each half-sweep is a 16x16 top-eigenvector
    problem followed by a rescale to operator norm 1.  The ramp in kappa
    moves from probability-seeking to strictly-purifying behaviour."""

    def __init__(self, chan: _Channel):
        self.w = chan.weights
        self.vecs = chan.vectors
        self.sqrt_w = chan.sqrt_w
        self.eye4 = np.eye(4)

    def target_state(self, m, n):
        """Nearest maximally entangled direction to the dominant output."""
        u = np.einsum("ab,kbc,dc->kad", m, self.vecs, n)
        h = np.einsum("kad,lad->kl", u.conj(), u)
        h *= self.sqrt_w[:, None] * self.sqrt_w[None, :]
        top = np.linalg.eigh(h)[1][:, -1]
        tmat = np.einsum("k,kad->ad", top * self.sqrt_w, u)
        uu, _, vh = np.linalg.svd(tmat)
        return (np.outer(uu[:, 0], vh[0, :])
                + np.outer(uu[:, 1], vh[1, :])) * SQRT_HALF

    @staticmethod
    def _top_filter(q: np.ndarray) -> np.ndarray:
        vec = np.linalg.eigh(q)[1][:, -1]
        # Fix the eigenvector's global phase so converged iterates stop
        # moving instead of circling in the gauge direction.
        pivot = vec[np.argmax(np.abs(vec))]
        vec = vec * (pivot.conj() / abs(pivot))
        return _spectral_normalize(vec.reshape(4, 4))

    def m_step(self, n, psi, kappa):
        a = np.einsum("kbc,dc->kbd", self.vecs, n)  # V_k n^T
        t = np.einsum("k,kbc,kdc->bd", self.w, a, a.conj())
        q1 = np.kron(self.eye4, t.conj())
        g = np.einsum("kbd,da->kba", a, psi.conj().T)
        g = g.transpose(0, 2, 1).reshape(len(self.w), 16)
        q2 = np.einsum("k,ki,kj->ij", self.w, g.conj(), g)
        return self._top_filter((1.0 + kappa) * q2 - kappa * q1)

    def n_step(self, m, psi, kappa):
        b = np.einsum("ab,kbc->kac", m, self.vecs)  # m V_k
        t = np.einsum("k,kac,kad->cd", self.w, b.conj(), b)
        q1 = np.kron(self.eye4, t)
        h = np.einsum("kca,ad->kcd", b.transpose(0, 2, 1), psi.conj())
        h = h.transpose(0, 2, 1).reshape(len(self.w), 16)
        q2 = np.einsum("k,ki,kj->ij", self.w, h.conj(), h)
        return self._top_filter((1.0 + kappa) * q2 - kappa * q1)


# Plateau penalty weights cycled across restarts.  Low plateaus explore
# the probability-rich region and nail near-symmetric optima; high
# plateaus are needed when the optimum is small and low-penalty fixed
# points are all infeasible.
_PLATEAUS = (9.0, 100.0, 1000.0)
_KAPPA_FINAL = 1e9
_CONVERGED = 1e-13


def _kappa_segments(iterations: int,
                    plateau: float) -> list[tuple[np.ndarray, bool]]:
    """Plateau at a fixed penalty weight, then ramp to strict feasibility.

    The plateau may terminate early once the iterate stops moving; the
    ramp never does.  The sweep count saturates at 400: the ramp endpoint
    is a fixed point, and further strict-penalty sweeps slowly trade the
    success probability away instead of improving anything."""
    base = min(iterations, 400)
    return [
        (np.full(base // 2, plateau), True),
        (np.geomspace(plateau, _KAPPA_FINAL, base - base // 2), False),
    ]


def search_best_protocol(rho: DensityMatrix, sigma: DensityMatrix,
                         cfg: SearchConfig) -> SearchResult:
    """Maximize the success trace over norm-1 product filters subject to a
    near-pure, near-maximally-entangled output.

    Seeded random restarts each run the penalty-ramped alternating
    refinement; every endpoint is re-verified exactly and the merge is
    deterministic (max probability among feasible endpoints, ties broken
    by restart index), so results are bit-reproducible given the config."""
    chan = _Channel(rho, sigma)
    refiner = _Refiner(chan)
    rng = np.random.default_rng(cfg.seed)
    def refine(m, n, plateau):
        for kappas, may_stop in _kappa_segments(cfg.iterations_per_restart,
                                                plateau):
            for kappa in kappas:
                psi = refiner.target_state(m, n)
                m_new = refiner.m_step(n, psi, kappa)
                n_new = refiner.n_step(m_new, psi, kappa)
                moved = max(np.max(np.abs(m_new - m)),
                            np.max(np.abs(n_new - n)))
                m, n = m_new, n_new
                if may_stop and moved < _CONVERGED:
                    break
        return m, n

    filters = []
    for index in range(cfg.restarts):
        m = _spectral_normalize(rng.standard_normal((4, 4))
                                + 1j * rng.standard_normal((4, 4)))
        n = _spectral_normalize(rng.standard_normal((4, 4))
                                + 1j * rng.standard_normal((4, 4)))
        filters.append(refine(m, n, _PLATEAUS[index % len(_PLATEAUS)]))

    ms = np.stack([f[0] for f in filters])
    ns = np.stack([f[1] for f in filters])
    trace, purity, gap = chan.evaluate(ms, ns)
    deficit = 1.0 - purity
    feasible_mask = (deficit <= cfg.purity_eps) & (gap <= cfg.entanglement_eps)

    if np.any(feasible_mask):
        cand = np.where(feasible_mask, trace, -np.inf)
        best = int(np.argmax(cand))  # argmax keeps the lowest tied index
        # Re-anneal the winner from a low plateau: endpoints that escaped a
        # high-penalty basin often improve once re-relaxed, and a second
        # pass through the ramp keeps the result strictly feasible.
        m2, n2 = refine(ms[best], ns[best], _PLATEAUS[0])
        tr2, pur2, gap2 = chan.evaluate(m2[None], n2[None])
        if (1.0 - pur2[0] <= cfg.purity_eps
                and gap2[0] <= cfg.entanglement_eps
                and tr2[0] > trace[best]):
            return SearchResult(
                best_probability=float(tr2[0]),
                best_m=m2,
                best_n=n2,
                output_purity=float(pur2[0]),
                output_schmidt_gap=float(gap2[0]),
                feasible=True,
                restart_index=best,
            )
        feasible = True
    else:
        # Best attempt: least constraint violation, trace breaking ties.
        viol = deficit + gap
        best = int(np.lexsort((-trace, viol))[0])
        feasible = False
    return SearchResult(
        best_probability=float(trace[best]),
        best_m=ms[best],
        best_n=ns[best],
        output_purity=float(purity[best]),
        output_schmidt_gap=float(gap[best]),
        feasible=feasible,
        restart_index=best,
    )
