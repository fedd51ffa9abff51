"""BiLipschitz distortion between finite point sets.

Distortion of a bijection is Lip * Lip_inv, the product of the largest
expansion and the largest contraction over all pairs; it is
scale-invariant and equals 1 exactly when the bijection is a similarity.
pair_distortion enumerates all bijections (exact, tiny inputs only);
greedy_distortion scales further with seeded nearest-neighbor matchings
plus 2-swap local search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

MAX_EXACT = 8


@dataclass(frozen=True)
class DistortionResult:
    mapping: tuple[int, ...]   # X[i] -> Y[mapping[i]]
    lip: float
    lip_inv: float

    @property
    def distortion(self) -> float:
        return self.lip * self.lip_inv


def _dist_matrix(P: np.ndarray) -> np.ndarray:
    d = np.sqrt(((P[:, None, :] - P[None, :, :]) ** 2).sum(-1))
    return d


def _check_inputs(X, Y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if len(X) != len(Y):
        raise ValueError("point sets must have equal cardinality")
    if len(X) < 2:
        raise ValueError("need at least 2 points")
    return X, Y


def _eval_mapping(DX: np.ndarray, DY: np.ndarray, sigma: np.ndarray,
                  iu: np.ndarray, ju: np.ndarray) -> tuple[float, float]:
    dx = DX[iu, ju]
    dy = DY[sigma[iu], sigma[ju]]
    if np.any(dx == 0) or np.any(dy == 0):
        raise ValueError("duplicate points in input")
    r = dy / dx
    return float(r.max()), float((1.0 / r).max())


def pair_distortion(X, Y) -> DistortionResult:
    """Exact minimum distortion over all bijections (|X| <= 8)."""
    X, Y = _check_inputs(X, Y)
    n = len(X)
    if n > MAX_EXACT:
        raise ValueError(f"exact search limited to {MAX_EXACT} points")
    DX = _dist_matrix(X)
    DY = _dist_matrix(Y)
    iu, ju = np.triu_indices(n, k=1)
    best = None
    for perm in permutations(range(n)):
        sigma = np.array(perm)
        lip, lip_inv = _eval_mapping(DX, DY, sigma, iu, ju)
        if best is None or lip * lip_inv < best.lip * best.lip_inv:
            best = DistortionResult(perm, lip, lip_inv)
    return best


def _nn_matching(X: np.ndarray, Y: np.ndarray, order: np.ndarray) -> np.ndarray:
    n = len(X)
    sigma = np.full(n, -1)
    used = np.zeros(n, dtype=bool)
    for i in order:
        d = ((Y - X[i]) ** 2).sum(-1)
        d[used] = np.inf
        j = int(d.argmin())
        sigma[i] = j
        used[j] = True
    return sigma


def _two_swap(DX, DY, sigma, iu, ju) -> np.ndarray:
    n = len(sigma)
    cur_lip, cur_inv = _eval_mapping(DX, DY, sigma, iu, ju)
    cur = cur_lip * cur_inv
    improved = True
    while improved:
        improved = False
        for a in range(n):
            for b in range(a + 1, n):
                sigma[a], sigma[b] = sigma[b], sigma[a]
                lip, inv = _eval_mapping(DX, DY, sigma, iu, ju)
                if lip * inv < cur - 1e-15:
                    cur = lip * inv
                    improved = True
                else:
                    sigma[a], sigma[b] = sigma[b], sigma[a]
    return sigma


def greedy_distortion(X, Y, restarts: int = 8, seed: int = 0) -> DistortionResult:
    """Best distortion over seeded nearest-neighbor matchings refined by
    2-swap local search; an upper bound on the exact optimum.

    restarts=0 returns the single nearest-neighbor matching in index
    order, without local search.
    """
    X, Y = _check_inputs(X, Y)
    if restarts < 0:
        raise ValueError("restarts must be >= 0")
    n = len(X)
    DX = _dist_matrix(X)
    DY = _dist_matrix(Y)
    iu, ju = np.triu_indices(n, k=1)

    if restarts == 0:
        sigma = _nn_matching(X, Y, np.arange(n))
        lip, inv = _eval_mapping(DX, DY, sigma, iu, ju)
        return DistortionResult(tuple(int(s) for s in sigma), lip, inv)

    rng = np.random.default_rng(seed)
    best = None
    for r in range(restarts):
        order = np.arange(n) if r == 0 else rng.permutation(n)
        sigma = _nn_matching(X, Y, order)
        sigma = _two_swap(DX, DY, sigma, iu, ju)
        lip, inv = _eval_mapping(DX, DY, sigma, iu, ju)
        if best is None or lip * inv < best.lip * best.lip_inv:
            best = DistortionResult(tuple(int(s) for s in sigma), lip, inv)
    return best
