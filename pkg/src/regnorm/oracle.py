"""Slow brute-force references for the fast solvers.

These deliberately re-derive every quantity from scratch with their own
inline arithmetic; they share no helper functions with the production
code paths, so an agreement between the two is evidence, not tautology.
They refuse sizes beyond what dense enumeration can certify.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RefusalError
from .model import ExponentSpec, MatrixOperator

__all__ = ["GridSpec", "oracle_operator_p_norm", "oracle_calderon_norm",
           "oracle_family_search"]


@dataclass(frozen=True)
class GridSpec:
    """Search-grid parameters: points per dimension and (for the
    factorization search) log-domain bounds around each entry."""

    resolution: int = 9
    log_lo: float = -2.5
    log_hi: float = 2.5

    def __post_init__(self):
        if self.resolution < 2:
            raise DomainError("grid resolution must be at least 2")
        if not (math.isfinite(self.log_lo) and math.isfinite(self.log_hi)):
            raise DomainError("grid bounds must be finite")


def _as_nonneg_array(M):
    data = M.data if isinstance(M, MatrixOperator) else np.asarray(M)
    if np.iscomplexobj(data):
        if np.any(data.imag != 0.0):
            raise DomainError("oracle expects a real nonnegative matrix")
        data = data.real
    data = np.asarray(data, dtype=np.float64)
    if np.any(data < 0.0):
        raise DomainError("oracle expects a real nonnegative matrix")
    return data


def _simplex_grid(dim, resolution):
    """All nonnegative integer vectors of length dim summing to resolution,
    scaled to the probability simplex."""
    out = []
    for cut in itertools.combinations(range(resolution + dim - 1), dim - 1):
        prev, comp = -1, []
        for c in cut:
            comp.append(c - prev - 1)
            prev = c
        comp.append(resolution + dim - 2 - prev)
        out.append(comp)
    return np.array(out, dtype=np.float64) / float(resolution)


def oracle_operator_p_norm(M, p, grid: GridSpec | None = None) -> float:
    """max ||M x||_p over the nonnegative p-sphere by dense simplex
    enumeration plus deterministic compass polish.  Always a valid lower
    bound; the grid gap is O(1/resolution) before polishing.

    Refuses matrices with more than 3 columns.
    """
    M = _as_nonneg_array(M)
    m, n = M.shape
    if n > 3:
        raise RefusalError(f"oracle limited to 3 columns, got {n}")
    p = ExponentSpec.parse(p)

    if p.is_one:
        best = 0.0
        for j in range(n):
            total = 0.0
            for i in range(m):
                total += M[i][j]
            best = max(best, total)
        return best
    if p.is_inf:
        best = 0.0
        for i in range(m):
            total = 0.0
            for j in range(n):
                total += M[i][j]
            best = max(best, total)
        return best

    pp = p.p
    if grid is None:
        grid = GridSpec(resolution=240 if n <= 2 else 72)
    simplex = _simplex_grid(n, grid.resolution)
    X = simplex ** (1.0 / pp)                      # rows satisfy sum x^p = 1
    vals = np.sum((X @ M.T) ** pp, axis=1) ** (1.0 / pp)
    k = int(np.argmax(vals))
    best, x = float(vals[k]), X[k].copy()

    step = 1.0 / grid.resolution
    while step > 1e-10:
        improved = False
        for j in range(n):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[j] = max(cand[j] + sign * step, 0.0)
                norm = np.sum(cand ** pp) ** (1.0 / pp)
                if norm == 0.0:
                    continue
                cand /= norm
                val = float(np.sum((M @ cand) ** pp) ** (1.0 / pp))
                if val > best:
                    best, x, improved = val, cand, True
        if not improved:
            step *= 0.5
    return best


def oracle_calderon_norm(A, theta: float, grid: GridSpec | None = None) -> float:
    """Best factorization bound inf a0(f0)^(1-theta) a1(f1)^theta over a
    shrinking log-space grid for f0 on the support of A (f1 is eliminated
    through the equality |a| = f0^(1-theta) f1^theta).  2x2 matrices only.

    The objective is exactly constant along the all-ones log direction
    (the rescaling lambda f0, lambda^{-(1-theta)/theta} f1), so the search
    runs in the zero-sum hyperplane; boxes re-center without shrinking
    while the minimizer sits on their boundary, and a pattern polish with
    step expansion finishes the job.
    """
    M = _as_nonneg_array(A)
    if M.shape != (2, 2):
        raise RefusalError(f"oracle limited to 2x2 matrices, got {M.shape}")
    if not 0.0 < theta < 1.0:
        raise DomainError(f"theta must lie in (0, 1), got {theta!r}")
    if grid is None:
        grid = GridSpec(resolution=11, log_lo=-3.0, log_hi=3.0)
    support = [(i, j) for i in range(2) for j in range(2) if M[i][j] > 0.0]
    if not support:
        return 0.0
    logm = np.array([math.log(M[i][j]) for (i, j) in support])
    s = len(support)
    if s == 1:
        return float(M[support[0]])  # f0 = f1 = |a| already optimal

    def objective(U):
        # U: (batch, s) log f0 values on the support
        F0 = np.zeros((U.shape[0], 2, 2))
        F1 = np.zeros_like(F0)
        for idx, (i, j) in enumerate(support):
            F0[:, i, j] = np.exp(U[:, idx])
            F1[:, i, j] = np.exp((logm[idx] - (1.0 - theta) * U[:, idx]) / theta)
        row = F0.sum(axis=2).max(axis=1)     # a0 of f0, computed inline
        col = F1.sum(axis=1).max(axis=1)     # a1 of f1, computed inline
        return row ** (1.0 - theta) * col ** theta

    hyper = np.linalg.svd(np.eye(s) - np.ones((s, s)) / s)[0][:, :s - 1]
    dim = s - 1

    def lift(coeffs):
        return logm[None, :] + coeffs @ hyper.T

    center = np.zeros(dim)
    half = (grid.log_hi - grid.log_lo) / 2.0
    axes_pts = grid.resolution
    best = math.inf
    rounds = 0
    while half > 1e-6 and rounds < 400:
        rounds += 1
        axes = [center[i] + np.linspace(-half, half, axes_pts) for i in range(dim)]
        mesh = np.stack([g.reshape(-1) for g in np.meshgrid(*axes, indexing="ij")],
                        axis=1)
        vals = objective(lift(mesh))
        k = int(np.argmin(vals))
        moved = False
        if vals[k] < best:
            on_boundary = np.any(np.abs(mesh[k] - center)
                                 >= half * (1.0 - 1.0 / (axes_pts - 1)))
            best, center, moved = float(vals[k]), mesh[k], on_boundary
        if not moved:
            half *= 0.5

    directions = np.array([d for d in itertools.product((-1.0, -0.5, 0.0, 0.5, 1.0),
                                                        repeat=dim) if any(d)])
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    step, evals = 1e-2, 0
    while step > 1e-11 and evals < 20000:
        evals += 1
        cand = center[None, :] + step * directions
        vals = objective(lift(cand))
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, center = float(vals[k]), cand[k]
            step = min(step * 2.0, 0.25)
        else:
            step *= 0.5
    return best


def _coefficient_net():
    """Moduli {0.25, 0.5, 0.75, 1} crossed with the 8th roots of unity,
    plus zero: 33 complex coefficient values."""
    phases = [np.exp(2j * math.pi * q / 8.0) for q in range(8)]
    values = [0.0 + 0.0j]
    for mod in (0.25, 0.5, 0.75, 1.0):
        for ph in phases:
            values.append(mod * ph)
    return np.array(values, dtype=np.complex128)


def _net_ratios(supX, supY, pp, p_inf):
    """Family ratios from pointwise sup profiles, inline arithmetic."""
    if p_inf:
        num = supY.max(axis=-1)
        den = supX.max(axis=-1)
    elif pp == 1.0:
        num = supY.sum(axis=-1)
        den = supX.sum(axis=-1)
    else:
        num = np.sum(supY ** pp, axis=-1) ** (1.0 / pp)
        den = np.sum(supX ** pp, axis=-1) ** (1.0 / pp)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0.0, num / np.maximum(den, 1e-300), 0.0)
    return r


def oracle_family_search(prob, cap: int = 2) -> float:
    """Exhaustive lower bound for the subspace regular norm: families whose
    coefficient vectors range over a fixed net (all sign/phase patterns at
    8th roots of unity, moduli up to 1), exhaustive through size 2 and
    greedy best-extension beyond.

    Refuses ambient dimension > 3 or more than 2 basis vectors.
    """
    if prob.ambient_n > 3 or prob.basis.shape[0] > 2:
        raise RefusalError("oracle limited to ambient_n <= 3 and k <= 2")
    if cap < 1:
        raise DomainError("family size cap must be positive")
    B = np.asarray(prob.basis, dtype=np.complex128)
    T = np.asarray(prob.images, dtype=np.complex128)
    p = prob.p
    pp, p_inf = p.p, p.is_inf
    k = B.shape[0]

    net = _coefficient_net()
    if k == 1:
        C = net[1:].reshape(-1, 1)            # drop the zero coefficient vector
    else:
        C = np.array(list(itertools.product(net, net)), dtype=np.complex128)
        C = C[np.abs(C).sum(axis=1) > 0.0]
    absX = np.abs(C @ B)                      # |members| on the ambient grid
    absY = np.abs(C @ T)

    best = float(np.max(_net_ratios(absX, absY, pp, p_inf)))
    if cap == 1:
        return best

    # exhaustive pairs, chunked to keep memory flat
    R = absX.shape[0]
    chunk = max(1, 2_000_000 // max(R, 1))
    best_pair, pair_idx = best, None
    for lo in range(0, R, chunk):
        hi = min(lo + chunk, R)
        supX = np.maximum(absX[lo:hi, None, :], absX[None, :, :])
        supY = np.maximum(absY[lo:hi, None, :], absY[None, :, :])
        ratios = _net_ratios(supX, supY, pp, p_inf)
        k2 = int(np.argmax(ratios))
        if ratios.reshape(-1)[k2] > best_pair:
            best_pair = float(ratios.reshape(-1)[k2])
            pair_idx = (lo + k2 // R, k2 % R)
    best = max(best, best_pair)

    if cap >= 3 and pair_idx is not None:
        supX = np.maximum(absX[pair_idx[0]], absX[pair_idx[1]])
        supY = np.maximum(absY[pair_idx[0]], absY[pair_idx[1]])
        for _ in range(cap - 2):
            candX = np.maximum(supX[None, :], absX)
            candY = np.maximum(supY[None, :], absY)
            ratios = _net_ratios(candX, candY, pp, p_inf)
            k3 = int(np.argmax(ratios))
            if ratios[k3] <= best:
                break
            best = float(ratios[k3])
            supX, supY = candX[k3], candY[k3]
    return best
