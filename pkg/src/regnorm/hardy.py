"""Analytic trigonometric subspaces on a discretized torus and the
endpoint-interpolation experiment for their minimal regular extensions.

The grid carries the normalized counting measure (weight 1/N per node),
so folding a factor (1/N)^(1/p) into the coordinates makes the plain
l_p norm of a sampled function equal its L_p norm on the circle.  The
subspace spanned by 1, e^{it}, ..., e^{idt} is the degree-d analytic
part; a trial operator prescribes images of that basis, and the
experiment compares the minimal extension norm at exponent p against
the bound interpolated from the endpoint extensions,

    r_inf^(1-theta) * r_1^theta,   theta = 1/p,

tabulating the ratio per trial.  The ratio is an empirical quantity:
the endpoint extensions are minimized separately, so no inequality
between the two sides is asserted a priori.
"""

from __future__ import annotations

import dataclasses
import math
import statistics
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, StructuralError
from .model import ExponentSpec
from .extension import ExtensionProblem, extension_min_norm


@dataclass(frozen=True)
class TorusGrid:
    """N equispaced nodes t_r = 2 pi r / N with weight 1/N each."""

    points: int

    def __post_init__(self):
        if not isinstance(self.points, (int, np.integer)) or self.points < 1:
            raise DomainError(f"grid needs a positive node count, got {self.points!r}")
        object.__setattr__(self, "points", int(self.points))

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.points) / self.points

    @property
    def weight(self) -> float:
        return 1.0 / self.points


@dataclass(frozen=True)
class AnalyticSubspace:
    """Characters e^{ikt}, 0 <= k <= degree, sampled on the grid."""

    grid: TorusGrid
    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, (int, np.integer)) or self.degree < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))
        if self.degree >= self.grid.points:
            raise DomainError(
                f"degree {self.degree} aliases on a {self.grid.points}-point grid "
                "(need degree < points)")

    @property
    def basis(self) -> np.ndarray:
        k = np.arange(self.degree + 1)
        return np.exp(1j * np.outer(k, self.grid.nodes))


def build_analytic_subspace(N: int, d: int, p) -> ExtensionProblem:
    """An ExtensionProblem template for the degree-d analytic subspace of
    weighted l_p^N: basis rows have unit p-norm against the normalized
    measure (the weight is folded into the coordinates), and the images
    are zero placeholders - fill them with with_images.
    """
    p = ExponentSpec.parse(p)
    space = AnalyticSubspace(grid=TorusGrid(points=N), degree=d)
    scale = space.grid.weight ** p.theta
    return ExtensionProblem(p=p, ambient_n=N, target_m=1,
                            basis=scale * space.basis,
                            images=np.zeros((d + 1, 1), dtype=np.complex128))


def with_images(template: ExtensionProblem, images) -> ExtensionProblem:
    """The template with its placeholder images replaced (one row per
    basis vector; the target dimension is read off the rows)."""
    images = np.atleast_2d(np.asarray(images, dtype=np.complex128))
    if images.shape[0] != template.k:
        raise StructuralError(
            f"expected {template.k} image rows, got {images.shape[0]}")
    return dataclasses.replace(template, images=images,
                               target_m=images.shape[1])


def _trial_images(kind, templates, m, rng):
    """Per-exponent image arrays for one trial.

    Random trials share one coordinate image across exponents (the target
    carries no weight, so nothing to rescale); identity and diagonal
    trials map the embedded space to itself, whose coordinates do depend
    on the exponent.
    """
    if kind == "random":
        k = templates[0].k
        g = (rng.standard_normal((k, m))
             + 1j * rng.standard_normal((k, m))) / math.sqrt(2.0)
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return [g] * len(templates)
    if kind == "identity":
        return [t.basis.copy() for t in templates]
    if kind == "diagonal":
        n = templates[0].ambient_n
        d_vec = rng.uniform(0.5, 2.0, size=n)
        return [t.basis * d_vec[None, :] for t in templates]
    raise DomainError(f"unknown trial kind {kind!r}")


def hardy_experiment(N: int, d: int, m: int, p, trials: int, seed: int, *,
                     trial_kind: str = "random", budget: int = 600) -> dict:
    """Ratio table for ``trials`` random operators on the degree-d analytic
    subspace of the N-point grid.

    Each row holds the minimal extension norms r_p, r_inf, r_1 of one
    operator, the interpolated endpoint bound, and their ratio.  Identity
    trials map the subspace by the identity (m becomes N); diagonal
    trials evaluate against a positive diagonal on the full trigonometric
    system (m becomes N and the degree N-1, where the diagonal itself is
    the unique extension - on a proper subspace a cheaper extension may
    exist and the ratio-1 prediction would not apply).
    """
    p = ExponentSpec.parse(p)
    if p.is_one or p.is_inf:
        raise DomainError("the interpolation ratio needs 1 < p < inf")
    if trials < 1:
        raise DomainError(f"need at least one trial, got {trials!r}")
    d_eff = (N - 1) if trial_kind == "diagonal" else d
    m_eff = N if trial_kind in ("identity", "diagonal") else m
    exponents = (p, ExponentSpec(math.inf), ExponentSpec(1.0))
    templates = [build_analytic_subspace(N, d_eff, q) for q in exponents]
    theta = p.theta
    rng = np.random.default_rng(seed)
    rows = []
    for t in range(trials):
        images = _trial_images(trial_kind, templates, m, rng)
        r = [extension_min_norm(with_images(tpl, img), budget=budget)[0]
             for tpl, img in zip(templates, images)]
        interpolated = r[1] ** (1.0 - theta) * r[2] ** theta
        rows.append({
            "trial": t,
            "r_p": r[0],
            "r_inf": r[1],
            "r_1": r[2],
            "interpolated_bound": interpolated,
            "ratio": r[0] / interpolated,
        })
    ratios = [row["ratio"] for row in rows]
    return {
        "parameters": {"N": N, "d": d_eff, "m": m_eff, "p": p.p,
                       "trials": trials, "seed": seed,
                       "trial_kind": trial_kind},
        "rows": rows,
        "summary": {"min_ratio": min(ratios),
                    "median_ratio": statistics.median(ratios),
                    "max_ratio": max(ratios)},
    }
