"""Seeded random instance generators.

Everything here is driven by a caller-supplied ``numpy.random.Generator`` so
that the same seed reproduces the same instance bit for bit.  Two entry
distributions are supported: ``"gaussian"`` draws complex entries with
independent standard-normal real and imaginary parts, ``"nonneg"`` draws
real entries uniformly from [0, 1].
"""

import numpy as np

from .errors import DomainError
from .extension import ExtensionProblem
from .model import MatrixOperator

DISTRIBUTIONS = ("gaussian", "nonneg")


def _draw(rng, shape, dist):
    if dist == "gaussian":
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if dist == "nonneg":
        return rng.random(shape).astype(np.complex128)
    raise DomainError(f"unknown distribution {dist!r}, expected one of {DISTRIBUTIONS}")


def random_matrix(rows, cols, rng, dist="gaussian"):
    """Draw a ``rows`` x ``cols`` matrix from the given distribution."""
    if rows < 1 or cols < 1:
        raise DomainError(f"matrix shape must be positive, got {rows}x{cols}")
    return MatrixOperator(_draw(rng, (int(rows), int(cols)), dist))


def random_extension_problem(n, k, m, p, rng, dist="gaussian"):
    """Draw an extension problem: k independent basis rows in C^n, images in C^m.

    Random bases of size k <= n are independent with probability one; the
    handful of retries below covers the measure-zero misses.
    """
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 1:
        raise DomainError(f"target dimension must be positive, got {m}")
    for _ in range(8):
        basis = _draw(rng, (int(k), int(n)), dist)
        images = _draw(rng, (int(k), int(m)), dist)
        try:
            return ExtensionProblem(p=p, ambient_n=int(n), target_m=int(m),
                                    basis=basis, images=images)
        except DomainError:
            continue
    raise DomainError("failed to draw an independent basis after 8 attempts")
