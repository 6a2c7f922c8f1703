"""Core domain types shared by every module.

All values are immutable after construction (arrays are frozen with
``writeable = False``), so instances are safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, StructuralError

_INF = math.inf


def _frozen_array(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class MatrixOperator:
    """A complex m-by-n matrix identified with an operator between
    finite sequence spaces.

    ``data`` is stored row-major as a 2-D complex array; ``rows`` and
    ``cols`` are derived from its shape.
    """

    data: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(
            np.atleast_2d(np.asarray(self.data, dtype=np.complex128)))
        if arr.ndim != 2:
            raise StructuralError(f"matrix must be 2-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise StructuralError(f"matrix dimensions must be positive, got {arr.shape}")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise DomainError("matrix entries must all be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __repr__(self):
        return f"MatrixOperator({self.rows}x{self.cols})"


@dataclass(frozen=True)
class ExponentSpec:
    """An exponent p in [1, inf] together with theta = 1/p and the
    Hoelder conjugate p'.

    The endpoints are represented explicitly: theta = 0 iff p = inf and
    theta = 1 iff p = 1, so callers can branch on ``is_one``/``is_inf``
    without floating-point hazards.
    """

    p: float
    theta: float = field(init=False)
    p_conj: float = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise DomainError(f"exponent p must lie in [1, inf], got {p!r}")
        object.__setattr__(self, "p", p)
        if math.isinf(p):
            object.__setattr__(self, "theta", 0.0)
            object.__setattr__(self, "p_conj", 1.0)
        elif p == 1.0:
            object.__setattr__(self, "theta", 1.0)
            object.__setattr__(self, "p_conj", _INF)
        else:
            object.__setattr__(self, "theta", 1.0 / p)
            object.__setattr__(self, "p_conj", p / (p - 1.0))

    @classmethod
    def from_theta(cls, theta: float) -> "ExponentSpec":
        theta = float(theta)
        if not 0.0 <= theta <= 1.0:
            raise DomainError(f"theta must lie in [0, 1], got {theta!r}")
        if theta == 0.0:
            return cls(_INF)
        return cls(1.0 / theta)

    @classmethod
    def parse(cls, token) -> "ExponentSpec":
        """Accept a float, an int, or the string 'inf' (any case)."""
        if isinstance(token, ExponentSpec):
            return token
        if isinstance(token, str):
            if token.strip().lower() in ("inf", "infinity", "oo"):
                return cls(_INF)
            try:
                return cls(float(token))
            except ValueError:
                raise DomainError(f"cannot parse exponent {token!r}")
        return cls(float(token))

    @property
    def is_one(self) -> bool:
        return self.p == 1.0

    @property
    def is_inf(self) -> bool:
        return math.isinf(self.p)

    def conjugate(self) -> "ExponentSpec":
        return ExponentSpec(self.p_conj)

    def __repr__(self):
        return f"ExponentSpec(p={'inf' if self.is_inf else self.p})"


@dataclass(frozen=True)
class NonnegVector:
    """A vector of finite nonnegative reals (norm witnesses live here)."""

    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=np.float64).reshape(-1)
        if arr.size == 0:
            raise StructuralError("vector must be nonempty")
        if not np.all(np.isfinite(arr)):
            raise DomainError("vector entries must all be finite")
        if np.any(arr < 0):
            raise DomainError("vector entries must all be nonnegative")
        arr.setflags(write=False)
        object.__setattr__(self, "coords", arr)

    def __len__(self):
        return self.coords.size


@dataclass(frozen=True)
class FamilyWitness:
    """A finite ordered family of complex vectors of common length,
    stored as the rows of ``members``."""

    members: np.ndarray

    def __post_init__(self):
        arr = np.atleast_2d(np.asarray(self.members, dtype=np.complex128))
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise StructuralError("family must be a nonempty list of nonempty vectors")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise DomainError("family entries must all be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "members", arr)

    @property
    def size(self) -> int:
        return self.members.shape[0]

    @property
    def length(self) -> int:
        return self.members.shape[1]


def entrywise_abs(A: MatrixOperator) -> MatrixOperator:
    """The matrix of entry moduli |a_ij| (complex modulus), as an operator."""
    return MatrixOperator(np.abs(A.data).astype(np.complex128))


def transpose(A: MatrixOperator) -> MatrixOperator:
    """Plain transposition (no conjugation): (A^T)_ij = A_ji."""
    return MatrixOperator(A.data.T.copy())
