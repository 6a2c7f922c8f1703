"""Primitive norms: vector p-norms, family sup norms, the four matrix
lattice norms (max row sum, max column sum, sum of row maxima, sum of
column maxima), the nonnegative-matrix p->p operator norm with a
certified bracket, and the regular norm (operator norm of the entrywise
modulus matrix).

The operator norm of a nonnegative matrix M on l_p is computed by the
nonlinear power-type iteration

    x  <-  normalize( (M^T (M x)^(p-1))^(1/(p-1)) ),      1 < p < inf.

Every iterate yields two certified one-sided bounds:

  * lower:  ||M x||_p for the current unit vector x, and
  * upper:  the weighted Schur test
            UB(x) = ( max_j [M^T (M x)^(p-1)]_j / x_j^(p-1) )^(1/p),

so the iteration maintains a shrinking enclosure [lb, ub] of the true
norm.  (The upper bound follows from Hoelder's inequality applied with
splitting weights x^(1/p'); at a fixed point the two bounds coincide.)
For strictly positive M the iteration map is a contraction in the
Hilbert projective metric, so the all-ones start suffices; matrices
with zero entries additionally run a fixed set of seeded random starts.

p = 1 and p = inf are evaluated by the exact closed forms (max column
sum and max row sum); the same helper functions back a1_norm/a0_norm,
so the endpoint identities hold with zero floating-point discrepancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, DomainError
from .model import ExponentSpec, FamilyWitness, MatrixOperator, NonnegVector

_TINY = 1e-300


# ---------------------------------------------------------------------------
# scalar / vector primitives


def vector_p_norm(x, p) -> float:
    """The l_p norm (sum |x_i|^p)^(1/p), max |x_i| at p = inf.

    Computed against the largest modulus to avoid overflow for large p.
    """
    p = ExponentSpec.parse(p)
    a = np.abs(np.asarray(x, dtype=np.complex128).reshape(-1))
    top = a.max(initial=0.0)
    if top == 0.0:
        return 0.0
    if p.is_inf:
        return float(top)
    if p.is_one:
        return float(a.sum())
    return float(top * (np.sum((a / top) ** p.p)) ** (1.0 / p.p))


def family_sup_norm(F: FamilyWitness, p) -> float:
    """||s||_p for the pointwise modulus sup s_j = max_i |x_i(j)| of the family."""
    sup = np.max(np.abs(F.members), axis=0)
    return vector_p_norm(sup, p)


# ---------------------------------------------------------------------------
# the four lattice matrix norms
#
# The endpoint routes of regular_norm call _max_row_sum/_max_col_sum on the
# same modulus array, so a0/a1 agreement there is exact, not approximate.


def _max_row_sum(modulus: np.ndarray) -> float:
    return float(modulus.sum(axis=1).max())


def _max_col_sum(modulus: np.ndarray) -> float:
    return float(modulus.sum(axis=0).max())


def a0_norm(A: MatrixOperator) -> float:
    """Max absolute row sum: the norm of A as an operator on l_inf."""
    return _max_row_sum(np.abs(A.data))


def a1_norm(A: MatrixOperator) -> float:
    """Max absolute column sum: the norm of A as an operator on l_1."""
    return _max_col_sum(np.abs(A.data))


def b0_norm(B: MatrixOperator) -> float:
    """Sum over rows of the largest entry modulus in each row (dual of a0)."""
    return float(np.abs(B.data).max(axis=1).sum())


def b1_norm(B: MatrixOperator) -> float:
    """Sum over columns of the largest entry modulus in each column (dual of a1)."""
    return float(np.abs(B.data).max(axis=0).sum())


# ---------------------------------------------------------------------------
# nonnegative operator p-norm with certified bracket


@dataclass(frozen=True)
class NormWitness:
    """A certified operator-norm value with extremal vectors.

    ``value`` is the best certified lower bound, ``upper`` the best
    certified upper bound (value <= true norm <= upper).  ``maximizer``
    x has unit p-norm and attains value = ||M x||_p; ``dual`` y has unit
    p'-norm and pairs to <y, M x> = value - residual.
    """

    value: float
    maximizer: NonnegVector
    dual: NonnegVector
    lower: float
    upper: float
    residual: float
    iterations: int


def _unit_nonneg(x: np.ndarray, p: float) -> np.ndarray:
    top = x.max()
    if top <= 0.0:
        raise DomainError("cannot normalize the zero vector")
    scaled = x / top
    return scaled / (np.sum(scaled ** p)) ** (1.0 / p)


def _bracket_iteration(M, MT, p, x, lb_state, max_iter, tol):
    """Run the power-type iteration from x, updating the shared bracket.

    ``lb_state`` is a dict carrying the running enclosure across starts:
    keys lb, ub, x (argmax of lb), z (= M x at that argmax), iters.
    Returns True when the enclosure is tight enough.
    """
    pm1 = p - 1.0
    for _ in range(max_iter):
        lb_state["iters"] += 1
        z = M @ x
        zmax = z.max()
        if zmax <= 0.0:
            break  # x supported on zero columns only; caller seeds better
        lb = float(zmax * np.sum((z / zmax) ** p) ** (1.0 / p))
        if lb > lb_state["lb"]:
            lb_state["lb"], lb_state["x"], lb_state["z"] = lb, x.copy(), z.copy()
        w = MT @ ((z / zmax) ** pm1)
        ub = float(zmax ** (pm1 / p) * np.max(w / (x ** pm1)) ** (1.0 / p))
        if ub < lb_state["ub"]:
            lb_state["ub"] = ub
        if lb_state["ub"] <= lb_state["lb"] * (1.0 + tol):
            return True
        x = np.maximum(w, _TINY) ** (1.0 / pm1)
        x = _unit_nonneg(x, p)
    return lb_state["ub"] <= lb_state["lb"] * (1.0 + tol)


def _nonneg_norm_core(modulus, p, tol, max_iter, starts, seed, x0=None):
    """Bracketed norm of a nonnegative float matrix for 1 < p < inf.

    Returns (lb, ub, x_full, z_full, iters).  Raises BudgetError when the
    enclosure never reaches the requested tolerance.
    """
    m, n = modulus.shape
    col_keep = np.flatnonzero(modulus.sum(axis=0) > 0.0)
    row_keep = np.flatnonzero(modulus.sum(axis=1) > 0.0)
    if col_keep.size == 0:  # zero matrix
        x = np.zeros(n)
        x[0] = 1.0
        return 0.0, 0.0, x, np.zeros(m), 0
    R = modulus[np.ix_(row_keep, col_keep)]
    RT = R.T.copy()
    state = {"lb": 0.0, "ub": math.inf, "x": None, "z": None, "iters": 0}

    start_list = []
    if x0 is not None:
        warm = np.maximum(np.asarray(x0, dtype=np.float64)[col_keep], _TINY)
        start_list.append(warm)
    start_list.append(np.ones(col_keep.size))
    done = False
    for s in start_list:
        if _bracket_iteration(R, RT, p, _unit_nonneg(s, p), state, max_iter, tol):
            done = True
            break
    if not done and np.all(R > 0.0):
        # strictly positive kernel: the iteration map is a Hilbert-metric
        # contraction with a unique fixed point, so extra starts cannot
        # improve the enclosure; fall through to the budget check.
        pass
    elif not done:
        rng = np.random.default_rng(seed)
        for _ in range(starts):
            s = rng.random(col_keep.size) + 1e-3
            if _bracket_iteration(R, RT, p, _unit_nonneg(s, p), state, max_iter, tol):
                done = True
                break
    if not done and not state["ub"] <= state["lb"] * (1.0 + tol):
        raise BudgetError(
            f"norm bracket [{state['lb']!r}, {state['ub']!r}] did not reach "
            f"relative tolerance {tol!r} within the iteration budget",
            best=(state["lb"], state["ub"]))
    x_full = np.zeros(n)
    x_full[col_keep] = state["x"]
    z_full = np.zeros(m)
    z_full[row_keep] = state["z"]
    return state["lb"], state["ub"], x_full, z_full, state["iters"]


def _endpoint_witness(modulus, p_is_one):
    """Exact closed forms at p in {1, inf} with first-index tie-breaking."""
    m, n = modulus.shape
    if p_is_one:
        value = _max_col_sum(modulus)
        j = int(np.argmax(modulus.sum(axis=0)))
        x = np.zeros(n)
        x[j] = 1.0
        y = np.ones(m)  # unit in l_inf; <y, Mx> is exactly the column sum
    else:
        value = _max_row_sum(modulus)
        i = int(np.argmax(modulus.sum(axis=1)))
        x = np.ones(n)  # unit in l_inf
        y = np.zeros(m)
        y[i] = 1.0
    return value, x, y


def nonneg_operator_p_norm(M: MatrixOperator, p, tol: float = 1e-9, *,
                           max_iter: int = 10000, starts: int = 8,
                           seed: int = 0, x0=None) -> NormWitness:
    """sup { ||M x||_p : x >= 0, ||x||_p = 1 } for entrywise-nonnegative M,
    certified by the enclosure described in the module docstring.

    At the endpoints the value is the exact max column sum (p = 1) or max
    row sum (p = inf); no iteration runs there.
    """
    p = ExponentSpec.parse(p)
    data = M.data
    if np.iscomplexobj(data):
        if np.any(data.imag != 0.0):
            raise DomainError("matrix must have real nonnegative entries")
        data = data.real
    modulus = np.asarray(data, dtype=np.float64)
    if np.any(modulus < 0.0):
        raise DomainError("matrix must have real nonnegative entries")

    if p.is_one or p.is_inf:
        value, x, y = _endpoint_witness(modulus, p.is_one)
        pairing = float(y @ (modulus @ x))
        return NormWitness(value=value, maximizer=NonnegVector(x), dual=NonnegVector(y),
                           lower=value, upper=value,
                           residual=abs(pairing - value), iterations=0)

    lb, ub, x, z, iters = _nonneg_norm_core(modulus, p.p, tol, max_iter,
                                            starts, seed, x0=x0)
    ub = max(ub, lb)  # the two sides may cross by one ulp at convergence
    if lb == 0.0:  # zero matrix: canonical witnesses e_1
        y = np.zeros(modulus.shape[0])
        y[0] = 1.0
        return NormWitness(value=0.0, maximizer=NonnegVector(x), dual=NonnegVector(y),
                           lower=0.0, upper=0.0, residual=0.0, iterations=iters)
    # dual vector y = (Mx)^(p-1) normalized in l_p'; then <y, Mx> = ||Mx||_p
    ypow = (z / z.max()) ** (p.p - 1.0)
    y = ypow / vector_p_norm(ypow, p.p_conj)
    pairing = float(y @ z)
    return NormWitness(value=lb, maximizer=NonnegVector(x), dual=NonnegVector(y),
                       lower=lb, upper=ub, residual=abs(pairing - lb),
                       iterations=iters)


def regular_norm(A: MatrixOperator, p, tol: float = 1e-9, *,
                 max_iter: int = 10000, starts: int = 8, seed: int = 0,
                 x0=None) -> NormWitness:
    """The regular norm of A on l_p: the p->p operator norm of the
    entrywise modulus matrix |A|.

    Equals a1_norm(A) exactly at p = 1 and a0_norm(A) exactly at p = inf
    (same closed forms, same floats).
    """
    modulus = MatrixOperator(np.abs(A.data).astype(np.complex128))
    return nonneg_operator_p_norm(modulus, p, tol, max_iter=max_iter,
                                  starts=starts, seed=seed, x0=x0)


def family_ratio(A: MatrixOperator, F: FamilyWitness, p) -> float:
    """||sup_i |A x_i|||_p / ||sup_i |x_i|||_p - a certified lower bound
    for the regular norm, for any finite family (x_i)."""
    if F.length != A.cols:
        raise DomainError(
            f"family members have length {F.length}, matrix has {A.cols} columns")
    den = family_sup_norm(F, p)
    if den == 0.0:
        raise DomainError("family sup norm vanishes; ratio undefined")
    images = FamilyWitness(F.members @ A.data.T)
    return family_sup_norm(images, p) / den
