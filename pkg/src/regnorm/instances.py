"""Instance and certificate file I/O.

All files are UTF-8 JSON. Complex scalars are stored as [re, im] pairs;
matrices as {"rows": r, "cols": c, "entries": [[re, im], ...]} row-major.
Writing uses the shortest round-tripping decimal representation (Python's
float repr), so write -> read is lossless and byte-deterministic.
"""

from __future__ import annotations

import json
import math
import numbers

import numpy as np

from .errors import ParseError, StructuralError
from .model import ExponentSpec, MatrixOperator

SCHEMA_VERSION = "regnorm/1"


# ---------------------------------------------------------------------------
# low-level helpers


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc


def _dump_json(obj, path):
    text = json.dumps(obj, indent=2, separators=(",", ": "), sort_keys=False)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
        fh.write("\n")


def _require(cond, exc, message):
    if not cond:
        raise exc(message)


def _as_number(value, where):
    _require(isinstance(value, numbers.Real) and not isinstance(value, bool),
             ParseError, f"field {where}: expected a number, got {value!r}")
    return float(value)


def _parse_pair(pair, where):
    _require(isinstance(pair, (list, tuple)) and len(pair) == 2,
             ParseError, f"field {where}: expected an [re, im] pair, got {pair!r}")
    return complex(_as_number(pair[0], where), _as_number(pair[1], where))


def _parse_vector(obj, where):
    _require(isinstance(obj, list) and len(obj) > 0,
             ParseError, f"field {where}: expected a nonempty list of [re, im] pairs")
    return np.array([_parse_pair(pair, f"{where}[{i}]") for i, pair in enumerate(obj)],
                    dtype=np.complex128)


def _encode_vector(vec):
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in vec]


def matrix_to_obj(A: MatrixOperator) -> dict:
    flat = A.data.reshape(-1)
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_obj(obj, where="matrix") -> MatrixOperator:
    _require(isinstance(obj, dict), ParseError, f"field {where}: expected an object")
    for key in ("rows", "cols", "entries"):
        _require(key in obj, ParseError, f"field {where}.{key}: missing")
    rows, cols = obj["rows"], obj["cols"]
    _require(isinstance(rows, int) and not isinstance(rows, bool) and rows > 0,
             ParseError, f"field {where}.rows: expected a positive integer, got {rows!r}")
    _require(isinstance(cols, int) and not isinstance(cols, bool) and cols > 0,
             ParseError, f"field {where}.cols: expected a positive integer, got {cols!r}")
    entries = obj["entries"]
    _require(isinstance(entries, list), ParseError,
             f"field {where}.entries: expected a list of [re, im] pairs")
    if len(entries) != rows * cols:
        raise StructuralError(
            f"field {where}.entries: {rows}x{cols} matrix needs {rows * cols} entries, "
            f"got {len(entries)}")
    flat = [_parse_pair(pair, f"{where}.entries[{i}]") for i, pair in enumerate(entries)]
    return MatrixOperator(np.array(flat, dtype=np.complex128).reshape(rows, cols))


# ---------------------------------------------------------------------------
# matrices


def read_matrix(path) -> MatrixOperator:
    return matrix_from_obj(_load_json(path), where="matrix")


def write_matrix(path, A: MatrixOperator) -> None:
    _dump_json(matrix_to_obj(A), path)


# ---------------------------------------------------------------------------
# extension problems


def _encode_p(p: ExponentSpec):
    return "inf" if p.is_inf else float(p.p)


def extension_problem_to_obj(prob) -> dict:
    return {
        "p": _encode_p(prob.p),
        "ambient_n": prob.ambient_n,
        "target_m": prob.target_m,
        "basis": [_encode_vector(v) for v in prob.basis],
        "images": [_encode_vector(v) for v in prob.images],
    }


def extension_problem_from_obj(obj):
    # imported here to avoid a cycle (extension imports norms imports model)
    from .extension import ExtensionProblem

    _require(isinstance(obj, dict), ParseError, "extension problem: expected a JSON object")
    for key in ("p", "ambient_n", "target_m", "basis", "images"):
        _require(key in obj, ParseError, f"field {key}: missing")
    p_raw = obj["p"]
    if isinstance(p_raw, str):
        _require(p_raw.strip().lower() in ("inf", "infinity"),
                 ParseError, f"field p: expected a number or 'inf', got {p_raw!r}")
        p = ExponentSpec(math.inf)
    else:
        p = ExponentSpec(_as_number(p_raw, "p"))
    n, m = obj["ambient_n"], obj["target_m"]
    _require(isinstance(n, int) and not isinstance(n, bool) and n > 0,
             ParseError, f"field ambient_n: expected a positive integer, got {n!r}")
    _require(isinstance(m, int) and not isinstance(m, bool) and m > 0,
             ParseError, f"field target_m: expected a positive integer, got {m!r}")
    _require(isinstance(obj["basis"], list) and obj["basis"],
             ParseError, "field basis: expected a nonempty list of vectors")
    _require(isinstance(obj["images"], list),
             ParseError, "field images: expected a list of vectors")
    basis = [_parse_vector(v, f"basis[{i}]") for i, v in enumerate(obj["basis"])]
    images = [_parse_vector(v, f"images[{i}]") for i, v in enumerate(obj["images"])]
    for i, vec in enumerate(basis):
        if vec.size != n:
            raise StructuralError(f"field basis[{i}]: length {vec.size} != ambient_n {n}")
    for i, vec in enumerate(images):
        if vec.size != m:
            raise StructuralError(f"field images[{i}]: length {vec.size} != target_m {m}")
    if len(images) != len(basis):
        raise StructuralError(
            f"images count {len(images)} != basis count {len(basis)}; "
            "images correspond positionally to basis vectors")
    return ExtensionProblem(p=p, ambient_n=n, target_m=m,
                            basis=np.array(basis), images=np.array(images))


def read_extension_problem(path):
    return extension_problem_from_obj(_load_json(path))


def write_extension_problem(path, prob) -> None:
    _dump_json(extension_problem_to_obj(prob), path)


# ---------------------------------------------------------------------------
# certificates


def factorization_to_obj(cert) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "theta": float(cert.theta),
        "f0": matrix_to_obj(MatrixOperator(cert.f0.astype(np.complex128))),
        "f1": matrix_to_obj(MatrixOperator(cert.f1.astype(np.complex128))),
        "bound": float(cert.bound),
    }


def factorization_from_obj(obj):
    from .calderon import Factorization

    _require(isinstance(obj, dict), ParseError, "factorization: expected a JSON object")
    for key in ("theta", "f0", "f1", "bound"):
        _require(key in obj, ParseError, f"field {key}: missing")
    f0 = matrix_from_obj(obj["f0"], where="f0").data.real
    f1 = matrix_from_obj(obj["f1"], where="f1").data.real
    return Factorization(theta=_as_number(obj["theta"], "theta"), f0=f0, f1=f1,
                         bound=_as_number(obj["bound"], "bound"))


def read_factorization(path):
    return factorization_from_obj(_load_json(path))


def write_factorization(path, cert) -> None:
    _dump_json(factorization_to_obj(cert), path)


def dual_witness_to_obj(dw) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "theta": float(dw.theta),
        "b": matrix_to_obj(MatrixOperator(dw.b)),
        "b0": matrix_to_obj(MatrixOperator(dw.b0.astype(np.complex128))),
        "b1": matrix_to_obj(MatrixOperator(dw.b1.astype(np.complex128))),
        "pairing": float(dw.pairing),
    }


def dual_witness_from_obj(obj):
    from .calderon import DualWitness

    _require(isinstance(obj, dict), ParseError, "dual witness: expected a JSON object")
    for key in ("theta", "b", "b0", "b1", "pairing"):
        _require(key in obj, ParseError, f"field {key}: missing")
    return DualWitness(
        b=matrix_from_obj(obj["b"], where="b").data,
        b0=matrix_from_obj(obj["b0"], where="b0").data.real,
        b1=matrix_from_obj(obj["b1"], where="b1").data.real,
        theta=_as_number(obj["theta"], "theta"),
        pairing=_as_number(obj["pairing"], "pairing"),
    )


def read_dual_witness(path):
    return dual_witness_from_obj(_load_json(path))


def write_dual_witness(path, dw) -> None:
    _dump_json(dual_witness_to_obj(dw), path)


def write_report(path, obj) -> None:
    """Write a CLI report dict; the schema version is stamped on every report."""
    stamped = {"schema": SCHEMA_VERSION}
    stamped.update(obj)
    _dump_json(stamped, path)
