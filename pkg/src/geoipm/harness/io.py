"""JSON problem files and feasible-pair output.

Problem document::

    {
      "cone": [{"type": "orthant"|"soc"|"psd", "size": int}, ...],
      "form": "basis",
      "x0": [...], "s0": [...], "basis_L": [[...], ...]
    }

or, with ``"form": "operator"``, the fields ``A`` (list of columns, each a
coordinate array), ``B`` (d x m rows), ``b``, ``c``, ``g``.  Coordinate
arrays use the package's flat convention (PSD blocks svec'd with sqrt(2)
off-diagonals).  Parsing rejects NaN/Inf and inconsistent lengths.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .. import jordan
from ..errors import GeoipmError, ProblemFormatError
from ..jordan import ConeDescriptor, Orthant, Psd, SecondOrder
from ..subspace import BasisForm, ConicProblem, OperatorForm

__all__ = [
    "load_problem",
    "save_problem",
    "problem_from_dict",
    "problem_to_dict",
    "write_feasible_pair",
    "read_feasible_pair",
]

_BLOCK_NAMES = {"orthant": Orthant, "soc": SecondOrder, "psd": Psd}


def _reject_constant(name: str):
    raise ProblemFormatError(f"non-finite literal {name!r} in problem file")


def _finite_array(data, what: str, length: int | None = None) -> np.ndarray:
    arr = np.asarray(data, dtype=float).reshape(-1)
    if not np.isfinite(arr).all():
        raise ProblemFormatError(f"{what} contains non-finite values")
    if length is not None and arr.shape[0] != length:
        raise ProblemFormatError(f"{what} has length {arr.shape[0]}, expected {length}")
    return arr


def _cone_from_list(entries) -> ConeDescriptor:
    if not isinstance(entries, list) or not entries:
        raise ProblemFormatError("cone must be a non-empty list of blocks")
    blocks = []
    for entry in entries:
        try:
            kind = _BLOCK_NAMES[entry["type"]]
            size = int(entry["size"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFormatError(f"bad cone block entry {entry!r}") from exc
        try:
            blocks.append(kind(size))
        except ValueError as exc:
            raise ProblemFormatError(str(exc)) from exc
    return ConeDescriptor(tuple(blocks))


def _cone_to_list(cone: ConeDescriptor) -> list:
    out = []
    for blk in cone.blocks:
        if isinstance(blk, Orthant):
            out.append({"type": "orthant", "size": blk.size})
        elif isinstance(blk, SecondOrder):
            out.append({"type": "soc", "size": blk.dim})
        else:
            out.append({"type": "psd", "size": blk.side})
    return out


def problem_from_dict(doc: dict) -> ConicProblem:
    """Build a ConicProblem from a parsed problem document."""
    if not isinstance(doc, dict):
        raise ProblemFormatError("problem document must be a JSON object")
    cone = _cone_from_list(doc.get("cone"))
    form_name = doc.get("form")
    try:
        if form_name == "basis":
            x0 = jordan.element(cone, _finite_array(doc["x0"], "x0", cone.dim))
            s0 = jordan.element(cone, _finite_array(doc["s0"], "s0", cone.dim))
            basis = tuple(
                jordan.element(cone, _finite_array(row, f"basis_L[{i}]", cone.dim))
                for i, row in enumerate(doc.get("basis_L", []))
            )
            return ConicProblem(cone, BasisForm(x0=x0, s0=s0, basis=basis))
        if form_name == "operator":
            cols = tuple(
                jordan.element(cone, _finite_array(col, f"A[{i}]", cone.dim))
                for i, col in enumerate(doc.get("A", []))
            )
            m = len(cols)
            b = _finite_array(doc["b"], "b", m)
            c = jordan.element(cone, _finite_array(doc["c"], "c", cone.dim))
            g = _finite_array(doc.get("g", []), "g")
            rows = doc.get("B", [])
            if rows:
                B = np.vstack([_finite_array(row, "B row", m) for row in rows])
            else:
                B = np.zeros((0, m))
            form = OperatorForm(columns=cols, B=B, b=b, c=c, g=g)
            return ConicProblem(cone, form)
    except ProblemFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ProblemFormatError(f"malformed problem document: {exc}") from exc
    except GeoipmError as exc:
        raise ProblemFormatError(f"invalid problem data: {exc}") from exc
    raise ProblemFormatError(f"unknown problem form {form_name!r}")


def problem_to_dict(problem: ConicProblem) -> dict:
    doc = {"cone": _cone_to_list(problem.cone)}
    f = problem.form
    if isinstance(f, BasisForm):
        doc["form"] = "basis"
        doc["x0"] = f.x0.coords.tolist()
        doc["s0"] = f.s0.coords.tolist()
        doc["basis_L"] = [l.coords.tolist() for l in f.basis]
    else:
        doc["form"] = "operator"
        doc["A"] = [a.coords.tolist() for a in f.columns]
        doc["B"] = f.B.tolist()
        doc["b"] = f.b.tolist()
        doc["c"] = f.c.coords.tolist()
        doc["g"] = f.g.tolist()
    return doc


def load_problem(path) -> ConicProblem:
    """Parse a problem file; raises ProblemFormatError on any defect."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFormatError(f"cannot read problem file: {exc}") from exc
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON: {exc}") from exc
    return problem_from_dict(doc)


def save_problem(problem: ConicProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem)) + "\n", encoding="utf-8")


def write_feasible_pair(path, x, s, mu: float, gap: float) -> None:
    doc = {"mu": mu, "gap": gap, "x": x.coords.tolist(), "s": s.coords.tolist()}
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def read_feasible_pair(path, cone: ConeDescriptor):
    doc = json.loads(Path(path).read_text(encoding="utf-8"), parse_constant=_reject_constant)
    x = jordan.element(cone, _finite_array(doc["x"], "x", cone.dim))
    s = jordan.element(cone, _finite_array(doc["s"], "s", cone.dim))
    return x, s, float(doc["mu"]), float(doc["gap"])
