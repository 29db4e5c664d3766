"""Reading and writing instance, solution and certificate documents.

Documents are JSON. Matrices are lists of ``[row, col, value]`` triplets
with 0-based indices; see ``docs/format.md``. Reals are written with
``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
import math

import numpy as np

from .lp_core import DualCertificate, InstanceError, LPInstance, SolveReport


class FormatError(InstanceError):
    """A malformed document. ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class _LocatingDecoder(json.JSONDecoder):
    """JSON decoder that remembers where each array starts."""

    def __init__(self):
        super().__init__(object_pairs_hook=self._pairs, parse_constant=self._constant)
        self.array_pos = {}
        self.parse_array = self._array
        self.scan_once = json.scanner.py_make_scanner(self)

    def _array(self, s_and_end, scan_once, **kw):
        values, end = json.decoder.JSONArray(s_and_end, scan_once, **kw)
        self.array_pos[id(values)] = s_and_end[1] - 1
        return values, end

    @staticmethod
    def _pairs(pairs):
        out = {}
        for k, v in pairs:
            if k in out:
                raise ValueError(f"duplicate key {k!r}")
            out[k] = v
        return out

    @staticmethod
    def _constant(name):
        raise ValueError(f"non-finite value {name}")


def _load(text: str):
    dec = _LocatingDecoder()
    try:
        doc = dec.decode(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from None
    except ValueError as exc:
        raise FormatError(str(exc)) from None

    def line_of(obj):
        pos = dec.array_pos.get(id(obj))
        return None if pos is None else text.count("\n", 0, pos) + 1

    # Keep the decoded arrays alive so ids stay unique while we look them up.
    return doc, line_of


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _is_index(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _real_vector(doc, key, length, line_of):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    vec = doc[key]
    if not isinstance(vec, list):
        raise FormatError(f"{key} must be a list", line_of(vec))
    if len(vec) != length:
        raise FormatError(f"{key} has {len(vec)} entries, expected {length}", line_of(vec))
    for i, v in enumerate(vec):
        if not _is_real(v):
            raise FormatError(f"{key}[{i}] = {v!r} is not a finite number", line_of(vec))
    return np.array(vec, dtype=float)


def _dimension(doc, key):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    v = doc[key]
    if not _is_index(v) or v < 1:
        raise FormatError(f"{key} must be a positive integer, got {v!r}")
    return v


def parse_instance(text: str, normalize: bool = False) -> LPInstance:
    """Parse and validate an instance document.

    ``normalize`` rescales ``A`` and ``b`` jointly to ``||A||_1 = 1`` instead
    of rejecting matrices with ``||A||_1 < 1``.
    """
    doc, line_of = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", 1)
    known = {"m", "n", "A", "b", "c", "u", "name", "comment"}
    extra = sorted(set(doc) - known)
    if extra:
        raise FormatError(f"unknown field {extra[0]!r}")
    m = _dimension(doc, "m")
    n = _dimension(doc, "n")
    if "A" not in doc:
        raise FormatError("missing field 'A'")
    triplets = doc["A"]
    if not isinstance(triplets, list):
        raise FormatError("A must be a list of [row, col, value] triplets", line_of(triplets))
    A = np.zeros((m, n))
    seen = {}
    for k, t in enumerate(triplets):
        line = line_of(t) if isinstance(t, list) else line_of(triplets)
        if not (isinstance(t, list) and len(t) == 3):
            raise FormatError(f"A[{k}] is not a [row, col, value] triplet", line)
        i, j, v = t
        if not (_is_index(i) and 0 <= i < m):
            raise FormatError(f"A[{k}] row index {i!r} outside 0..{m - 1}", line)
        if not (_is_index(j) and 0 <= j < n):
            raise FormatError(f"A[{k}] column index {j!r} outside 0..{n - 1}", line)
        if not _is_real(v):
            raise FormatError(f"A[{k}] value {v!r} is not a finite number", line)
        if (i, j) in seen:
            raise FormatError(f"A[{k}] repeats entry ({i}, {j}) first given on line {seen[(i, j)]}", line)
        seen[(i, j)] = line
        A[i, j] = v
    b = _real_vector(doc, "b", m, line_of)
    c = _real_vector(doc, "c", n, line_of)
    u = _real_vector(doc, "u", n, line_of)
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name must be a string")
    inst = LPInstance(A, b, c, u, name=name)
    if normalize and inst.A.nnz:
        inst = inst.normalized()
    inst.validate()
    return inst


def _reals(values) -> str:
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


def serialize_instance(inst: LPInstance, comment: str | None = None) -> str:
    """Instance document with one triplet per line."""
    coo = inst.A.tocoo()
    order = np.lexsort((coo.col, coo.row))
    lines = ["{"]
    if inst.name:
        lines.append(f"  \"name\": {json.dumps(inst.name)},")
    if comment:
        lines.append(f"  \"comment\": {json.dumps(comment)},")
    lines.append(f"  \"m\": {inst.m},")
    lines.append(f"  \"n\": {inst.n},")
    trip = [f"    [{int(coo.row[k])}, {int(coo.col[k])}, {float(coo.data[k])!r}]" for k in order]
    lines.append("  \"A\": [\n" + ",\n".join(trip) + "\n  ],")
    lines.append(f"  \"b\": {_reals(inst.b)},")
    lines.append(f"  \"c\": {_reals(inst.c)},")
    lines.append(f"  \"u\": {_reals(inst.u)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def solution_document(inst: LPInstance, report: SolveReport) -> dict:
    doc = {
        "verdict": report.verdict.value,
        "kappa_hat_final": report.kappa_hat_final,
        "gradient_steps": report.gradient_steps,
        "x": None,
        "objective": None,
        "residual_l1": None,
    }
    if report.x is not None:
        doc["x"] = [float(v) for v in report.x]
        doc["objective"] = inst.objective(report.x)
        doc["residual_l1"] = inst.residual_l1(report.x)
    return doc


def certificate_document(cert: DualCertificate, delta: float | None = None, rhs=None) -> dict:
    """``delta`` is the accuracy the certificate was issued for and ``rhs`` the
    right-hand side it refers to, when that differs from the instance's."""
    doc = {
        "pi": [float(v) for v in cert.pi],
        "w_minus": [float(v) for v in cert.w_minus],
        "w_plus": [float(v) for v in cert.w_plus],
    }
    if delta is not None:
        doc["delta"] = float(delta)
    if rhs is not None:
        doc["rhs"] = [float(v) for v in rhs]
    return doc


def dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _plain_vector(doc, key, line_of):
    if key not in doc or not isinstance(doc[key], list):
        raise FormatError(f"missing list field {key!r}")
    vec = doc[key]
    for i, v in enumerate(vec):
        if not _is_real(v):
            raise FormatError(f"{key}[{i}] = {v!r} is not a finite number", line_of(vec))
    return np.array(vec, dtype=float)


def parse_solution(text: str) -> np.ndarray:
    doc, line_of = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", 1)
    return _plain_vector(doc, "x", line_of)


def parse_certificate(text: str):
    """``(certificate, delta, rhs)``; the last two are None when not recorded."""
    doc, line_of = _load(text)
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object", 1)
    cert = DualCertificate(*(_plain_vector(doc, k, line_of) for k in ("pi", "w_minus", "w_plus")))
    delta = doc.get("delta")
    if delta is not None and not (_is_real(delta) and delta >= 0):
        raise FormatError(f"delta = {delta!r} must be a nonnegative number")
    rhs = _plain_vector(doc, "rhs", line_of) if "rhs" in doc else None
    return cert, delta, rhs
