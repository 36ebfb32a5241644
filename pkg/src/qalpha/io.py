"""State files and alpha-sweep CSV output.

A state file is a JSON object::

    {"dim": 2, "label": "sigma", "entries": [[0.75, 0], [0, 0], [0, 0], [0.25, 0]]}

``entries`` lists the matrix row-major, each complex entry as a ``[re, im]``
pair. ``label`` is optional.
"""

from __future__ import annotations

import io as _io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .divergences import DIVERGENCES, LogBase, get_divergence, umegaki
from .errors import ParseError
from .operators import DEFAULT_TOLERANCES, as_operator, validate_density

LIMIT_BAND = 1e-6


def _read_text(source):
    if hasattr(source, "read"):
        return source.read(), getattr(source, "name", "<stream>")
    path = os.fspath(source)
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read(), path
    except OSError as exc:
        raise ParseError(str(exc), path) from exc


def _entry(value, k):
    where = f"entries[{k}]"
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            return complex(float(re), float(im))
    raise ParseError(f"expected a [re, im] pair of numbers, got {value!r}", where)


def parse_state_document(doc, tolerances=DEFAULT_TOLERANCES, source="<document>"):
    """Validate an already-decoded state object and return a density matrix."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", source)
    unknown = set(doc) - {"dim", "entries", "label"}
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", source)
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"'dim' must be a positive integer, got {dim!r}", f"{source}: field dim")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ParseError("'entries' must be a list", f"{source}: field entries")
    if len(entries) != dim * dim:
        raise ParseError(f"expected {dim * dim} entries for dim {dim}, got {len(entries)}", f"{source}: field entries")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise ParseError("'label' must be a string", f"{source}: field label")
    try:
        values = [_entry(v, k) for k, v in enumerate(entries)]
    except ParseError as exc:
        raise ParseError(exc.message, f"{source}: {exc.location}") from None
    return validate_density(np.array(values, dtype=complex).reshape(dim, dim), tolerances)


def parse_state_file(source, tolerances=DEFAULT_TOLERANCES):
    """Read a state file from a path or text stream.

    Raises :class:`ParseError` (with line/column or field location) for
    malformed documents; validation errors from :func:`validate_density`
    propagate unchanged.
    """
    text, name = _read_text(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{name}: line {exc.lineno}, column {exc.colno}") from None
    return parse_state_document(doc, tolerances, name)


def serialize_state(rho, label=None) -> str:
    m = np.asarray(rho, dtype=complex)
    doc = {"dim": int(m.shape[0])}
    if label is not None:
        doc["label"] = label
    doc["entries"] = [[float(z.real), float(z.imag)] for z in m.ravel()]
    return json.dumps(doc) + "\n"


def write_state_file(path, rho, label=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_state(rho, label))


@dataclass(frozen=True)
class SweepSpec:
    alpha_min: float = 0.1
    alpha_max: float = 3.0
    steps: int = 59
    divergences: tuple = ("s_alpha",)
    base: LogBase = LogBase.TWO
    grid: tuple | None = field(default=None)

    def __post_init__(self):
        if not (self.alpha_min > 0 and self.alpha_max > 0):
            raise ValueError("alpha bounds must be positive")
        if self.alpha_max < self.alpha_min:
            raise ValueError("alpha_max must not be below alpha_min")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ValueError("steps must be an integer >= 2")
        divs = tuple(self.divergences)
        if not divs:
            raise ValueError("at least one divergence is required")
        for name in divs:
            get_divergence(name)
        object.__setattr__(self, "divergences", divs)
        object.__setattr__(self, "base", LogBase.coerce(self.base))
        if self.grid is not None:
            g = tuple(float(a) for a in self.grid)
            if not g or any(a <= 0 for a in g):
                raise ValueError("grid points must be positive")
            object.__setattr__(self, "grid", g)

    def alphas(self):
        if self.grid is not None:
            return np.array(self.grid)
        return np.linspace(self.alpha_min, self.alpha_max, int(self.steps))


def _fmt(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def sweep_rows(rho, sigma, spec: SweepSpec, tolerances=DEFAULT_TOLERANCES):
    """``(alpha, [values...], limit_flag)`` per grid point, in grid order.

    Points within ``1e-6`` of ``alpha = 1`` carry the Umegaki value (natural
    log for ``qdpd``, whose own limit is the natural-log relative entropy)
    and ``limit_flag = 1``.
    """
    rho, sigma = as_operator(rho, tolerances), as_operator(sigma, tolerances)
    rows = []
    for a in spec.alphas():
        a = float(a)
        if abs(a - 1.0) <= LIMIT_BAND:
            vals = [
                umegaki(rho, sigma, LogBase.NATURAL if name == "qdpd" else spec.base, tolerances)
                for name in spec.divergences
            ]
            rows.append((a, vals, 1))
        else:
            vals = [DIVERGENCES[name](rho, sigma, a, spec.base, tolerances) for name in spec.divergences]
            rows.append((a, vals, 0))
    return rows


def sweep(rho, sigma, spec: SweepSpec = SweepSpec(), tolerances=DEFAULT_TOLERANCES) -> str:
    """CSV document ``alpha,<divergence>...,limit_flag`` with ``\\n`` line endings."""
    out = _io.StringIO(newline="")
    out.write(",".join(["alpha", *spec.divergences, "limit_flag"]) + "\n")
    for a, vals, flag in sweep_rows(rho, sigma, spec, tolerances):
        out.write(",".join([_fmt(a), *(_fmt(v) for v in vals), str(flag)]) + "\n")
    return out.getvalue()


def parse_sweep_csv(text):
    """Read a sweep CSV back into ``(header, rows)`` with float cells."""
    lines = text.rstrip("\n").split("\n")
    header = lines[0].split(",")
    rows = [[float(c) for c in line.split(",")] for line in lines[1:]]
    return header, rows
