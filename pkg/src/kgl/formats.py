"""JSON file formats for instances: semigroupoid, action, bundle, kernel.

An instance file is one JSON object holding the four documents. Complex
matrices are stored as separate real and imaginary coefficient arrays, so
no string parsing of numbers is involved. Omitted kernel entries are zero
blocks. Serialization is canonical (sorted keys, sorted table rows), so
identical instances produce identical bytes and a stable digest.
"""

import json
from dataclasses import dataclass

import numpy as np

from .bundle import HilbertBundle
from .errors import (
    AxiomError,
    CrossRefError,
    MalformedTable,
    ParseError,
    ShapeMismatch,
)
from .kernel import OpKernel, Partition, partition_from_action
from .reports import digest_of
from .sgpd import LeftAction, StarSemigroupoid, validate, validate_action

__all__ = [
    "Instance",
    "semigroupoid_to_doc",
    "semigroupoid_from_doc",
    "action_to_doc",
    "action_from_doc",
    "bundle_to_doc",
    "bundle_from_doc",
    "kernel_to_doc",
    "kernel_from_doc",
    "matrix_to_doc",
    "matrix_from_doc",
    "instance_to_doc",
    "parse_instance",
    "load",
    "loads",
    "save_instance",
    "instance_digest",
    "load_kernel_file",
    "load_lift_file",
]

_DOC_KEYS = ("semigroupoid", "action", "bundle", "kernel")


def matrix_to_doc(m) -> dict:
    a = np.asarray(m, dtype=np.complex128)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def matrix_from_doc(doc, where="matrix") -> np.ndarray:
    if not isinstance(doc, dict) or "re" not in doc:
        raise ParseError(f"{where}: expected an object with 're' (and optional 'im')")
    re = np.asarray(doc["re"], dtype=np.float64)
    im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=np.float64)
    if re.shape != im.shape:
        raise ParseError(f"{where}: 're' shape {re.shape} differs from 'im' shape {im.shape}")
    if re.ndim != 2:
        raise ParseError(f"{where}: expected a 2-d array, got ndim={re.ndim}")
    return re + 1j * im


def semigroupoid_to_doc(sg: StarSemigroupoid) -> dict:
    doc = {
        "symbols": sorted(sg.symbols),
        "elements": [{"id": g, "d": sg.d[g], "c": sg.c[g]} for g in sorted(sg.elements)],
        "compose": sorted([a, b, ab] for (a, b), ab in sg.compose.items()),
        "star": sorted([a, sg.star[a]] for a in sg.star),
    }
    if sg.units is not None:
        doc["units"] = {s: e for s, e in sorted(sg.units.items())}
    return doc


def _require_keys(doc, keys, where):
    for k in keys:
        if k not in doc:
            raise ParseError(f"{where}: missing required key {k!r}")


def semigroupoid_from_doc(doc) -> StarSemigroupoid:
    _require_keys(doc, ("symbols", "elements", "compose", "star"), "semigroupoid")
    symbols = tuple(doc["symbols"])
    ids, d, c = [], {}, {}
    for row in doc["elements"]:
        _require_keys(row, ("id", "d", "c"), "semigroupoid element")
        ids.append(row["id"])
        d[row["id"]] = row["d"]
        c[row["id"]] = row["c"]
    known = set(ids)
    compose = {}
    for row in doc["compose"]:
        if len(row) != 3:
            raise ParseError(f"compose row {row!r} is not a triple")
        a, b, ab = row
        for g in (a, b, ab):
            if g not in known:
                raise CrossRefError(f"compose row {row!r} references unknown element {g!r}")
        compose[(a, b)] = ab
    star = {}
    for row in doc["star"]:
        if len(row) != 2:
            raise ParseError(f"star row {row!r} is not a pair")
        a, astar = row
        for g in (a, astar):
            if g not in known:
                raise CrossRefError(f"star row {row!r} references unknown element {g!r}")
        star[a] = astar
    units = doc.get("units")
    if units is not None:
        for s, e in units.items():
            if s not in set(symbols):
                raise CrossRefError(f"unit declared for unknown symbol {s!r}")
            if e not in known:
                raise CrossRefError(f"unit {e!r} is not a declared element")
        units = dict(units)
    try:
        return StarSemigroupoid(symbols, tuple(ids), d, c, compose, star, units)
    except MalformedTable as exc:
        raise CrossRefError(str(exc))


def action_to_doc(act: LeftAction) -> dict:
    return {
        "anchor": {x: act.anchor[x] for x in sorted(act.base)},
        "act": sorted([g, x, y] for (g, x), y in act.act.items()),
    }


def action_from_doc(doc, sg: StarSemigroupoid) -> LeftAction:
    _require_keys(doc, ("anchor", "act"), "action")
    anchor = dict(doc["anchor"])
    base = tuple(sorted(anchor))
    elts = set(sg.elements)
    syms = set(sg.symbols)
    for x, s in anchor.items():
        if s not in syms:
            raise CrossRefError(f"anchor of {x!r} names unknown symbol {s!r}")
    table = {}
    for row in doc["act"]:
        if len(row) != 3:
            raise ParseError(f"act row {row!r} is not a triple")
        g, x, y = row
        if g not in elts:
            raise CrossRefError(f"act row {row!r} references unknown element {g!r}")
        if x not in anchor or y not in anchor:
            raise CrossRefError(f"act row {row!r} references a point without an anchor")
        table[(g, x)] = y
    try:
        return LeftAction(sg=sg, base=base, anchor=anchor, act=table)
    except MalformedTable as exc:
        raise CrossRefError(str(exc))


def bundle_to_doc(bundle: HilbertBundle) -> dict:
    return {"dims": {x: int(bundle.dim[x]) for x in sorted(bundle.points)}}


def bundle_from_doc(doc, base=None) -> HilbertBundle:
    _require_keys(doc, ("dims",), "bundle")
    dims = doc["dims"]
    for x, n in dims.items():
        if not isinstance(n, int) or n < 1:
            raise ParseError(f"bundle dim of {x!r} must be a positive integer, got {n!r}")
    points = tuple(sorted(dims))
    if base is not None and set(points) != set(base):
        missing = sorted(set(base) - set(points)) + sorted(set(points) - set(base))
        raise CrossRefError(f"bundle points and action base differ at {missing[:3]!r}")
    return HilbertBundle(points=points, dim=dict(dims))


def kernel_to_doc(k: OpKernel) -> dict:
    entries = []
    for x, y in sorted(k.blocks):
        m = k.blocks[(x, y)]
        entries.append({"row": x, "col": y, **matrix_to_doc(m)})
    return {"field": "complex", "entries": entries}


def kernel_from_doc(doc, bundle: HilbertBundle) -> OpKernel:
    _require_keys(doc, ("field", "entries"), "kernel")
    if doc["field"] != "complex":
        raise ParseError(f"kernel field must be 'complex', got {doc['field']!r}")
    pts = set(bundle.points)
    blocks = {}
    for entry in doc["entries"]:
        _require_keys(entry, ("row", "col", "re"), "kernel entry")
        x, y = entry["row"], entry["col"]
        if x not in pts or y not in pts:
            raise CrossRefError(f"kernel entry ({x!r},{y!r}) references an unknown point")
        if (x, y) in blocks:
            raise ParseError(f"kernel entry ({x!r},{y!r}) appears twice")
        blocks[(x, y)] = matrix_from_doc(entry, where=f"kernel entry ({x!r},{y!r})")
    try:
        return OpKernel(bundle, blocks)
    except ShapeMismatch as exc:
        raise CrossRefError(str(exc))


@dataclass(eq=False)
class Instance:
    """A validated (semigroupoid, action, bundle, kernel) quadruple."""

    sg: StarSemigroupoid
    action: LeftAction
    bundle: HilbertBundle
    kernel: OpKernel
    partition: Partition
    doc: dict  # canonical rebuilt document
    digest: str


def instance_to_doc(sg, action, bundle, kernel) -> dict:
    return {
        "semigroupoid": semigroupoid_to_doc(sg),
        "action": action_to_doc(action),
        "bundle": bundle_to_doc(bundle),
        "kernel": kernel_to_doc(kernel),
    }


def instance_digest(doc) -> str:
    return digest_of(json.dumps(doc, sort_keys=True, separators=(",", ":")))


def parse_instance(doc, strict: bool = True) -> Instance:
    """Build and cross-check the four documents of an instance.

    strict additionally runs the semigroupoid and action axiom checks,
    raising AxiomError with the first witness; commands that want to
    REPORT axiom violations instead load non-strictly and validate
    themselves.
    """
    _require_keys(doc, _DOC_KEYS, "instance")
    sg = semigroupoid_from_doc(doc["semigroupoid"])
    action = action_from_doc(doc["action"], sg)
    bundle = bundle_from_doc(doc["bundle"], base=action.base)
    kernel = kernel_from_doc(doc["kernel"], bundle)
    if strict:
        vr = validate(sg)
        if not vr.ok:
            first = vr.entries[0]
            raise AxiomError(
                f"semigroupoid violates {first.axiom} at {first.witness!r}: {first.detail}")
        va = validate_action(action)
        if not va.ok:
            first = va.entries[0]
            raise AxiomError(
                f"action violates {first.axiom} at {first.witness!r}: {first.detail}")
    partition = partition_from_action(bundle, action)
    canon = instance_to_doc(sg, action, bundle, kernel)
    return Instance(sg=sg, action=action, bundle=bundle, kernel=kernel,
                    partition=partition, doc=canon, digest=instance_digest(canon))


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}")


def load(paths, strict: bool = True) -> Instance:
    """Load an instance from one combined file or several partial files.

    Each file contributes top-level documents by name; a document supplied
    twice is an error.
    """
    if isinstance(paths, (str, bytes)):
        paths = [paths]
    merged = {}
    for path in paths:
        doc = _read_json(path)
        if not isinstance(doc, dict):
            raise ParseError(f"{path}: top level must be an object")
        for key, val in doc.items():
            if key not in _DOC_KEYS:
                raise ParseError(f"{path}: unknown document {key!r}")
            if key in merged:
                raise ParseError(f"{path}: document {key!r} supplied twice")
            merged[key] = val
    return parse_instance(merged, strict=strict)


def loads(text: str, strict: bool = True) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}")
    return parse_instance(doc, strict=strict)


def save_instance(instance, path):
    """Write an instance (or a prebuilt document) canonically."""
    doc = instance.doc if isinstance(instance, Instance) else instance
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def load_kernel_file(path, bundle: HilbertBundle) -> OpKernel:
    """Read a standalone kernel document (bare, or wrapped in 'kernel')."""
    doc = _read_json(path)
    if isinstance(doc, dict) and "kernel" in doc:
        doc = doc["kernel"]
    return kernel_from_doc(doc, bundle)


def load_lift_file(path):
    """Read a lift problem: four matrices a, b, t, s."""
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    _require_keys(doc, ("a", "b", "t", "s"), "lift problem")
    return tuple(matrix_from_doc(doc[k], where=k) for k in ("a", "b", "t", "s"))
