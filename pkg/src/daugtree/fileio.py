"""Text and JSON formats for vectors, functionals and certificates.

Vector files::

    kind=M depth=2
    0 1/2
    10 1/2
    tail 0 1/2
    tail 10 1/2

Certificates are JSON objects with a ``"type"`` field; every number is an
exact fraction string ``"p/q"``.
"""
from __future__ import annotations

import json
import os
import re
import tempfile
from fractions import Fraction

from .errors import FormatError, InvalidNode
from .functionals import NormedFunctional
from .spaces import TreeVector, parse_backend
from .tree import ROOT_TEXT, TreeKind, format_node, parse_node, rank_key

_FRACTION = re.compile(r"[+-]?\d+(/\d+)?")


def fstr(value) -> str:
    value = Fraction(value)
    return str(value)


def fparse(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"expected a fraction string, got {text!r}")
    if not _FRACTION.fullmatch(text.strip()):
        raise FormatError(f"not an exact fraction p/q: {text!r}")
    try:
        return Fraction(text.strip())
    except ZeroDivisionError:
        raise FormatError(f"zero denominator: {text!r}") from None


def _node(text: str, kind: TreeKind) -> str:
    try:
        t = parse_node(text)
    except InvalidNode as exc:
        raise FormatError(str(exc)) from None
    if t == "" and not kind.has_root:
        raise FormatError("the rootless tree has no root node")
    return t


# -- vector text format ---------------------------------------------------

def parse_vector(text: str) -> TreeVector:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise FormatError("empty vector file")
    header = dict(part.split("=", 1) for part in lines[0].split() if "=" in part)
    if "kind" not in header:
        raise FormatError("header must read 'kind=B|M depth=<d>'")
    try:
        kind = TreeKind.parse(header["kind"])
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    coeffs, tails = {}, {}
    for ln in lines[1:]:
        parts = ln.split()
        target = coeffs
        if parts[0] == "tail":
            target, parts = tails, parts[1:]
        if len(parts) != 2:
            raise FormatError(f"bad line: {ln!r}")
        t = _node(parts[0], kind)
        if t in target:
            raise FormatError(f"node {parts[0]} listed twice")
        target[t] = fparse(parts[1])
    try:
        v = TreeVector(kind, coeffs, tails)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    if "depth" in header:
        try:
            depth = int(header["depth"])
        except ValueError:
            raise FormatError("depth must be an integer") from None
        if v.depth > depth:
            raise FormatError(f"support reaches depth {v.depth} > declared {depth}")
    return v


def format_vector(v: TreeVector) -> str:
    out = [f"kind={v.kind.name} depth={max(v.depth, v.kind.min_depth)}"]
    for t in sorted(v.coeffs, key=rank_key):
        out.append(f"{format_node(t)} {fstr(v.coeffs[t])}")
    for t in sorted(v.tails, key=rank_key):
        out.append(f"tail {format_node(t)} {fstr(v.tails[t])}")
    return "\n".join(out) + "\n"


def read_vector(path) -> TreeVector:
    with open(path, encoding="utf-8") as fh:
        return parse_vector(fh.read())


# -- JSON ------------------------------------------------------------------

def vector_to_json(v: TreeVector) -> dict:
    return {"kind": v.kind.name,
            "coeffs": {format_node(t): fstr(c) for t, c in sorted(v.coeffs.items(), key=lambda p: rank_key(p[0]))},
            "tails": {format_node(t): fstr(c) for t, c in sorted(v.tails.items(), key=lambda p: rank_key(p[0]))}}


def vector_from_json(data) -> TreeVector:
    try:
        kind = TreeKind.parse(data["kind"])
        coeffs = {_node(t, kind): fparse(c) for t, c in data.get("coeffs", {}).items()}
        tails = {_node(t, kind): fparse(c) for t, c in data.get("tails", {}).items()}
        return TreeVector(kind, coeffs, tails)
    except (KeyError, TypeError, AttributeError) as exc:
        raise FormatError(f"bad vector object: {exc}") from None


def _keys_out(row, space):
    if space.startswith("tree"):
        return {format_node(t): fstr(c) for t, c in row.items()}
    return {str(i): fstr(c) for i, c in sorted(row.items())}


def _keys_in(row, space):
    if space.startswith("tree"):
        kind = TreeKind.parse(space.split(":", 1)[1])
        return {_node(t, kind): fparse(c) for t, c in row.items()}
    try:
        return {int(i): fparse(c) for i, c in row.items()}
    except ValueError:
        raise FormatError("sequence indices must be integers") from None


def point_to_json(x, space: str):
    if isinstance(x, TreeVector):
        return vector_to_json(x)
    return _keys_out(dict(x), space)


def point_from_json(data, space: str):
    if space.startswith("tree"):
        return vector_from_json(data)
    return _keys_in(data, space)


def functional_to_json(phi: NormedFunctional, space: str) -> dict:
    return {"space": space,
            "coeffs": _keys_out(phi.coeffs, space),
            "decomposition": [[fstr(w), _keys_out(row, space)] for w, row in phi.decomposition],
            "claimed_norm": fstr(phi.claimed_norm),
            "witness": None if phi.witness is None else point_to_json(phi.witness, space)}


def functional_from_json(data) -> NormedFunctional:
    try:
        space = data["space"]
        parse_backend(space)
        witness = data.get("witness")
        return NormedFunctional(_keys_in(data["coeffs"], space),
                                [(fparse(w), _keys_in(row, space)) for w, row in data["decomposition"]],
                                fparse(data["claimed_norm"]),
                                None if witness is None else point_from_json(witness, space))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"bad functional object: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and a rename."""
    path = os.fspath(path)
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
