"""Canonical JSON documents for algebras, representations, cochains and derived objects.

Rationals are strings ``"p"`` or ``"p/q"`` in lowest terms (JSON integers are
accepted on input).  Sparse payloads list only nonzero entries, sorted by their
``args``/``pair`` key; dense matrices are full row-major grids.  Keys are sorted,
so printing a parsed canonical document reproduces it byte for byte.
"""

from __future__ import annotations

import itertools
import json
import re
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from .cochains import PairCochain, PlainCochain
from .qarray import QArray, format_scalar
from .representations import PairRepresentation, Representation
from .threelie import LieDerPair, ThreeLieAlgebra, pair_arrays, pair_index

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class DocumentError(ValueError):
    """A malformed document; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '<document>'}: {message}")
        self.path = path
        self.message = message


def _at(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


# scalars, vectors, grids ---------------------------------------------------------


def parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(path, "expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _RATIONAL.match(value):
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise DocumentError(path, "zero denominator") from None
    raise DocumentError(path, f"expected a rational string 'p' or 'p/q', got {value!r}")


def _field(doc: dict, key: str, path: str, kind=None, required: bool = True):
    if not isinstance(doc, dict):
        raise DocumentError(path, "expected an object")
    if key not in doc:
        if required:
            raise DocumentError(_at(path, key), "missing field")
        return None
    v = doc[key]
    if kind is not None and not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
        names = kind.__name__ if isinstance(kind, type) else "/".join(k.__name__ for k in kind)
        raise DocumentError(_at(path, key), f"expected {names}")
    return v


def _count(doc: dict, key: str, path: str, required: bool = True) -> Optional[int]:
    v = _field(doc, key, path, int, required)
    if v is not None and v < 0:
        raise DocumentError(_at(path, key), "must be non-negative")
    return v


def parse_vector(value, length: int, path: str) -> QArray:
    if not isinstance(value, list) or len(value) != length:
        raise DocumentError(path, f"expected a list of {length} rationals")
    return QArray.of([parse_rational(x, _at(path, i)) for i, x in enumerate(value)])


def parse_matrix(value, rows: int, cols: int, path: str) -> QArray:
    if not isinstance(value, list) or len(value) != rows:
        raise DocumentError(path, f"expected a {rows}x{cols} grid")
    if rows == 0:
        return QArray.zeros((0, cols))
    return QArray.stack([parse_vector(r, cols, _at(path, i)) for i, r in enumerate(value)])


def vector_doc(v: QArray) -> list:
    return [format_scalar(x) for x in v.to_fractions().tolist()]


def matrix_doc(m: QArray) -> list:
    return [[format_scalar(x) for x in row] for row in m.to_fractions().tolist()]


def _index_list(value, arity: int, bound: int, path: str, groups=None) -> tuple:
    if not isinstance(value, list) or len(value) != arity or not all(isinstance(i, int) and not isinstance(i, bool) for i in value):
        raise DocumentError(path, f"expected {arity} integer indices")
    for k, i in enumerate(value):
        if not 0 <= i < bound:
            raise DocumentError(_at(path, k), f"index {i} out of range 0..{bound - 1}")
    for g in groups or [range(arity)]:
        g = list(g)
        if any(value[g[k]] >= value[g[k + 1]] for k in range(len(g) - 1)):
            raise DocumentError(path, "indices must be strictly increasing")
    return tuple(value)


# sparse skew tensors ------------------------------------------------------------


def _skew_perms(k: int):
    for perm in itertools.permutations(range(k)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        yield perm, (-1 if inv % 2 else 1)


def parse_entries(value, groups: list[int], dim: int, out_dim: int, path: str) -> QArray:
    """Full tensor from ``[{args, value}]`` entries, skew within each group of argument slots."""
    arity = sum(groups)
    if not isinstance(value, list):
        raise DocumentError(path, "expected a list of entries")
    spans, start = [], 0
    for g in groups:
        spans.append(list(range(start, start + g)))
        start += g
    tensor = np.zeros((dim,) * arity + (out_dim,), dtype=object)
    tensor[...] = 0
    seen = set()
    for e, item in enumerate(value):
        ep = _at(path, e)
        args = _index_list(_field(item, "args", ep, list), arity, dim, _at(ep, "args"), spans)
        if args in seen:
            raise DocumentError(_at(ep, "args"), "duplicate entry")
        seen.add(args)
        vec = parse_vector(_field(item, "value", ep, list), out_dim, _at(ep, "value")).to_fractions()
        for choice in itertools.product(*[list(_skew_perms(len(s))) for s in spans]):
            idx, sign = [], 1
            for s, (perm, sg) in zip(spans, choice):
                idx.extend(args[s[p]] for p in perm)
                sign *= sg
            tensor[tuple(idx)] = vec * sign
    return QArray.of(tensor) if tensor.size else QArray.zeros(tensor.shape)


def entries_doc(t: QArray, groups: list[int]) -> list:
    arity = sum(groups)
    dim = t.shape[0] if arity else 0
    spans, start = [], 0
    for g in groups:
        spans.append(start)
        start += g
    out = []
    pools = [list(itertools.combinations(range(dim), g)) for g in groups]
    for combo in itertools.product(*pools):
        args = tuple(i for part in combo for i in part)
        v = t[args]
        if not v.is_zero():
            out.append({"args": list(args), "value": vector_doc(v)})
    return out


# algebras and pairs --------------------------------------------------------------


def parse_algebra(doc: dict, path: str = "") -> ThreeLieAlgebra:
    n = _count(doc, "dim", path)
    c = parse_entries(_field(doc, "bracket", path, list, required=False) or [], [3], n, n, _at(path, "bracket"))
    return ThreeLieAlgebra.from_tensor(c, check=False)


def algebra_doc(L: ThreeLieAlgebra) -> dict:
    return {"dim": L.dim, "bracket": entries_doc(L.structure, [3])}


def parse_pair(doc: dict, path: str = "") -> LieDerPair:
    L = parse_algebra(doc, path)
    raw = _field(doc, "derivation", path, list, required=False)
    theta = None if raw is None else parse_matrix(raw, L.dim, L.dim, _at(path, "derivation"))
    return LieDerPair(L, theta, check=False)


def pair_doc(p: LieDerPair) -> dict:
    d = algebra_doc(p.algebra)
    d["derivation"] = matrix_doc(p.theta)
    return d


def parse_representation(doc: dict, n: int, path: str) -> PairRepresentation:
    m = _count(doc, "module_dim", path)
    blocks = {}
    rp = _at(path, "rho")
    for e, item in enumerate(_field(doc, "rho", path, list, required=False) or []):
        ep = _at(rp, e)
        i, j = _index_list(_field(item, "pair", ep, list), 2, n, _at(ep, "pair"))
        if (i, j) in blocks:
            raise DocumentError(_at(ep, "pair"), "duplicate entry")
        blocks[(i, j)] = parse_matrix(_field(item, "matrix", ep, list), m, m, _at(ep, "matrix"))
    raw = _field(doc, "theta_V", path, list, required=False)
    tv = None if raw is None else parse_matrix(raw, m, m, _at(path, "theta_V"))
    return PairRepresentation(Representation(n, m, blocks), tv)


def representation_doc(prep: PairRepresentation) -> dict:
    n = prep.algebra_dim
    rho = []
    for P, (i, j) in enumerate(zip(*pair_arrays(n))):
        mat = prep.rho[P]
        if not mat.is_zero():
            rho.append({"pair": [int(i), int(j)], "matrix": matrix_doc(mat)})
    return {"module_dim": prep.module_dim, "rho": rho, "theta_V": matrix_doc(prep.theta_V)}


def rho_entry_matrix(prep: PairRepresentation, i: int, j: int) -> QArray:
    return prep.rho[pair_index(i, j, prep.algebra_dim)]


# cochains ------------------------------------------------------------------------


def parse_plain_cochain(doc, degree: int, n: int, v: int, path: str) -> PlainCochain:
    """Entries ``{args: [a1, b1, ..., a_{p-1}, b_{p-1}, z], value}`` with a_t < b_t."""
    groups = [2] * (degree - 1) + [1]
    t = parse_entries(doc, groups, n, v, path)
    a, b = pair_arrays(n)
    num = t.num
    for _ in range(degree - 1):
        num = num[a, b] if len(a) else np.zeros((0,) + num.shape[2:], dtype=num.dtype)
        num = np.moveaxis(num, 0, -1)
    # the pair axes were rotated to the back; bring them to the front in order
    num = np.moveaxis(num, list(range(num.ndim - (degree - 1), num.ndim)), list(range(degree - 1)))
    return PlainCochain(degree, n, v, QArray(num, t.den))


def plain_cochain_doc(f: PlainCochain) -> list:
    n, p = f.algebra_dim, f.degree
    a, b = pair_arrays(n)
    out = []
    pr = [(int(x), int(y)) for x, y in zip(a, b)]
    for idx in itertools.product(*([range(len(pr))] * (p - 1) + [range(n)])):
        v = f.tensor[idx]
        if not v.is_zero():
            args = [k for P in idx[:-1] for k in pr[P]] + [idx[-1]]
            out.append({"args": args, "value": vector_doc(v)})
    return out


def parse_pair_cochain(doc: dict, n: int, v: int, path: str) -> PairCochain:
    p = _count(doc, "degree", path)
    if p < 1:
        raise DocumentError(_at(path, "degree"), "degree must be at least 1")
    alpha = parse_plain_cochain(_field(doc, "alpha", path, list), p, n, v, _at(path, "alpha"))
    if p == 1:
        return PairCochain(alpha)
    beta = parse_plain_cochain(_field(doc, "beta", path, list), p - 1, n, v, _at(path, "beta"))
    return PairCochain(alpha, beta)


def pair_cochain_doc(c: PairCochain) -> dict:
    d: dict[str, Any] = {"degree": c.degree, "alpha": plain_cochain_doc(c.alpha)}
    if c.beta is not None:
        d["beta"] = plain_cochain_doc(c.beta)
    return d


# output --------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, QArray):
        if obj.ndim == 0:
            return format_scalar(obj.to_fractions().item())
        if obj.ndim == 1:
            return vector_doc(obj)
        if obj.ndim == 2:
            return matrix_doc(obj)
        return [_jsonable(obj[i]) for i in range(obj.shape[0])]
    if isinstance(obj, Fraction):
        return format_scalar(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(doc, dict):
        raise DocumentError("", "the document must be a JSON object")
    return doc
