"""Readers and writers for the text formats used by the command line.

Data files store floats with ``repr`` so that a write/read cycle returns
the identical value. Reports (decomposition values) use nine decimals.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .area_invariant import Signature
from .complex import Chain, OrientedComplex2
from .errors import GMTError, ParseError
from .reconstruction import FourierPolygon


def fmt(x: float) -> str:
    return f"{x:.9f}"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory and rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=path) from exc


def _num(tok: str, kind, lineno, path):
    try:
        return kind(tok)
    except ValueError:
        raise ParseError(f"expected {kind.__name__}, got {tok!r}", lineno, path) from None


# mesh: "v x y", "e tail head", "t i j k"


def dumps_mesh(cx: OrientedComplex2) -> str:
    out = [f"# {cx.n_vertices} vertices, {cx.n_edges} edges, {cx.n_triangles} triangles"]
    out += [f"v {x!r} {y!r}" for x, y in cx.vertices.tolist()]
    out += [f"e {a} {b}" for a, b in cx.edges.tolist()]
    out += [f"t {a} {b} {c}" for a, b, c in cx.triangles.tolist()]
    return "\n".join(out) + "\n"


def loads_mesh(text: str, path=None) -> OrientedComplex2:
    verts, edges, tris = [], [], []
    for lineno, line in _lines(text):
        tok = line.split()
        kind, args = tok[0], tok[1:]
        if kind == "v" and len(args) == 2:
            verts.append(tuple(_num(a, float, lineno, path) for a in args))
        elif kind == "e" and len(args) == 2:
            edges.append(tuple(_num(a, int, lineno, path) for a in args))
        elif kind == "t" and len(args) == 3:
            tris.append(tuple(_num(a, int, lineno, path) for a in args))
        else:
            raise ParseError(f"unrecognized mesh line {line!r}", lineno, path)
    try:
        return OrientedComplex2.build(verts, edges, tris)
    except GMTError as exc:
        raise ParseError(str(exc), path=path) from exc


def read_mesh(path) -> OrientedComplex2:
    return loads_mesh(_read(path), path)


def write_mesh(path, cx: OrientedComplex2) -> None:
    write_atomic(path, dumps_mesh(cx))


# chain: "dim d" then "index coefficient"


def dumps_chain(chain: Chain) -> str:
    return "".join([f"dim {chain.dimension}\n"] + [f"{k} {v}\n" for k, v in chain.items()])


def _parse_chain(items, path) -> Chain:
    items = list(items)
    if not items:
        raise ParseError("empty chain file", path=path)
    lineno, head = items[0]
    tok = head.split()
    if len(tok) != 2 or tok[0] != "dim":
        raise ParseError("chain must start with 'dim d'", lineno, path)
    dim = _num(tok[1], int, lineno, path)
    coeffs: dict[int, int] = {}
    for lineno, line in items[1:]:
        tok = line.split()
        if len(tok) != 2:
            raise ParseError(f"expected 'index coefficient', got {line!r}", lineno, path)
        k, v = _num(tok[0], int, lineno, path), _num(tok[1], int, lineno, path)
        if k in coeffs:
            raise ParseError(f"simplex {k} listed twice", lineno, path)
        coeffs[k] = v
    try:
        return Chain(dim, coeffs)
    except GMTError as exc:
        raise ParseError(str(exc), path=path) from exc


def loads_chain(text: str, path=None) -> Chain:
    return _parse_chain(_lines(text), path)


def read_chain(path) -> Chain:
    return loads_chain(_read(path), path)


def write_chain(path, chain: Chain) -> None:
    write_atomic(path, dumps_chain(chain))


# decomposition report


def dumps_decomposition(dec) -> str:
    out = [f"value {fmt(dec.value)}", f"integral {'true' if dec.is_integral else 'false'}", "X:"]
    text = "\n".join(out) + "\n" + dumps_chain(dec.x_chain) + "S:\n" + dumps_chain(dec.s_chain)
    return text


def loads_decomposition(text: str, path=None):
    """Returns ``(value, integral, X, S)``."""
    items = list(_lines(text))
    if len(items) < 2:
        raise ParseError("truncated decomposition", path=path)
    value = integral = None
    blocks: dict[str, list] = {}
    current = None
    for lineno, line in items:
        tok = line.split()
        if tok[0] == "value" and len(tok) == 2:
            value = _num(tok[1], float, lineno, path)
        elif tok[0] == "integral" and len(tok) == 2 and tok[1] in ("true", "false"):
            integral = tok[1] == "true"
        elif line in ("X:", "S:"):
            current = blocks.setdefault(line[0], [])
        elif current is not None:
            current.append((lineno, line))
        else:
            raise ParseError(f"unexpected line {line!r}", lineno, path)
    if value is None or integral is None or set(blocks) != {"X", "S"}:
        raise ParseError("decomposition needs value, integral, X: and S: sections", path=path)
    return value, integral, _parse_chain(blocks["X"], path), _parse_chain(blocks["S"], path)


# polygon CSV: "x,y"


def dumps_polygon(vertices) -> str:
    return "".join(f"{x!r},{y!r}\n" for x, y in np.asarray(vertices, dtype=float).tolist())


def loads_polygon(text: str, path=None) -> np.ndarray:
    pts = []
    for lineno, line in _lines(text):
        tok = [t.strip() for t in line.split(",")]
        if len(tok) != 2:
            raise ParseError(f"expected 'x,y', got {line!r}", lineno, path)
        pts.append([_num(t, float, lineno, path) for t in tok])
    if len(pts) < 3:
        raise ParseError("polygon needs at least three vertices", path=path)
    return np.array(pts, dtype=float)


def read_polygon(path) -> np.ndarray:
    return loads_polygon(_read(path), path)


def write_polygon(path, vertices) -> None:
    write_atomic(path, dumps_polygon(vertices))


# signature CSV: "# r=<value> N=<count>" then "index,g"


def dumps_signature(sig: Signature) -> str:
    out = [f"# r={sig.radius!r} N={len(sig)}\n"]
    out += [f"{k},{g!r}\n" for k, g in enumerate(sig.values.tolist())]
    return "".join(out)


def loads_signature(text: str, path=None) -> Signature:
    radius = count = None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("r="):
                    radius = _num(tok[2:], float, lineno, path)
                elif tok.startswith("N="):
                    count = _num(tok[2:], int, lineno, path)
            continue
        tok = [t.strip() for t in line.split(",")]
        if len(tok) != 2:
            raise ParseError(f"expected 'index,g', got {line!r}", lineno, path)
        k, g = _num(tok[0], int, lineno, path), _num(tok[1], float, lineno, path)
        if k in values:
            raise ParseError(f"index {k} listed twice", lineno, path)
        values[k] = g
    if radius is None:
        raise ParseError("missing '# r=<value>' header", path=path)
    n = len(values)
    if sorted(values) != list(range(n)):
        raise ParseError("signature indices must be 0..N-1", path=path)
    if count is not None and count != n:
        raise ParseError(f"header says N={count} but file has {n} values", path=path)
    try:
        return Signature(radius, [values[k] for k in range(n)])
    except GMTError as exc:
        raise ParseError(str(exc), path=path) from exc


def read_signature(path) -> Signature:
    return loads_signature(_read(path), path)


def write_signature(path, sig: Signature) -> None:
    write_atomic(path, dumps_signature(sig))


# Fourier coefficients CSV: "m,N" line, then "i,j,a_ij" rows (0-based)


def dumps_coefficients(fp: FourierPolygon) -> str:
    out = ["# m,N\n", f"{fp.m},{fp.N}\n", "# i,j,a_ij\n"]
    for i in range(4):
        for j in range(fp.m):
            out.append(f"{i},{j},{float(fp.coeffs[i, j])!r}\n")
    return "".join(out)


def loads_coefficients(text: str, path=None) -> FourierPolygon:
    items = list(_lines(text))
    if not items:
        raise ParseError("empty coefficient file", path=path)
    lineno, head = items[0]
    tok = head.split(",")
    if len(tok) != 2:
        raise ParseError("first line must be 'm,N'", lineno, path)
    m, N = (_num(t.strip(), int, lineno, path) for t in tok)
    if m < 1 or N < 3:
        raise ParseError("need m >= 1 and N >= 3", lineno, path)
    coeffs = np.zeros((4, m))
    seen = set()
    for lineno, line in items[1:]:
        tok = [t.strip() for t in line.split(",")]
        if len(tok) != 3:
            raise ParseError(f"expected 'i,j,a_ij', got {line!r}", lineno, path)
        i, j = _num(tok[0], int, lineno, path), _num(tok[1], int, lineno, path)
        if not (0 <= i < 4 and 0 <= j < m):
            raise ParseError(f"coefficient index ({i},{j}) out of range", lineno, path)
        if (i, j) in seen:
            raise ParseError(f"coefficient ({i},{j}) listed twice", lineno, path)
        seen.add((i, j))
        coeffs[i, j] = _num(tok[2], float, lineno, path)
    return FourierPolygon(coeffs, N)


def read_coefficients(path) -> FourierPolygon:
    return loads_coefficients(_read(path), path)


def write_coefficients(path, fp: FourierPolygon) -> None:
    write_atomic(path, dumps_coefficients(fp))
