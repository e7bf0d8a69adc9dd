"""Patch documents: a JSON layout for face complexes with exact coordinates.

Two encodings share one layout.  ``text`` puts every face and every vertex
coordinate on its own line so that diffs stay readable; ``compact`` is a single
line.  Coordinates are ``[numerator, denominator]`` pairs per axis, so nothing
ever passes through floating point.  Example (text)::

    {"core": [12], "dimension": 2, "format": "tilecorona-patch",
     "meta": {"generator": "square", "radius": 1}, "version": 1,
     "faces": [
      [0, 0, []],
      ...
      [12, 2, [4, 5, 7, 9]]
     ],
     "coords": [
      [0, [[0, 1], [0, 1]]],
      ...
     ]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping

from .complex import RankedComplex, ValidationReport, validate
from .generators import GENERATOR_NAMES, GeneratedPatch, UnknownGenerator, generate, min_radius

FORMAT_NAME = "tilecorona-patch"
FORMAT_VERSION = 1
ENCODINGS = ("text", "compact")

__all__ = ["PatchDocument", "ParseError", "ValidationError", "save", "load",
           "dumps", "loads", "generate", "min_radius", "GENERATOR_NAMES",
           "GeneratedPatch", "UnknownGenerator"]


class ParseError(ValueError):
    """Malformed document; ``line`` and ``field`` locate the problem when known."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.message, self.line, self.field = message, line, field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        kinds = ", ".join(sorted(report.kinds()))
        first = report.violations[0]
        super().__init__(f"patch fails validation ({kinds}); first: {first.kind} "
                         f"at faces {list(first.faces)} {first.detail}".rstrip())


Face = tuple[int, int, tuple[int, ...]]
Coord = tuple[Fraction, ...]


@dataclass
class PatchDocument:
    dimension: int
    faces: list[Face]
    coords: dict[int, Coord] | None = None
    core: list[int] | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_complex(cls, cx: RankedComplex, coords: Mapping[int, Iterable] | None = None,
                     core: Iterable[int] | None = None,
                     meta: Mapping[str, Any] | None = None) -> "PatchDocument":
        """Document for ``cx``; face ids are relabeled densely in sorted order."""
        return cls.from_complex_with_ids(cx, coords, core, meta)[0]

    @classmethod
    def from_complex_with_ids(cls, cx, coords=None, core=None, meta=None):
        """Like :meth:`from_complex`, also returning the ``old id -> new id`` map."""
        new = {f: i for i, f in enumerate(cx.faces())}
        faces = [(new[f], cx.rank(f), tuple(sorted(new[g] for g in cx.boundary(f))))
                 for f in cx.faces()]
        cd = None
        if coords is not None:
            cd = {new[v]: tuple(Fraction(x) for x in p)
                  for v, p in coords.items() if v in new}
        cr = None if core is None else sorted(new[t] for t in core)
        return cls(cx.dim, faces, cd, cr, dict(meta or {})), new

    def to_complex(self) -> RankedComplex:
        return RankedComplex(self.dimension, {f: (r, b) for f, r, b in self.faces})

    def validate(self) -> ValidationReport:
        return validate(self.to_complex())

    # -- encoding ---------------------------------------------------------

    def _header(self) -> dict:
        return {"format": FORMAT_NAME, "version": FORMAT_VERSION,
                "dimension": self.dimension, "meta": self.meta, "core": self.core}

    def dumps(self, encoding: str = "text") -> str:
        if encoding not in ENCODINGS:
            raise ValueError(f"encoding must be one of {ENCODINGS}")
        faces = [[f, r, list(b)] for f, r, b in self.faces]
        coords = None
        if self.coords is not None:
            coords = [[v, [[x.numerator, x.denominator] for x in p]]
                      for v, p in sorted(self.coords.items())]
        if encoding == "compact":
            body = dict(self._header(), faces=faces, coords=coords)
            return json.dumps(body, separators=(",", ":"), sort_keys=True) + "\n"
        head = json.dumps(self._header(), sort_keys=True)[:-1]
        lines = [head + ",", ' "faces": [']
        lines += ["  " + json.dumps(x) + ("," if i < len(faces) - 1 else "")
                  for i, x in enumerate(faces)]
        if coords is None:
            lines += [" ],", ' "coords": null', "}"]
        else:
            lines += [" ],", ' "coords": [']
            lines += ["  " + json.dumps(x) + ("," if i < len(coords) - 1 else "")
                      for i, x in enumerate(coords)]
            lines += [" ]", "}"]
        return "\n".join(lines) + "\n"


# -- decoding -------------------------------------------------------------

def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"expected an integer, got {x!r}", field=where)
    return x


def _list(x, where):
    if not isinstance(x, list):
        raise ParseError(f"expected a list, got {type(x).__name__}", field=where)
    return x


def _entry_line(text: str, key: str, index: int) -> int:
    # In the text encoding entry i of a section sits i lines below its key;
    # the compact encoding is a single line.
    lines = text.splitlines()
    if len(lines) <= 1:
        return 1
    for n, ln in enumerate(lines):
        if ln.lstrip().startswith(f'"{key}"'):
            return n + 2 + index
    return 1


def _face(entry, where):
    if not isinstance(entry, list) or len(entry) != 3:
        raise ParseError("expected [id, rank, [boundary ids]]", field=where)
    f = _int(entry[0], where + ".id")
    r = _int(entry[1], where + ".rank")
    b = tuple(_int(g, where + ".boundary") for g in _list(entry[2], where + ".boundary"))
    return f, r, b


def _coord(entry, where, dim):
    if not isinstance(entry, list) or len(entry) != 2:
        raise ParseError("expected [vertex id, [[num, den], ...]]", field=where)
    v = _int(entry[0], where + ".id")
    axes = _list(entry[1], where + ".point")
    if len(axes) != dim:
        raise ParseError(f"expected {dim} coordinates", field=where + ".point")
    pt = []
    for a in axes:
        if not isinstance(a, list) or len(a) != 2:
            raise ParseError("expected [numerator, denominator]", field=where + ".point")
        num, den = _int(a[0], where + ".num"), _int(a[1], where + ".den")
        if den <= 0:
            raise ParseError("denominator must be positive", field=where + ".den")
        q = Fraction(num, den)
        if (q.numerator, q.denominator) != (num, den):
            raise ParseError("fraction not in lowest terms", field=where + ".point")
        pt.append(q)
    return v, tuple(pt)


def _section(text, raw, key, parse):
    out = []
    for i, entry in enumerate(_list(raw[key], key)):
        try:
            out.append(parse(entry, f"{key}[{i}]"))
        except ParseError as exc:
            raise ParseError(exc.message, _entry_line(text, key, i), exc.field) from None
    return out


def loads(text: str, check: bool = True) -> PatchDocument:
    """Parse a document in either encoding; validate the complex if ``check``."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", line=1)
    if raw.get("format") != FORMAT_NAME:
        raise ParseError(f"not a {FORMAT_NAME} document", field="format")
    if raw.get("version") != FORMAT_VERSION:
        raise ParseError(f"unsupported version {raw.get('version')!r}", field="version")
    for key in ("dimension", "faces"):
        if key not in raw:
            raise ParseError("missing", field=key)
    dim = _int(raw["dimension"], "dimension")

    faces = _section(text, raw, "faces", _face)
    if [f for f, _, _ in faces] != list(range(len(faces))):
        raise ParseError("face ids must be dense and in order 0..n-1", field="faces")
    coords = None
    if raw.get("coords") is not None:
        coords = dict(_section(text, raw, "coords", lambda e, w: _coord(e, w, dim)))
    core = raw.get("core")
    if core is not None:
        core = [_int(t, "core") for t in _list(core, "core")]
    meta = raw.get("meta") or {}
    if not isinstance(meta, dict):
        raise ParseError("expected an object", field="meta")

    doc = PatchDocument(dim, faces, coords, core, meta)
    if check:
        report = doc.validate()
        if not report.ok:
            raise ValidationError(report)
    return doc


def dumps(doc: PatchDocument, encoding: str = "text") -> str:
    return doc.dumps(encoding)


def save(doc: PatchDocument, path, encoding: str = "text") -> None:
    Path(path).write_text(doc.dumps(encoding), encoding="utf-8")


def load(path, check: bool = True) -> PatchDocument:
    return loads(Path(path).read_text(encoding="utf-8"), check)
