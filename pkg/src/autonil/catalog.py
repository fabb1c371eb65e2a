"""Group specs, the builtin catalog, Cayley-table JSON and report output.

Spec grammar::

    spec    := product | "perm:" gens | "file:" path
    product := family ( ("x" | "×") family )*
    family  := "C" n | "D" n | "S" k | "A" k | "Q8" | "E" p "^" k
    gens    := [ cycles ( "," cycles )* ]      cycles like (1 2 3)(4 5)

``D<n>`` names the dihedral group of *order* n, so ``D8`` has 8 elements.
"""

from __future__ import annotations

import json
import re
from math import factorial
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

import numpy as np
from sympy import primerange

from .core import (
    GroupError,
    GroupTable,
    direct_product,
    find_isomorphism,
    from_permutations,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_quaternion8,
    make_symmetric,
    max_order,
)
from .subgroups import center

SCHEMA_VERSION = 1


class SpecError(GroupError):
    def __init__(self, message: str, text: str, offset: int):
        self.text = text
        self.offset = offset
        super().__init__(f"{message} at offset {offset}: {text!r}")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...]

    @property
    def text(self) -> str:
        if self.family == "Q":
            return "Q8"
        if self.family == "E":
            return f"E{self.params[0]}^{self.params[1]}"
        return f"{self.family}{self.params[0]}"


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple["GroupSpec", ...]

    @property
    def text(self) -> str:
        return " x ".join(f.text for f in self.factors)


@dataclass(frozen=True)
class PermSpec:
    generators: tuple[tuple[int, ...], ...]
    degree: int
    source: str

    @property
    def text(self) -> str:
        return "perm:" + self.source


@dataclass(frozen=True)
class FileSpec:
    path: str

    @property
    def text(self) -> str:
        return "file:" + self.path


GroupSpec = Union[FamilySpec, ProductSpec, PermSpec, FileSpec]

_FAMILY = re.compile(r"Q8|E(\d+)\^(\d+)|([CDSA])(\d+)")
_SEP = re.compile(r"\s*[x×]\s*")


def parse_spec(text: str) -> GroupSpec:
    if text.startswith("perm:"):
        return _parse_perm(text)
    if text.startswith("file:"):
        path = text[5:].strip()
        if not path:
            raise SpecError("empty file path", text, 5)
        return FileSpec(path)
    factors: list[FamilySpec] = []
    pos = len(text) - len(text.lstrip())
    end = len(text.rstrip())
    if pos == end:
        raise SpecError("empty spec", text, 0)
    while True:
        m = _FAMILY.match(text, pos)
        if not m:
            if text[pos:pos + 1] in ("x", "×") or pos >= end:
                raise SpecError("unbalanced product", text, pos)
            raise SpecError("unknown family", text, pos)
        if m.group(0) == "Q8":
            factors.append(FamilySpec("Q", (8,)))
        elif m.group(1):
            factors.append(FamilySpec("E", (int(m.group(1)), int(m.group(2)))))
        else:
            factors.append(FamilySpec(m.group(3), (int(m.group(4)),)))
        pos = m.end()
        if pos >= end:
            break
        sep = _SEP.match(text, pos)
        if not sep or sep.end() == pos:
            raise SpecError("expected 'x' between factors", text, pos)
        pos = sep.end()
        if pos >= end:
            raise SpecError("unbalanced product", text, pos)
    if len(factors) == 1:
        return factors[0]
    return ProductSpec(tuple(factors))


def _parse_perm(text: str) -> PermSpec:
    body = text[5:]
    base = 5
    gens_text: list[tuple[str, int]] = []
    depth, start = 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            if depth:
                raise SpecError("nested parenthesis", text, base + i)
            depth = 1
        elif ch == ")":
            if not depth:
                raise SpecError("unmatched ')'", text, base + i)
            depth = 0
        elif ch == "," and not depth:
            gens_text.append((body[start:i], base + start))
            start = i + 1
    if depth:
        raise SpecError("unclosed '('", text, len(text))
    gens_text.append((body[start:], base + start))
    if len(gens_text) == 1 and not gens_text[0][0].strip():
        return PermSpec((), 0, body.strip())
    cycles_per_gen: list[list[list[int]]] = []
    degree = 0
    for chunk, off in gens_text:
        if not chunk.strip():
            raise SpecError("empty generator", text, off)
        cycles = []
        for m in re.finditer(r"\(([^)]*)\)|(\S)", chunk):
            if m.group(2):
                raise SpecError("malformed cycle notation", text, off + m.start())
            pts_text = m.group(1).replace(",", " ").split()
            try:
                pts = [int(p) for p in pts_text]
            except ValueError:
                raise SpecError("cycle points must be integers", text, off + m.start())
            if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
                raise SpecError("cycle points must be distinct and >= 1", text, off + m.start())
            cycles.append(pts)
            degree = max([degree, *pts])
        cycles_per_gen.append(cycles)
    gens = []
    for cycles in cycles_per_gen:
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b - 1
        gens.append(tuple(img))
    return PermSpec(tuple(gens), degree, body.strip())


def realize(spec: GroupSpec | str) -> GroupTable:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    if isinstance(spec, FamilySpec):
        f, ps = spec.family, spec.params
        if f == "C":
            g = make_cyclic(ps[0])
        elif f == "D":
            g = make_dihedral(ps[0])
        elif f == "S":
            g = make_symmetric(ps[0])
        elif f == "A":
            g = make_alternating(ps[0])
        elif f == "Q":
            g = make_quaternion8()
        else:
            g = make_elementary_abelian(*ps)
        g.name = spec.text
        return g
    if isinstance(spec, ProductSpec):
        total = 1
        for f in spec.factors:
            total *= _family_order(f)
        if total > max_order():
            raise GroupError(f"product order {total} exceeds the desk-scale cap {max_order()}")
        g = realize(spec.factors[0])
        for f in spec.factors[1:]:
            g = direct_product(g, realize(f))
        g.name = spec.text
        return g
    if isinstance(spec, PermSpec):
        return from_permutations(spec.generators, spec.degree, name=spec.text)
    return load_table(Path(spec.path))


def _family_order(f: FamilySpec) -> int:
    if f.family in ("C", "D"):
        return f.params[0]
    if f.family == "S":
        return factorial(f.params[0])
    if f.family == "A":
        return max(1, factorial(f.params[0]) // 2)
    if f.family == "Q":
        return 8
    return f.params[0] ** f.params[1]


# ----------------------------------------------------------------------------
# Cayley-table JSON


def dump_table(g: GroupTable) -> str:
    """Canonical JSON text: one table row per line, trailing newline."""
    rows = ",\n    ".join(json.dumps(r) for r in g.rows)
    return (
        "{\n"
        f'  "name": {json.dumps(g.name, ensure_ascii=False)},\n'
        f'  "order": {g.order},\n'
        f'  "table": [\n    {rows}\n  ]\n'
        "}\n"
    )


def parse_table(text: str, default_name: str = "G") -> GroupTable:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GroupError(f"invalid JSON: {exc}")
    if not isinstance(data, dict) or "table" not in data:
        raise GroupError("expected an object with a 'table' field")
    table = data["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise GroupError("'table' must be a list of rows")
    if any(not isinstance(v, int) or isinstance(v, bool) for r in table for v in r):
        raise GroupError("table entries must be integers")
    if any(len(r) != len(table) for r in table):
        raise GroupError("table must be square")
    if "order" in data and data["order"] != len(table):
        raise GroupError(f"'order' is {data['order']} but the table has {len(table)} rows")
    return GroupTable(np.array(table, dtype=np.int64).reshape(len(table), len(table)),
                      name=str(data.get("name", default_name)))


def load_table(path: Path | str) -> GroupTable:
    path = Path(path)
    return parse_table(path.read_text(encoding="utf-8"), default_name=path.stem)


def save_table(g: GroupTable, path: Path | str) -> None:
    Path(path).write_text(dump_table(g), encoding="utf-8")


# ----------------------------------------------------------------------------
# builtin catalog


@dataclass(frozen=True)
class CatalogEntry:
    spec: str
    group: GroupTable


@dataclass
class Catalog:
    entries: list[CatalogEntry]
    aliases: list[tuple[str, str]]  # (suppressed spec, kept spec)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return [e.spec for e in self.entries]

    def get(self, spec: str) -> GroupTable:
        for e in self.entries:
            if e.spec == spec:
                return e.group
        raise KeyError(spec)


def _base_specs(max_n: int) -> list[FamilySpec]:
    out = [FamilySpec("C", (n,)) for n in range(1, max_n + 1)]
    elem = [
        FamilySpec("E", (p, k))
        for p in primerange(2, max_n + 1)
        for k in range(2, max_n.bit_length() + 1)
        if p**k <= max_n
    ]
    out.extend(sorted(elem, key=_family_order))
    for f in (FamilySpec("Q", (8,)), FamilySpec("S", (3,)), FamilySpec("A", (4,)), FamilySpec("S", (4,))):
        if _family_order(f) <= max_n:
            out.append(f)
    out.extend(FamilySpec("D", (n,)) for n in range(4, max_n + 1, 2))
    return out


def _invariant_key(g: GroupTable) -> tuple:
    return (g.order, g.is_abelian, tuple(sorted(g.orders.tolist())), center(g).order)


def builtin_catalog(max_order_: int) -> Catalog:
    """Cyclic, elementary abelian, Q8, S3, A4, S4, dihedral groups and all
    pairwise direct products, up to ``max_order_``, one per isomorphism class.

    Construction order decides which name survives when two constructions
    are isomorphic (so ``E2^2`` beats ``D4`` and ``S3`` beats ``D6``).
    """
    if max_order_ > max_order():
        raise GroupError(f"max order {max_order_} exceeds the desk-scale cap {max_order()}")
    base = _base_specs(max_order_)
    specs: list[GroupSpec] = list(base)
    orders = {b: _family_order(b) for b in base}
    nontrivial = [b for b in base if orders[b] > 1]
    for i, a in enumerate(nontrivial):
        for b in nontrivial[i:]:
            if orders[a] * orders[b] <= max_order_:
                specs.append(ProductSpec((a, b)))
    entries: list[CatalogEntry] = []
    aliases: list[tuple[str, str]] = []
    buckets: dict[tuple, list[CatalogEntry]] = {}
    for s in specs:
        g = realize(s)
        key = _invariant_key(g)
        bucket = buckets.setdefault(key, [])
        twin = next((e for e in bucket if find_isomorphism(g, e.group) is not None), None)
        if twin is not None:
            aliases.append((s.text, twin.spec))
            continue
        entry = CatalogEntry(s.text, g)
        bucket.append(entry)
        entries.append(entry)
    return Catalog(entries, aliases)


# ----------------------------------------------------------------------------
# reports


def export_report(results: Iterable, fmt: str = "json", timing: bool = False) -> str:
    """Serialise CrossValidation results, sorted by ``(order, name)``."""
    rows = sorted(results, key=lambda cv: (cv.order, cv.group))
    if fmt == "json":
        doc = {"schema": SCHEMA_VERSION, "results": [cv.to_dict(timing) for cv in rows]}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise GroupError(f"unknown report format {fmt!r}")
    lines = []
    for cv in rows:
        verdict = {True: "yes", False: "no", None: "undecided"}[cv.autonilpotent]
        lines.append(f"{cv.group} (order {cv.order}): autonilpotent={verdict} agree={'yes' if cv.agree else 'NO'}")
        for name, r in cv.reports.items():
            v = {True: "true", False: "false", None: r.status}[r.verdict]
            lines.append(f"  {name:<10} {v}  {_brief(r.evidence)}")
        for p, d in sorted(cv.baer.items()):
            parts = " ".join(f"{k}={'=' if v else ('!=' if v is False else 'skipped')}"
                             for k, v in d.items())
            lines.append(f"  baer p={p}  {parts}")
        if timing:
            total = sum(r.elapsed for r in cv.reports.values())
            lines.append(f"  elapsed {total:.3f}s")
    return "\n".join(lines) + ("\n" if lines else "")


def _brief(evidence: dict) -> str:
    return json.dumps(evidence, separators=(",", ":"), sort_keys=True)
