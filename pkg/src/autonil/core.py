"""Finite groups as multiplication tables over element indices.

Element ``0`` is always the identity. Tables are read-only numpy arrays, and a
``GroupTable`` is immutable once built; subgroups and actions refer back to
their parent table by identity so indices from different groups cannot be
mixed up silently.
"""

from __future__ import annotations

import os
from collections import deque
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

DEFAULT_MAX_ORDER = 1024


class GroupError(ValueError):
    """Base class for errors raised by the toolkit."""


class SizeError(GroupError):
    """A computation would exceed a configured size cap."""


class InvariantError(GroupError):
    """A multiplication table violates a group axiom.

    ``invariant`` names the violated property and ``where`` holds the
    offending element indices.
    """

    def __init__(self, invariant: str, where: tuple[int, ...], detail: str = ""):
        self.invariant = invariant
        self.where = where
        msg = f"{invariant} violated at {where}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


def max_order() -> int:
    """Desk-scale cap on group orders (``AUTONIL_MAX_ORDER`` overrides)."""
    raw = os.environ.get("AUTONIL_MAX_ORDER")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise GroupError(f"AUTONIL_MAX_ORDER must be an integer, got {raw!r}")
    return DEFAULT_MAX_ORDER


def _check_cap(n: int, what: str = "group") -> None:
    cap = max_order()
    if n > cap:
        raise SizeError(
            f"{what} order {n} exceeds the desk-scale cap {cap} "
            "(set AUTONIL_MAX_ORDER to raise it)"
        )


def validate_table(table: np.ndarray) -> None:
    """Run the full invariant suite, raising on the first violation.

    Checked in order: shape, entry range, identity at index 0, Latin square,
    associativity.
    """
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise InvariantError("shape", tuple(table.shape), "table must be a non-empty n x n array")
    n = table.shape[0]
    bad = np.argwhere((table < 0) | (table >= n))
    if len(bad):
        a, b = (int(v) for v in bad[0])
        raise InvariantError("range", (a, b), f"entry {int(table[a, b])} not in 0..{n - 1}")
    idx = np.arange(n)
    bad = np.flatnonzero(table[0] != idx)
    if len(bad):
        raise InvariantError("identity", (0, int(bad[0])), "row 0 must be the identity row")
    bad = np.flatnonzero(table[:, 0] != idx)
    if len(bad):
        raise InvariantError("identity", (int(bad[0]), 0), "column 0 must be the identity column")
    srt = np.sort(table, axis=1)
    bad = np.argwhere(srt != idx)
    if len(bad):
        raise InvariantError("latin-row", (int(bad[0][0]),), "row is not a permutation")
    srt = np.sort(table, axis=0)
    bad = np.argwhere(srt != idx[:, None])
    if len(bad):
        raise InvariantError("latin-column", (int(bad[0][1]),), "column is not a permutation")
    for a in range(n):
        # (a*b)*c versus a*(b*c) for all b, c
        left = table[table[a]]
        right = table[a][table]
        bad = np.argwhere(left != right)
        if len(bad):
            b, c = (int(v) for v in bad[0])
            raise InvariantError("associativity", (a, b, c))


class GroupTable:
    """A finite group given by its Cayley table.

    ``table[g, h]`` is the index of ``g*h``. Construction validates the table
    unless ``check=False`` (used by the builtin constructors, whose output is
    covered by tests instead).
    """

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        name: str = "G",
        element_names: Sequence[str] | None = None,
        *,
        check: bool = True,
    ):
        arr = np.array(table, dtype=np.int64)
        if arr.ndim == 2:
            _check_cap(arr.shape[0])
        if check:
            validate_table(arr)
        arr.setflags(write=False)
        self._table = arr
        self.name = name
        if element_names is not None:
            element_names = tuple(element_names)
            if len(element_names) != arr.shape[0]:
                raise GroupError("element_names length does not match the order")
        self.element_names = element_names

    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def order(self) -> int:
        return self._table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"GroupTable({self.name!r}, order={self.order})"

    @cached_property
    def rows(self) -> list[list[int]]:
        """The table as nested Python lists, for tight scalar loops."""
        return self._table.tolist()

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmin(self._table, axis=1)  # the unique 0 in each row
        inv.setflags(write=False)
        return inv

    @cached_property
    def inv_list(self) -> list[int]:
        return self.inverse.tolist()

    def mul(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def inv(self, a: int) -> int:
        return self.inv_list[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out, base = 0, a
        rows = self.rows
        while k:
            if k & 1:
                out = rows[out][base]
            base = rows[base][base]
            k >>= 1
        return out

    def conj(self, a: int, b: int) -> int:
        """``a^b = b^-1 a b``."""
        rows = self.rows
        return rows[rows[self.inv_list[b]][a]][b]

    @cached_property
    def orders(self) -> np.ndarray:
        """Order of every element, by repeated right multiplication."""
        n = self.order
        idx = np.arange(n)
        out = np.zeros(n, dtype=np.int64)
        cur = idx.copy()
        k = 1
        while True:
            hit = (cur == 0) & (out == 0)
            out[hit] = k
            if out.all():
                break
            cur = self._table[cur, idx]
            k += 1
        out.setflags(write=False)
        return out

    @cached_property
    def is_abelian(self) -> bool:
        return bool((self._table == self._table.T).all())

    def elements(self) -> range:
        return range(self.order)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "order": self.order, "table": self.rows}


def element_order(g: GroupTable, x: int) -> int:
    """Least ``k >= 1`` with ``x^k = 1``."""
    return int(g.orders[x])


def prime_divisors(g: GroupTable | int) -> set[int]:
    n = g if isinstance(g, int) else g.order
    return set(factorint(n)) if n > 1 else set()


def is_p_power(n: int, p: int) -> bool:
    """True iff ``n`` is a power of ``p`` (``1 = p^0`` counts)."""
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def commutator_elements(g: GroupTable, a: int, b: int) -> int:
    """``a^-1 * a^b`` where ``a^b = b^-1 a b``."""
    return g.mul(g.inv(a), g.conj(a, b))


# ----------------------------------------------------------------------------
# constructors


def make_cyclic(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group order must be >= 1")
    _check_cap(n)
    idx = np.arange(n)
    return GroupTable((idx[:, None] + idx[None, :]) % n, name=f"C{n}", check=False)


def make_dihedral(two_n: int) -> GroupTable:
    """Dihedral group of order ``two_n`` (so ``D8`` is the square's symmetries).

    Indices ``0..m-1`` are rotations ``r^i``; ``m..2m-1`` are reflections
    ``s r^i``, with ``r s = s r^-1``.
    """
    if two_n < 4 or two_n % 2:
        raise GroupError(f"dihedral order must be even and >= 4, got {two_n}")
    _check_cap(two_n)
    m = two_n // 2
    t = np.empty((two_n, two_n), dtype=np.int64)
    i = np.arange(m)[:, None]
    j = np.arange(m)[None, :]
    t[:m, :m] = (i + j) % m  # r^i r^j
    t[:m, m:] = m + (j - i) % m  # r^i s r^j = s r^(j-i)
    t[m:, :m] = m + (i + j) % m  # s r^i r^j
    t[m:, m:] = (j - i) % m  # s r^i s r^j = r^(j-i)
    return GroupTable(t, name=f"D{two_n}", check=False)


def _compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # apply p, then q
    return tuple(q[x] for x in p)


def cycle_string(perm: Sequence[int]) -> str:
    """1-based cycle notation, ``()`` for the identity."""
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        parts.append("(" + " ".join(str(c + 1) for c in cyc) + ")")
    return "".join(parts) or "()"


def from_permutations(
    generators: Iterable[Sequence[int]],
    degree: int | None = None,
    name: str = "G",
) -> GroupTable:
    """Close a set of permutations (0-based image tuples) under composition.

    The product ``p*q`` applies ``p`` first. Elements are sorted
    lexicographically, which puts the identity at index 0.
    """
    gens = [tuple(int(x) for x in p) for p in generators]
    if degree is None:
        degree = max((len(p) for p in gens), default=0)
    for p in gens:
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise GroupError(f"not a permutation of {degree} points: {p}")
    cap = max_order()
    ident = tuple(range(degree))
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = _compose(x, s)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise SizeError(
                        f"permutation closure exceeds the desk-scale cap {cap}"
                    )
                queue.append(y)
    elems = sorted(seen)
    pos = {p: i for i, p in enumerate(elems)}
    table = [[pos[_compose(a, b)] for b in elems] for a in elems]
    return GroupTable(
        table, name=name, element_names=[cycle_string(p) for p in elems], check=False
    )


def make_symmetric(k: int) -> GroupTable:
    if not 1 <= k <= 6:
        raise GroupError(f"symmetric degree must be in 1..6, got {k}")
    gens = []
    if k >= 2:
        gens.append((1, 0) + tuple(range(2, k)))
        gens.append(tuple(range(1, k)) + (0,))
    return from_permutations(gens, degree=k, name=f"S{k}")


def make_alternating(k: int) -> GroupTable:
    if not 1 <= k <= 6:
        raise GroupError(f"alternating degree must be in 1..6, got {k}")
    # 3-cycles (1 2 i) generate A_k
    gens = []
    for i in range(2, k):
        p = list(range(k))
        p[0], p[1], p[i] = 1, i, 0
        gens.append(tuple(p))
    return from_permutations(gens, degree=k, name=f"A{k}")


def make_quaternion8() -> GroupTable:
    """Q8 with indices 0..7 = 1, -1, i, -i, j, -j, k, -k."""
    # unit products on the basis 1, i, j, k as (sign, unit)
    unit = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ]
    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            sa, ua = (-1 if a % 2 else 1), a // 2
            sb, ub = (-1 if b % 2 else 1), b // 2
            s, u = unit[ua][ub]
            s *= sa * sb
            table[a][b] = 2 * u + (1 if s < 0 else 0)
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    return GroupTable(table, name="Q8", element_names=names, check=False)


def make_elementary_abelian(p: int, k: int) -> GroupTable:
    if not isprime(p):
        raise GroupError(f"{p} is not prime")
    if k < 1:
        raise GroupError("rank must be >= 1")
    n = p**k
    _check_cap(n)
    digits = np.array([[(x // p**i) % p for i in range(k)] for x in range(n)])
    weights = p ** np.arange(k)
    summed = (digits[:, None, :] + digits[None, :, :]) % p
    return GroupTable(summed @ weights, name=f"E{p}^{k}", check=False)


def direct_product(g: GroupTable, h: GroupTable, name: str | None = None) -> GroupTable:
    """Pairs ``(a, b)`` flattened to ``a*|h| + b``."""
    n, m = g.order, h.order
    _check_cap(n * m, "direct product")
    gt, ht = g.table, h.table
    big = (gt[:, None, :, None] * m + ht[None, :, None, :]).reshape(n * m, n * m)
    names = None
    if g.element_names or h.element_names:
        gn = g.element_names or [str(i) for i in range(n)]
        hn = h.element_names or [str(i) for i in range(m)]
        names = [f"({a},{b})" for a in gn for b in hn]
    return GroupTable(
        big, name=name or f"{g.name} x {h.name}", element_names=names, check=False
    )


# ----------------------------------------------------------------------------
# quotients


def quotient(g: GroupTable, n) -> tuple[GroupTable, np.ndarray]:
    """Factor group ``g/n`` and the projection ``element -> coset index``.

    ``n`` is a :class:`~autonil.subgroups.Subgroup` of ``g`` (anything with
    ``parent`` and ``members``). Cosets are indexed by their smallest member,
    so the identity coset is 0.
    """
    if n.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    members = np.asarray(n.members)
    t = g.table
    inv = g.inverse
    for x in range(g.order):
        conj = t[t[inv[x], members], x]
        if not np.isin(conj, members).all():
            raise GroupError(f"subgroup is not normal (conjugating by {x})")
    proj = np.full(g.order, -1, dtype=np.int64)
    reps = []
    for x in range(g.order):
        if proj[x] < 0:
            proj[t[x, members]] = len(reps)
            reps.append(x)
    reps_arr = np.array(reps)
    qt = proj[t[np.ix_(reps_arr, reps_arr)]]
    proj.setflags(write=False)
    return GroupTable(qt, name=f"{g.name}/N", check=False), proj


# ----------------------------------------------------------------------------
# generator-image backtracking (shared by Aut search and isomorphism tests)


def generating_set(g: GroupTable) -> tuple[int, ...]:
    """Greedy generators: repeatedly add the lowest index outside the closure."""
    rows = g.rows
    members = {0}
    gens: list[int] = []
    for x in range(g.order):
        if x in members:
            continue
        gens.append(x)
        queue = deque(members)
        while queue:
            y = queue.popleft()
            for s in gens:
                z = rows[y][s]
                if z not in members:
                    members.add(z)
                    queue.append(z)
    return tuple(gens)


class _Plan:
    """Spanning-tree words for each prefix closure of a generating set.

    ``levels[k]`` lists ``(x, y, i)`` with ``x = y * gens[i]`` for elements first
    reached when ``gens[k]`` is added; ``checks[k]`` lists ``(x, i, x*gens[i])``
    pairs whose relation is first testable at that level.
    """

    def __init__(self, g: GroupTable, gens: Sequence[int]):
        rows = g.rows
        self.gens = tuple(gens)
        self.levels: list[list[tuple[int, int, int]]] = []
        self.checks: list[list[tuple[int, int, int]]] = []
        closure = [0]
        seen = {0}
        for k in range(len(gens)):
            new: list[tuple[int, int, int]] = []
            queue = deque(closure)
            while queue:
                y = queue.popleft()
                for i in range(k + 1):
                    x = rows[y][gens[i]]
                    if x not in seen:
                        seen.add(x)
                        new.append((x, y, i))
                        queue.append(x)
            old = set(closure)
            closure = closure + [x for x, _, _ in new]
            chk = []
            for x in closure:
                for i in range(k + 1):
                    if x in old and i < k:
                        continue
                    chk.append((x, i, rows[x][gens[i]]))
            self.levels.append(new)
            self.checks.append(chk)
        self.size = len(closure)


def homomorphism_search(
    g: GroupTable,
    h: GroupTable,
    *,
    limit: int | None = None,
    first_only: bool = False,
    gens: Sequence[int] | None = None,
) -> Iterator[list[int]]:
    """Yield every isomorphism ``g -> h`` as an image list.

    Backtracks over images of a greedy generating set of ``g``, restricting
    candidates to elements of equal order, extending the partial map along
    spanning-tree words and pruning on the first broken relation or repeated
    image. ``limit`` raises :class:`SizeError` once exceeded.
    """
    if g.order != h.order:
        return
    gens = tuple(gens) if gens is not None else generating_set(g)
    n = g.order
    if not gens:
        yield [0]
        return
    plan = _Plan(g, gens)
    hrows = h.rows
    g_orders = g.orders.tolist()
    h_orders = h.orders.tolist()
    by_order: dict[int, list[int]] = {}
    for y in range(n):
        by_order.setdefault(h_orders[y], []).append(y)
    f = [-1] * n
    f[0] = 0
    used = [False] * n
    used[0] = True
    count = 0
    depth = len(gens)

    def assign(k: int, c: int) -> list[int] | None:
        f[gens[k]] = c
        newly = []
        for x, y, i in plan.levels[k]:
            v = hrows[f[y]][f[gens[i]]]
            if used[v]:
                for w in newly:
                    used[w] = False
                return None
            f[x] = v
            used[v] = True
            newly.append(v)
        for x, i, xg in plan.checks[k]:
            if f[xg] != hrows[f[x]][f[gens[i]]]:
                for w in newly:
                    used[w] = False
                return None
        return newly

    def rec(k: int) -> Iterator[list[int]]:
        nonlocal count
        for c in by_order.get(g_orders[gens[k]], ()):
            if used[c]:
                continue
            newly = assign(k, c)
            if newly is None:
                continue
            if k + 1 == depth:
                count += 1
                if limit is not None and count > limit:
                    raise SizeError(f"more than {limit} isomorphisms found")
                yield list(f)
            else:
                yield from rec(k + 1)
            for w in newly:
                used[w] = False
            if first_only and count:
                return

    yield from rec(0)


def find_isomorphism(g: GroupTable, h: GroupTable) -> list[int] | None:
    """An isomorphism ``g -> h`` as an image list, or ``None``."""
    if g.order != h.order or g.is_abelian != h.is_abelian:
        return None
    if sorted(g.orders.tolist()) != sorted(h.orders.tolist()):
        return None
    for f in homomorphism_search(g, h, first_only=True):
        return f
    return None


def is_isomorphic(g: GroupTable, h: GroupTable) -> bool:
    return find_isomorphism(g, h) is not None

