"""Subgroups of a GroupTable: closure, normality, Sylow, Fitting, Frattini."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .core import (
    GroupError,
    GroupTable,
    SizeError,
    is_p_power,
    p_part,
    prime_divisors,
)

DEFAULT_SUBGROUP_BUDGET = 50_000


@dataclass(frozen=True)
class Subgroup:
    """A subset of ``parent`` closed under its multiplication.

    ``parent`` is compared by identity (``GroupTable`` has no value
    equality), so subgroups of different tables never compare equal.
    ``parent`` may also be an operator group holder such as an
    :class:`~autonil.automorphisms.OperatorAction`.
    """

    parent: object
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.member_set

    def __repr__(self) -> str:
        name = getattr(self.parent, "name", "?")
        if len(self.members) <= 12:
            return f"Subgroup({name}, {list(self.members)})"
        return f"Subgroup({name}, order={self.order})"

    @cached_property
    def member_set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        return m

    def issubset(self, other: "Subgroup") -> bool:
        return self.member_set <= other.member_set

    @cached_property
    def standalone(self) -> tuple[GroupTable, np.ndarray]:
        """The subgroup as its own GroupTable plus the embedding into parent.

        Members keep their relative order, so the identity stays at 0.
        """
        g = self.parent
        mem = np.array(self.members)
        pos = np.full(g.order, -1, dtype=np.int64)
        pos[mem] = np.arange(len(mem))
        table = pos[g.table[np.ix_(mem, mem)]]
        names = None
        if g.element_names:
            names = [g.element_names[x] for x in self.members]
        h = GroupTable(table, name=f"{g.name}|{self.order}", element_names=names, check=False)
        mem.setflags(write=False)
        return h, mem

    def as_group(self) -> GroupTable:
        return self.standalone[0]


def make_subgroup(g: GroupTable, members: Iterable[int], *, check: bool = True) -> Subgroup:
    mem = tuple(sorted(set(int(x) for x in members)))
    if check:
        rows = g.rows
        ms = set(mem)
        if 0 not in ms:
            raise GroupError("subgroup must contain the identity")
        for a in mem:
            ra = rows[a]
            for b in mem:
                if ra[b] not in ms:
                    raise GroupError(f"not closed: {a}*{b} = {ra[b]}")
        if g.order % len(mem):
            raise GroupError("subgroup order does not divide the group order")
    return Subgroup(g, mem)


def whole(g: GroupTable) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


def trivial(g: GroupTable) -> Subgroup:
    return Subgroup(g, (0,))


def _closure(g: GroupTable, base: Iterable[int], gens: Sequence[int]) -> set[int]:
    # base must already be closed under right multiplication by gens' predecessors
    rows = g.rows
    members = set(base)
    members.add(0)
    gens = [s for s in dict.fromkeys(gens) if s != 0]
    queue = deque(members)
    while queue:
        y = queue.popleft()
        ry = rows[y]
        for s in gens:
            z = ry[s]
            if z not in members:
                members.add(z)
                queue.append(z)
    return members


def generated_subgroup(g: GroupTable, seed: Iterable[int]) -> Subgroup:
    """Least subgroup containing ``seed``."""
    return Subgroup(g, tuple(sorted(_closure(g, (0,), list(seed)))))


def join(g: GroupTable, *subs: Subgroup) -> Subgroup:
    seed: list[int] = []
    for s in subs:
        seed.extend(s.members)
    return generated_subgroup(g, seed)


def intersection(g: GroupTable, subs: Iterable[Subgroup]) -> Subgroup:
    out = set(range(g.order))
    for s in subs:
        out &= s.member_set
    return Subgroup(g, tuple(sorted(out)))


def conjugate(g: GroupTable, h: Subgroup, x: int) -> Subgroup:
    """``h^x = {x^-1 a x}``."""
    t = g.table
    mem = np.asarray(h.members)
    return Subgroup(g, tuple(sorted(t[t[g.inverse[x], mem], x].tolist())))


def is_normal(g: GroupTable, h: Subgroup) -> bool:
    return normalizer(g, h).order == g.order


def normalizer(g: GroupTable, h: Subgroup) -> Subgroup:
    t = g.table
    mem = np.asarray(h.members)
    mask = h.mask
    # conj[x, j] = x^-1 h_j x
    conj = t[t[g.inverse[:, None], mem[None, :]], np.arange(g.order)[:, None]]
    keep = mask[conj].all(axis=1)
    return Subgroup(g, tuple(np.flatnonzero(keep).tolist()))


def centralizer(g: GroupTable, h: Subgroup) -> Subgroup:
    t = g.table
    mem = np.asarray(h.members)
    keep = (t[:, mem] == t[mem, :].T).all(axis=1)
    return Subgroup(g, tuple(np.flatnonzero(keep).tolist()))


def center(g: GroupTable) -> Subgroup:
    return centralizer(g, whole(g))


def p_elements(g: GroupTable, p: int) -> list[int]:
    return [x for x, o in enumerate(g.orders.tolist()) if is_p_power(o, p)]


def sylow_subgroup(g: GroupTable, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown inside successive normalizers.

    Deterministic: starts from the lowest-index nontrivial p-element and
    always extends by the lowest-index p-element of ``N(H) \\ H``.
    """
    target = p_part(g.order, p)
    if target == 1:
        return trivial(g)
    orders = g.orders.tolist()
    start = next(x for x in range(1, g.order) if is_p_power(orders[x], p))
    h = generated_subgroup(g, [start])
    while h.order < target:
        n = normalizer(g, h)
        ext = next(
            (x for x in n.members if x not in h and is_p_power(orders[x], p)), None
        )
        if ext is None:
            raise RuntimeError(
                f"Sylow growth stalled at order {h.order} < {target} in {g.name}"
            )
        h = Subgroup(g, tuple(sorted(_closure(g, h.members, [ext]))))
    if h.order != target:
        raise RuntimeError(f"Sylow growth overshot to {h.order} in {g.name}")
    return h


def _cyclic_reps(g: GroupTable, candidates: Iterable[int]) -> list[int]:
    # one generator per cyclic subgroup: <H, x> only depends on <x>
    seen: set[frozenset[int]] = set()
    reps = []
    for x in candidates:
        if x == 0:
            continue
        cyc = frozenset(_closure(g, (0,), [x]))
        if cyc not in seen:
            seen.add(cyc)
            reps.append(x)
    return reps


def _grow_subgroups(
    g: GroupTable,
    candidates: list[int],
    keep,
    max_gen: int,
    budget: int,
) -> list[Subgroup]:
    """Breadth-first ``<H, x>`` closure from the trivial subgroup.

    Every subgroup is reached along a chain of one-generator extensions, so
    with ``max_gen`` at least the minimal generator count the result is
    complete. ``keep`` filters which closures are recorded and extended.
    """
    found: dict[tuple[int, ...], tuple[int, ...]] = {(0,): ()}
    frontier: list[tuple[tuple[int, ...], tuple[int, ...]]] = [((0,), ())]
    for _ in range(max_gen):
        nxt = []
        for members, gens in frontier:
            ms = set(members)
            for x in candidates:
                if x in ms:
                    continue
                new = tuple(sorted(_closure(g, members, gens + (x,))))
                if new in found or not keep(len(new)):
                    continue
                found[new] = gens + (x,)
                if len(found) > budget:
                    raise SizeError(f"subgroup enumeration exceeded budget {budget}")
                nxt.append((new, gens + (x,)))
        if not nxt:
            break
        frontier = nxt
    subs = [Subgroup(g, m) for m in found]
    subs.sort(key=lambda s: (s.order, s.members))
    return subs


def _default_max_gen(n: int) -> int:
    return max(1, math.ceil(math.log2(n))) if n > 1 else 1


def enumerate_subgroups(
    g: GroupTable, max_gen: int | None = None, budget: int = DEFAULT_SUBGROUP_BUDGET
) -> list[Subgroup]:
    """Every subgroup exactly once, sorted by ``(order, members)``."""
    if max_gen is None:
        max_gen = _default_max_gen(g.order)
    reps = _cyclic_reps(g, range(g.order))
    return _grow_subgroups(g, reps, lambda k: True, max_gen, budget)


def p_subgroups(
    g: GroupTable, p: int, max_gen: int | None = None, budget: int = DEFAULT_SUBGROUP_BUDGET
) -> list[Subgroup]:
    """All subgroups of p-power order, the trivial one included.

    Grows only through p-elements and p-groups; every p-subgroup is reached
    this way since each of its one-generator prefixes is again a p-group.
    """
    if max_gen is None:
        max_gen = _default_max_gen(g.order)
    reps = _cyclic_reps(g, p_elements(g, p))
    return _grow_subgroups(g, reps, lambda k: is_p_power(k, p), max_gen, budget)


def conjugacy_class_reps(g: GroupTable, subs: Iterable[Subgroup]) -> list[Subgroup]:
    """One subgroup per conjugacy class, keeping the first of each in input order."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for s in subs:
        if s.members in seen:
            continue
        out.append(s)
        for x in range(g.order):
            seen.add(conjugate(g, s, x).members)
    return out


def maximal_subgroups(g: GroupTable, **kw) -> list[Subgroup]:
    subs = [s for s in enumerate_subgroups(g, **kw) if s.order < g.order]
    out = []
    for s in subs:
        if not any(s.order < t.order and s.member_set < t.member_set for t in subs):
            out.append(s)
    return out


def frattini_subgroup(g: GroupTable, **kw) -> Subgroup:
    return intersection(g, maximal_subgroups(g, **kw))


def p_core(g: GroupTable, p: int) -> Subgroup:
    """Largest normal p-subgroup: the intersection of all Sylow conjugates."""
    s = sylow_subgroup(g, p)
    return intersection(g, (conjugate(g, s, x) for x in range(g.order)))


def fitting_subgroup(g: GroupTable) -> Subgroup:
    """Largest normal nilpotent subgroup, as the join of the p-cores."""
    return join(g, trivial(g), *(p_core(g, p) for p in sorted(prime_divisors(g))))


def is_nilpotent(g: GroupTable) -> bool:
    """Every Sylow subgroup is normal."""
    return all(is_normal(g, sylow_subgroup(g, p)) for p in prime_divisors(g))


def frattini_rank(g: GroupTable, p: int) -> int:
    """``n`` with ``|G/Phi(G)| = p^n`` for a p-group ``g``."""
    idx = g.order // frattini_subgroup(g).order
    n = 0
    while idx > 1:
        if idx % p:
            raise GroupError(f"{g.name} is not a {p}-group")
        idx //= p
        n += 1
    return n
