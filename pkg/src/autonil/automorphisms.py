"""Automorphism groups and groups of operators acting on a GroupTable.

Composition convention (used everywhere in the package): the operator
product ``a*b`` acts as ``action(a) o action(b)``, i.e. apply ``b`` first,
then ``a``. Image arrays store ``images[x] = x^alpha``.
"""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    GroupError,
    GroupTable,
    SizeError,
    generating_set,
    homomorphism_search,
    is_p_power,
)
from .subgroups import Subgroup, whole

DEFAULT_AUT_SEARCH_ORDER = 256
MAX_AUT_SEARCH_ORDER = 729
DEFAULT_MAX_AUT_SIZE = 100_000
MAX_OPERATOR_TABLE = 4096


@dataclass(frozen=True, eq=False)
class Automorphism:
    parent: GroupTable
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Automorphism)
            and other.parent is self.parent
            and other.images == self.images
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.images))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self o other``: apply ``other`` first."""
        if other.parent is not self.parent:
            raise GroupError("automorphisms of different groups")
        return Automorphism(self.parent, tuple(self.images[y] for y in other.images))

    @property
    def order(self) -> int:
        return permutation_orders(np.array([self.images]))[0]

    def is_valid(self) -> bool:
        im = np.asarray(self.images)
        t = self.parent.table
        n = self.parent.order
        if im[0] != 0 or sorted(self.images) != list(range(n)):
            return False
        return bool((im[t] == t[im[:, None], im[None, :]]).all())


def permutation_orders(maps: np.ndarray) -> np.ndarray:
    """Order of each row of ``maps`` as a permutation of its columns."""
    m, n = maps.shape
    out = np.zeros(m, dtype=np.int64)
    ident = np.arange(n)
    cur = maps.copy()
    k = 1
    while m:
        hit = (out == 0) & (cur == ident).all(axis=1)
        out[hit] = k
        if out.all():
            break
        cur = np.take_along_axis(maps, cur, axis=1)
        k += 1
    return out


class OperatorAction:
    """A group of operators ``R`` acting on ``target`` through ``maps``.

    ``maps[a]`` is the image array of operator ``a``. When ``operators`` is
    given it is the abstract operator group (the action need not be
    faithful, e.g. conjugation); otherwise the operator group is the group
    of the distinct maps themselves under composition, built lazily from an
    ``owner`` action whose maps define it.
    """

    def __init__(
        self,
        target: GroupTable,
        maps: np.ndarray,
        operators: GroupTable | None = None,
        name: str = "R",
        *,
        owner: "OperatorAction | None" = None,
    ):
        maps = np.asarray(maps, dtype=np.int64)
        if maps.ndim != 2 or maps.shape[1] != target.order or maps.shape[0] == 0:
            raise GroupError("maps must be an (m, |target|) array")
        if operators is not None and operators.order != maps.shape[0]:
            raise GroupError("one map per operator required")
        maps.setflags(write=False)
        self.target = target
        self.maps = maps
        self.name = name
        self._operators = operators
        self._owner = owner

    def __repr__(self) -> str:
        return f"OperatorAction({self.name!r} on {self.target.name}, operators={self.order})"

    @property
    def order(self) -> int:
        return self.maps.shape[0]

    def __len__(self) -> int:
        return self.order

    def image(self, a: int) -> Automorphism:
        return Automorphism(self.target, tuple(self.maps[a].tolist()))

    def act(self, x: int, a: int) -> int:
        """``x^a``."""
        return int(self.maps[a, x])

    @cached_property
    def operators(self) -> GroupTable:
        """The abstract operator group (composition table, built on demand)."""
        if self._operators is not None:
            return self._operators
        if self._owner is not None:
            return self._owner.operators
        return _composition_table(self.target, self.maps, self.name)

    @cached_property
    def operator_orders(self) -> np.ndarray:
        if self._operators is not None:
            return self._operators.orders
        if self._owner is not None:
            return self._owner.operator_orders
        # faithful by construction: the order of a map is its permutation order
        return permutation_orders(self.maps)

    @cached_property
    def kernel(self) -> Subgroup:
        """``C_R(target)``: operators acting as the identity."""
        ident = np.arange(self.target.order)
        keep = (self.maps == ident).all(axis=1)
        return Subgroup(self, tuple(np.flatnonzero(keep).tolist()))

    @property
    def is_faithful(self) -> bool:
        return self.kernel.order == 1

    @cached_property
    def commutators(self) -> np.ndarray:
        """``C[a, b] = [b, a] = b^-1 b^a`` for every operator and element."""
        t = self.target.table
        return t[self.target.inverse[None, :], self.maps]

    def faithful_image(self) -> "OperatorAction":
        """``Aut_R(target) = R / C_R(target)`` as the group of distinct maps."""
        return OperatorAction(self.target, _distinct_rows(self.maps), name=f"Aut_{self.name}")

    def to_json_dict(self) -> dict:
        out = self.operators.to_json_dict()
        out["action"] = self.maps.tolist()
        return out


def _distinct_rows(maps: np.ndarray) -> np.ndarray:
    # lexicographic order keeps the identity map first
    return np.unique(maps, axis=0)


def _composition_table(target: GroupTable, maps: np.ndarray, name: str) -> GroupTable:
    m, n = maps.shape
    if m > MAX_OPERATOR_TABLE:
        raise SizeError(
            f"operator group of order {m} is too large for a composition table "
            f"(limit {MAX_OPERATOR_TABLE})"
        )
    if not (maps[0] == np.arange(n)).all():
        raise GroupError("first map must be the identity")
    # a map is determined by the images of a generating set of the target
    keys = maps[:, list(generating_set(target))]
    k = keys.shape[1]
    table = np.empty((m, m), dtype=np.int64)
    if n**k < 2**62:
        weights = n ** np.arange(k, dtype=np.int64)
        codes = keys @ weights
        order = np.argsort(codes)
        sorted_codes = codes[order]
        if len(np.unique(codes)) != m:
            raise GroupError("maps are not distinct; pass the abstract operator group")
        for a in range(m):
            comp = maps[a][keys] @ weights  # (a o b) on the generators, for all b
            lo = np.minimum(np.searchsorted(sorted_codes, comp), m - 1)
            if not (sorted_codes[lo] == comp).all():
                raise RuntimeError("operator maps are not closed under composition")
            table[a] = order[lo]
    else:
        lookup = {tuple(r): i for i, r in enumerate(keys.tolist())}
        if len(lookup) != m:
            raise GroupError("maps are not distinct; pass the abstract operator group")
        for a in range(m):
            try:
                table[a] = [lookup[tuple(r)] for r in maps[a][keys].tolist()]
            except KeyError:
                raise RuntimeError("operator maps are not closed under composition")
    return GroupTable(table, name=name, check=False)


# ----------------------------------------------------------------------------
# Aut(G)

_aut_cache: "weakref.WeakKeyDictionary[GroupTable, dict]" = weakref.WeakKeyDictionary()
_aut_lock = threading.Lock()


def automorphism_group(
    g: GroupTable,
    *,
    max_group_order: int = DEFAULT_AUT_SEARCH_ORDER,
    max_size: int = DEFAULT_MAX_AUT_SIZE,
) -> OperatorAction:
    """``Aut(g)`` acting faithfully on ``g``.

    Automorphisms are sorted by image array, so index 0 is the identity.
    Results are memoised per group object.
    """
    if g.order > max_group_order:
        raise SizeError(
            f"Aut search for order {g.order} exceeds the cap {max_group_order} "
            "(use --max-aut-order to override)"
        )
    if max_group_order > MAX_AUT_SEARCH_ORDER and g.order > MAX_AUT_SEARCH_ORDER:
        raise SizeError(f"Aut search is not supported beyond order {MAX_AUT_SEARCH_ORDER}")
    with _aut_lock:
        cached = _aut_cache.get(g, {})
        if "aut" in cached:
            return cached["aut"]
        # a previous search proved |Aut| > too_many
        if "too_many" in cached and max_size <= cached["too_many"]:
            raise SizeError(f"Aut({g.name}) has more than {cached['too_many']} elements")
    try:
        found = list(homomorphism_search(g, g, limit=max_size))
    except SizeError:
        with _aut_lock:
            entry = _aut_cache.setdefault(g, {})
            entry["too_many"] = max(entry.get("too_many", 0), max_size)
        raise SizeError(f"Aut({g.name}) has more than {max_size} elements")
    maps = np.array(found, dtype=np.int64)
    order = np.lexsort(maps.T[::-1])
    act = OperatorAction(g, maps[order], name=f"Aut({g.name})")
    with _aut_lock:
        _aut_cache.setdefault(g, {})["aut"] = act
    return act


def conjugation_action(g: GroupTable, h: Subgroup | None = None) -> OperatorAction:
    """``h`` acting on ``g`` by conjugation, ``x -> a x a^-1`` for ``a`` in ``h``.

    The left-handed form makes ``a -> map`` a homomorphism under the
    package's composition convention; the set of maps is the usual one.
    """
    if h is None:
        h = whole(g)
    if h.parent is not g:
        raise GroupError("subgroup belongs to a different group")
    hg, emb = h.standalone
    t = g.table
    inv = g.inverse
    maps = t[emb[:, None], t[np.arange(g.order)[None, :], inv[emb][:, None]]]
    return OperatorAction(g, maps, operators=hg, name=f"Conj({hg.name})")


def inner_automorphisms(g: GroupTable) -> OperatorAction:
    act = conjugation_action(g)
    act.name = f"Inn({g.name})"
    return act


def _row_keys(maps: np.ndarray) -> list[bytes]:
    arr = np.ascontiguousarray(maps)
    return [r.tobytes() for r in arr]


def inner_subaction_of_aut(g: GroupTable, aut: OperatorAction) -> Subgroup:
    """Operators of ``aut`` whose map is a conjugation of ``g``."""
    if aut.target is not g:
        raise GroupError("action is on a different group")
    inner = set(_row_keys(inner_automorphisms(g).maps))
    keys = _row_keys(aut.maps)
    return Subgroup(aut, tuple(i for i, k in enumerate(keys) if k in inner))


def contains_inner(act: OperatorAction) -> bool:
    """``Inn G <= Aut_R G``: every conjugation map occurs among the maps."""
    have = set(_row_keys(act.maps))
    return all(k in have for k in _row_keys(inner_automorphisms(act.target).maps))


class Stabilizer(NamedTuple):
    normalizer: Subgroup
    centralizer: Subgroup
    induced: OperatorAction


def stabilizer_action_on_subgroup(act: OperatorAction, d: Subgroup) -> Stabilizer:
    """``N_R(d)``, ``C_R(d)`` and ``Aut_R(d) = N_R(d)/C_R(d)`` acting on ``d``.

    The induced group is realised as the distinct restrictions of ``N_R(d)``
    to ``d``, which is isomorphic to the quotient by ``C_R(d)`` and acts
    faithfully on ``d``'s standalone table.
    """
    if d.parent is not act.target:
        raise GroupError("subgroup belongs to a different group")
    mem = np.asarray(d.members)
    sub = act.maps[:, mem]
    n_r = d.mask[sub].all(axis=1)
    c_r = (sub == mem).all(axis=1)
    dg, emb = d.standalone
    pos = np.full(act.target.order, -1, dtype=np.int64)
    pos[emb] = np.arange(len(emb))
    restricted = _distinct_rows(pos[sub[n_r]])
    n_count, c_count = int(n_r.sum()), int(c_r.sum())
    if n_count != c_count * len(restricted):
        raise RuntimeError("induced group order disagrees with |N_R| / |C_R|")
    induced = OperatorAction(dg, restricted, name=f"Aut_{act.name}({dg.name})")
    return Stabilizer(
        Subgroup(act, tuple(np.flatnonzero(n_r).tolist())),
        Subgroup(act, tuple(np.flatnonzero(c_r).tolist())),
        induced,
    )


def induced_order(act: OperatorAction, d: Subgroup) -> int:
    """``|N_R(d) / C_R(d)|`` without materialising the induced action."""
    mem = np.asarray(d.members)
    sub = act.maps[:, mem]
    n_r = d.mask[sub].all(axis=1)
    c_r = (sub == mem).all(axis=1)
    return int(n_r.sum()) // int(c_r.sum())


def is_p_group(g: GroupTable | OperatorAction | Subgroup | int, p: int) -> bool:
    """True iff the order is a power of ``p`` (order 1 included)."""
    n = g if isinstance(g, int) else g.order
    return is_p_power(n, p)


def p_prime_elements(act: OperatorAction, p: int) -> list[int]:
    """Operators whose order is coprime to ``p``."""
    return [a for a, o in enumerate(act.operator_orders.tolist()) if math.gcd(o, p) == 1]


def restrict_action(act: OperatorAction, d: Subgroup) -> OperatorAction:
    """The same operators acting on the admissible subgroup ``d``."""
    if d.parent is not act.target:
        raise GroupError("subgroup belongs to a different group")
    mem = np.asarray(d.members)
    sub = act.maps[:, mem]
    ok = d.mask[sub].all(axis=1)
    if not ok.all():
        witness = int(np.flatnonzero(~ok)[0])
        raise GroupError(f"subgroup is not admissible: operator {witness} moves it")
    dg, emb = d.standalone
    pos = np.full(act.target.order, -1, dtype=np.int64)
    pos[emb] = np.arange(len(emb))
    owner = act if act._operators is None and act._owner is None else act._owner
    return OperatorAction(
        dg,
        pos[sub],
        operators=act._operators,
        name=act.name,
        owner=owner,
    )


def automorphism_images_of(act: OperatorAction, gens: Sequence[int] | None = None) -> list[list[int]]:
    """Generator images of every operator (report helper)."""
    if gens is None:
        gens = generating_set(act.target)
    return act.maps[:, list(gens)].tolist()
