"""Operator commutator series ``K_n(G, R)`` and ``L_n(G, R)``.

``K_0 = G``, ``K_n = [K_{n-1}, R]``; ``L_0 = 1``,
``L_n = {x : [x, a] in L_{n-1} for all a in R}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .automorphisms import (
    OperatorAction,
    automorphism_group,
    conjugation_action,
    inner_automorphisms,
)
from .core import GroupError, GroupTable
from .subgroups import (
    Subgroup,
    fitting_subgroup,
    generated_subgroup,
    is_normal,
    make_subgroup,
    normalizer,
    trivial,
    whole,
)


@dataclass(frozen=True)
class SeriesResult:
    """A K- or L-series with duplicates collapsed.

    ``terms`` is strictly monotone; ``limit`` is the term at which the
    series repeats. For a K-series ``terminated`` means the limit is
    trivial; for an L-series it means the limit is the whole group.
    """

    kind: Literal["K", "L"]
    terms: tuple[Subgroup, ...]
    terminated: bool
    limit: Subgroup = field(repr=False)

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


@dataclass(frozen=True)
class StabilizedChain:
    terms: tuple[Subgroup, ...]

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    witness: tuple[int, int, int] | None = None
    normal_in_group: bool = False

    def __bool__(self) -> bool:
        return self.ok


def operator_commutator(act: OperatorAction, b: int, a: int) -> int:
    """``[b, a] = b^-1 b^a``."""
    g = act.target
    return g.mul(g.inv(b), act.act(b, a))


def k_series(act: OperatorAction) -> SeriesResult:
    g = act.target
    comm = act.commutators
    cur = whole(g)
    terms = [cur]
    while True:
        # [K, R] is generated by commutators of every member of K
        vals = np.unique(comm[:, list(cur.members)])
        nxt = generated_subgroup(g, vals.tolist())
        if nxt == cur:
            break
        terms.append(nxt)
        cur = nxt
    return SeriesResult("K", tuple(terms), cur.order == 1, cur)


def l_series(act: OperatorAction) -> SeriesResult:
    g = act.target
    comm = act.commutators
    mask = np.zeros(g.order, dtype=bool)
    mask[0] = True
    cur = trivial(g)
    terms = [cur]
    while True:
        new_mask = mask[comm].all(axis=0)
        if (new_mask == mask).all():
            break
        members = np.flatnonzero(new_mask).tolist()
        try:
            nxt = make_subgroup(g, members)
        except GroupError as exc:
            raise GroupError(f"L-series term is not a subgroup under {act.name}: {exc}")
        terms.append(nxt)
        mask, cur = new_mask, nxt
    return SeriesResult("L", tuple(terms), cur.order == g.order, cur)


def hypercenter(g: GroupTable) -> Subgroup:
    return l_series(inner_automorphisms(g)).limit


def absolute_hypercenter(g: GroupTable, **aut_kw) -> Subgroup:
    return l_series(automorphism_group(g, **aut_kw)).limit


def build_stabilized_chain(act: OperatorAction) -> StabilizedChain | None:
    ks = k_series(act)
    if not ks.terminated:
        return None
    return StabilizedChain(ks.terms)


def verify_chain_stabilized(act: OperatorAction, chain: StabilizedChain) -> ChainCheck:
    """Check ``x^-1 x^a in G_{i+1}`` for all ``x in G_i`` and operators ``a``.

    Also requires ``G_{i+1}`` normal in ``G_i``; ``normal_in_group`` reports
    the stronger condition that every term is normal in the whole group.
    Returns the first failing ``(i, x, a)`` as witness; ``a = -1`` means
    ``x in G_i`` conjugates ``G_{i+1}`` out of itself.
    """
    g = act.target
    terms = chain.terms
    if not terms or terms[0].order != g.order or terms[-1].order != 1:
        raise GroupError("chain must run from the whole group down to the trivial subgroup")
    for t in terms:
        if t.parent is not g:
            raise GroupError("chain term belongs to a different group")
    for upper, lower in zip(terms, terms[1:]):
        if not lower.issubset(upper) or lower.order == upper.order:
            raise GroupError("chain must be strictly descending")
    comm = act.commutators
    for i, (upper, lower) in enumerate(zip(terms, terms[1:])):
        ug = upper.as_group()
        emb = upper.standalone[1]
        pos = {int(x): j for j, x in enumerate(emb)}
        inner = Subgroup(ug, tuple(sorted(pos[x] for x in lower.members)))
        norm = normalizer(ug, inner)
        if norm.order != ug.order:
            x = next(j for j in range(ug.order) if j not in norm)
            # operator index -1 marks a normality failure, x the conjugating element
            return ChainCheck(False, (i, int(emb[x]), -1))
        block = comm[:, list(upper.members)]
        bad = np.argwhere(~lower.mask[block])
        if len(bad):
            a, j = (int(v) for v in bad[0])
            return ChainCheck(False, (i, upper.members[j], a))
    return ChainCheck(True, None, all(is_normal(g, t) for t in terms))


def is_r_nilpotent(act: OperatorAction) -> bool:
    return k_series(act).terminated


def fitting_action(g: GroupTable) -> OperatorAction:
    """``F(G)`` acting on ``g`` by conjugation."""
    act = conjugation_action(g, fitting_subgroup(g))
    act.name = f"F({g.name})"
    return act
