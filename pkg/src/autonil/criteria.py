"""Five equivalent autonilpotency tests plus the Baer-type element criteria.

Each check recomputes everything above ``Aut(G)`` on its own, so agreement
between them is evidence rather than a tautology. ``Aut(G)`` itself comes
from the shared memo in :mod:`autonil.automorphisms`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .automorphisms import (
    DEFAULT_AUT_SEARCH_ORDER,
    DEFAULT_MAX_AUT_SIZE,
    OperatorAction,
    automorphism_group,
    contains_inner,
    induced_order,
    p_prime_elements,
)
from .core import GroupTable, SizeError, is_p_power, prime_divisors
from .series import (
    absolute_hypercenter,
    build_stabilized_chain,
    hypercenter,
    k_series,
    l_series,
    verify_chain_stabilized,
)
from .subgroups import (
    conjugacy_class_reps,
    is_nilpotent,
    p_elements,
    p_subgroups,
    sylow_subgroup,
)

CRITERIA = ("l-series", "chain", "sylow", "frobenius", "fixity")


@dataclass(frozen=True)
class AutLimits:
    max_group_order: int = DEFAULT_AUT_SEARCH_ORDER
    max_size: int = DEFAULT_MAX_AUT_SIZE

    def aut(self, g: GroupTable) -> OperatorAction:
        return automorphism_group(g, max_group_order=self.max_group_order, max_size=self.max_size)


DEFAULT_LIMITS = AutLimits()


@dataclass
class CriterionReport:
    """Outcome of one criterion on one group.

    ``verdict`` is ``None`` when the criterion was skipped (a size cap was
    hit) or is inapplicable (its hypothesis fails); ``status`` says which.
    """

    group: str
    order: int
    criterion: str
    verdict: bool | None
    evidence: dict = field(default_factory=dict)
    elapsed: float = 0.0
    status: str = "ok"

    def to_dict(self, timing: bool = False) -> dict:
        out = {"verdict": self.verdict, "status": self.status, "evidence": self.evidence}
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _report(
    criterion: str, g: GroupTable, fn: Callable[[], tuple[bool | None, dict]], status: str = "ok"
) -> CriterionReport:
    t0 = time.perf_counter()
    try:
        verdict, evidence = fn()
    except SizeError as exc:
        verdict, evidence, status = None, {"reason": str(exc)}, "skipped"
    if verdict is None and status == "ok":
        status = "inapplicable"
    return CriterionReport(
        g.name, g.order, criterion, verdict, evidence, time.perf_counter() - t0, status
    )


def check_via_l_series(g: GroupTable, limits: AutLimits = DEFAULT_LIMITS) -> CriterionReport:
    """Autonilpotent iff the absolute hypercenter is the whole group."""

    def run():
        aut = limits.aut(g)
        ls = l_series(aut)
        return ls.terminated, {"aut_order": aut.order, "l_series": ls.orders}

    return _report("l-series", g, run)


def check_via_chain(g: GroupTable, limits: AutLimits = DEFAULT_LIMITS) -> CriterionReport:
    """Autonilpotent iff Aut(G) stabilizes some chain of subgroups."""

    def run():
        aut = limits.aut(g)
        chain = build_stabilized_chain(aut)
        if chain is None:
            stall = k_series(aut).limit
            return False, {"stall": list(stall.members), "stall_order": stall.order}
        check = verify_chain_stabilized(aut, chain)
        return check.ok, {
            "chain": chain.orders,
            "normal_in_group": check.normal_in_group,
        }

    return _report("chain", g, run)


def check_via_sylow(g: GroupTable, limits: AutLimits = DEFAULT_LIMITS) -> CriterionReport:
    """Nilpotent, and Aut of each Sylow subgroup (as a group) is a p-group."""

    def run():
        nilpotent = is_nilpotent(g)
        aut_orders = {}
        ok = nilpotent
        for p in sorted(prime_divisors(g)):
            sp = sylow_subgroup(g, p).as_group()
            n = limits.aut(sp).order
            aut_orders[str(p)] = n
            ok = ok and is_p_power(n, p)
        return ok, {"nilpotent": nilpotent, "sylow_aut_orders": aut_orders}

    return _report("sylow", g, run)


def _frobenius_scan(
    act: OperatorAction, fast: bool
) -> tuple[bool, dict]:
    g = act.target
    checked = {}
    for p in sorted(prime_divisors(g)):
        subs = p_subgroups(g, p)
        if fast:
            subs = conjugacy_class_reps(g, subs)
        checked[str(p)] = len(subs)
        for s in subs:
            q = induced_order(act, s)
            if not is_p_power(q, p):
                return False, {
                    "witness": {"p": p, "subgroup": list(s.members), "quotient_order": q}
                }
    return True, {"p_subgroups_checked": checked}


def check_via_frobenius(
    g: GroupTable, limits: AutLimits = DEFAULT_LIMITS, fast: bool = False
) -> CriterionReport:
    """``N_Aut(P)/C_Aut(P)`` is a p-group for every p-subgroup ``P``.

    ``fast`` checks one subgroup per conjugacy class.
    """
    return _report("frobenius", g, lambda: _frobenius_scan(limits.aut(g), fast))


def check_via_fixity(g: GroupTable, limits: AutLimits = DEFAULT_LIMITS) -> CriterionReport:
    """Every automorphism fixes the elements of order coprime to its own."""

    def run():
        aut = limits.aut(g)
        op_orders = aut.operator_orders
        coprime = np.gcd(op_orders[:, None], g.orders[None, :]) == 1
        moved = aut.maps != np.arange(g.order)
        bad = np.argwhere(coprime & moved)
        if len(bad):
            a, x = (int(v) for v in bad[0])
            return False, {
                "witness": {
                    "automorphism": aut.maps[a].tolist(),
                    "automorphism_order": int(op_orders[a]),
                    "element": x,
                    "element_order": int(g.orders[x]),
                }
            }
        return True, {"aut_order": aut.order}

    return _report("fixity", g, run)


class BaerSets(NamedTuple):
    lhs: frozenset[int]
    rhs: frozenset[int]

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def baer_absolute(g: GroupTable, p: int, limits: AutLimits = DEFAULT_LIMITS) -> BaerSets:
    """p-elements of the absolute hypercenter versus p-elements fixed by all
    p'-automorphisms."""
    pel = p_elements(g, p)
    lim = absolute_hypercenter(g, max_group_order=limits.max_group_order, max_size=limits.max_size)
    lhs = frozenset(x for x in pel if x in lim)
    aut = limits.aut(g)
    ops = p_prime_elements(aut, p)
    block = aut.maps[ops][:, pel]
    fixed = (block == np.asarray(pel)).all(axis=0)
    rhs = frozenset(x for x, f in zip(pel, fixed.tolist()) if f)
    return BaerSets(lhs, rhs)


def baer_classical(g: GroupTable, p: int) -> BaerSets:
    """p-elements of the hypercenter versus p-elements commuting with every
    p'-element."""
    pel = p_elements(g, p)
    z = hypercenter(g)
    lhs = frozenset(x for x in pel if x in z)
    orders = g.orders.tolist()
    pprime = [y for y in range(g.order) if math.gcd(orders[y], p) == 1]
    t = g.table
    commute = (t[np.ix_(pel, pprime)] == t[np.ix_(pprime, pel)].T).all(axis=1)
    rhs = frozenset(x for x, c in zip(pel, commute.tolist()) if c)
    return BaerSets(lhs, rhs)


def check_r_nilpotent_frobenius(act: OperatorAction, fast: bool = False) -> CriterionReport:
    """R-nilpotency via ``Aut_R(P)`` over all p-subgroups; requires Inn G <= Aut_R G."""
    g = act.target

    def run():
        if not contains_inner(act):
            return None, {"reason": "Inn G is not contained in Aut_R G"}
        return _frobenius_scan(act, fast)

    return _report("r-frobenius", g, run)


def check_r_nilpotent_sylow(act: OperatorAction) -> CriterionReport:
    """Nilpotent and ``Aut_R(P)`` a p-group for each Sylow ``P``; requires Inn G <= Aut_R G."""
    g = act.target

    def run():
        if not contains_inner(act):
            return None, {"reason": "Inn G is not contained in Aut_R G"}
        nilpotent = is_nilpotent(g)
        induced = {}
        ok = nilpotent
        for p in sorted(prime_divisors(g)):
            q = induced_order(act, sylow_subgroup(g, p))
            induced[str(p)] = q
            ok = ok and is_p_power(q, p)
        return ok, {"nilpotent": nilpotent, "induced_orders": induced}

    return _report("r-sylow", g, run)


CHECKS: dict[str, Callable[..., CriterionReport]] = {
    "l-series": check_via_l_series,
    "chain": check_via_chain,
    "sylow": check_via_sylow,
    "frobenius": check_via_frobenius,
    "fixity": check_via_fixity,
}


@dataclass
class CrossValidation:
    group: str
    order: int
    reports: dict[str, CriterionReport]
    baer: dict[int, dict[str, bool | None]] = field(default_factory=dict)
    error: str | None = None

    @property
    def verdicts(self) -> dict[str, bool]:
        return {k: r.verdict for k, r in self.reports.items() if r.verdict is not None}

    @property
    def agree(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def baer_ok(self) -> bool:
        return all(v is not False for d in self.baer.values() for v in d.values())

    @property
    def consistent(self) -> bool:
        """No criterion disagreement and no Baer set mismatch."""
        return self.agree and self.baer_ok

    @property
    def autonilpotent(self) -> bool | None:
        vals = set(self.verdicts.values())
        return vals.pop() if len(vals) == 1 else None

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "autonilpotent": self.autonilpotent,
            "criteria": {k: r.to_dict(timing) for k, r in self.reports.items()},
            "agree": self.agree,
            "baer": {str(p): v for p, v in sorted(self.baer.items())},
            **({"error": self.error} if self.error else {}),
        }


def cross_validate(
    g: GroupTable,
    limits: AutLimits = DEFAULT_LIMITS,
    criteria: tuple[str, ...] = CRITERIA,
    baer: bool = True,
) -> CrossValidation:
    reports = {name: CHECKS[name](g, limits) for name in criteria}
    baer_out: dict[int, dict[str, bool | None]] = {}
    if baer:
        for p in sorted(prime_divisors(g)):
            try:
                absolute = baer_absolute(g, p, limits).equal
            except SizeError:
                absolute = None
            baer_out[p] = {"absolute": absolute, "classical": baer_classical(g, p).equal}
    return CrossValidation(g.name, g.order, reports, baer_out)
