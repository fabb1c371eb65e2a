"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line
that the terminal summary prints after the run."""

import functools
import inspect
import json
import re
import time

import numpy as np
import pytest

from autonil.automorphisms import automorphism_group, inner_automorphisms, is_p_group
from autonil.catalog import realize, save_table
from autonil.cli import main
from autonil.core import (
    SizeError,
    make_cyclic,
    make_dihedral,
    prime_divisors,
    quotient,
    validate_table,
)
from autonil.criteria import AutLimits, baer_absolute, baer_classical, cross_validate
from autonil.series import (
    build_stabilized_chain,
    fitting_action,
    is_r_nilpotent,
    k_series,
    l_series,
    verify_chain_stabilized,
)
from autonil.subgroups import (
    enumerate_subgroups,
    frattini_subgroup,
    is_normal,
    maximal_subgroups,
)

import oracles

# |Aut E2^5| = |GL(5, 2)| = 9 999 360 is beyond the Aut size cap; it is the
# only catalog group whose Aut-based checks are skipped.
AUT_SKIPPED = {"E2^5"}


def acceptance(key):
    """Record PASS/FAIL under ``key``; the wrapped test returns ``(problems, detail)``."""

    def deco(fn):
        @functools.wraps(fn)
        def wrapper(record, *args, **kwargs):
            try:
                problems, detail = fn(*args, **kwargs)
            except Exception as exc:
                record(key, False, f"error: {exc!r}")
                raise
            record(key, not problems, detail if not problems else f"{detail}; {problems[:5]}")
            assert not problems, problems

        # expose ``record`` to pytest's fixture resolution
        del wrapper.__wrapped__
        sig = inspect.signature(fn)
        param = inspect.Parameter("record", inspect.Parameter.POSITIONAL_OR_KEYWORD)
        wrapper.__signature__ = sig.replace(parameters=[param, *sig.parameters.values()])
        return wrapper

    return deco


def _p_group_prime(g):
    primes = prime_divisors(g)
    return next(iter(primes)) if len(primes) == 1 else None


def _aut_or_none(g):
    try:
        return automorphism_group(g)
    except SizeError:
        return None


@acceptance("AC1 validity")
def test_ac1_validity(catalog48):
    t0 = time.perf_counter()
    problems = []
    for e in catalog48:
        try:
            validate_table(e.group.table)
        except Exception as exc:  # noqa: BLE001
            problems.append((e.spec, str(exc)))
    small = [e for e in catalog48 if e.group.order <= 16]
    for e in small:
        ours = {s.member_set for s in enumerate_subgroups(e.group)}
        if ours != oracles.closed_subsets(e.group):
            problems.append((e.spec, "subgroup enumeration"))
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        problems.append(("runtime", elapsed))
    return problems, f"{len(catalog48)} tables valid, {len(small)} lattices checked, {elapsed:.1f}s"


@acceptance("AC2 aut-oracle")
def test_ac2_aut_oracle(catalog48):
    problems = []
    groups = [e for e in catalog48 if e.group.order <= 12]
    names = {e.spec for e in groups}
    for required in ("C2", "C12", "E2^2", "Q8", "S3"):
        if required not in names:
            problems.append(("missing", required))
    literal = 0
    for e in groups:
        g = e.group
        ours = {tuple(r) for r in automorphism_group(g).maps.tolist()}
        # the literal (n-1)! scan is used where it is cheap; the pruned scan
        # enumerates the same set of bijections (it only drops partial maps
        # already shown to break multiplicativity)
        if g.order <= 8:
            expected = oracles.all_bijection_automorphisms(g)
            literal += 1
        else:
            expected = oracles.pruned_bijection_automorphisms(g)
        if ours != expected:
            problems.append(e.spec)
    return problems, f"{len(groups)} groups equal ({literal} by literal scan)"


@acceptance("AC3 criterion-equivalence")
def test_ac3_scan(capsys):
    code = main(["scan", "--max-order", "48", "--format", "json"])
    out, err = capsys.readouterr()
    m = re.search(r"scanned (\d+) groups: (\d+) autonilpotent, (\d+) disagreements, (\d+) criteria skipped", err)
    problems = []
    if code != 0:
        problems.append(("exit", code))
    if not m or int(m.group(3)) != 0:
        problems.append(("summary", err.strip()))
    results = json.loads(out)["results"]
    for r in results:
        if not r["agree"]:
            problems.append(r["group"])
        skipped = [k for k, v in r["criteria"].items() if v["status"] != "ok"]
        if skipped and r["group"] not in AUT_SKIPPED:
            problems.append((r["group"], "skipped", skipped))
    detail = err.strip().splitlines()[-1] if err.strip() else ""
    return problems, detail


KNOWN = {
    "C1": True, "C2": True, "C4": True, "D8": True,
    "C3": False, "C5": False, "C2 x C2": False, "Q8": False,
    "S3": False, "C6": False, "C4 x C3": False,
}


@acceptance("AC4 known-verdicts")
def test_ac4_known_verdicts(catalog48):
    problems = []
    for spec, expected in KNOWN.items():
        g = realize(spec)
        # brute-force L-series: all automorphisms by exhaustive search, then
        # the set of elements killed by every long enough operator word
        maps = np.array(sorted(oracles.pruned_bijection_automorphisms(g)))
        oracle = len(oracles.flat_l_term(g, maps, g.order)) == g.order
        got = cross_validate(g).autonilpotent
        if not (oracle == expected == got):
            problems.append((spec, expected, oracle, got))
    odd_abelian = 0
    for e in catalog48:
        g = e.group
        if g.order > 1 and g.order % 2 and g.is_abelian:
            odd_abelian += 1
            if cross_validate(g).autonilpotent is not False:
                problems.append((e.spec, "odd abelian"))
    return problems, f"{len(KNOWN)} named verdicts, {odd_abelian} odd-order abelian groups false"


@acceptance("AC5 baer")
def test_ac5_baer(catalog48):
    problems = []
    skipped = set()
    pairs = 0
    for e in catalog48:
        g = e.group
        for p in sorted(prime_divisors(g)):
            pairs += 1
            if not baer_classical(g, p).equal:
                problems.append((e.spec, p, "classical"))
            try:
                if not baer_absolute(g, p).equal:
                    problems.append((e.spec, p, "absolute"))
            except SizeError:
                skipped.add(e.spec)
    if skipped != AUT_SKIPPED:
        problems.append(("absolute skipped", sorted(skipped)))
    return problems, f"{pairs} (group, p) pairs; absolute skipped for {sorted(skipped)}"


@acceptance("AC6 duality")
def test_ac6_duality(catalog48):
    problems = []
    skipped = set()
    for e in catalog48:
        g = e.group
        acts = [inner_automorphisms(g)]
        aut = _aut_or_none(g)
        if aut is None:
            skipped.add(e.spec)
        else:
            acts.append(aut)
        for act in acts:
            ks, ls = k_series(act), l_series(act)
            if ks.terminated != ls.terminated:
                problems.append((e.spec, act.name, "duality"))
            if not all(is_normal(g, t) for t in ls.terms):
                problems.append((e.spec, act.name, "normality"))
    if skipped != AUT_SKIPPED:
        problems.append(("aut skipped", sorted(skipped)))
    return problems, f"{len(catalog48)} groups; Aut skipped for {sorted(skipped)}"


@acceptance("AC7 chain-round-trip")
def test_ac7_chain(catalog48):
    problems = []
    exhaustive = 0
    for e in catalog48:
        g = e.group
        acts = [inner_automorphisms(g), fitting_action(g)]
        aut = _aut_or_none(g)
        if aut is not None:
            acts.append(aut)
        subs = [frozenset(s.members) for s in enumerate_subgroups(g)] if g.order <= 12 else None
        for act in acts:
            chain = build_stabilized_chain(act)
            if chain is not None and not verify_chain_stabilized(act, chain).ok:
                problems.append((e.spec, act.name, "built chain fails"))
            if subs is not None:
                exhaustive += 1
                if oracles.stabilized_chain_exists(g, act.maps, subs) != (chain is not None):
                    problems.append((e.spec, act.name, "exhaustive mismatch"))
    return problems, f"{exhaustive} (group, R) pairs searched exhaustively"


@acceptance("AC8 p-group-aut")
def test_ac8_p_groups(catalog48):
    problems = []
    count = 0
    skipped = set()
    for e in catalog48:
        g = e.group
        p = _p_group_prime(g)
        if p is None:
            continue
        aut = _aut_or_none(g)
        if aut is None:
            skipped.add(e.spec)
            continue
        count += 1
        if is_r_nilpotent(aut) != is_p_group(aut.faithful_image(), p):
            problems.append(e.spec)
    if skipped != AUT_SKIPPED:
        problems.append(("aut skipped", sorted(skipped)))
    return problems, f"{count} p-groups; skipped {sorted(skipped)}"


@acceptance("AC9 fitting-nilpotency")
def test_ac9_fitting(catalog48):
    problems = [e.spec for e in catalog48 if not k_series(fitting_action(e.group)).terminated]
    return problems, f"{len(catalog48)} groups F(G)-nilpotent"


@acceptance("AC10 maximal-count")
def test_ac10_maximal(catalog48):
    problems = []
    count = 0
    for e in catalog48:
        g = e.group
        p = _p_group_prime(g)
        if p is None:
            continue
        count += 1
        q, _ = quotient(g, frattini_subgroup(g))
        # G / Phi(G) is elementary abelian, so its minimal generator count is log_p |G/Phi|
        if not q.is_abelian or any(o not in (1, p) for o in q.orders.tolist()):
            problems.append((e.spec, "quotient not elementary abelian"))
            continue
        n = round(np.log(q.order) / np.log(p))
        if p**n != q.order:
            problems.append((e.spec, "quotient order"))
            continue
        if len(maximal_subgroups(g)) != (p**n - 1) // (p - 1):
            problems.append(e.spec)
    return problems, f"{count} p-groups"


@acceptance("AC11 coprime-aut")
def test_ac11_coprime():
    problems = []
    c3, c4, c5, d8 = make_cyclic(3), make_cyclic(4), make_cyclic(5), make_dihedral(8)
    a34 = automorphism_group(realize("C3 x C4")).order
    b34 = len(oracles.all_bijection_automorphisms(c3)) * len(oracles.all_bijection_automorphisms(c4))
    if not a34 == b34 == 4:
        problems.append(("C3 x C4", a34, b34))
    a58 = automorphism_group(realize("C5 x D8")).order
    b58 = oracles.totient(5) * len(oracles.all_bijection_automorphisms(d8))
    if not a58 == b58 == 32:
        problems.append(("C5 x D8", a58, b58))
    if len(oracles.all_bijection_automorphisms(c5)) != oracles.totient(5):
        problems.append("totient oracle")
    return problems, f"|Aut(C3 x C4)| = {a34}, |Aut(C5 x D8)| = {a58}"


@acceptance("AC12 order-729-ingestion")
def test_ac12_c729(tmp_path, capsys):
    problems = []
    path = tmp_path / "c729.json"
    save_table(make_cyclic(729), path)
    g = realize(f"file:{path}")
    if g.order != 729:
        problems.append(("order", g.order))
    with pytest.raises(SizeError):
        automorphism_group(g)
    limits = AutLimits(max_group_order=729)
    aut = limits.aut(g)
    if aut.order != oracles.totient(729) or aut.order != 486:
        problems.append(("aut", aut.order))
    if is_p_group(aut, 3):
        problems.append("Aut C729 reported as a 3-group")
    cv = cross_validate(g, limits)
    if cv.autonilpotent is not False or not cv.consistent:
        problems.append(("verdict", cv.autonilpotent, cv.consistent))
    if any(r.status != "ok" for r in cv.reports.values()):
        problems.append("criterion skipped")
    code = main(["analyze", f"file:{path}", "--max-aut-order", "729"])
    out, _ = capsys.readouterr()
    if code != 0 or "autonilpotent: no" not in out:
        problems.append(("cli", code))
    return problems, f"|Aut C729| = {aut.order}, verdict {cv.autonilpotent}"
