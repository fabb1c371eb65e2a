import pytest

from autonil.core import (
    direct_product,
    is_isomorphic,
    make_cyclic,
    make_dihedral,
    make_elementary_abelian,
    make_quaternion8,
    make_symmetric,
    prime_divisors,
    p_part,
)
from autonil.subgroups import (
    Subgroup,
    center,
    centralizer,
    conjugacy_class_reps,
    conjugate,
    enumerate_subgroups,
    fitting_subgroup,
    frattini_rank,
    frattini_subgroup,
    generated_subgroup,
    is_nilpotent,
    is_normal,
    make_subgroup,
    maximal_subgroups,
    normalizer,
    p_subgroups,
    sylow_subgroup,
    trivial,
    whole,
)
from autonil.core import is_p_power

import oracles


def named(g, name):
    return g.element_names.index(name)


S3 = make_symmetric(3)
S4 = make_symmetric(4)
A3 = generated_subgroup(S3, [named(S3, "(1 2 3)")])
T12 = generated_subgroup(S3, [named(S3, "(1 2)")])


def test_generated_subgroup():
    assert generated_subgroup(S3, []).members == (0,)
    assert generated_subgroup(S3, range(6)) == whole(S3)
    assert A3.order == 3


def test_is_normal():
    q = make_quaternion8()
    assert is_normal(q, center(q))
    assert not is_normal(S3, T12)
    assert is_normal(S3, A3)


def test_center():
    c6 = make_cyclic(6)
    assert center(c6) == whole(c6)
    assert center(S3).order == 1
    assert center(make_quaternion8()).order == 2


def test_sylow_examples():
    assert sylow_subgroup(S3, 3) == A3
    c12 = make_cyclic(12)
    p2 = sylow_subgroup(c12, 2)
    assert p2.order == 4 and set(p2.members) == {0, 3, 6, 9}
    s4_2 = sylow_subgroup(S4, 2)
    assert s4_2.order == 8
    assert is_isomorphic(s4_2.as_group(), make_dihedral(8))
    assert sylow_subgroup(S3, 5) == trivial(S3)


def test_sylow_is_deterministic():
    assert sylow_subgroup(S4, 2) == sylow_subgroup(S4, 2)


def test_enumerate_examples():
    for p in (2, 3, 5, 7):
        assert len(enumerate_subgroups(make_cyclic(p))) == 2
    v = enumerate_subgroups(make_elementary_abelian(2, 2))
    assert [s.order for s in v] == [1, 2, 2, 2, 4]
    assert len(enumerate_subgroups(S3)) == 6
    subs = enumerate_subgroups(S4)
    assert len(subs) == 30
    assert subs == sorted(subs, key=lambda s: (s.order, s.members))


def test_p_subgroups_examples():
    assert [s.order for s in p_subgroups(S3, 3)] == [1, 3]
    assert [s.order for s in p_subgroups(S3, 2)] == [1, 2, 2, 2]
    c4 = p_subgroups(make_cyclic(4), 2)
    assert [s.order for s in c4] == [1, 2, 4]
    assert c4[0].issubset(c4[1]) and c4[1].issubset(c4[2])


def test_maximal_and_frattini_examples():
    c5 = make_cyclic(5)
    assert maximal_subgroups(c5) == [trivial(c5)]
    v = make_elementary_abelian(2, 2)
    assert [s.order for s in maximal_subgroups(v)] == [2, 2, 2]
    c8 = make_cyclic(8)
    assert [s.order for s in maximal_subgroups(c8)] == [4]
    assert frattini_subgroup(v).order == 1
    assert frattini_subgroup(make_cyclic(4)).members == (0, 2)
    q = make_quaternion8()
    assert frattini_subgroup(q) == center(q)


def test_fitting_examples():
    d8 = make_dihedral(8)
    assert fitting_subgroup(d8) == whole(d8)
    assert fitting_subgroup(S3) == A3
    f = fitting_subgroup(S4)
    assert f.order == 4 and is_normal(S4, f)
    assert all(S4.orders[x] <= 2 for x in f)


def test_normalizer_centralizer():
    assert normalizer(S3, A3) == whole(S3)
    assert centralizer(S3, trivial(S3)) == whole(S3)
    assert normalizer(S3, T12) == T12
    assert centralizer(S3, A3) == A3


def test_is_nilpotent_examples():
    assert is_nilpotent(make_quaternion8())
    assert is_nilpotent(make_elementary_abelian(3, 2))
    assert not is_nilpotent(S3)
    assert is_nilpotent(make_cyclic(6))


def test_make_subgroup_rejects_non_subgroups():
    with pytest.raises(ValueError):
        make_subgroup(S3, [0, 1, 2])
    with pytest.raises(ValueError):
        make_subgroup(S3, [1])


def test_subgroups_of_different_parents_differ():
    a, b = make_cyclic(3), make_cyclic(3)
    assert whole(a) != whole(b)


# ---------------------------------------------------------------------------
# catalog-wide properties


def test_enumeration_matches_subset_oracle(catalog16):
    for e in catalog16:
        ours = {s.member_set for s in enumerate_subgroups(e.group)}
        assert ours == oracles.closed_subsets(e.group), e.spec


def test_p_subgroups_filter_enumeration(catalog48):
    for e in catalog48:
        g = e.group
        if g.order > 24:
            continue
        subs = enumerate_subgroups(g)
        for p in prime_divisors(g):
            expected = [s for s in subs if is_p_power(s.order, p)]
            assert p_subgroups(g, p) == expected, (e.spec, p)


def test_sylow_orders(catalog48):
    for e in catalog48:
        g = e.group
        for p in prime_divisors(g):
            s = sylow_subgroup(g, p)
            assert s.order == p_part(g.order, p), (e.spec, p)
            make_subgroup(g, s.members)


def test_maximal_count_p_groups(catalog48):
    for e in catalog48:
        g = e.group
        primes = prime_divisors(g)
        if len(primes) != 1:
            continue
        (p,) = primes
        n = frattini_rank(g, p)
        assert len(maximal_subgroups(g)) == (p**n - 1) // (p - 1), e.spec
        assert len(maximal_subgroups(g)) % p == 1 % p


def test_fitting_against_exhaustive(catalog48):
    for e in catalog48:
        g = e.group
        if g.order > 24:
            continue
        f = fitting_subgroup(g)
        assert is_normal(g, f) and is_nilpotent(f.as_group())
        for s in enumerate_subgroups(g):
            if is_normal(g, s) and is_nilpotent(s.as_group()):
                assert s.issubset(f), (e.spec, s)


def test_is_nilpotent_against_upper_central_series(catalog48):
    for e in catalog48:
        g = e.group
        ucs = oracles.upper_central_series(g)
        assert is_nilpotent(g) == (len(ucs[-1]) == g.order), e.spec


def test_conjugacy_reps_cover_all(catalog12):
    for e in catalog12:
        g = e.group
        subs = enumerate_subgroups(g)
        reps = conjugacy_class_reps(g, subs)
        covered = {conjugate(g, r, x).members for r in reps for x in range(g.order)}
        assert covered == {s.members for s in subs}


def test_standalone_subgroup_is_valid():
    s = sylow_subgroup(S4, 2)
    h, emb = s.standalone
    assert isinstance(s, Subgroup)
    assert h.order == 8 and emb[0] == 0
    from autonil.core import validate_table

    validate_table(h.table)


def test_product_example():
    g = direct_product(make_cyclic(3), make_symmetric(3))
    assert fitting_subgroup(g).order == 9
