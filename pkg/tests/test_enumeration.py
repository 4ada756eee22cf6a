import random

import pytest

from fencemonoid import enumeration as en
from fencemonoid import fence, genfam, pinj
from fencemonoid.enumeration import (
    NotMemberError,
    NotSubsetError,
    TooLargeError,
)
from fencemonoid.pinj import PartialInjection

ALPHA = pinj.make(6, {(1, 3), (2, 2), (4, 6), (5, 5), (6, 4)})


def test_build_sizes_match_formula(table):
    for n in range(1, 6):
        assert len(table(n, "I")) == en.symmetric_inverse_size(n)


def test_build_if_small(table):
    assert len(table(1)) == 2
    assert len(table(2)) == 6
    swap = pinj.make(2, {(1, 2), (2, 1)})
    assert swap not in table(2)
    assert len(table(2, "I")) == 7


def test_build_counterexample_membership(table):
    assert ALPHA in table(6, "PFI")
    assert ALPHA not in table(6)


def test_build_resource_guard():
    with pytest.raises(TooLargeError):
        en.build(11, "IF")
    with pytest.raises(TooLargeError):
        en.build(9, "IF")  # needs huge=True


def test_build_deterministic():
    a = en.build(5, "IF")
    b = en.build(5, "IF")
    assert [e.encode() for e in a] == [e.encode() for e in b]


def test_build_threads_equivalent(table):
    parallel = en.build(6, "IF", threads=2)
    assert [e.encode() for e in parallel] == [e.encode() for e in table(6)]


def test_closure_sigma_pair():
    got = en.closure(2, [genfam.sigma1(2), genfam.sigma2(2)])
    expected = {
        pinj.make(2, {(1, 2)}),
        pinj.make(2, {(2, 1)}),
        pinj.identity_on(2, {1}),
        pinj.identity_on(2, {2}),
        PartialInjection.empty(2),
    }
    assert set(got.elements) == expected


def test_closure_of_identity():
    got = en.closure(4, [PartialInjection.identity(4)])
    assert set(got.elements) == {PartialInjection.identity(4)}


def test_closure_of_distinguished_set_is_everything(table):
    got = en.closure(4, genfam.set_g(4))
    assert set(got.elements) == set(table(4).elements)


def test_closure_words_evaluate(table):
    cl = en.closure(6, genfam.set_g(6))
    rng = random.Random(9)
    for a in rng.sample(cl.elements, 60):
        word = cl.word_for(a)
        prod = PartialInjection.identity(6)
        for letter in word:
            prod = prod * letter
        assert prod == a


def test_closure_shortest_words(table):
    cl = en.closure(6, genfam.set_g(6))
    for g in genfam.set_g(6):
        assert cl.word_for(g) == [g]
    eps2 = genfam.epsilon(6, 2)
    assert len(cl.word_for(eps2)) == 2


def test_closure_stays_inside_if(table):
    rng = random.Random(10)
    elements = table(5).elements
    for _ in range(20):
        gens = rng.sample(elements, rng.randint(1, 4))
        cl = en.closure(5, gens)
        assert all(fence.in_if(a) for a in cl)
        assert set(cl.elements) <= set(elements)


def test_principal_ideals_identity(table):
    tbl = table(3)
    ident = PartialInjection.identity(3)
    r, l, j = en.principal_ideals(tbl, ident)
    full = set(tbl.elements)
    assert set(r) == full and set(l) == full and set(j) == full


def test_principal_ideals_zero(table):
    tbl = table(3)
    empty = PartialInjection.empty(3)
    r, l, j = en.principal_ideals(tbl, empty)
    assert set(r) == set(l) == set(j) == {empty}


def test_principal_ideals_hand_computed(table):
    # n=2, a = {1->2}: products with all six elements, worked by hand
    tbl = table(2)
    a = pinj.make(2, {(1, 2)})
    ident = PartialInjection.identity(2)
    e1 = pinj.identity_on(2, {2})
    e2 = pinj.identity_on(2, {1})
    b = pinj.make(2, {(2, 1)})
    empty = PartialInjection.empty(2)
    r, l, j = en.principal_ideals(tbl, a)
    assert set(r) == {a, empty, e2}
    assert set(l) == {a, empty, e1}
    assert set(j) == {a, b, e1, e2, empty}
    assert ident not in j


def test_principal_ideals_not_member(table):
    with pytest.raises(NotMemberError):
        en.principal_ideals(table(6), ALPHA)


def test_is_generating_self(table):
    tbl = table(3)
    assert en.is_generating(tbl, tbl.elements)


def test_is_generating_not_subset(table):
    with pytest.raises(NotSubsetError):
        en.is_generating(table(3), [PartialInjection.identity(4)])


def test_irreducibles_smallest_case(table):
    assert set(en.irreducibles(table(2))) == set(genfam.set_g(2))


def test_irreducibles_match_distinguished_set(table):
    assert set(en.irreducibles(table(4))) == set(genfam.set_g(4))


def test_irreducibles_of_identity_closure():
    tbl = en.closure(3, [PartialInjection.identity(3)])
    assert en.irreducibles(tbl) == (PartialInjection.identity(3),)


def test_least_generating_set_even(table):
    least = en.least_generating_set(table(4))
    assert least is not None
    assert set(least) == set(genfam.set_g(4))
    assert len(least) == 5


def test_least_generating_set_odd_is_none(table):
    assert en.least_generating_set(table(3)) is None


def test_least_generating_set_trivial():
    tbl = en.closure(3, [PartialInjection.identity(3)])
    assert en.least_generating_set(tbl) == (PartialInjection.identity(3),)


def test_semigroup_rank_exact(table):
    assert en.semigroup_rank(table(2)) == ("exact", 3)
    assert en.semigroup_rank(table(4)) == ("exact", 5)


def test_semigroup_rank_bounds(table):
    for n in (3, 5):
        kind, lo, hi = en.semigroup_rank(table(n))
        assert kind == "bounds"
        assert lo <= hi
        # the greedy result still generates, so rank is at most hi
        assert hi <= len(table(n))


def test_regular_pfi_elements_lie_in_if(table):
    for n in range(1, 5):
        tbl = table(n, "PFI")
        for a in en.regular_elements(tbl):
            assert fence.in_if(a)


def test_ideal_oracle_requires_generating_set(table):
    with pytest.raises(ValueError):
        en.ideal_j_classes(table(3), [PartialInjection.identity(3)])


def test_cache_roundtrip(tmp_path, table):
    tbl = table(4)
    path = tmp_path / "IF_n4.txt"
    en.save_table(tbl, str(path))
    loaded = en.load_table(str(path))
    assert loaded.n == 4 and loaded.kind == "IF" and loaded.closed
    assert [e.encode() for e in loaded] == [e.encode() for e in tbl]
    header = path.read_text().splitlines()[0]
    assert header == f"FENCEMONOID v1 n=4 kind=IF count={len(tbl)}"


def test_cache_rejects_corruption(tmp_path, table):
    path = tmp_path / "bad.txt"
    en.save_table(table(3), str(path))
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")  # drop one element
    with pytest.raises(ValueError):
        en.load_table(str(path))
