import itertools
import random

import numpy as np
import pytest

from conftest import brute_tense, brute_tense_members, names_of
from omql.errors import CapacityError, EmptyFiberError, IdentityError
from omql.frames import TimeFrame, chain_frame
from omql.orders import Rel, cmp_families, cmp_setvals
from omql.tense import (
    Family,
    lift_valuation,
    phi,
    prime_setval,
    prime_valuation,
    star,
    tense,
    tense_family,
    tense_setval,
)


def random_serial_frame(m, rng):
    while True:
        rel = np.zeros((m, m), dtype=bool)
        for s in range(m):
            for t in range(m):
                rel[s, t] = rng.random() < 0.5
        frame = TimeFrame([str(i) for i in range(m)], rel)
        if frame.is_serial():
            return frame


def as_names(poset, sv):
    return [names_of(poset, m) for m in sv]


def test_worked_example_rows(fig1, chain3, histories):
    p, q, r = histories["p"], histories["q"], histories["r"]
    assert as_names(fig1, tense(fig1, chain3, "H", p)) == [
        {"i'"},
        {"i'"},
        {"a", "b"},
    ]
    assert as_names(fig1, tense(fig1, chain3, "H", q)) == [
        {"b'"},
        {"f", "i"},
        {"f", "i"},
    ]
    assert as_names(fig1, tense(fig1, chain3, "G", p)) == [
        {"a", "b"},
        {"a", "b"},
        {"f'"},
    ]
    assert as_names(fig1, tense(fig1, chain3, "G", q)) == [
        {"f", "i"},
        {"a'"},
        {"a'"},
    ]
    assert as_names(fig1, tense(fig1, chain3, "P", r)) == [
        {"a"},
        {"f'", "i'"},
        {"f'", "i'"},
    ]


def test_matches_brute_force_on_random_histories(fig1, chain3):
    rng = random.Random(41)
    frames = [chain3, random_serial_frame(4, rng), random_serial_frame(2, rng)]
    for frame in frames:
        for _ in range(25):
            q = tuple(rng.randrange(fig1.n) for _ in range(frame.m))
            for op in "PFHG":
                got = tense(fig1, frame, op, q)
                want = brute_tense(fig1, frame, op, q)
                assert [set(names_of(fig1, m)) for m in got] == [
                    {fig1.names[i] for i in w} for w in want
                ], (op, q)


def test_constant_history_under_reflexive_chain(fig1, chain3):
    for x in range(fig1.n):
        q = (x, x, x)
        for op in "PFHG":
            assert tense(fig1, chain3, op, q) == tuple(
                1 << x for _ in range(3)
            )


def test_duality_on_exact_histories(fig1, chain3):
    rng = random.Random(43)
    for _ in range(30):
        q = tuple(rng.randrange(fig1.n) for _ in range(3))
        qp = prime_valuation(fig1, q)
        assert tense(fig1, chain3, "H", q) == prime_setval(
            fig1, tense(fig1, chain3, "P", qp)
        )
        assert tense(fig1, chain3, "G", q) == prime_setval(
            fig1, tense(fig1, chain3, "F", qp)
        )


def test_duality_on_set_valued_histories(fig1, chain3, bool2):
    rng = random.Random(47)
    cases = [(fig1, chain3), (bool2, chain_frame(2))]
    for poset, frame in cases:
        full = poset.full_mask
        for _ in range(50):
            x = tuple(rng.randrange(1, full + 1) for _ in range(frame.m))
            xp = prime_setval(poset, x)
            assert tense_setval(poset, frame, "H", x) == prime_setval(
                poset, tense_setval(poset, frame, "P", xp)
            )
            assert tense_setval(poset, frame, "G", x) == prime_setval(
                poset, tense_setval(poset, frame, "F", xp)
            )


def test_empty_fiber_raises():
    frame = TimeFrame(["1", "2"], np.array([[False, True], [False, False]]))
    from omql import fixtures

    poset = fixtures.boolean_algebra(1)
    with pytest.raises(EmptyFiberError):
        tense(poset, frame, "P", (0, 1))
    with pytest.raises(EmptyFiberError):
        tense(poset, frame, "G", (0, 1))


def test_valuation_must_fit_poset_and_frame(fig1, chain3):
    with pytest.raises(IdentityError):
        tense(fig1, chain3, "P", (0, 1))  # too short
    with pytest.raises(ValueError):
        tense(fig1, chain3, "P", (0, 1, 99))  # out of range


def test_family_product_enumeration(fig1):
    x = (0b110, 0b1, 0b11100)
    fam = phi(fig1, x)
    assert fam.size() == 2 * 1 * 3
    members = list(fam.members())
    assert len(members) == 6
    assert len(set(members)) == 6
    for q in members:
        assert all((x[t] >> q[t]) & 1 for t in range(3))
        assert fam.contains(q)
    assert not fam.contains((0, 0, 0))


def test_family_same_histories_product_vs_explicit(fig1):
    x = (0b110, 0b101, 0b10)
    fam = phi(fig1, x)
    explicit = Family.of(fig1, list(fam.members()))
    assert fam.same_histories(explicit)
    assert explicit.same_histories(fam)
    other = Family.of(fig1, list(fam.members())[:-1])
    assert not fam.same_histories(other)


def test_family_member_cap(fig1):
    x = tuple(fig1.full_mask for _ in range(5))
    fam = phi(fig1, x)
    assert fam.size() == 20**5
    with pytest.raises(CapacityError):
        list(fam.members(cap=1000))


def test_product_fast_path_equals_explicit_enumeration(fig1, chain3):
    rng = random.Random(53)
    for _ in range(40):
        x = []
        for _t in range(3):
            mask = 0
            for _ in range(rng.randrange(1, 4)):
                mask |= 1 << rng.randrange(fig1.n)
            x.append(mask)
        x = tuple(x)
        fam = phi(fig1, x)
        members = list(fam.members())
        for op in "PFHG":
            fast = tense_family(fig1, chain3, op, fam)
            slow = tense_family(fig1, chain3, op, Family.of(fig1, members))
            oracle = brute_tense_members(fig1, chain3, op, members)
            assert fast == slow
            assert [set(names_of(fig1, m)) for m in fast] == [
                {fig1.names[i] for i in w} for w in oracle
            ]


def test_star_is_outer_phi_inner(fig1, chain3):
    rng = random.Random(59)
    ops = ["P", "F", "H", "G"]
    for _ in range(20):
        q = tuple(rng.randrange(fig1.n) for _ in range(3))
        outer, inner = rng.choice(ops), rng.choice(ops)
        got = star(fig1, chain3, outer, inner, q, cross_check=True)
        inner_val = tense(fig1, chain3, inner, q)
        want = tense_family(fig1, chain3, outer, phi(fig1, inner_val))
        assert got == want


def test_star_worked_example(fig1, chain3, histories):
    got = star(fig1, chain3, "P", "P", histories["r"])
    assert as_names(fig1, got) == [{"a"}, {"1"}, {"1"}]


def test_lift_and_prime_round_trips(fig1):
    q = (3, 7, 11)
    assert lift_valuation(q) == (1 << 3, 1 << 7, 1 << 11)
    assert prime_valuation(fig1, prime_valuation(fig1, q)) == q
    x = (0b1010, 0b1, 0b100000)
    assert prime_setval(fig1, prime_setval(fig1, x)) == x


def test_family_prime_distributes(fig1):
    x = (0b110, 0b101, 0b10)
    fam = phi(fig1, x)
    primed = fam.prime()
    want = {tuple(fig1.inv[a] for a in q) for q in fam.members()}
    assert set(primed.members()) == want


def test_family_comparison_in_product_form(fig1):
    x = (0b10, 0b100, 0b1000)
    y = tuple(fig1.up[m.bit_length() - 1] for m in x)
    B, C = phi(fig1, x), phi(fig1, y)
    assert cmp_families(Rel.ALL, B, B)
    assert cmp_families(Rel.SOME, B, C)
    assert cmp_setvals(fig1, Rel.LE1, x, y)


def test_family_comparison_matches_member_enumeration(fig1):
    rng = random.Random(61)

    def pointwise_leq(p, q):
        return all(fig1.leq_idx(a, b) for a, b in zip(p, q))

    def brute(kind, ps, qs):
        if kind is Rel.ALL:
            return all(pointwise_leq(p, q) for p in ps for q in qs)
        if kind is Rel.LE1:
            return all(any(pointwise_leq(p, q) for q in qs) for p in ps)
        if kind is Rel.LE2:
            return all(any(pointwise_leq(p, q) for p in ps) for q in qs)
        return any(pointwise_leq(p, q) for p in ps for q in qs)

    def random_family():
        masks = []
        for _ in range(2):
            mask = 0
            for _ in range(rng.randrange(1, 4)):
                mask |= 1 << rng.randrange(fig1.n)
            masks.append(mask)
        fam = phi(fig1, tuple(masks))
        if rng.random() < 0.5:
            fam = Family.of(fig1, fam.members())
        return fam

    for _ in range(60):
        B, C = random_family(), random_family()
        for kind in (Rel.ALL, Rel.LE1, Rel.LE2, Rel.SOME):
            got = cmp_families(kind, B, C)
            want = brute(kind, list(B.members()), list(C.members()))
            assert got == want, (kind, B, C)
