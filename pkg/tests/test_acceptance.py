"""End-to-end acceptance gate.

Each test covers one advertised guarantee of the engine, prints one
PASS/FAIL line, and fails loudly if the guarantee does not hold at the
stated scope (exhaustive where promised, seeded samples elsewhere).
"""

import itertools
import random
import time

import numpy as np

from conftest import brute_tense_members, names_of
from omql import fixtures
from omql.poset import bits
from omql.connectives import (
    adjointness_holds,
    divisibility_holds,
    imp,
    odot,
    unit_laws_hold,
)
from omql.expr import Context, eval_to_setval, parse_expr
from omql.frames import TimeFrame, chain_frame
from omql.orders import Rel, cmp_families, cmp_masks, cmp_setvals, equiv_masks
from omql.tense import Family, phi, prime_setval, tense, tense_family, tense_setval
from omql.verify import (
    check_adjointness,
    check_composition_laws,
    check_dynamic_pair,
    compare_setvals,
)
from omql.reconstruct import build_preference, verify_reconstruction


def report(ok, label):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}", flush=True)
    assert ok, label


# 1 -------------------------------------------------------------------------


def test_worked_example_table_and_strict_conclusions(fig1, chain3, histories):
    start = time.monotonic()
    ctx = Context(
        fig1,
        chain3,
        {"p": ("val", histories["p"]), "q": ("val", histories["q"])},
    )
    expected_rows = {
        "H phi odot p q": [{"d"}, {"0"}, {"0"}],
        "odot H p H q": [{"d"}, {"0", "f"}, {"0"}],
        "H phi imp p q": [{"b'"}, {"f", "i"}, {"f", "i"}],
        "imp H p H q": [{"b'"}, {"i"}, {"a'", "b'"}],
        "G phi odot p q": [{"0"}, {"0"}, {"h"}],
        "odot G p G q": [{"0"}, {"0", "e", "h"}, {"h"}],
        "G phi imp p q": [{"f", "i"}, {"a'"}, {"a'"}],
        "imp G p G q": [{"a'", "b'"}, {"a'", "b'"}, {"a'"}],
    }
    cells_checked = 0
    for text, want in expected_rows.items():
        got = [names_of(fig1, m) for m in eval_to_setval(parse_expr(text), ctx)]
        assert got == want, (text, got, want)
        cells_checked += len(want)
    conclusions = [
        ("H phi odot p q", "le", "odot H p H q"),
        ("H phi imp p q", "le2", "imp H p H q"),
        ("G phi odot p q", "le", "odot G p G q"),
        ("G phi imp p q", "le1", "imp G p G q"),
    ]
    for left, token, right in conclusions:
        lval = eval_to_setval(parse_expr(left), ctx)
        rval = eval_to_setval(parse_expr(right), ctx)
        holds, _ = compare_setvals(fig1, token, lval, rval)
        converse, _ = compare_setvals(fig1, token, rval, lval)
        assert holds and not converse, (left, token, right)
    elapsed = time.monotonic() - start
    report(
        cells_checked == 24 and elapsed < 1.0,
        f"worked example: 24 cells and 4 strict conclusions in {elapsed:.3f}s",
    )


# 2 -------------------------------------------------------------------------


def test_composite_past_is_strictly_coarser(fig1, chain3, histories):
    r = histories["r"]
    ctx = Context(fig1, chain3, {"r": ("val", r)})
    single = eval_to_setval(parse_expr("P r"), ctx)
    double = eval_to_setval(parse_expr("P phi P r"), ctx)
    assert [names_of(fig1, m) for m in single] == [
        {"a"},
        {"f'", "i'"},
        {"f'", "i'"},
    ]
    assert [names_of(fig1, m) for m in double] == [{"a"}, {"1"}, {"1"}]
    holds, _ = compare_setvals(fig1, "le2", single, double)
    converse, _ = compare_setvals(fig1, "le2", double, single)
    report(
        holds and not converse,
        "iterating the past operator keeps the level-2 bound and loses precision",
    )


# 3 -------------------------------------------------------------------------


def test_axiom_battery_on_fixtures(fig1):
    rep = fig1.validate()
    assert rep.ok, rep.summary()
    assert len(rep.checks) == 10
    a, b = fig1.index("a"), fig1.index("b")
    assert fig1.join_idx(a, b) is None
    assert fig1.meet_idx(fig1.index("i'"), fig1.index("f'")) is None
    for k in (1, 2, 3):
        br = fixtures.boolean_algebra(k).validate()
        assert br.ok, br.summary()
    report(True, "axiom battery: 20-element fixture and three Boolean algebras")


# 4 -------------------------------------------------------------------------


def test_dynamic_pair_axioms_exhaustive(fig1, chain3):
    start = time.monotonic()
    reports = []
    for pair in ("PG", "FH"):
        reports += check_dynamic_pair(fig1, chain3, pair, exhaustive=True)
    elapsed = time.monotonic() - start
    assert len(reports) == 6
    for r in reports:
        assert r.passed and not r.vacuous, r.line()
    checked = {r.law.split()[1]: r.checked for r in reports}
    assert checked["units"] == 2
    assert checked["monotone"] == 804_357
    assert checked["inner/outer"] == 8_000
    report(
        elapsed < 60.0,
        f"dynamic-pair axioms for both couples, exhaustive, in {elapsed:.2f}s",
    )


# 5 -------------------------------------------------------------------------


def test_adjointness_exhaustive(fig1, bool2):
    r1 = check_adjointness(fig1)
    assert r1.passed and r1.checked == 8000, r1.line()
    r2 = check_adjointness(bool2)
    assert r2.passed and r2.checked == 3375, r2.line()
    report(True, "adjunction of the connectives on 8000 + 3375 triples")


# 6 -------------------------------------------------------------------------


def test_divisibility_and_units_exhaustive(fig1):
    for a, b in itertools.product(range(fig1.n), repeat=2):
        assert divisibility_holds(fig1, a, b), (fig1.names[a], fig1.names[b])
    for a in range(fig1.n):
        assert unit_laws_hold(fig1, a), fig1.names[a]
    report(True, "divisibility on all 400 pairs and unit laws on all 20 elements")


# 7 -------------------------------------------------------------------------


def test_boolean_collapse(bool3):
    letters = "abc"
    k = 3

    def atom_bits(name):
        if name == "0":
            return 0
        if name == "1":
            return (1 << k) - 1
        return sum(1 << letters.index(c) for c in name)

    decode = [atom_bits(n) for n in bool3.names]
    encode = {v: i for i, v in enumerate(decode)}
    for a, b in itertools.product(range(bool3.n), repeat=2):
        want_odot = encode[decode[a] & decode[b]]
        want_imp = encode[(decode[a] ^ (1 << k) - 1) | decode[b]]
        assert odot(bool3, a, b) == 1 << want_odot
        assert imp(bool3, a, b) == 1 << want_imp

    rng = random.Random(101)
    frames = []
    while len(frames) < 3:
        m = rng.randrange(2, 5)
        rel = np.array(
            [[rng.random() < 0.6 for _ in range(m)] for _ in range(m)]
        )
        frame = TimeFrame([str(i) for i in range(m)], rel)
        if frame.is_serial():
            frames.append(frame)
    lattice_checked = 0
    for frame in frames:
        for _ in range(40):
            q = tuple(rng.randrange(bool3.n) for _ in range(frame.m))
            for s in range(frame.m):
                past, future = frame.past[s], frame.future[s]
                join_past = encode[
                    int(np.bitwise_or.reduce([decode[q[t]] for t in past]))
                ]
                meet_past = encode[
                    int(np.bitwise_and.reduce([decode[q[t]] for t in past]))
                ]
                join_future = encode[
                    int(np.bitwise_or.reduce([decode[q[t]] for t in future]))
                ]
                meet_future = encode[
                    int(np.bitwise_and.reduce([decode[q[t]] for t in future]))
                ]
                assert tense(bool3, frame, "P", q)[s] == 1 << join_past
                assert tense(bool3, frame, "H", q)[s] == 1 << meet_past
                assert tense(bool3, frame, "F", q)[s] == 1 << join_future
                assert tense(bool3, frame, "G", q)[s] == 1 << meet_future
                lattice_checked += 4
    report(
        lattice_checked > 0,
        "Boolean collapse: connectives are meet/material arrow, "
        f"operators are fiber joins/meets ({lattice_checked} cells)",
    )


# 8 -------------------------------------------------------------------------


def test_family_fast_path_and_duality(fig1):
    rng = random.Random(8)
    frame = chain_frame(2)
    for case in range(200):
        x = []
        for _t in range(2):
            mask = 0
            for _ in range(rng.randrange(1, 4)):
                mask |= 1 << rng.randrange(fig1.n)
            x.append(mask)
        x = tuple(x)
        fam = phi(fig1, x)
        members = list(fam.members())
        for op in "PFHG":
            fast = tense_family(fig1, frame, op, fam)
            slow = tense_family(fig1, frame, op, Family.of(fig1, members))
            oracle = brute_tense_members(fig1, frame, op, members)
            assert fast == slow, (case, op)
            assert [set(names_of(fig1, m)) for m in fast] == [
                {fig1.names[i] for i in w} for w in oracle
            ], (case, op)
        xp = prime_setval(fig1, x)
        assert tense_setval(fig1, frame, "H", x) == prime_setval(
            fig1, tense_setval(fig1, frame, "P", xp)
        ), case
        assert tense_setval(fig1, frame, "G", x) == prime_setval(
            fig1, tense_setval(fig1, frame, "F", xp)
        ), case
    report(True, "family fast path matches enumeration and duality on 200 draws")


# 9 -------------------------------------------------------------------------


def test_composition_laws_exhaustive(fig1, chain3):
    start = time.monotonic()
    reports = check_composition_laws(fig1, chain3, exhaustive=True)
    elapsed = time.monotonic() - start
    assert len(reports) == 28
    for r in reports:
        assert r.passed and not r.vacuous, r.line()
        assert r.checked == 8000, r.line()
    report(elapsed < 60.0, f"28 composition laws, exhaustive, in {elapsed:.2f}s")


# 10 ------------------------------------------------------------------------


def test_reconstruction_exhaustive(fig1, chain3):
    start = time.monotonic()
    for mode in ("star", "bar"):
        result = build_preference(fig1, chain3, mode=mode, exhaustive=True)
        assert np.array_equal(result.relation, chain3.rel), mode
        assert result.contains_original and not result.added, mode
        assert result.claims and all(c.holds for c in result.claims), mode
        check = verify_reconstruction(fig1, chain3, result)
        assert check.passed, check.line()
    elapsed = time.monotonic() - start
    report(
        elapsed < 600.0,
        f"time order rebuilt exactly in both modes in {elapsed:.2f}s",
    )


# 11 ------------------------------------------------------------------------


def test_property_suites(fig1, bool2):
    rng = random.Random(11)
    full = fig1.full_mask
    instances = 0

    # quasiorder laws for the two one-sided relations, sampled
    for _ in range(200):
        b = rng.randrange(1, full + 1)
        c = rng.randrange(1, full + 1)
        d = rng.randrange(1, full + 1)
        for kind in (Rel.LE1, Rel.LE2):
            assert cmp_masks(fig1, kind, b, b)
            if cmp_masks(fig1, kind, b, c) and cmp_masks(fig1, kind, c, d):
                assert cmp_masks(fig1, kind, b, d)
        instances += 1

    # the same laws, exhaustive over every non-empty subset pair/triple
    # of a small carrier
    subsets = list(range(1, 1 << bool2.n))
    for kind in (Rel.LE1, Rel.LE2):
        for b in subsets:
            assert cmp_masks(bool2, kind, b, b)
        for b, c, d in itertools.product(subsets, repeat=3):
            if cmp_masks(bool2, kind, b, c) and cmp_masks(bool2, kind, c, d):
                assert cmp_masks(bool2, kind, b, d)

    # symmetrizations are equivalences, sampled
    for _ in range(100):
        b = rng.randrange(1, full + 1)
        c = rng.randrange(1, full + 1)
        for level in (1, 2):
            assert equiv_masks(fig1, level, b, b)
            assert equiv_masks(fig1, level, b, c) == equiv_masks(
                fig1, level, c, b
            )
        instances += 1

    # the family embedding preserves and reflects the every/every order,
    # exhaustive on two instants over the small carrier
    pairs_checked = 0
    small_setvals = list(
        itertools.product(range(1, 1 << bool2.n), repeat=2)
    )
    sampled = rng.sample(small_setvals, 60)
    for xb in sampled:
        for yb in rng.sample(small_setvals, 10):
            lhs = cmp_families(Rel.ALL, phi(bool2, xb), phi(bool2, yb))
            rhs = cmp_setvals(bool2, Rel.ALL, xb, yb)
            assert lhs == rhs
            pairs_checked += 1
    # and it is injective on histories
    for xb in sampled[:30]:
        for yb in rng.sample(small_setvals, 5):
            same = phi(bool2, xb).same_histories(phi(bool2, yb))
            assert same == (xb == yb)
    instances += 100

    # lifted operators stay monotone across every/every-ordered inputs
    frame = chain_frame(2)
    for _ in range(100):
        y = tuple(rng.randrange(1, full + 1) for _ in range(2))
        x = []
        for ym in y:
            inter = full
            for c in bits(ym):
                inter &= fig1.down[c]
            assert inter  # the bottom is below everything
            choices = list(bits(inter))
            pick = 0
            for _ in range(rng.randrange(1, 3)):
                pick |= 1 << rng.choice(choices)
            x.append(pick)
        x = tuple(x)
        assert cmp_setvals(fig1, Rel.ALL, x, y)
        for op, kind in (
            ("P", Rel.LE2),
            ("F", Rel.LE2),
            ("H", Rel.LE1),
            ("G", Rel.LE1),
        ):
            assert cmp_setvals(
                fig1,
                kind,
                tense_setval(fig1, frame, op, x),
                tense_setval(fig1, frame, op, y),
            ), op
        instances += 1
    report(
        instances >= 500,
        f"property suites: {instances} seeded instances plus exhaustive sweeps",
    )
