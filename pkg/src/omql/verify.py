"""Law harnesses: axioms of tense couples, composition laws, adjunction,
and the conditional transfer between preservation laws.

Every check returns LawReport rows. A failing report always carries a
witness naming concrete elements/instants; a conditional law whose
hypothesis fails on the scanned universe passes vacuously and says so.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels, sweep
from .connectives import imp, imp_sets, imp_setval, odot, odot_sets, odot_setval
from .errors import PreconditionError
from .expr import Context, eval_to_setval
from .orders import Rel, cmp_masks, equiv_masks
from .poset import bits
from .tense import lift_valuation, tense, tense_setval

REL_SYMBOL = {
    "le": "≤",
    "le1": "≤₁",
    "le2": "≤₂",
    "some": "⊑",
    "eq": "=",
    "approx1": "≈₁",
    "approx2": "≈₂",
}

_KIND_CODE = {
    Rel.ALL: kernels.REL_ALL,
    Rel.LE1: kernels.REL_LE1,
    Rel.LE2: kernels.REL_LE2,
    Rel.SOME: kernels.REL_SOME,
}


@dataclass
class LawReport:
    law: str
    universe: str
    passed: bool
    vacuous: bool = False
    checked: int = 0
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        if self.passed and self.vacuous:
            status = "PASS (vacuous)"
        out = f"[{status}] {self.law}  ({self.universe}; checked={self.checked})"
        if self.witness:
            detail = ", ".join(f"{k}={v}" for k, v in self.witness.items())
            out += f"  witness: {detail}"
        return out


def compare_setvals(poset, token, x, y):
    """Compare two set-valued histories; returns (holds, failing instant)."""
    if token in ("le", "le1", "le2", "some"):
        kind = Rel.parse(token)
        for t, (xm, ym) in enumerate(zip(x, y)):
            if not cmp_masks(poset, kind, xm, ym):
                return False, t
        return True, None
    if token == "eq":
        for t, (xm, ym) in enumerate(zip(x, y)):
            if xm != ym:
                return False, t
        return True, None
    if token in ("approx1", "approx2"):
        level = 1 if token == "approx1" else 2
        for t, (xm, ym) in enumerate(zip(x, y)):
            if not equiv_masks(poset, level, xm, ym):
                return False, t
        return True, None
    raise ValueError(f"unknown relation kind {token!r}")


def render_setval(poset, frame, x):
    cells = []
    for t, mask in enumerate(x):
        names = poset.subset_names(mask)
        body = names[0] if len(names) == 1 else "{" + ",".join(names) + "}"
        cells.append(f"{frame.names[t]}:{body}")
    return " ".join(cells)


def eval_inequality(poset, frame, lhs, token, rhs, bindings):
    """Evaluate one comparison between two expression trees."""
    ctx = Context(poset, frame, bindings)
    left = eval_to_setval(lhs, ctx)
    right = eval_to_setval(rhs, ctx)
    holds, bad_t = compare_setvals(poset, token, left, right)
    witness = None
    if not holds:
        witness = {
            "instant": frame.names[bad_t],
            "lhs": render_setval(poset, frame, left),
            "rhs": render_setval(poset, frame, right),
        }
    return LawReport(
        law=f"{lhs.label()} {REL_SYMBOL[token]} {rhs.label()}",
        universe="given bindings",
        passed=holds,
        checked=1,
        witness=witness,
        notes=[
            f"lhs = {render_setval(poset, frame, left)}",
            f"rhs = {render_setval(poset, frame, right)}",
        ],
    )


def _row_witness(poset, frame, kind, lrow, rrow, qrow=None):
    out = {}
    if qrow is not None:
        out["q"] = ",".join(poset.names[a] for a in qrow)
    for t in range(frame.m):
        if not cmp_masks(poset, kind, int(lrow[t]), int(rrow[t])):
            out["instant"] = frame.names[t]
            out["lhs"] = "{" + ",".join(poset.subset_names(int(lrow[t]))) + "}"
            out["rhs"] = "{" + ",".join(poset.subset_names(int(rrow[t]))) + "}"
            break
    return out


def _require(cond, message):
    if not cond:
        raise PreconditionError(message)


# -- tense-couple axioms -------------------------------------------------


def _couple(pair):
    if pair in ("PG", "GP"):
        return "P", "G"
    if pair in ("FH", "HF"):
        return "F", "H"
    raise ValueError(f"unknown couple {pair!r}; use PG or FH")


def _comparable_pairs(poset, m, exhaustive, sample, seed):
    """(N,m) history arrays Vp, Vq with Vp <= Vq pointwise."""
    n = poset.n
    if exhaustive:
        lo, hi = np.nonzero(poset.leq)
        K = lo.shape[0]
        grids = np.meshgrid(*([np.arange(K)] * m), indexing="ij")
        combos = np.stack([g.ravel() for g in grids], axis=1)
        return lo[combos].astype(np.uint8), hi[combos].astype(np.uint8)
    rng = np.random.default_rng(seed + 1)
    count = sample or sweep.SAMPLE_DEFAULT
    ups = [list(bits(poset.up[a])) for a in range(n)]
    Vp = rng.integers(0, n, size=(count, m), dtype=np.uint8)
    Vq = np.empty_like(Vp)
    for i in range(count):
        for t in range(m):
            cand = ups[Vp[i, t]]
            Vq[i, t] = cand[rng.integers(0, len(cand))]
    return Vp, Vq


def _encode(V, n):
    idx = np.zeros(V.shape[0], dtype=np.int64)
    for t in range(V.shape[1]):
        idx = idx * n + V[:, t]
    return idx


def check_dynamic_pair(
    poset, frame, pair="PG", exhaustive=None, sample=None, seed=0
):
    """Axioms of one tense couple; returns three LawReports."""
    _require(frame.is_serial(), "dynamic-pair axioms need a serial frame")
    exi, uni = _couple(pair)
    reports = []

    const_top = (poset.top,) * frame.m
    const_bottom = (poset.bottom,) * frame.m
    top_ok = all(m == 1 << poset.top for m in tense(poset, frame, uni, const_top))
    bot_ok = all(
        m == 1 << poset.bottom for m in tense(poset, frame, exi, const_bottom)
    )
    witness = None
    if not top_ok:
        witness = {"law": f"{uni}(top)=top"}
    elif not bot_ok:
        witness = {"law": f"{exi}(bottom)=bottom"}
    reports.append(
        LawReport(
            law=f"({exi},{uni}) units",
            universe="constant histories",
            passed=top_ok and bot_ok,
            checked=2,
            witness=witness,
        )
    )

    V, desc, is_exh = sweep.universe(poset, frame, exhaustive, sample, seed)
    tables = sweep.tense_tables(poset, frame, V, ops=(exi, uni))
    Vp, Vq = _comparable_pairs(poset, frame.m, is_exh, sample, seed)
    if is_exh:
        pi, qi = _encode(Vp, poset.n), _encode(Vq, poset.n)
        tp = {op: tables[op][pi] for op in (exi, uni)}
        tq = {op: tables[op][qi] for op in (exi, uni)}
    else:
        tp = sweep.tense_tables(poset, frame, Vp, ops=(exi, uni))
        tq = sweep.tense_tables(poset, frame, Vq, ops=(exi, uni))
    ok_uni = sweep.rel_rows(poset, kernels.REL_LE1, tp[uni], tq[uni])
    ok_exi = sweep.rel_rows(poset, kernels.REL_LE2, tp[exi], tq[exi])
    ok = ok_uni & ok_exi
    witness = None
    if not ok.all():
        i = int(np.flatnonzero(~ok)[0])
        kind, table_p, table_q = (
            (Rel.LE1, tp[uni], tq[uni])
            if not ok_uni[i]
            else (Rel.LE2, tp[exi], tq[exi])
        )
        witness = _row_witness(poset, frame, kind, table_p[i], table_q[i])
        witness["p"] = ",".join(poset.names[a] for a in Vp[i])
        witness["q"] = ",".join(poset.names[a] for a in Vq[i])
    reports.append(
        LawReport(
            law=f"({exi},{uni}) monotone",
            universe=f"comparable pairs over {desc}",
            passed=bool(ok.all()),
            checked=int(ok.shape[0]),
            witness=witness,
        )
    )

    ue = sweep.star_table(poset, frame, uni, tables[exi])
    eu = sweep.star_table(poset, frame, exi, tables[uni])
    lifted = np.int64(1) << V.astype(np.int64)
    inner_ok = sweep.rel_rows(poset, kernels.REL_LE1, lifted, ue)
    outer_ok = sweep.rel_rows(poset, kernels.REL_LE2, eu, lifted)
    ok = inner_ok & outer_ok
    witness = None
    if not ok.all():
        i = int(np.flatnonzero(~ok)[0])
        if not inner_ok[i]:
            witness = _row_witness(poset, frame, Rel.LE1, lifted[i], ue[i], V[i])
        else:
            witness = _row_witness(poset, frame, Rel.LE2, eu[i], lifted[i], V[i])
    reports.append(
        LawReport(
            law=f"({exi},{uni}) inner/outer bounds",
            universe=desc,
            passed=bool(ok.all()),
            checked=int(ok.shape[0]),
            witness=witness,
        )
    )
    return reports


# -- composition laws ----------------------------------------------------

_COMPOSITION_LAWS = [
    ("P", "le2", ("P", "F")),
    ("F", "le2", ("F", "P")),
    ("H", "le1", ("H", "P")),
    ("G", "le1", ("G", "P")),
    (("P", "H"), "le2", "P"),
    (("F", "H"), "le2", "F"),
    ("H", "le1", ("H", "F")),
    ("G", "le1", ("G", "F")),
    (("P", "G"), "le2", "P"),
    (("F", "G"), "le2", "F"),
    (("H", "G"), "le1", "H"),
    (("G", "H"), "le1", "G"),
]


def _law_name(side):
    return side if isinstance(side, str) else f"{side[0]}*{side[1]}"


def check_composition_laws(poset, frame, exhaustive=None, sample=None, seed=0):
    """The composite-vs-plain operator laws on a reflexive frame."""
    _require(
        frame.is_reflexive(), "composition laws are stated for reflexive frames"
    )
    V, desc, _ = sweep.universe(poset, frame, exhaustive, sample, seed)
    tables = sweep.tense_tables(poset, frame, V)
    stars = {
        (outer, inner): sweep.star_table(poset, frame, outer, tables[inner])
        for outer in "PFHG"
        for inner in "PFHG"
    }

    def table_for(side):
        return tables[side] if isinstance(side, str) else stars[side]

    laws = [
        (f"{_law_name(l)} {REL_SYMBOL[token]} {_law_name(r)}", token, l, r)
        for l, token, r in _COMPOSITION_LAWS
    ]
    for x in "PFHG":
        laws.append((f"H*{x} ≤ {x}", "le", ("H", x), x))
        laws.append((f"G*{x} ≤ {x}", "le", ("G", x), x))
        laws.append((f"{x} ≤ P*{x}", "le", x, ("P", x)))
        laws.append((f"{x} ≤ F*{x}", "le", x, ("F", x)))

    reports = []
    for name, token, lside, rside in laws:
        kind = Rel.parse(token)
        L, R = table_for(lside), table_for(rside)
        ok = sweep.rel_rows(poset, _KIND_CODE[kind], L, R)
        witness = None
        if not ok.all():
            i = int(np.flatnonzero(~ok)[0])
            witness = _row_witness(poset, frame, kind, L[i], R[i], V[i])
        reports.append(
            LawReport(
                law=name,
                universe=desc,
                passed=bool(ok.all()),
                checked=int(ok.shape[0]),
                witness=witness,
            )
        )
    return reports


# -- adjunction ----------------------------------------------------------


def check_adjointness(poset, subsets=None):
    """Adjunction of the connectives under the SOME relation.

    subsets=None picks subset triples when the carrier is small (n <= 6)
    and element triples otherwise; both scans are exhaustive.
    """
    n = poset.n
    if subsets is None:
        subsets = n <= 6
    checked = 0
    witness = None
    if subsets:
        universe_desc = f"all non-empty subset triples ({(2**n - 1) ** 3})"
        masks = range(1, 1 << n)
        odot_memo = {}
        imp_memo = {}
        for bm in masks:
            for cm in masks:
                odot_memo[bm, cm] = odot_sets(poset, bm, cm)
                imp_memo[bm, cm] = imp_sets(poset, bm, cm)
        for bm in masks:
            for cm in masks:
                oc = odot_memo[bm, cm]
                for dm in masks:
                    checked += 1
                    left = cmp_masks(poset, Rel.SOME, oc, dm)
                    right = any(
                        imp_memo[cm, dm] & poset.up[b] for b in bits(bm)
                    )
                    if left != right:
                        witness = {
                            "B": "{" + ",".join(poset.subset_names(bm)) + "}",
                            "C": "{" + ",".join(poset.subset_names(cm)) + "}",
                            "D": "{" + ",".join(poset.subset_names(dm)) + "}",
                            "left": str(left),
                            "right": str(right),
                        }
                        break
                if witness:
                    break
            if witness:
                break
    else:
        universe_desc = f"all element triples ({n**3})"
        for b in range(n):
            for c in range(n):
                oc = odot(poset, b, c)
                for d in range(n):
                    checked += 1
                    left = bool(oc & poset.down[d])
                    right = bool(imp(poset, c, d) & poset.up[b])
                    if left != right:
                        witness = {
                            "B": poset.names[b],
                            "C": poset.names[c],
                            "D": poset.names[d],
                            "left": str(left),
                            "right": str(right),
                        }
                        break
                if witness:
                    break
            if witness:
                break
    return LawReport(
        law="odot adjoint to imp (SOME)",
        universe=universe_desc,
        passed=witness is None,
        checked=checked,
        witness=witness,
    )


# -- conditional transfer ------------------------------------------------


def _setval_universe(poset, frame, cap, rng, per_instant_max=4):
    """Set-valued histories: exhaustive when small, else the mandated
    families (all singleton-valued, all constant two-element) plus noise."""
    n, m = poset.n, frame.m
    total = (2**n - 1) ** m
    if total <= cap:
        axes = [range(1, 1 << n)] * m
        out = [tuple(combo) for combo in itertools.product(*axes)]
        return out, f"exhaustive set-valued ({total})"
    out = [tuple(1 << a for a in q) for q in sweep.all_valuations(n, m)]
    n_singletons = len(out)
    for a in range(n):
        for b in range(a + 1, n):
            out.append(((1 << a) | (1 << b),) * m)
    n_pairs = len(out) - n_singletons
    noise = 200
    for _ in range(noise):
        sv = []
        for _t in range(m):
            size = 1 + int(rng.integers(0, per_instant_max))
            mask = 0
            for a in rng.integers(0, n, size=size):
                mask |= 1 << int(a)
            sv.append(mask)
        out.append(tuple(sv))
    return (
        out,
        f"{n_singletons} singleton + {n_pairs} constant-pair + {noise} random",
    )


def check_preservation_transfer(
    poset,
    frame,
    x_op,
    y_op,
    z_op,
    direction="i",
    exhaustive=None,
    sample=None,
    seed=0,
    qs_per_setval=3,
):
    """Conditional transfer between the two preservation laws.

    direction "i": if X(phi(x)) odot Y(q) stays below Z(phi(x odot q))
    for all set-valued x and exact q (level 1 when Z is H/G, level 2
    when Z is P/F), then X(phi(p -> q)) SOME-below Y(p) -> Z(q) for all
    exact p, q.

    direction "ii": if X(phi(p -> x)) stays below Y(p) -> Z(phi(x))
    (level by X), then X(p) odot Y(q) SOME-below Z(phi(p odot q)).

    The hypothesis scan stops at its first counterexample; the conclusion
    is scanned either way and both statuses are reported. A false
    hypothesis makes the law pass vacuously.
    """
    _require(frame.is_serial(), "transfer laws need a serial frame")
    if direction not in ("i", "ii"):
        raise ValueError("direction must be 'i' or 'ii'")
    pivot = z_op if direction == "i" else x_op
    level_token = "le1" if pivot in ("H", "G") else "le2"
    rng = np.random.default_rng(seed)
    cap = sweep.enumeration_cap(sweep.UNIVERSE_CAP_DEFAULT)

    n, m = poset.n, frame.m
    if exhaustive is None:
        exhaustive = (2**n - 1) ** m * n**m <= cap
    if exhaustive:
        vals = [tuple(int(a) for a in row) for row in sweep.all_valuations(n, m)]
        setvals, sv_desc = _setval_universe(poset, frame, cap, rng)
        hyp_pairs = [(x, q) for x in setvals for q in vals]
        hyp_desc = f"{sv_desc} x all histories ({len(hyp_pairs)})"
        concl_pairs = [(p, q) for p in vals for q in vals]
        concl_desc = f"all history pairs ({len(concl_pairs)})"
    else:
        setvals, sv_desc = _setval_universe(poset, frame, cap, rng)
        count = sample or qs_per_setval
        hyp_pairs = []
        for x in setvals:
            for row in rng.integers(0, n, size=(count, m)):
                hyp_pairs.append((x, tuple(int(a) for a in row)))
        hyp_desc = f"({sv_desc}) x {count} sampled histories each"
        concl_count = sample or 2000
        rows = rng.integers(0, n, size=(concl_count, 2 * m))
        concl_pairs = [
            (tuple(int(a) for a in row[:m]), tuple(int(a) for a in row[m:]))
            for row in rows
        ]
        concl_desc = f"sampled history pairs ({concl_count}, seed={seed})"

    def hyp_holds(x, q):
        if direction == "i":
            lhs = odot_setval(
                poset,
                tense_setval(poset, frame, x_op, x),
                tense(poset, frame, y_op, q),
            )
            rhs = tense_setval(
                poset, frame, z_op, odot_setval(poset, x, lift_valuation(q))
            )
        else:
            lhs = tense_setval(
                poset, frame, x_op, imp_setval(poset, lift_valuation(q), x)
            )
            rhs = imp_setval(
                poset,
                tense(poset, frame, y_op, q),
                tense_setval(poset, frame, z_op, x),
            )
        holds, _ = compare_setvals(poset, level_token, lhs, rhs)
        return holds

    def concl_holds(p, q):
        if direction == "i":
            lhs = tense_setval(
                poset,
                frame,
                x_op,
                imp_setval(poset, lift_valuation(p), lift_valuation(q)),
            )
            rhs = imp_setval(
                poset,
                tense(poset, frame, y_op, p),
                tense(poset, frame, z_op, q),
            )
        else:
            lhs = odot_setval(
                poset, tense(poset, frame, x_op, p), tense(poset, frame, y_op, q)
            )
            rhs = tense_setval(
                poset,
                frame,
                z_op,
                odot_setval(poset, lift_valuation(p), lift_valuation(q)),
            )
        holds, _ = compare_setvals(poset, "some", lhs, rhs)
        return holds

    hyp_ok = True
    hyp_witness = None
    hyp_checked = 0
    for x, q in hyp_pairs:
        hyp_checked += 1
        if not hyp_holds(x, q):
            hyp_ok = False
            hyp_witness = {
                "x": " ".join(
                    "{" + ",".join(poset.subset_names(mask)) + "}" for mask in x
                ),
                "q": ",".join(poset.names[a] for a in q),
            }
            break

    concl_ok = True
    concl_witness = None
    concl_checked = 0
    for p, q in concl_pairs:
        concl_checked += 1
        if not concl_holds(p, q):
            concl_ok = False
            concl_witness = {
                "p": ",".join(poset.names[a] for a in p),
                "q": ",".join(poset.names[a] for a in q),
            }
            break

    vacuous = not hyp_ok
    passed = concl_ok or vacuous
    notes = [
        f"hypothesis ({level_token}): "
        + ("holds" if hyp_ok else f"fails after {hyp_checked} of {hyp_desc}"),
        f"conclusion (some): "
        + ("holds" if concl_ok else "fails")
        + f" over {concl_desc}",
    ]
    if hyp_witness:
        notes.append(
            "hypothesis witness: "
            + ", ".join(f"{k}={v}" for k, v in hyp_witness.items())
        )
    witness = None if passed else concl_witness
    return LawReport(
        law=f"transfer {direction}: X={x_op} Y={y_op} Z={z_op}",
        universe=f"hypothesis over {hyp_desc}",
        passed=passed,
        vacuous=vacuous,
        checked=hyp_checked + concl_checked,
        witness=witness,
        notes=notes,
    )
