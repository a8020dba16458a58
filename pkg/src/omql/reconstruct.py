"""Recovering a time preference relation from the operators it induced.

Two modes. "star" keeps s related to t when, for every history q in the
universe, q(t) sits between G(q)(s) and F(q)(s) while q(s) sits between
H(q)(t) and P(q)(t) (all under the everything-below-everything reading).
"bar" quantifies over the four composites instead: X(q)(t) must sit
between (G*X)(q)(s) and (F*X)(q)(s), and X(q)(s) between (H*X)(q)(t) and
(P*X)(q)(t), for X any of the four operators.

Either way the original relation survives inside the rebuilt one, and
operators induced by the rebuilt relation agree with the originals up to
the level-1/level-2 equivalences (level 1 for H and G, level 2 for P and
F); in bar mode the agreement is between composites whose outer operator
is taken over the rebuilt relation. Those equivalence claims are computed
here and re-derivable through verify_reconstruction. Sampling only ever
drops constraints, so a sampled rebuild over-approximates the exhaustive
one; reports carry the coverage either way.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels, sweep
from .errors import PreconditionError
from .frames import TimeFrame
from .verify import LawReport, _row_witness
from .orders import Rel

_LEVEL = {"P": 2, "F": 2, "H": 1, "G": 1}
_LEVEL_CODE = {1: kernels.REL_LE1, 2: kernels.REL_LE2}


@dataclass
class EquivClaim:
    claim: str
    level: int
    holds: bool
    witness: dict | None = None

    def line(self):
        status = "ok" if self.holds else "FAIL"
        out = f"{status:4}  {self.claim}"
        if self.witness:
            out += "  witness: " + ", ".join(
                f"{k}={v}" for k, v in self.witness.items()
            )
        return out


@dataclass
class ReconstructionResult:
    mode: str
    names: list[str]
    relation: np.ndarray
    coverage: str
    exhaustive: bool
    sample: int | None
    seed: int
    contains_original: bool
    missing: list[tuple] = field(default_factory=list)
    added: list[tuple] = field(default_factory=list)
    claims: list[EquivClaim] = field(default_factory=list)

    def pairs(self):
        m = len(self.names)
        return [
            (self.names[s], self.names[t])
            for s in range(m)
            for t in range(m)
            if self.relation[s, t]
        ]


def _all_below_elem(table_col, elem_table, V_col):
    """Rows where every member of the set is below the history's element."""
    bounds = elem_table[V_col]
    return (table_col & ~bounds) == 0


def _relation_star(poset, frame, V, tables):
    t64 = poset.tables()
    down, up = t64["down"], t64["up"]
    m = frame.m
    rel = np.zeros((m, m), dtype=bool)
    for s in range(m):
        for t in range(m):
            ok = (
                _all_below_elem(tables["G"][:, s], down, V[:, t])
                & ((tables["F"][:, s] & ~up[V[:, t]]) == 0)
                & _all_below_elem(tables["H"][:, t], down, V[:, s])
                & ((tables["P"][:, t] & ~up[V[:, s]]) == 0)
            )
            rel[s, t] = bool(ok.all())
    return rel


def _relation_bar(poset, frame, V, tables, stars):
    code = kernels.REL_ALL
    m = frame.m
    rel = np.zeros((m, m), dtype=bool)
    for s in range(m):
        for t in range(m):
            cell = np.ones(V.shape[0], dtype=bool)
            for x in "PFHG":
                cell &= sweep.rel_rows(
                    poset, code, stars["G", x][:, s], tables[x][:, t]
                )
                cell &= sweep.rel_rows(
                    poset, code, tables[x][:, t], stars["F", x][:, s]
                )
                cell &= sweep.rel_rows(
                    poset, code, stars["H", x][:, t], tables[x][:, s]
                )
                cell &= sweep.rel_rows(
                    poset, code, tables[x][:, s], stars["P", x][:, t]
                )
                if not cell.any():
                    break
            rel[s, t] = bool(cell.all())
    return rel


def _equiv_claims(poset, frame, rebuilt, V, tables, mode):
    """Agreement between original and rebuilt operators, per claim."""
    claims = []
    if mode == "star":
        tables2 = sweep.tense_tables(poset, rebuilt, V)
        for op in "PFHG":
            level = _LEVEL[op]
            code = _LEVEL_CODE[level]
            fwd = sweep.rel_rows(poset, code, tables[op], tables2[op])
            bwd = sweep.rel_rows(poset, code, tables2[op], tables[op])
            ok = fwd & bwd
            witness = None
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                kind = Rel.LE1 if level == 1 else Rel.LE2
                a, b = (
                    (tables[op][i], tables2[op][i])
                    if not fwd[i]
                    else (tables2[op][i], tables[op][i])
                )
                witness = _row_witness(poset, frame, kind, a, b, V[i])
            claims.append(
                EquivClaim(
                    claim=f"{op} and rebuilt {op} agree at level {level}",
                    level=level,
                    holds=bool(ok.all()),
                    witness=witness,
                )
            )
        return claims
    for outer in "PFHG":
        level = _LEVEL[outer]
        code = _LEVEL_CODE[level]
        for inner in "PFHG":
            orig = sweep.star_table(poset, frame, outer, tables[inner])
            redo = sweep.star_table(poset, rebuilt, outer, tables[inner])
            fwd = sweep.rel_rows(poset, code, orig, redo)
            bwd = sweep.rel_rows(poset, code, redo, orig)
            ok = fwd & bwd
            witness = None
            if not ok.all():
                i = int(np.flatnonzero(~ok)[0])
                kind = Rel.LE1 if level == 1 else Rel.LE2
                a, b = (orig[i], redo[i]) if not fwd[i] else (redo[i], orig[i])
                witness = _row_witness(poset, frame, kind, a, b, V[i])
            claims.append(
                EquivClaim(
                    claim=(
                        f"{outer}*{inner} and rebuilt-outer {outer}*{inner} "
                        f"agree at level {level}"
                    ),
                    level=level,
                    holds=bool(ok.all()),
                    witness=witness,
                )
            )
    return claims


def build_preference(
    poset, frame, mode="star", exhaustive=None, sample=None, seed=0
):
    """Rebuild a preference relation from operator behaviour."""
    if mode not in ("star", "bar"):
        raise ValueError("mode must be 'star' or 'bar'")
    if not frame.is_serial():
        raise PreconditionError("reconstruction needs a serial frame")
    V, desc, is_exh = sweep.universe(poset, frame, exhaustive, sample, seed)
    tables = sweep.tense_tables(poset, frame, V)
    if mode == "star":
        rel = _relation_star(poset, frame, V, tables)
    else:
        stars = {
            (outer, inner): sweep.star_table(poset, frame, outer, tables[inner])
            for outer in "PFHG"
            for inner in "PFHG"
        }
        rel = _relation_bar(poset, frame, V, tables, stars)

    missing = [
        (frame.names[s], frame.names[t])
        for s, t in zip(*np.nonzero(frame.rel & ~rel))
    ]
    added = [
        (frame.names[s], frame.names[t])
        for s, t in zip(*np.nonzero(rel & ~frame.rel))
    ]
    result = ReconstructionResult(
        mode=mode,
        names=list(frame.names),
        relation=rel,
        coverage=desc,
        exhaustive=is_exh,
        sample=sample,
        seed=seed,
        contains_original=not missing,
        missing=missing,
        added=added,
    )
    rebuilt = TimeFrame(frame.names, rel)
    if rebuilt.is_serial():
        result.claims = _equiv_claims(poset, frame, rebuilt, V, tables, mode)
    return result


def verify_reconstruction(poset, frame, result):
    """Recompute the rebuild and re-check every claim it makes."""
    redo = build_preference(
        poset,
        frame,
        mode=result.mode,
        exhaustive=result.exhaustive,
        sample=result.sample,
        seed=result.seed,
    )
    reproducible = bool((redo.relation == result.relation).all())
    claims_ok = all(c.holds for c in redo.claims)
    strength = "proved on fixture" if result.exhaustive else "supported (sampled)"
    notes = [f"coverage: {result.coverage}", f"claims are {strength}"]
    notes += [c.line() for c in redo.claims]
    if not reproducible:
        notes.append("stored relation does not match the recomputation")
    witness = None
    if redo.missing:
        witness = {"lost pair": "->".join(redo.missing[0])}
    elif not claims_ok:
        bad = next(c for c in redo.claims if not c.holds)
        witness = bad.witness or {"claim": bad.claim}
    return LawReport(
        law=f"reconstruction ({result.mode})",
        universe=result.coverage,
        passed=reproducible and redo.contains_original and claims_ok,
        checked=len(redo.claims) + 1,
        witness=witness,
        notes=notes,
    )
