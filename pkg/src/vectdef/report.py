"""Verification suites as deterministic, JSON-ready records.

Every check is a task ``(suite, name, shift, args)`` evaluated by a
module-level function, so the suites can fan out to a process pool; the
assembled report keeps task order regardless of completion order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__
from .catalog import catalog_hash, class_recipe, entry, entry_keys, table1_keys
from .cochains import Cochain1, coboundary1, coboundary2
from .deformation import block_conditions, block_text
from .identities import (WITNESS_CLAIMS, block_basis, check_claim, compare_block, derived_symbols,
                         low_shift_identities, resonant_six_constants, shift_seven_coefficient,
                         singular_weight_analysis, verify_recipes)
from .oracle import MAX_DEGREE, SAMPLE_LAMBDAS, check_cocycle1, check_cocycle2, check_equal2
from .published import (COEFFICIENT_TABLES, EXEMPT_BLOCKS, PRINTED_SINGULAR_WEIGHTS,
                        PUBLISHED_BLOCKS, published_block)
from .scalar import LAMBDA, QuadExt, Scalar, parse_weight, weight_text
from .solver import is_coboundary, one_cocycle_triviality

ASSUMPTIONS = [
    "the tabulated 1-cocycle families span the first cohomology of each differential-operator module",
    "the listed 2-cocycle classes span the second cohomology of each module",
]

# generic checks sample the first two weights; the third is kept for ad-hoc use
ORACLE_LAMBDAS = SAMPLE_LAMBDAS[:2]


def _lambdas(weight: Scalar):
    return ORACLE_LAMBDAS if not weight.is_const() else (None,)


def _bound(order: int) -> int:
    return min(order + 2, MAX_DEGREE)


def _record(id_: str, topic: str, passed: bool, **data) -> dict:
    data.pop("id", None)
    return {**data, "id": id_, "topic": topic, "status": "pass" if passed else "fail"}


def _nontrivial_text(nontrivial: bool, assume: bool) -> str:
    if not nontrivial:
        return "coboundary"
    return "nonzero class" if assume else "not a coboundary of the homogeneous ansatz"


# ------------------------------------------------------------ table 1

def _table1_family(key: str, assume: bool) -> dict:
    c = entry(key).instantiate()
    closed = not coboundary1(c).body
    triv = one_cocycle_triviality(c)
    oracle = check_cocycle1(c.body, c.weight, c.shift, _bound(c.shift + 2), _lambdas(c.weight))
    return _record(f"table1:{key}", "1-cocycle family", closed and not triv.trivial and oracle.passed,
                   block=block_text((c.weight, c.shift)), closed=closed,
                   nontriviality=_nontrivial_text(not triv.trivial, assume),
                   certificate=None if triv.certificate is None else [x.pretty() for x in triv.certificate],
                   oracle=oracle.to_json())


def _table1_specialization(key: str, assume: bool) -> dict:
    e = entry(key)
    generic = Cochain1(LAMBDA, e.shift, e.build(e.weight))
    closed = not coboundary1(generic).body
    return _record(f"table1:{key}@generic", "cocycle only at its resonant weight", not closed,
                   closedAtGenericWeight=closed)


# ----------------------------------------------------------- 2-cocycles

def _displayed(key: str, assume: bool) -> dict:
    disp = entry(key).instantiate()
    closed = not coboundary2(disp).body
    nontrivial = closed and not is_coboundary(disp)
    oracle = check_cocycle2(disp.body, disp.weight, disp.shift, _bound(disp.shift + 3), _lambdas(disp.weight))
    return _record(f"cocycle2:{key}", "displayed 2-cocycle", closed and nontrivial and oracle.passed,
                   block=block_text(disp.block()), closed=closed,
                   nontriviality=_nontrivial_text(nontrivial, assume) if closed else "not closed",
                   oracle=oracle.to_json())


def _recipe(key: str, assume: bool) -> dict:
    rc = verify_recipes([key])[0]
    return _record(f"recipe:{key}", "displayed 2-cocycle equals its cup-product recipe", rc.ok,
                   nontriviality=_nontrivial_text(rc.recipe_nontrivial, assume), **rc.to_json())


def _low_shift(index: int, assume: bool) -> dict:
    ident = low_shift_identities()[index]
    return _record(f"identity:{ident.id}", "exact low-shift cup identity", ident.holds, **ident.to_json())


def _boundary(weight: str, shift: int, expect_trivial: bool, assume: bool) -> dict:
    w = parse_weight(weight)
    om = class_recipe(w, shift)
    trivial = is_coboundary(om)
    return _record(f"boundary:k{shift}@{weight}", "cup-product class at a boundary weight",
                   trivial == expect_trivial, block=block_text((w, shift)),
                   expected=_nontrivial_text(not expect_trivial, assume),
                   found=_nontrivial_text(not trivial, assume))


def _witness(index: int, assume: bool) -> dict:
    claim = WITNESS_CLAIMS[index]
    res = check_claim(claim)
    data = res.to_json()
    oracle = None
    if res.coords is not None:
        om = claim.cup()
        recon = coboundary1(res.witness)
        for key, b in block_basis(om.weight, om.shift):
            c = res.coords.get(key)
            if c:
                recon = recon + b.scale(c)
        oracle = check_equal2(om.body, recon.body, _bound(om.shift + 2), _lambdas(om.weight)).to_json()
    passed = res.ok and (oracle is None or oracle["passed"])
    return _record(f"witness:{claim.id}", "coboundary witness of a cup product", passed,
                   oracle=oracle, note=claim.note, **data)


def _resonant_six(assume: bool) -> dict:
    consts = resonant_six_constants()
    conj = all(a.conj() == b for a, b in ((consts[0].R, consts[1].R), (consts[0].S, consts[1].S),
                                          (consts[0].T, consts[1].T)))
    shaped = all(all(c.witnesses_proportional) for c in consts)
    return _record("constants:k6@a_i", "derived shift-6 constants at a_i", conj and shaped,
                   galoisConjugate=conj, witnessesOfPrintedShape=shaped,
                   values=[c.to_json() for c in consts])


def _shift_seven(assume: bool) -> dict:
    r = shift_seven_coefficient()
    return _record("constants:k7", "shift-7 cup coordinate", r.ok,
                   coefficient=r.coefficient.pretty(), expected=r.expected.pretty(),
                   witness=r.witness.body.to_json())


# ----------------------------------------------------------- conditions

def _published(block_id: str, assume: bool) -> dict:
    pub = published_block(block_id)
    cmp = compare_block(pub, derived_symbols() if pub.symbols else {})
    return _record(f"conditions:{block_id}", f"printed conditions ({pub.compare})", cmp.matches,
                   note=pub.note, **cmp.to_json())


def _exempt(index: int, assume: bool) -> dict:
    label, weight, shift = EXEMPT_BLOCKS[index]
    a = block_conditions(parse_weight(weight), shift)
    return _record(f"exempt:{label}", "block without a second-order condition", not a.conditions,
                   block=block_text(a.block), conditions=[c.render() for c in a.conditions])


def _singular(shift: int, assume: bool) -> dict:
    rep = singular_weight_analysis(shift)
    printed = sorted((Scalar.coerce(parse_weight(w)).const_value() for w in PRINTED_SINGULAR_WEIGHTS[shift]),
                     key=QuadExt.sort_key)
    found = sorted(rep.differing, key=QuadExt.sort_key)
    return _record(f"singular:k{shift}", "weights where the conditions change", found == printed,
                   printed=[weight_text(Scalar.coerce(v)) for v in printed],
                   derived=[weight_text(Scalar.coerce(v)) for v in found],
                   candidates=[weight_text(Scalar.coerce(v)) for v in rep.candidates])


# ------------------------------------------------------------ suites

@dataclass(frozen=True)
class Task:
    suite: str
    name: str
    shift: int
    args: tuple


_FUNCS = {
    "table1": _table1_family, "table1-special": _table1_specialization, "displayed": _displayed,
    "recipe": _recipe,
    "low-shift": _low_shift, "boundary": _boundary, "witness": _witness,
    "resonant-six": _resonant_six, "shift-seven": _shift_seven, "published": _published,
    "exempt": _exempt, "singular": _singular,
}


def table1_tasks() -> list[Task]:
    tasks = [Task("table1", "table1", entry(k).shift, (k,)) for k in table1_keys()]
    tasks.append(Task("table1", "table1-special", 6, ("C[a1,a1+6]",)))
    return tasks


_K8_ROOTS = ("-7/2-1/2*sqrt(39)", "-7/2+1/2*sqrt(39)")


def cocycle2_tasks() -> list[Task]:
    keys = _recipe_keys()
    tasks = [Task("cocycles2", "displayed", entry(k).shift, (k,)) for k in keys]
    tasks += [Task("cocycles2", "recipe", entry(k).shift, (k,)) for k in keys]
    tasks += [Task("cocycles2", "low-shift", 1 if i < 3 else 2, (i,)) for i in range(5)]
    for w, expect in (("1", False), ("0", True), ("-6", True)):
        tasks.append(Task("cocycles2", "boundary", 7, (w, 7, expect)))
    tasks.append(Task("cocycles2", "boundary", 8, ("1", 8, False)))
    tasks += [Task("cocycles2", "boundary", 8, (w, 8, True)) for w in _K8_ROOTS]
    for i, claim in enumerate(WITNESS_CLAIMS):
        tasks.append(Task("cocycles2", "witness", claim.cup().shift, (i,)))
    tasks.append(Task("cocycles2", "resonant-six", 6, ()))
    tasks.append(Task("cocycles2", "shift-seven", 7, ()))
    return tasks


def _recipe_keys() -> list[str]:
    return [k for k in entry_keys() if entry(k).kind == "cocycle2" and entry(k).recipe is not None]


def conditions_tasks() -> list[Task]:
    tasks = [Task("conditions", "published", b.shift, (b.id,)) for b in PUBLISHED_BLOCKS + COEFFICIENT_TABLES]
    tasks += [Task("conditions", "exempt", shift, (i,)) for i, (_, _, shift) in enumerate(EXEMPT_BLOCKS)]
    tasks += [Task("conditions", "singular", k, (k,)) for k in sorted(PRINTED_SINGULAR_WEIGHTS)]
    return tasks


SUITES = {"table1": table1_tasks, "cocycles2": cocycle2_tasks, "conditions": conditions_tasks}


def run_task(task: Task, assume: bool = True) -> dict:
    rec = _FUNCS[task.name](*task.args, assume)
    rec["shift"] = task.shift
    return rec


def _run_pair(pair):
    return run_task(*pair)


def worker_count() -> int:
    raw = os.environ.get("VECTDEF_WORKERS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"VECTDEF_WORKERS must be an integer, got {raw!r}") from None
    return max(1, n)


def run_tasks(tasks: list[Task], assume: bool = True, workers: int | None = None) -> list[dict]:
    workers = worker_count() if workers is None else workers
    pairs = [(t, assume) for t in tasks]
    if workers <= 1 or len(tasks) <= 1:
        return [_run_pair(p) for p in pairs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_pair, pairs))


def filter_shifts(tasks: list[Task], shifts: set[int] | None) -> list[Task]:
    return tasks if shifts is None else [t for t in tasks if t.shift in shifts]


def document(command: str, records: list[dict], assume: bool = True, **extra) -> dict:
    failed = sum(r.get("status") == "fail" for r in records)
    return {
        "tool": "vectdef",
        "version": __version__,
        "catalogHash": catalog_hash(),
        "command": command,
        "externalAssumptions": ASSUMPTIONS if assume else [],
        "sampleWeights": [str(x) for x in ORACLE_LAMBDAS],
        **extra,
        "records": records,
        "summary": {"total": len(records), "passed": len(records) - failed, "failed": failed},
    }


def verify(suite: str, shifts: set[int] | None = None, assume: bool = True,
           workers: int | None = None) -> dict:
    tasks = filter_shifts(SUITES[suite](), shifts)
    return document(f"verify-{suite}", run_tasks(tasks, assume, workers), assume)


__all__ = ["Task", "SUITES", "run_task", "run_tasks", "verify", "document", "worker_count",
           "table1_tasks", "cocycle2_tasks", "conditions_tasks", "filter_shifts", "ASSUMPTIONS"]
