"""Acceptance criteria 1-8, one test each.

Run under pytest, the terminal summary prints one PASS/FAIL line per
criterion; ``python tests/test_acceptance.py`` prints the same lines.
"""

import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from linkfloer import complex as cx  # noqa: E402
from linkfloer.complex import compose  # noqa: E402
from linkfloer.derivmaps import cfk_involution, phi, psi_component, sarkar_map  # noqa: E402
from linkfloer.errors import GradingViolation  # noqa: E402
from linkfloer.fixtures import GRIDS, MODELS, ONE_PAIR_KNOTS, base_complex  # noqa: E402
from linkfloer.homotopy import solve_homotopy  # noqa: E402
from linkfloer.linkconfig import Coloring  # noqa: E402
from linkfloer.quasistab import arc_checks, relation_suite  # noqa: E402
from linkfloer.theorems import homotopy_relations, thm_b_verify, thm_d_verify  # noqa: E402

import oracles  # noqa: E402
from conftest import grid, pipeline  # noqa: E402

RESULTS: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    assert ok, detail


def failed(rep):
    return [s["step"] for s in rep["steps"] if s["status"] in ("fail", "UNSAT")]


def test_criterion_1_defect_law():
    t = time.perf_counter()
    bad = []
    for name in ("unknot2", "link4", "trefoil5"):
        C = base_complex(name)
        if cx.d_squared_defect(C) != cx.expected_defect(C.cfg):
            bad.append(f"{name}: defect")
        if not cx.square_is_zero(C.with_coloring(Coloring.trivial(C.cfg))):
            bad.append(f"{name}: colored d^2")
    secs = time.perf_counter() - t
    record(1, not bad and secs < 10, f"unknot2, link4, trefoil5 exact; {secs:.2f} s {bad or ''}")


def test_criterion_2_grading_law():
    # STRICT_GRADING makes every ChainComplex and ChainMap constructor check its entries
    assert cx.STRICT_GRADING
    checked = 0
    for name in GRIDS:
        base_complex(name).check_grading()
        checked += 1
    for name in MODELS:
        MODELS[name]().check_grading()
        checked += 1
    for name in ("two_pair_unknot", "three_pair_unknot", "disjoint_unlink", "two_pair_trefoil"):
        C = pipeline(name)
        relation_suite(C)
        homotopy_relations(C)
        checked += 1
    # negative control: a degree-breaking entry is rejected
    T = grid("unknot2")
    try:
        cx.ChainMap(T, T, [{0: cx.ONE}, {}], (1, 1), True, "bad")
        rejected = False
    except GradingViolation:
        rejected = True
    record(2, rejected, f"strict per-entry check active across the suite; {checked} constructions rechecked")


def test_criterion_3_exact_suite():
    t = time.perf_counter()
    names = []
    bad = []
    for name in ("two_pair_unknot", "three_pair_unknot", "three_pair_unknot_split"):
        for coloring in ("trivial", "none", "merge_w:K"):
            for c in relation_suite(pipeline(name, coloring=coloring)):
                names.append(c.name)
                if not c.ok:
                    bad.append(f"{name}/{coloring}: {c.name}")
    secs = time.perf_counter() - t

    def has(prefix):
        return any(n.startswith(prefix) for n in names)

    # S- Psi_z' S+ = 1 for both adjacent z' (the new z and the old one after w)
    covered = all(has(p) for p in ("S+S- = Phi_", "S-S+ = 0", "S- Psi_z S+ = 1", "S- Psi_z1 S+ = 1",
                                   "S+ commutes with Psi_", "S- commutes with Psi_", "S+ Psi_z1 = (Psi_z1+Psi_z) S+",
                                   "Psi_z1 S- = S- (Psi_z1+Psi_z)", "Psi_K Psi_A = Psi_cA Psi_A"))
    record(3, not bad and covered and secs < 5,
           f"{len(names)} exact identities on two- and three-pair blocks; {secs:.2f} s {bad[:3] or ''}")


def test_criterion_4_homotopy_suite():
    t = time.perf_counter()
    bad = []
    steps = 0
    models = ["two_pair_unknot", "two_pair_unknot_merged", "three_pair_unknot", "three_pair_unknot_split",
              "disjoint_unlink"]
    for name in models:
        rep = homotopy_relations(pipeline(name))
        steps += len(rep["steps"])
        bad += [f"{name}: {s}" for s in failed(rep)]
    for name in ("unknot2", "link4", "unknot4"):
        for coloring in ("trivial", "merge_w:K0"):
            rep = homotopy_relations(grid(name, coloring))
            steps += len(rep["steps"])
            bad += [f"{name}/{coloring}: {s}" for s in failed(rep)]
    # trefoil: identities exact on every complex, plus the solver on Psi_K^2
    T = grid("trefoil5", "merge_w:K0")
    exact = [cx.is_chain_map(phi(T, w)).ok for w in T.cfg.w_basepoints()]
    exact += [cx.d_squared_defect(T) == cx.expected_defect(T.cfg), cx.square_is_zero(T)]
    P = psi_component(T, "K0")
    F = compose(P, P)
    res = solve_homotopy(F, cx.zero_map(T, T, F.shift, F.alex_shift))
    if not all(exact):
        bad.append("trefoil5 exact subset")
    if not res.found:
        bad.append("trefoil5 Psi_K^2")
    # the arc identity is exact on blocks but holds only up to homotopy on this grid
    arc_exact = sum(c.ok for c in arc_checks(T))
    arc_total = len(arc_checks(T))
    secs = time.perf_counter() - t
    record(4, not bad, f"{steps} solver relations on models and grids <= 4; trefoil5 {len(exact)} exact + "
                       f"Psi_K^2 ({res.report['unknowns']} unknowns); trefoil5 arc identity exact in "
                       f"{arc_exact}/{arc_total} (rest by homotopy, see ledger); {secs:.2f} s {bad[:3] or ''}")


def test_criterion_5_full_twist():
    bad = []
    detail = []
    for label, C, comp in (("two_pair_unknot", pipeline("two_pair_unknot"), "K"),
                           ("unknot4", grid("unknot4"), "K0")):
        rep = thm_b_verify(C, comp)
        names = {s["step"]: s["status"] for s in rep["steps"]}
        for step in ("E ~ 1 + Phi_K Psi_K", "S- (prod Psi_A) S+ ~ 1", "(1 + Phi_K Psi_K)^2 ~ 1"):
            if names.get(step) not in ("exact", "homotopic-with-certificate"):
                bad.append(f"{label}: {step}")
        bad += [f"{label}: {s}" for s in failed(rep)]
        detail.append(f"{label} {names['E ~ 1 + Phi_K Psi_K']} ({rep['seconds']} s)")
    record(5, not bad, "; ".join(detail) + (f" {bad}" if bad else ""))


def test_criterion_6_partial_twist():
    rep = thm_d_verify(pipeline("two_pair_unknot_merged"), "K")
    names = {s["step"]: s["status"] for s in rep["steps"]}
    ok = rep["ok"] and names.get("E_tau ~ tau") in ("exact", "homotopic-with-certificate") \
        and names.get("tau^2 ~ 1 + Phi_K Psi_K") in ("exact", "homotopic-with-certificate")
    record(6, ok, f"E_tau ~ tau: {names.get('E_tau ~ tau')}; tau^2 ~ sarkar: {names.get('tau^2 ~ 1 + Phi_K Psi_K')}")


def test_criterion_7_involution_consistency():
    bad = []
    for name in ONE_PAIR_KNOTS:
        K = MODELS[name]()
        K.check_grading()
        K = K.with_coloring(Coloring.trivial(K.cfg))
        if not cx.square_is_zero(K) or cfk_involution(K) != sarkar_map(K, "K"):
            bad.append(name)
    record(7, not bad, f"exact on {', '.join(ONE_PAIR_KNOTS)} {bad or ''}")


def test_criterion_8_homology_sanity():
    r5 = cx.f2_homology_ranks(base_complex("trefoil5"))
    r6 = cx.f2_homology_ranks(base_complex("trefoil6"))
    by_alex: dict[int, int] = {}
    for (_, alex), r in r5.items():
        a = cx.total_alexander(alex)
        by_alex[a] = by_alex.get(a, 0) + r
    symmetric = all(by_alex.get(-a, 0) == r for a, r in by_alex.items())
    t5, t6 = sum(r5.values()), sum(r6.values())
    g5, g6 = GRIDS["trefoil5"], GRIDS["trefoil6"]
    chi5 = cx.euler_characteristic(r5) == oracles.expected_euler(g5.O, g5.X)
    chi6 = cx.euler_characteristic(r6) == oracles.expected_euler(g6.O, g6.X)
    record(8, symmetric and t6 == 2 * t5 and chi5 and chi6,
           f"symmetric={symmetric}, ranks {t5} -> {t6}, Euler characteristic matches oracle: {chi5 and chi6}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
