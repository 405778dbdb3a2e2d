"""Acceptance criteria 1-9, each checked exactly and within its time budget.

Every test prints one ``ACCEPTANCE <k> PASS|FAIL`` line (visible with -s or
in the -v report) and asserts the same condition.  Criterion 9 is the set of
corrupted-input probes; each suite below contributes at least one.
"""

from __future__ import annotations

import random
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from samples import certified_pushforward, perturbed_rnc_web
from webalg import generators as gen
from webalg import poincare, projective, structure, web
from webalg.errors import PreconditionError
from webalg.jets import MJet
from webalg.pipeline import run_pipeline

SOUNDNESS: dict = {}


def report(k: int, ok: bool, detail: str, started: float, budget: float) -> None:
    elapsed = time.perf_counter() - started
    in_time = elapsed < budget
    verdict = "PASS" if ok and in_time else "FAIL"
    print(f"ACCEPTANCE {k} {verdict} {detail} time={elapsed:.2f}s budget={budget:.0f}s")
    assert ok, detail
    assert in_time, f"criterion {k} took {elapsed:.1f}s"


def random_general_forms(rng, n, d):
    while True:
        forms = [[Fraction(rng.randint(-9, 9)) for _ in range(n)] for _ in range(d)]
        if web.forms_in_general_position(forms):
            return forms


# -- 1 ----------------------------------------------------------------------


def test_criterion_1_chern_table():
    t0 = time.perf_counter()
    plane = all(web.chern_bound(2, d) == (d - 1) * (d - 2) // 2 for d in range(3, 11))
    one_more = all(web.chern_bound(n, n + 1) == 1 for n in range(2, 7))
    # soundness: the table must distinguish neighbouring cases
    SOUNDNESS[1] = web.chern_bound(2, 5) != web.chern_bound(2, 6) and web.chern_bound(3, 3) == 0
    report(1, plane and one_more, f"plane={plane} n+1={one_more}", t0, 1)


# -- 2 ----------------------------------------------------------------------


def test_criterion_2_power_rank_law():
    t0 = time.perf_counter()
    rng = random.Random(2)
    plane_ok = True
    for d in range(3, 9):
        forms = random_general_forms(rng, 2, d)
        plane_ok &= all(web.power_rank(forms, q) == min(d, q + 1) for q in range(d + 1))
    ineq_ok = True
    for i in range(100):
        n = 3 + i % 2
        d = rng.randint(n + 1, 2 * n + 3)
        forms = random_general_forms(rng, n, d)
        r = [web.power_rank(forms, q) for q in range(d + 1)]
        for q in range(d):
            ineq_ok &= r[q + 1] >= min(d, r[q] + n - 1)
            ineq_ok &= r[q] >= min(d, q * (n - 1) + 1)
    # soundness: proportional forms must be refused, not ranked
    try:
        web.power_rank([[1, 0], [2, 0], [0, 1], [1, 1]], 1)
        SOUNDNESS[2] = False
    except PreconditionError:
        SOUNDNESS[2] = True
    report(2, plane_ok and ineq_ok, f"plane_law={plane_ok} inequalities={ineq_ok}", t0, 10)


# -- 3 ----------------------------------------------------------------------


def test_criterion_3_rank_certification():
    t0 = time.perf_counter()
    details = []
    ok = True
    for n, d, J in ((3, 7, 5), (4, 9, 5)):
        # filtration at J and at J+1 (the stabilization check compares J and J+1)
        w_high = gen.rnc_linear_web(n, d, range(d), J + 1)
        rs_high = web.abelian_relations(w_high)
        stab = web.stabilization_check(w_high, rs_high)
        w = gen.rnc_linear_web(n, d, range(d), J)
        cert = web.certify_max_rank_val1(w)
        pi = web.chern_bound(n, d)
        good = (
            cert.verdict
            and cert.filtration[0] == pi
            and cert.quotient_dims == (d - n, d - 2 * n + 1)
            and stab.stable
        )
        ok &= good
        details.append(f"({n},{d}):E0={cert.filtration[0]} pi={pi} quot={cert.quotient_dims} stable={stab.stable}")
    # pi(4, 9) = 5 + 2: the sum has two positive terms, matching the quotient dims
    assert web.chern_bound(4, 9) == 7
    SOUNDNESS[3] = not web.certify_max_rank_val1(gen.random_web(3, 7, 6, 0)).verdict
    report(3, ok, " ".join(details), t0, 60)


# -- 4 ----------------------------------------------------------------------


def test_criterion_4_family():
    t0 = time.perf_counter()
    U = gen.random_family_U(4, 6, seed=0, degree=2)
    w = gen.family_web_1_5(4, 6, U, 4)
    rs = web.abelian_relations(w)
    stab = web.stabilization_check(w, rs)
    ok = rs.dim == 2 == w.d - w.n == web.chern_bound(4, 6) and stab.stable
    # soundness: a mixed quadratic term destroys the separable relations
    u = list(w.u)
    u[5] = u[5] + MJet(4, 4, {(1, 1, 0, 0): 1})
    broken = web.WebGerm(4, 6, 4, tuple(u))
    SOUNDNESS[4] = web.abelian_relations(broken).dim < 2
    report(4, ok, f"rank={rs.dim} pi={web.chern_bound(4, 6)} stable={stab.stable}", t0, 30)


# -- 5 ----------------------------------------------------------------------


def test_criterion_5_diffeo_invariance():
    t0 = time.perf_counter()
    base = gen.rnc_linear_web(3, 7, range(7), 5)
    ref = web.certify_max_rank_val1(base)
    agree = 0
    for seed in range(20):
        pw = gen.pushforward(base, gen.random_quadratic_diffeo(3, 5, seed))
        assert not pw.is_linear()
        cert = web.certify_max_rank_val1(pw)
        same = (cert.verdict, cert.filtration, cert.quotient_dims, cert.jet1_rank) == (ref.verdict, ref.filtration, ref.quotient_dims, ref.jet1_rank)
        agree += same
    # soundness: a perturbation that is not a diffeomorphism changes the data
    SOUNDNESS[5] = web.certify_max_rank_val1(perturbed_rnc_web(3, 5)).filtration != ref.filtration
    report(5, agree == 20, f"agreeing={agree}/20 filtration={ref.filtration}", t0, 300)


# -- 6 ----------------------------------------------------------------------


def test_criterion_6_projective_suite():
    t0 = time.perf_counter()
    rng = random.Random(6)
    through = recover = True
    for m in range(2, 6):
        ts = rng.sample(range(-30, 30), m + 3)
        pts = [[Fraction(t) ** k for k in range(m + 1)] for t in ts]
        through &= projective.same_curve(projective.rnc_through(pts), projective.RNC.moment(m))
        ts = rng.sample(range(-30, 30), 2 * m + 3)
        pts = [[Fraction(t) ** k for k in range(m + 1)] for t in ts]
        recover &= projective.same_curve(projective.castelnuovo_recover(pts), projective.RNC.moment(m))
    rejected = 0
    for i in range(100):
        m = 2 + i % 4
        pts = [[Fraction(rng.randint(-20, 20)) for _ in range(m + 1)] for _ in range(2 * m + 3)]
        try:
            projective.castelnuovo_recover(pts)
        except ValueError as exc:
            rejected += "Castelnuovo hypothesis fails" in str(exc)
    codims = True
    for m in range(2, 6):
        for d in range(1, 2 * m + 2):
            pts = [[Fraction(rng.randint(-20, 20)) for _ in range(m + 1)] for _ in range(d)]
            codims &= projective.quadric_conditions(pts).codim == d
        pts = [[Fraction(t) ** k for k in range(m + 1)] for t in range(2 * m + 4)]
        codims &= projective.quadric_conditions(pts).codim == 2 * m + 1
    SOUNDNESS[6] = rejected == 100
    ok = through and recover and rejected == 100 and codims
    report(6, ok, f"through={through} recover={recover} rejected={rejected}/100 codims={codims}", t0, 60)


# -- 7 ----------------------------------------------------------------------


def test_criterion_7_coframe_suite():
    t0 = time.perf_counter()
    webs = [certified_pushforward(s, 5, "triangular") for s in (1, 2)]
    webs += [certified_pushforward(s, 5, "quadratic") for s in (1, 2, 3)]
    exact33 = exact35 = exact36 = 0
    for w in webs:
        assert web.certify_max_rank_val1(w).verdict
        cf = structure.adapted_coframe(w)
        exact33 += structure.coframe_residual(w, cf).exact
        so = structure.second_order_conditions(w, cf)
        exact35 += so.exact5
        exact36 += so.exact6
    bad = perturbed_rnc_web(3)
    assert not web.certify_max_rank_val1(bad).verdict
    cf_bad = structure.adapted_coframe(bad)
    so_bad = structure.second_order_conditions(bad, cf_bad)
    detects = not (so_bad.exact5 and so_bad.exact6)
    # soundness: a wrong multiplier k_a must give a nonzero first-order residual
    w = webs[0]
    cf = structure.adapted_coframe(w)
    k = list(cf.k)
    k[0] = k[0] + MJet.variable(1, 3, cf.order)
    SOUNDNESS[7] = detects and not structure.coframe_residual(w, replace(cf, k=tuple(k))).exact
    N = len(webs)
    ok = exact33 == exact35 == exact36 == N and detects
    report(7, ok, f"first_order={exact33}/{N} kdtheta={exact35}/{N} dtheta={exact36}/{N} uncertified_detected={detects}", t0, 300)


# -- 8 ----------------------------------------------------------------------


def test_criterion_8_poincare_suite():
    t0 = time.perf_counter()
    w = certified_pushforward(1, 5)
    checks = run_pipeline(w, seed=8, pairs=10, leaf_pairs=3, generic_pairs=3, grid=5)
    failed = [c.line() for c in checks if not c.ok]
    names = {c.name.split("[")[0] for c in checks}
    required = {
        "span_subsets_full",
        "derivative_completions_full",
        "span_intersection",
        "curve_degree",
        "degree_cancellation",
        "curve_incidence_origin",
        "sigma_identities",
        "leaf_sharing_intersections",
        "generic_intersections",
        "tangent_span",
        "omega_kernel_membership",
    }
    counts = {
        "span_intersection": sum(c.name.startswith("span_intersection[") for c in checks),
        "tangent_span": sum(c.name.startswith("tangent_span[") for c in checks),
    }
    ok = not failed and required <= names and counts == {"span_intersection": 10, "tangent_span": 25}
    for line in failed:
        print(line)
    # soundness: a corrupted relation basis and a corrupted valuation-1 row must FAIL
    bad = run_pipeline(w, seed=8, pairs=1, leaf_pairs=1, generic_pairs=1, grid=1, corrupt=True)
    cf = structure.adapted_coframe(w)
    pd = poincare.build(w)
    bad_field = poincare.curve_field(poincare.corrupt_valuation_one(pd), cf, strict=False)
    SOUNDNESS[8] = any(not c.ok for c in bad) and not bad_field.degree_ok
    report(8, ok, f"checks={len(checks)} failed={len(failed)} probes={counts}", t0, 600)


# -- 9 ----------------------------------------------------------------------


def test_criterion_9_soundness_probes():
    t0 = time.perf_counter()
    missing = [k for k in range(1, 9) if k not in SOUNDNESS]
    if missing:
        pytest.skip(f"suites {missing} did not run in this session")
    caught = [k for k in range(1, 9) if SOUNDNESS[k]]
    report(9, len(caught) == 8, f"corrupted inputs caught in suites {caught}", t0, 5)
