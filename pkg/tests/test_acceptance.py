"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Everything asserted here is exact (zero residual); run with `pytest -s
tests/test_acceptance.py` to see the per-criterion lines.
"""

import itertools
import random
import time

import pytest

from qgl3 import conditions, poincare, rmatrix
from qgl3.catalog import SolutionData, validate_record
from qgl3.poincare import classical_dim
from qgl3.scalar import Context, Param, parse_scalar
from qgl3.tensor import IDX3, Tensor3, cyclicity_residual, decompose, recompose
from qgl3.verify import VerifyConfig, verify_solution

ALL_IDS = None  # filled by fixture


@pytest.fixture(scope="module")
def data_cache(catalog):
    cache = {}
    for sid in catalog.list():
        cache[sid] = SolutionData.from_record(catalog.get(sid))
    return cache


def _line(num, ok, text):
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, text


def test_criterion_1_tensor_suite(catalog, data_cache):
    """All finite tensor conditions, 26 solutions, fully symbolic, < 2 min."""
    t0 = time.time()
    failures = []
    for sid in catalog.list():
        rep = verify_solution(
            data_cache[sid], depth="tensor", config=VerifyConfig(depth="tensor")
        )
        cat_reports = validate_record(data_cache[sid])
        if not rep.ok or not all(r.ok for r in cat_reports):
            failures.append(sid)
    elapsed = time.time() - t0
    _line(
        1,
        not failures and elapsed < 120,
        f"tensor-condition suite exact-zero for 26/26 solutions in {elapsed:.1f}s"
        + (f"; failures: {failures}" if failures else ""),
    )


def test_criterion_2_q_roots():
    """solve_q returns {1}, {z3, z3^2}, {u, 1/u} for tr = 3, 0, 1+u+1/u."""
    ctx = Context(36, [Param("u", 1)])
    P = lambda s: parse_scalar(ctx, s)
    ok = True
    q1, q2 = rmatrix.solve_q(P("3"))
    ok &= q1 == ctx.one and q2 == ctx.one
    q1, q2 = rmatrix.solve_q(P("0"))
    ok &= {q1, q2} == {P("z3"), P("z3^2")}
    q1, q2 = rmatrix.solve_q(P("1+u+1/u"))
    ok &= {q1, q2} == {P("u"), P("1/u")} and q1 * q2 == ctx.one
    _line(2, bool(ok), "q roots exactly {1}, {z3,z3^2}, {u,1/u} with product 1")


APPENDIX_IDS = [
    "A1", "A2", "A3", "A4", "B1", "B2", "C1",
    "D1", "D2", "E1", "E2", "F1", "F2", "F3", "F4", "F5", "F6", "G2",
]


def test_criterion_3_yang_baxter_hecke(catalog, data_cache):
    t0 = time.time()
    problems = []
    for sid in catalog.list():
        data = data_cache[sid]
        built = rmatrix.rmatrix_for(data)
        if not rmatrix.check_ybe(built).ok:
            problems.append((sid, "ybe"))
        if not rmatrix.check_hecke(built).ok:
            problems.append((sid, "hecke"))
        if sid[0] in "AFG":
            from qgl3.tensor import Mat9

            if built * built != Mat9.identity(data.ctx):
                problems.append((sid, "R^2=1"))
        if sid in APPENDIX_IDS:
            printed = rmatrix.appendix_rmatrix(data, normalized=False)
            if printed is None or not rmatrix.check_ybe(printed).ok:
                problems.append((sid, "appendix ybe"))
            if not rmatrix.check_appendix_match(data, built).ok:
                problems.append((sid, "appendix entrywise"))
    elapsed = time.time() - t0
    _line(
        3,
        not problems and elapsed < 300,
        f"YBE + Hecke exact for 26/26; 18 printed blocks pass YBE as transcribed and "
        f"match the construction entrywise (C1 after its documented normalization "
        f"factor) in {elapsed:.1f}s" + (f"; problems: {problems}" if problems else ""),
    )


def test_criterion_4_poincare_dimensions(catalog, data_cache):
    t0 = time.time()
    problems = []
    for sid in catalog.list():
        data = data_cache[sid]
        for label, builder, arity, cap in (
            ("plane", poincare.plane_span, 3, 6),
            ("coplane", poincare.coplane_span, 3, 6),
            ("group", poincare.group_span, 9, 4),
        ):
            res = poincare.dims_modular(builder(data), cap, data, seed=0)
            want = [classical_dim(arity, n) for n in range(1, cap + 1)]
            if not res.agreement or res.dims != want:
                problems.append((sid, label, res.dims))
    # symbolic mode agreement on family B (desk scale: planes to degree 3,
    # group to degree 2; higher symbolic group degrees are impractical with
    # two free parameters and are covered by the modular certificate)
    for sid in ("B1", "B2"):
        data = data_cache[sid]
        for builder, arity, cap in (
            (poincare.plane_span, 3, 3),
            (poincare.coplane_span, 3, 3),
            (poincare.group_span, 9, 2),
        ):
            sym = poincare.dims_symbolic(builder(data), cap)
            mod = poincare.dims_modular(builder(data), cap, data, seed=0)
            want = [classical_dim(arity, n) for n in range(1, cap + 1)]
            if sym.dims != want or mod.dims != want:
                problems.append((sid, "symbolic", sym.dims, mod.dims))
    elapsed = time.time() - t0
    _line(
        4,
        not problems,
        f"plane/coplane dims 3,6,10,15,21,28 and group dims 9,45,165,495 for 26/26 "
        f"(3-point modular specialization; symbolic agreement on family B planes "
        f"deg<=3 and group deg<=2) in {elapsed:.1f}s"
        + (f"; problems: {problems}" if problems else ""),
    )


GROUP_LABELS = [[i, j] for i in range(1, 4) for j in range(1, 4)]


def _plane_rank(ordering):
    return [ordering.index(i + 1) for i in range(3)]


def _group_rank(ordering):
    order = [tuple(x) for x in ordering]
    return [order.index((i, j)) for i in range(1, 4) for j in range(1, 4)]


def test_criterion_5_confluence(catalog, data_cache):
    t0 = time.time()
    problems = []
    for sid in catalog.list():
        rec = catalog.get(sid)
        data = data_cache[sid]
        if not rec.has_orderings:  # C1, C2
            for perm in itertools.permutations([1, 2, 3]):
                try:
                    poincare.build_rewrite_system(poincare.plane_span(data), list(perm))
                    problems.append((sid, "orderable", perm))
                except poincare.NonOrderableError:
                    pass
            continue
        try:
            rs = poincare.build_rewrite_system(
                poincare.plane_span(data), rec.orderings["plane"]
            )
            rsc = poincare.build_rewrite_system(
                poincare.coplane_span(data), rec.orderings["coplane"]
            )
            rsg = poincare.build_rewrite_system(
                poincare.group_span(data), rec.orderings["group"], labels=GROUP_LABELS
            )
        except poincare.NonOrderableError as err:
            problems.append((sid, "nonorderable", str(err)))
            continue
        if rs.nrules != 3 or rsc.nrules != 3 or rsg.nrules != 36:
            problems.append((sid, "rule counts", rs.nrules, rsc.nrules, rsg.nrules))
            continue
        for system, ranks, label in (
            (rs, _plane_rank(rec.orderings["plane"]), "plane"),
            (rsc, _plane_rank(rec.orderings["coplane"]), "coplane"),
            (rsg, _group_rank(rec.orderings["group"]), "group"),
        ):
            rep = poincare.check_confluence(system, data.ctx, ranks)
            if not rep.ok:
                problems.append((sid, label, rep.witness))
        triples = poincare.overlap_words(rsg, _group_rank(rec.orderings["group"]))
        if len(triples) != 84:
            problems.append((sid, "triple count", len(triples)))
    elapsed = time.time() - t0
    _line(
        5,
        not problems,
        f"24 orderable solutions: 3 plane + 3 coplane + 36 group rules, 84/84 group "
        f"ambiguities resolve; C1/C2 fail to order under all 6 permutations "
        f"in {elapsed:.1f}s" + (f"; problems: {problems}" if problems else ""),
    )


def test_criterion_6_twist_covariance(catalog):
    t0 = time.time()
    problems = []
    count = 0
    for sid in catalog.list():
        rec = catalog.get(sid)
        if not rec.automorphisms:
            continue  # C1, C2 have none (checked in criterion 5 / rmatrix tests)
        fam = rec.automorphisms[0]
        rng = random.Random(count + 7)
        for mode, choice in (("symbolic", 0), ("specialized", 1)):
            data, z = rmatrix.automorphism_instance(rec, fam, mode, rng, choice_index=choice)
            if not rmatrix.check_automorphism(data, z).ok:
                problems.append((sid, mode, "automorphism"))
                continue
            twisted = rmatrix.twist_solution(data, rmatrix.TwistData(z), check=False)
            if twisted.kappa != data.kappa or (twisted.X * twisted.Q).trace() != (
                data.X * data.Q
            ).trace():
                problems.append((sid, mode, "invariants"))
            if twisted.Q != z.pow(3) * data.Q or twisted.X != z.inverse().pow(3) * data.X:
                problems.append((sid, mode, "Q'=Z^3Q / X'=Z^-3X"))
            rep = verify_solution(
                twisted, depth="tensor", config=VerifyConfig(depth="tensor", retry_conjugate=False)
            )
            if not rep.ok:
                problems.append((sid, mode, [c.name for c in rep.failures()]))
            r_twisted = rmatrix.rmatrix_for(twisted)
            if not rmatrix.check_ybe(r_twisted).ok:
                problems.append((sid, mode, "twisted ybe"))
            if rmatrix.twist_rmatrix(rmatrix.rmatrix_for(data), z) != r_twisted:
                problems.append((sid, mode, "conjugation square"))
            count += 1
    elapsed = time.time() - t0
    _line(
        6,
        not problems and count == 48,
        f"{count} twist instances (symbolic + specialized per automorphism family): "
        f"tensor suite, tr(XQ)/kappa invariance, Q'=Z^3Q, X'=Z^-3X, twisted YBE all "
        f"exact in {elapsed:.1f}s" + (f"; problems: {problems}" if problems else ""),
    )


def test_criterion_7_property_suites(catalog, data_cache):
    t0 = time.time()
    problems = []
    # decomposition round-trip on 20 random tensors
    ctx = Context(36, [Param("u", 1), Param("nu", 1)])
    P = lambda s: parse_scalar(ctx, s)
    rng = random.Random(1234)
    pool = [ctx.one, -ctx.one, P("2"), P("u"), P("nu"), P("1/3"), P("z3"), P("z9^5"), ctx.zero]
    for trial in range(20):
        entries = {
            idx: v for idx in IDX3 if not (v := rng.choice(pool)).is_zero()
        }
        tensor = Tensor3(ctx, rng.choice(["lower", "upper"]), entries)
        alpha, s, t, phi = decompose(tensor)
        if recompose(alpha, s, t, phi) != tensor:
            problems.append(("decompose", trial))
    # scalar field axioms on randomized samples
    vals = [P(x) for x in ("u", "nu", "1/(u+1)", "z9^4+1/3", "(u-nu)/(u+3)", "-2/5")]
    for trial in range(60):
        x, y, z = (rng.choice(vals) for _ in range(3))
        if (x + y) + z != x + (y + z) or x * (y + z) != x * y + x * z or not (x - x).is_zero():
            problems.append(("axioms", trial))
    # mutation sensitivity: 10 single-component sign flips per solution, each
    # run against the full tensor-depth suite.  A flip may survive only when
    # it is provably a reparameterization: the slot holds a free parameter
    # that occurs nowhere else (then the flip is nu -> -nu on the family).
    reference_only = set()
    for sid in catalog.list():
        data = data_cache[sid]
        entries = sorted(data.E.entries) + sorted(data.F.entries)
        mrng = random.Random(sid)
        for _ in range(10):
            pick = mrng.randrange(len(entries))
            which = entries[pick]
            in_e = pick < len(data.E.entries)
            tensor = data.E if in_e else data.F
            mutated = tensor.with_entry(which, -tensor.get(*which))
            # fast algebraic screens first, full suite only when they pass
            e_new = mutated if in_e else data.E
            f_new = data.F if in_e else mutated
            broke = bool(
                cyclicity_residual(e_new, data.Q) or cyclicity_residual(f_new, data.P)
            )
            if not broke:
                broke = conditions.check_condition_A(e_new, f_new, data.X).status == "fail"
            if not broke:
                bad = SolutionData(
                    data.ctx, sid + "-mut", e_new, f_new, data.X, data.Q, data.q,
                    record=data.record, choices=data.choices, symbols=data.symbols,
                )
                rep = verify_solution(
                    bad, depth="tensor",
                    config=VerifyConfig(depth="tensor", retry_conjugate=False),
                )
                if rep.ok:
                    problems.append((sid, "mutation survived", which))
                    continue
                names = {c.name for c in rep.failures()}
                if names <= {"record_components", "appendix_match"}:
                    # no algebraic identity can see this flip; it lands on an
                    # equivalent solution (reparameterization or rescaling)
                    # and only the stored reference data pins it
                    reference_only.add((sid, which))
                    if not names:
                        problems.append((sid, "no check broke", which))
    # rewriting-vs-rank oracle at degrees <= 4 for every orderable solution
    for sid in catalog.list():
        rec = catalog.get(sid)
        if not rec.has_orderings:
            continue
        data = data_cache[sid]
        rsg = poincare.build_rewrite_system(
            poincare.group_span(data), rec.orderings["group"], labels=GROUP_LABELS
        )
        granks = _group_rank(rec.orderings["group"])
        counts = [poincare.count_normal_monomials(rsg, granks, n) for n in range(1, 5)]
        dims = poincare.dims_modular(poincare.group_span(data), 4, data, seed=1).dims
        if counts != dims:
            problems.append((sid, "rewrite-vs-rank", counts, dims))
        rsp = poincare.build_rewrite_system(poincare.plane_span(data), rec.orderings["plane"])
        pranks = _plane_rank(rec.orderings["plane"])
        pcounts = [poincare.count_normal_monomials(rsp, pranks, n) for n in range(1, 5)]
        pdims = poincare.dims_modular(poincare.plane_span(data), 4, data, seed=1).dims
        if pcounts != pdims:
            problems.append((sid, "plane rewrite-vs-rank", pcounts, pdims))
    elapsed = time.time() - t0
    ref_note = ""
    if reference_only:
        pretty = sorted(
            f"{sid}:{''.join(str(i + 1) for i in which)}" for sid, which in reference_only
        )
        ref_note = (
            f"; {len(pretty)} flips land on equivalent solutions (free-parameter "
            f"sign or rescaling) and are caught only by the stored reference data "
            f"(record/appendix): {pretty}"
        )
    _line(
        7,
        not problems,
        f"decomposition round-trip x20, field axioms x60, 260 random mutations each "
        f"break a check under the full suite{ref_note}; rewriting-vs-rank "
        f"dimension agreement at degrees <=4 for all orderable solutions "
        f"in {elapsed:.1f}s" + (f"; problems: {problems[:4]}" if problems else ""),
    )
