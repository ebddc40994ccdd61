import pytest

from qgl3.catalog import SolutionData
from qgl3.conditions import (
    check_characteristic_commutes,
    check_condition_A,
    check_condition_B,
    check_EF_automorphism,
    check_MN_structure,
    check_projector,
)
from qgl3.scalar import parse_scalar
from qgl3.tensor import Matrix3, Mat9, antisymmetrizer, epsilon_tensor, kappa


def test_condition_A_pass_and_scaled_fail(solution_cache):
    b1 = solution_cache("B1")
    assert check_condition_A(b1.E, b1.F, b1.X).status == "pass"
    f2 = b1.F.scale(b1.ctx.rational(2))
    rep = check_condition_A(b1.E, f2, b1.X)
    assert rep.status == "fail" and rep.witness is not None


def test_condition_B_pass_cases(solution_cache):
    for sid in ("A2", "B1"):
        data = solution_cache(sid)
        rep = check_condition_B(data.antisym, data.X * data.Q, data.kappa)
        assert rep.status == "pass", (sid, rep.witness)


def test_condition_B_perturbed_nu_fails(catalog):
    """Perturbation oracle: replacing nu by nu+1 in F breaks condition B."""
    data = SolutionData.from_record(catalog.get("B1"))
    ctx = data.ctx
    P = lambda s: parse_scalar(ctx, s)
    fbad = data.F.with_entry((0, 2, 1), P("-u/((nu+1)*(u+1))"))
    fbad = fbad.with_entry((2, 1, 0), P("-u/((nu+1)*(u+1))"))
    fbad = fbad.with_entry((1, 0, 2), P("-1/((nu+1)*(u+1))"))
    a = antisymmetrizer(data.E, fbad, data.X)
    rep = check_condition_B(a, data.X * data.Q, kappa(data.E, fbad))
    assert rep.status == "fail"


def test_condition_B_kappa_minus_one_skips(solution_cache):
    a2 = solution_cache("A2")
    rep = check_condition_B(a2.antisym, a2.X * a2.Q, -a2.ctx.one)
    assert rep.status == "skipped"


def test_characteristic_commute_fail_case(solution_cache):
    a2 = solution_cache("A2")
    ctx = a2.ctx
    P = lambda s: parse_scalar(ctx, s)
    x = Matrix3.diag(ctx, [ctx.one, P("z3"), P("z3^2")])
    jordan = Matrix3(ctx, [[ctx.one, ctx.one, ctx.zero],
                           [ctx.zero, ctx.one, ctx.zero],
                           [ctx.zero, ctx.zero, ctx.one]])
    rep = check_characteristic_commutes(jordan, jordan, x, x.inverse())
    assert rep.status == "fail"


def test_characteristic_p_equals_x2q(solution_cache):
    from qgl3.tensor import cyclic_matrix

    for sid in ("D1", "E2", "F6"):
        data = solution_cache(sid)
        assert cyclic_matrix(data.F) == data.X * data.X * data.Q


def test_EF_automorphism_scaling_fails(solution_cache):
    a2 = solution_cache("A2")
    ctx = a2.ctx
    two = Matrix3.identity(ctx).scale(ctx.rational(2))
    eps = epsilon_tensor(ctx)
    rep = check_EF_automorphism(eps, a2.F, two, two)
    assert rep.status == "fail"  # (XXX)F scales by 8


def test_projector_identity_fails_trace(solution_cache):
    g2 = solution_cache("G2")
    rep = check_projector(Mat9.identity(g2.ctx), g2.X, g2.Q)
    assert rep.status == "fail" and rep.witness["part"] == "trA=3"


def test_projector_passes_for_jordanian(solution_cache):
    for sid in ("G2", "F5"):
        data = solution_cache(sid)
        assert check_projector(data.antisym, data.X, data.Q).status == "pass"


def test_MN_structure_pass(solution_cache):
    for sid in ("A1", "B2"):
        data = solution_cache(sid)
        m, n = data.MN
        rep = check_MN_structure(
            m, n, data.e_coeff, data.f_coeff, data.g_coeff, data.h_coeff, data.kappa
        )
        assert rep.status == "pass", (sid, rep.witness)


def test_verify_solution_aggregator(catalog):
    from qgl3.conditions import verify_solution

    rep = verify_solution(catalog.get("C1"), depth="tensor")
    assert rep.ok
    names = [c.name for c in rep.checks]
    assert "condition_A" in names and "condition_B" in names and "yang_baxter" in names
    assert any("kappa = 0" in note for note in rep.notes)


def test_verify_mutated_record_fails(catalog):
    from qgl3.catalog import SolutionData
    from qgl3.verify import verify_solution

    data = SolutionData.from_record(catalog.get("A2"))
    flipped = data.E.with_entry((0, 1, 2), -data.E.get(0, 1, 2))
    mutated = SolutionData(
        data.ctx, "A2-mutated", flipped, data.F, data.X, data.Q, data.q
    )
    rep = verify_solution(mutated, depth="tensor")
    assert not rep.ok
