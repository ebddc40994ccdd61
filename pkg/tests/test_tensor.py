import itertools
import random
from fractions import Fraction

import pytest

from qgl3.scalar import Context, Param, parse_scalar
from qgl3.tensor import (
    EPS,
    IDX3,
    CompletionError,
    DegenerateIntersectionError,
    Matrix3,
    RelationFamily,
    SingularMatrixError,
    Tensor3,
    antisymmetrizer,
    char_matrix,
    char_matrix_y,
    complete_by_cyclicity,
    cyclic_matrix,
    decompose,
    epsilon_tensor,
    kappa,
    normalize_pair,
    pairing_matrix,
    recompose,
    solve_intersection,
)


@pytest.fixture(scope="module")
def ctx():
    return Context(36, [Param("u", 1), Param("nu", 1)])


def sympy_cyclicity_oracle(pins, qsym):
    """Brute-force oracle: solve the 27-equation system with sympy.

    Independent of the production path: dense sympy linear algebra over
    QQ(u, nu), free components pinned to zero.
    """
    sympy = pytest.importorskip("sympy")
    u, nu = sympy.symbols("u nu")
    t = {idx: sympy.Symbol(f"t{idx[0]}{idx[1]}{idx[2]}") for idx in IDX3}
    eqs = []
    for (i, j, k) in IDX3:
        expr = t[(i, j, k)]
        for l in range(3):
            expr = expr - qsym[l][k] * t[(l, i, j)]
        eqs.append(expr)
    for idx, val in pins.items():
        eqs.append(t[idx] - val)
    sol = sympy.solve(eqs, list(t.values()), dict=True)
    assert len(sol) == 1
    out = {}
    for idx in IDX3:
        v = sympy.together(sol[0].get(t[idx], sympy.Integer(0)))
        v = v.subs({s: 0 for s in v.free_symbols if str(s).startswith("t")})
        out[idx] = sympy.simplify(v)
    return out, (u, nu)


def test_complete_by_cyclicity_b1_oracle(ctx):
    """Spec example, expected values frozen from the brute-force oracle."""
    sympy = pytest.importorskip("sympy")
    u, nu = sympy.symbols("u nu")
    qsym = [[1, 0, 0], [0, u, 0], [0, 0, 1 / u]]
    oracle, _ = sympy_cyclicity_oracle({(0, 1, 2): 1, (0, 2, 1): -nu}, qsym)
    frozen = {
        (0, 1, 2): 1, (2, 0, 1): u, (1, 2, 0): 1,
        (1, 0, 2): -nu / u, (2, 1, 0): -nu, (0, 2, 1): -nu,
    }
    for idx in IDX3:
        assert sympy.simplify(oracle[idx] - frozen.get(idx, 0)) == 0, idx
    # production path agrees with the frozen values
    P = lambda s: parse_scalar(ctx, s)
    q = Matrix3.diag(ctx, [ctx.one, P("u"), P("1/u")])
    tensor, free = complete_by_cyclicity({(0, 1, 2): ctx.one, (0, 2, 1): P("-nu")}, q, "lower")
    expected = {
        (0, 1, 2): P("1"), (2, 0, 1): P("u"), (1, 2, 0): P("1"),
        (1, 0, 2): P("-nu/u"), (2, 1, 0): P("-nu"), (0, 2, 1): P("-nu"),
    }
    assert tensor.entries == expected


def test_complete_epsilon_trivial(ctx):
    eps = epsilon_tensor(ctx)
    tensor, _ = complete_by_cyclicity(
        {(0, 1, 2): ctx.one, (0, 2, 1): -ctx.one}, Matrix3.identity(ctx), "lower"
    )
    assert tensor == eps


def test_complete_e111_consistent(ctx):
    P = lambda s: parse_scalar(ctx, s)
    q = Matrix3.diag(ctx, [ctx.one, P("z3"), P("z3^2")])
    tensor, _ = complete_by_cyclicity({(0, 0, 0): ctx.one}, q, "lower")
    assert tensor.get(0, 0, 0) == ctx.one


def test_complete_inconsistent_pins(ctx):
    with pytest.raises(CompletionError):
        complete_by_cyclicity(
            {(0, 1, 2): ctx.one, (1, 2, 0): ctx.rational(2)},
            Matrix3.identity(ctx),
            "lower",
        )


def test_intersection_classical(ctx):
    eps = epsilon_tensor(ctx)
    rel = RelationFamily.from_tensor_slices(eps)
    tensor, e, f = solve_intersection(rel)
    assert tensor == eps
    assert e == Matrix3.identity(ctx) and f == Matrix3.identity(ctx)
    assert cyclic_matrix(tensor) == Matrix3.identity(ctx)


def test_intersection_b1(ctx, solution_cache):
    data = solution_cache("B1")
    rel = RelationFamily.from_tensor_slices(data.E)
    tensor, e, f = solve_intersection(rel, scale_to=data.E)
    assert tensor == data.E
    assert cyclic_matrix(tensor) == data.Q


def test_intersection_ambiguous(ctx):
    """Relations x1x2, x2x1, x1x1: the intersection is multi-dimensional."""
    from qgl3.tensor import IntersectionError

    mats = []
    for (a, b) in [(0, 1), (1, 0), (0, 0)]:
        m = [[ctx.zero] * 3 for _ in range(3)]
        m[a][b] = ctx.one
        mats.append(tuple(tuple(r) for r in m))
    rel = RelationFamily(ctx, "lower", tuple(mats))
    with pytest.raises(IntersectionError, match="more than one solution"):
        solve_intersection(rel)


def test_intersection_degenerate(ctx):
    mats = []
    for (a, b) in [(2, 1), (2, 0), (1, 0)]:
        m = [[ctx.zero] * 3 for _ in range(3)]
        m[a][b] = ctx.one
        mats.append(tuple(tuple(r) for r in m))
    rel = RelationFamily(ctx, "lower", tuple(mats))
    with pytest.raises(DegenerateIntersectionError):
        solve_intersection(rel)


def test_cyclic_matrix_examples(solution_cache):
    b1 = solution_cache("B1")
    assert cyclic_matrix(b1.E) == b1.Q
    g1 = solution_cache("G1")
    assert cyclic_matrix(g1.E) == g1.Q  # Jordan 3-block with eigenvalue 1
    assert g1.Q.rows[0][1] == g1.ctx.one and g1.Q.rows[1][2] == g1.ctx.one


def test_char_matrix_examples(ctx, solution_cache):
    b1 = solution_cache("B1")
    assert char_matrix(b1.E, b1.F) == Matrix3.identity(b1.ctx)
    e1 = solution_cache("E1")
    P = lambda s: parse_scalar(e1.ctx, s)
    assert char_matrix(e1.E, e1.F) == Matrix3.diag(e1.ctx, [e1.ctx.one, P("z3"), P("z3^2")])
    # direct 9-term contraction oracle on scaled classical tensors
    eps_lo = epsilon_tensor(ctx, "lower")
    eps_up = epsilon_tensor(ctx, "upper").scale(ctx.rational(Fraction(1, 2)))
    x = char_matrix(eps_lo, eps_up)
    expect = [[ctx.zero] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = Fraction(0)
            for m in range(3):
                for n in range(3):
                    acc += Fraction(EPS.get((j, m, n), 0)) * Fraction(EPS.get((m, n, i), 0), 2)
            expect[i][j] = ctx.rational(acc)
    assert x == Matrix3(ctx, expect)


def test_kappa_examples(ctx, solution_cache):
    b1 = solution_cache("B1")
    # independent 27-term contraction oracle
    acc = b1.ctx.zero
    for idx in IDX3:
        acc = acc + b1.E.get(*idx) * b1.F.get(*idx)
    P = lambda s: parse_scalar(b1.ctx, s)
    assert acc == P("1+u+1/u")
    assert kappa(b1.E, b1.F) == acc
    assert kappa(b1.E, b1.F) == (b1.X * b1.Q).trace()
    assert kappa(b1.E, b1.F) == (b1.X * b1.Q).inverse().trace()
    a2 = solution_cache("A2")
    assert kappa(a2.E, a2.F) == a2.ctx.rational(3)
    zero_f = Tensor3(ctx, "upper", {})
    assert kappa(epsilon_tensor(ctx), zero_f).is_zero()


def _scalar_rank(mat9, ctx):
    from qgl3 import linalg

    rows = []
    for row in mat9.rows:
        rows.append({c: v for c, v in enumerate(row) if not v.is_zero()})
    return linalg.rank(rows, 9)


def test_antisymmetrizer_examples(ctx, solution_cache):
    a2 = solution_cache("A2")
    a = a2.antisym
    assert (a * a) == a
    assert a.trace() == a2.ctx.rational(3)
    # classical: E = eps, F = eps/2, X = 1 is the rank-3 antisymmetrizer
    eps_lo = epsilon_tensor(ctx, "lower")
    eps_up = epsilon_tensor(ctx, "upper").scale(ctx.rational(Fraction(1, 2)))
    acl = antisymmetrizer(eps_lo, eps_up, Matrix3.identity(ctx))
    assert (acl * acl) == acl
    assert _scalar_rank(acl, ctx) == 3
    zero = antisymmetrizer(eps_lo, Tensor3(ctx, "upper", {}), Matrix3.identity(ctx))
    assert zero.is_zero()


def test_decompose_examples(ctx):
    eps = epsilon_tensor(ctx)
    alpha, s, t, phi = decompose(eps)
    assert alpha == ctx.one and s.is_zero() and t.is_zero() and phi.is_zero()
    sym = Tensor3(
        ctx, "lower",
        {idx: ctx.one for idx in set(itertools.permutations((0, 1, 2)))} | {(0, 0, 0): ctx.rational(2)},
    )
    alpha, s, t, phi = decompose(sym)
    assert alpha.is_zero() and s.is_zero() and t.is_zero() and phi == sym


def test_decompose_roundtrip_20_random(ctx):
    rng = random.Random(11)
    P = lambda s: parse_scalar(ctx, s)
    pool = [ctx.one, -ctx.one, P("2"), P("u"), P("nu"), P("1/3"), P("z3"), P("z9^2-1"), ctx.zero]
    for trial in range(20):
        entries = {}
        for idx in IDX3:
            v = rng.choice(pool)
            if not v.is_zero():
                entries[idx] = v
        tensor = Tensor3(ctx, rng.choice(["lower", "upper"]), entries)
        alpha, s, t, phi = decompose(tensor)
        assert s.trace().is_zero() and t.trace().is_zero()
        for (i, j, k) in IDX3:
            assert phi.get(i, j, k) == phi.get(j, i, k) == phi.get(i, k, j)
        assert recompose(alpha, s, t, phi) == tensor


def test_mat_ops(ctx, solution_cache):
    P = lambda s: parse_scalar(ctx, s)
    m = Matrix3.diag(ctx, [ctx.one, P("u"), P("1/u")])
    assert m.inverse() == Matrix3.diag(ctx, [ctx.one, P("1/u"), P("u")])
    d1 = solution_cache("D1")
    assert d1.X.commutator(d1.Q).is_zero()
    jordan = Matrix3(ctx, [[ctx.one, ctx.one, ctx.zero],
                           [ctx.zero, ctx.one, ctx.one],
                           [ctx.zero, ctx.zero, ctx.one]])
    assert jordan.det() == ctx.one
    with pytest.raises(SingularMatrixError):
        Matrix3.zero(ctx).inverse()


def test_build_mn_normalization_guard(solution_cache):
    from qgl3.tensor import build_mn

    a1 = solution_cache("A1")
    # break the delta-normalization by rescaling one relation
    raw_e = RelationFamily.from_tensor_slices(a1.E)
    scaled = RelationFamily(
        a1.ctx,
        "lower",
        (tuple(tuple(v * a1.ctx.rational(2) for v in row) for row in raw_e.matrices[0]),)
        + raw_e.matrices[1:],
    )
    raw_f = RelationFamily.from_tensor_slices(a1.F)
    assert pairing_matrix(scaled, raw_f) != Matrix3.identity(a1.ctx)
    with pytest.raises(SingularMatrixError):
        build_mn(scaled, raw_f)


def test_cross_pair_mn_fails(catalog):
    """M, N built from the mismatched pair (A1 E, B1 F) break the product structure."""
    from qgl3.catalog import SolutionData, component_index
    from qgl3.conditions import check_MN_structure
    from qgl3.tensor import build_mn

    b1 = SolutionData.from_record(catalog.get("B1"))
    ctx = b1.ctx
    P = lambda s: parse_scalar(ctx, s)
    a1_rec = catalog.get("A1")
    pins = {component_index(k): P(v) for k, v in a1_rec.e_components.items()}
    e_a1, _ = complete_by_cyclicity(pins, Matrix3.identity(ctx), "lower")
    raw_e = RelationFamily.from_tensor_slices(e_a1)
    fam_f = RelationFamily.from_tensor_slices(b1.F)
    if pairing_matrix(raw_e, fam_f).det().is_zero():
        pytest.skip("cross pairing singular")  # pragma: no cover
    fam_e, _ = normalize_pair(raw_e, fam_f)
    m, n = build_mn(fam_e, fam_f)
    rep = check_MN_structure(
        m, n, b1.e_coeff, b1.f_coeff, b1.g_coeff, b1.h_coeff, kappa(e_a1, b1.F)
    )
    assert rep.status == "fail"


def test_xy_and_xqpy_invariants(solution_cache):
    for sid in ["A1", "B2", "C2", "F7", "G1"]:
        data = solution_cache(sid)
        y = char_matrix_y(data.E, data.F)
        assert data.X * y == Matrix3.identity(data.ctx)
        assert data.X * data.Q == data.P * y
