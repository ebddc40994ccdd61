"""Poincare series certification: exact graded ranks and normal orderings.

Dimensions of the homogeneous components of a quadratic algebra are computed
degree by degree: maintain a monomial basis B_n of degree n together with the
reduction map W^n -> span(B_n); then the degree-(n+1) relation images live in
B_n (x) W and one row reduction gives both dim A_(n+1) and the next map.

Two backends share that scheme: a modular one (ring homomorphisms into GF(p),
three independent points must agree - the generic-rank certificate) and a
fully symbolic one over the exact scalar field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from ._kernel import KERNEL, reduce_rows_mod, rref_mod
from .catalog.runtime import SolutionData
from .modular import Embedding, Point, PointError, points_for
from .report import ConditionReport, failed, passed
from .scalar import Scalar, render_scalar
from .tensor import Mat9


def classical_dim(d: int, n: int) -> int:
    """dim of degree-n polynomials in d commuting variables: C(d+n-1, n)."""
    return math.comb(d + n - 1, n)


# ---------------------------------------------------------------------------
# relation spans
# ---------------------------------------------------------------------------


@dataclass
class GradedRelationSpan:
    """Quadratic relations of a d-generator algebra as d^2-vectors."""

    arity: int
    relations: list[list[Scalar]]
    label: str = ""

    def sparse_rows(self) -> list[dict[int, Scalar]]:
        return [
            {c: v for c, v in enumerate(vec) if not v.is_zero()} for vec in self.relations
        ]


def plane_span(data: SolutionData) -> GradedRelationSpan:
    """E^a_ij x^i x^j = 0: three vectors over the word basis x^i x^j."""
    fam = data.e_family
    vecs = [
        [fam.matrices[a][i][j] for i in range(3) for j in range(3)] for a in range(3)
    ]
    return GradedRelationSpan(3, vecs, f"{data.id}:plane")


def coplane_span(data: SolutionData) -> GradedRelationSpan:
    """u_i u_j F^ij_a = 0: three vectors over the word basis u_i u_j."""
    fam = data.f_family
    vecs = [
        [fam.matrices[a][i][j] for i in range(3) for j in range(3)] for a in range(3)
    ]
    return GradedRelationSpan(3, vecs, f"{data.id}:coplane")


def group_span(data: SolutionData) -> GradedRelationSpan:
    """The 54 quadratic group relations E^a (AA) S = 0 and S (AA) F_a = 0.

    Generators A^i_j are flattened to 3i+j; the word (A^a_b, A^c_d) is the
    column 9*(3a+b) + (3c+d).  S = 1 - A with the lambda = 1 antisymmetrizer.
    """
    ctx = data.ctx
    asym = data.antisym
    s9 = Mat9.identity(ctx) - asym
    e_fam = data.e_family
    f_fam = data.f_family
    vectors = []
    for alpha in range(3):
        for k in range(3):
            for l in range(3):
                vec = [ctx.zero] * 81
                for a in range(3):
                    for c in range(3):
                        coef = e_fam.matrices[alpha][a][c]
                        if coef.is_zero():
                            continue
                        for b in range(3):
                            for d in range(3):
                                s = s9.entry(b, d, k, l)
                                if not s.is_zero():
                                    vec[9 * (3 * a + b) + (3 * c + d)] = (
                                        vec[9 * (3 * a + b) + (3 * c + d)] + coef * s
                                    )
                vectors.append(vec)
    for i in range(3):
        for j in range(3):
            for alpha in range(3):
                vec = [ctx.zero] * 81
                for a in range(3):
                    for b in range(3):
                        s = s9.entry(i, j, a, b)
                        if s.is_zero():
                            continue
                        for m in range(3):
                            for n in range(3):
                                coef = f_fam.matrices[alpha][m][n]
                                if not coef.is_zero():
                                    vec[9 * (3 * a + m) + (3 * b + n)] = (
                                        vec[9 * (3 * a + m) + (3 * b + n)] + s * coef
                                    )
                vectors.append(vec)
    return GradedRelationSpan(9, vectors, f"{data.id}:group")


# ---------------------------------------------------------------------------
# modular backend
# ---------------------------------------------------------------------------


def _dims_ladder_mod(rel: np.ndarray, d: int, dmax: int, p: int) -> list[int]:
    """Dimensions at degrees 1..dmax from the relation matrix mod p."""
    dims = [d]
    if dmax == 1:
        return dims
    r = rel.copy() % p
    rank2, piv2 = rref_mod(r, p)
    basis_cols = [c for c in range(d * d) if c not in set(piv2)]
    dims.append(d * d - rank2)
    rbasis = np.ascontiguousarray(r[:rank2])
    nb = len(basis_cols)
    reduce_map = np.zeros((d * d, nb), dtype=np.int64)
    for bi, c in enumerate(basis_cols):
        reduce_map[c, bi] = 1
    for ri, c in enumerate(piv2):
        reduce_map[c] = (-rbasis[ri, basis_cols]) % p
    rel3 = rbasis.reshape(rank2, d, d)
    n = 2
    while n < dmax:
        # candidate vectors in B_n (x) W: for each word v of length n-1 and
        # each relation row, sum_xy r[x,y] * reduce(v x) (x) e_y
        nb_n = reduce_map.shape[1]
        blocks = []
        for v in range(d ** (n - 1)):
            pr = reduce_map[v * d : (v + 1) * d]  # d x nb, rows indexed by x
            m = np.einsum("kxy,xb->kby", rel3, pr) % p
            blocks.append(m.reshape(rel3.shape[0], nb_n * d))
        vmat = np.ascontiguousarray(np.concatenate(blocks, axis=0))
        rank, piv = rref_mod(vmat, p)
        dims.append(nb_n * d - rank)
        n += 1
        if n >= dmax:
            break
        # next reduction map: word w = (w', x) -> reduce(w') placed at (b, x)
        new_basis = [c for c in range(nb_n * d) if c not in set(piv)]
        vbasis = np.ascontiguousarray(vmat[:rank])
        expand = np.zeros((d ** n, nb_n * d), dtype=np.int64)
        for x in range(d):
            expand[x::d, x::d] = reduce_map
        reduce_rows_mod(expand, vbasis, list(piv), p)
        reduce_map = np.ascontiguousarray(expand[:, new_basis])
    return dims


def _relation_matrix_mod(span: GradedRelationSpan, emb: Embedding) -> np.ndarray:
    k = len(span.relations)
    out = np.zeros((k, span.arity * span.arity), dtype=np.int64)
    for i, vec in enumerate(span.relations):
        for j, v in enumerate(vec):
            if not v.is_zero():
                out[i, j] = emb(v)
    return out


@dataclass
class RankResult:
    dims: list[int]
    method: str
    points: list[dict] = field(default_factory=list)
    agreement: bool = True


def dims_modular(
    span: GradedRelationSpan,
    dmax: int,
    data: SolutionData,
    seed: int = 0,
    npoints: int = 3,
) -> RankResult:
    """Dimensions at degrees 1..dmax at `npoints` independent points.

    Points that hit a pole of some relation entry are skipped
    deterministically.  Disagreement between points is reported, never
    resolved silently.
    """
    pool = points_for(
        data.ctx, seed, span.label, npoints + 8, excluded=data.excluded_roots()
    )
    used: list[Point] = []
    results: list[list[int]] = []
    for point in pool:
        if len(results) == npoints:
            break
        try:
            emb = Embedding(data.ctx, point)
            rel = _relation_matrix_mod(span, emb)
        except PointError:
            continue
        results.append(_dims_ladder_mod(rel, span.arity, dmax, point.p))
        used.append(point)
    if len(results) < npoints:
        raise PointError(f"could not find {npoints} admissible points for {span.label}")
    agreement = all(r == results[0] for r in results[1:])
    return RankResult(
        dims=results[0],
        method=f"modular-{KERNEL}({npoints} points)",
        points=[pt.describe() for pt in used],
        agreement=agreement,
    )


def dims_symbolic(span: GradedRelationSpan, dmax: int) -> RankResult:
    """Fully symbolic dimensions over the exact scalar field."""
    d = span.arity
    ctx = span.relations[0][0].ctx if span.relations else None
    dims = [d]
    if dmax >= 2:
        rows = span.sparse_rows()
        piv_rows, piv_cols = linalg.rref(rows, d * d)
        basis = [c for c in range(d * d) if c not in set(piv_cols)]
        dims.append(d * d - len(piv_rows))
        # reduce maps: word index -> {basis position: Scalar}
        bpos = {c: i for i, c in enumerate(basis)}
        reduce_map: list[dict[int, Scalar]] = [dict() for _ in range(d * d)]
        for c in basis:
            reduce_map[c][bpos[c]] = ctx.one
        for prow, c in zip(piv_rows, piv_cols):
            reduce_map[c] = {bpos[cc]: -v for cc, v in prow.items() if cc != c}
        rel_rows = [dict(r) for r in piv_rows]
        n = 2
        while n < dmax:
            nb = len(basis)
            vectors = []
            for v in range(d ** (n - 1)):
                for row in rel_rows:
                    vec: dict[int, Scalar] = {}
                    for col, coef in row.items():
                        x, y = divmod(col, d)
                        red = reduce_map[v * d + x]
                        for b, w in red.items():
                            key = b * d + y
                            cur = vec.get(key)
                            add = coef * w
                            if cur is None:
                                if not add.is_zero():
                                    vec[key] = add
                            else:
                                s = cur + add
                                if s.is_zero():
                                    del vec[key]
                                else:
                                    vec[key] = s
                    if vec:
                        vectors.append(vec)
            piv_rows_n, piv_cols_n = linalg.rref(vectors, nb * d)
            dims.append(nb * d - len(piv_rows_n))
            n += 1
            if n == dmax:
                break
            piv_set = set(piv_cols_n)
            new_basis = [c for c in range(nb * d) if c not in piv_set]
            npos = {c: i for i, c in enumerate(new_basis)}
            new_reduce: list[dict[int, Scalar]] = [dict() for _ in range(d ** n)]
            pivot_lookup = dict(zip(piv_cols_n, piv_rows_n))
            for w in range(d ** n):
                prefix, x = divmod(w, d)
                acc: dict[int, Scalar] = {}
                for b, coef in reduce_map[prefix].items():
                    key = b * d + x
                    if key in pivot_lookup:
                        for cc, vv in pivot_lookup[key].items():
                            if cc == key:
                                continue
                            cur = acc.get(cc)
                            add = -(coef * vv)
                            if cur is None:
                                if not add.is_zero():
                                    acc[cc] = add
                            else:
                                s = cur + add
                                if s.is_zero():
                                    del acc[cc]
                                else:
                                    acc[cc] = s
                    else:
                        cur = acc.get(key)
                        acc[key] = coef if cur is None else cur + coef
                new_reduce[w] = {npos[c]: v for c, v in acc.items() if not v.is_zero()}
            reduce_map = new_reduce
            basis = new_basis
    return RankResult(dims=dims[:dmax], method="symbolic", agreement=True)


def dimension_at_degree(
    span: GradedRelationSpan,
    degree: int,
    data: SolutionData,
    symbolic: bool = False,
    seed: int = 0,
    npoints: int = 3,
) -> RankResult:
    if symbolic:
        res = dims_symbolic(span, degree)
    else:
        res = dims_modular(span, degree, data, seed=seed, npoints=npoints)
    res.dims = res.dims[:degree]
    return res


# ---------------------------------------------------------------------------
# rewrite systems and the diamond lemma
# ---------------------------------------------------------------------------


class NonOrderableError(ValueError):
    """No admissible substitution system for this generator ordering."""

    def __init__(self, message: str, word=None):
        super().__init__(message)
        self.word = word


@dataclass
class RewriteSystem:
    """Substitution rules for every anti-ordered pair of generators.

    generators: labels in increasing order; rank = position in this list.
    rules: (g, h) with rank g > rank h  ->  {word pair: Scalar coefficient},
    referencing only deglex-smaller words.
    """

    generators: list
    rules: dict
    ambiguities: list = field(default_factory=list)

    @property
    def nrules(self) -> int:
        return len(self.rules)


def build_rewrite_system(
    relations: GradedRelationSpan, ordering: list, labels: list | None = None
) -> RewriteSystem:
    """Solve the relations for the anti-ordered degree-2 words.

    `ordering` lists generator labels from smallest to largest; `labels`
    gives the label of each generator index in the relation vectors (default:
    1-based integers for planes).  Raises NonOrderableError when the pivot
    set is not exactly the set of anti-ordered words.
    """
    d = relations.arity
    if labels is None:
        labels = list(range(1, d + 1))
    rank = {}
    for pos, lab in enumerate(ordering):
        key = tuple(lab) if isinstance(lab, (list, tuple)) else lab
        rank[key] = pos
    labels = [tuple(l) if isinstance(l, (list, tuple)) else l for l in labels]
    if set(rank) != set(labels):
        raise ValueError("ordering must be a permutation of the generator labels")
    gen_rank = [rank[lab] for lab in labels]

    def word_key(col: int) -> tuple[int, int]:
        g, h = divmod(col, d)
        return (gen_rank[g], gen_rank[h])

    col_order = sorted(range(d * d), key=word_key, reverse=True)
    piv_rows, piv_cols = linalg.rref(relations.sparse_rows(), d * d, col_order=col_order)
    anti = {c for c in range(d * d) if word_key(c)[0] > word_key(c)[1]}
    pivots = set(piv_cols)
    if pivots != anti:
        missing = sorted(anti - pivots, key=word_key, reverse=True)
        extra = sorted(pivots - anti, key=word_key, reverse=True)
        bad = missing[0] if missing else extra[0]
        g, h = divmod(bad, d)
        raise NonOrderableError(
            f"no substitution rule for the word {labels[g]}{labels[h]}",
            word=(labels[g], labels[h]),
        )
    rules = {}
    for prow, c in zip(piv_rows, piv_cols):
        g, h = divmod(c, d)
        rhs = {}
        for cc, v in prow.items():
            if cc == c:
                continue
            gg, hh = divmod(cc, d)
            if word_key(cc) >= word_key(c):  # rules must strictly decrease
                raise NonOrderableError(
                    f"rule for {labels[g]}{labels[h]} references a non-smaller word"
                )
            rhs[(gg, hh)] = -v
        rules[(g, h)] = rhs
    return RewriteSystem(generators=[labels[i] for i in _ranks_sorted(gen_rank)], rules=rules)


def _ranks_sorted(gen_rank: list[int]) -> list[int]:
    return sorted(range(len(gen_rank)), key=lambda i: gen_rank[i])


class ReductionLimitError(RuntimeError):
    pass


def normal_form(
    rs: RewriteSystem,
    element,
    ctx,
    gen_rank: list[int] | None = None,
    step_limit: int = 200000,
):
    """Fully reduce a word or a linear combination of words.

    Words are tuples of generator indices.  The reduction strategy is
    deterministic: always expand the deglex-largest reducible word at its
    leftmost reducible position.
    """
    if gen_rank is None:
        # generators were relabelled 0..d-1 by build time; rank by rule order
        gen_rank = list(range(_infer_arity(rs)))
    if isinstance(element, tuple):
        element = {element: ctx.one}
    work = {w: c for w, c in element.items() if not c.is_zero()}

    def wkey(w):
        return tuple(gen_rank[g] for g in w)

    def leftmost(w):
        for i in range(len(w) - 1):
            if (w[i], w[i + 1]) in rs.rules:
                return i
        return -1

    steps = 0
    while True:
        target = None
        for w in work:
            if leftmost(w) >= 0 and (target is None or wkey(w) > wkey(target)):
                target = w
        if target is None:
            return work
        steps += 1
        if steps > step_limit:
            raise ReductionLimitError("reduction step limit exceeded")
        coef = work.pop(target)
        i = leftmost(target)
        rule = rs.rules[(target[i], target[i + 1])]
        for (g, h), v in rule.items():
            neww = target[:i] + (g, h) + target[i + 2 :]
            cur = work.get(neww)
            add = coef * v
            if cur is None:
                if not add.is_zero():
                    work[neww] = add
            else:
                s = cur + add
                if s.is_zero():
                    del work[neww]
                else:
                    work[neww] = s


def _infer_arity(rs: RewriteSystem) -> int:
    hi = 0
    for (g, h) in rs.rules:
        hi = max(hi, g, h)
    return hi + 1


def overlap_words(rs: RewriteSystem, gen_rank: list[int]) -> list[tuple[int, int, int]]:
    """All words abc where both ab and bc are rule left-hand sides."""
    out = []
    d = len(gen_rank)
    for a in range(d):
        for b in range(d):
            if (a, b) not in rs.rules:
                continue
            for c in range(d):
                if (b, c) in rs.rules:
                    out.append((a, b, c))
    return out


def check_confluence(
    rs: RewriteSystem, ctx, gen_rank: list[int], name: str = "confluence"
) -> ConditionReport:
    """Resolve every overlap ambiguity both ways; all must agree exactly.

    The per-triple outcomes are appended to rs.ambiguities.
    """
    triples = overlap_words(rs, gen_rank)
    rs.ambiguities.clear()
    resolved = 0
    for (a, b, c) in triples:
        left = {}
        for (g, h), v in rs.rules[(a, b)].items():
            left[(g, h, c)] = v
        right = {}
        for (g, h), v in rs.rules[(b, c)].items():
            right[(a, g, h)] = v
        nf_left = normal_form(rs, left, ctx, gen_rank)
        nf_right = normal_form(rs, right, ctx, gen_rank)
        diff = dict(nf_left)
        for w, v in nf_right.items():
            cur = diff.get(w)
            s = -v if cur is None else cur - v
            if s.is_zero():
                diff.pop(w, None)
            else:
                diff[w] = s
        if diff:
            w, v = next(iter(sorted(diff.items())))
            rs.ambiguities.append(((a, b, c), "diverges"))
            return failed(
                name,
                {
                    "triple": (a, b, c),
                    "word": w,
                    "residual": render_scalar(v),
                    "resolved": resolved,
                    "total": len(triples),
                },
            )
        rs.ambiguities.append(((a, b, c), "resolves"))
        resolved += 1
    return passed(name, f"{resolved}/{len(triples)} ambiguities resolve")


def check_twist_poincare_invariance(
    data: SolutionData,
    twisted: SolutionData,
    plane_degrees: int = 4,
    group_degrees: int = 3,
    seed: int = 0,
    name: str = "twist_poincare_invariance",
) -> ConditionReport:
    """Graded dimensions agree between a record and its certified twist."""
    jobs = [
        ("plane", plane_span, plane_degrees),
        ("coplane", coplane_span, plane_degrees),
        ("group", group_span, group_degrees),
    ]
    for label, build, cap in jobs:
        if cap < 1:
            continue
        base = dims_modular(build(data), cap, data, seed=seed)
        tw = dims_modular(build(twisted), cap, twisted, seed=seed + 1)
        if not (base.agreement and tw.agreement):
            return failed(name, {"object": label, "reason": "specialization disagreement"})
        if base.dims != tw.dims:
            return failed(
                name, {"object": label, "original": base.dims, "twisted": tw.dims}
            )
    return passed(name)


def count_normal_monomials(rs: RewriteSystem, gen_rank: list[int], degree: int) -> int:
    """Number of degree-n words with no reducible adjacent pair."""
    d = len(gen_rank)
    counts = {g: 1 for g in range(d)}
    for _ in range(degree - 1):
        new = {}
        for last, c in counts.items():
            for g in range(d):
                if (last, g) not in rs.rules:
                    new[g] = new.get(g, 0) + c
        counts = new
    return sum(counts.values()) if degree >= 1 else 1
