"""Working form of a catalog record: parsed, completed, derived quantities.

A SolutionData owns the scalar context for one record instance (a concrete
assignment of the discrete choices) and lazily derives everything the checks
need: completed tensors, relation families in the delta-normalization, the
intersection coefficients e, f, g, h, kappa, and the antisymmetrizer.
"""

from __future__ import annotations

from fractions import Fraction

from .. import linalg
from ..scalar import Context, Param, Scalar, parse_scalar
from ..tensor import (
    IDX2,
    Mat9,
    Matrix3,
    RelationFamily,
    Tensor3,
    antisymmetrizer,
    char_matrix_y,
    complete_by_cyclicity,
    kappa as kappa_contraction,
    normalize_pair,
)
from .records import SolutionRecord


def component_index(key: str) -> tuple[int, int, int]:
    return (int(key[0]) - 1, int(key[1]) - 1, int(key[2]) - 1)


class SolutionData:
    """All derived data for one record instance (or a twisted variant)."""

    def __init__(
        self,
        ctx: Context,
        solution_id: str,
        e_tensor: Tensor3,
        f_tensor: Tensor3,
        x: Matrix3,
        q_matrix: Matrix3,
        q_value: Scalar,
        record: SolutionRecord | None = None,
        choices: dict[str, str] | None = None,
        symbols: dict[str, Scalar] | None = None,
    ):
        self.ctx = ctx
        self.id = solution_id
        self.E = e_tensor
        self.F = f_tensor
        self.X = x
        self.Q = q_matrix
        self.q = q_value
        self.record = record
        self.choices = dict(choices or {})
        self.symbols = dict(symbols or {})
        self.branch = "principal"
        self._cache: dict[str, object] = {}

    # -- construction --------------------------------------------------------

    @classmethod
    def from_record(
        cls,
        record: SolutionRecord,
        choices: dict[str, str] | None = None,
        extra_params: tuple[Param, ...] = (),
    ) -> "SolutionData":
        ctx = Context(
            record.conductor,
            tuple(Param(p.name, p.root_order) for p in record.parameters) + extra_params,
        )
        chosen = {c.name: c.values[0] for c in record.choices}
        if choices:
            for name, value in choices.items():
                if name not in chosen:
                    raise KeyError(f"{record.id} has no choice {name!r}")
                chosen[name] = value
        symbols = {name: parse_scalar(ctx, value) for name, value in chosen.items()}
        parse = lambda text: parse_scalar(ctx, text, symbols)
        x = Matrix3(ctx, [[parse(e) for e in row] for row in record.x_rows])
        q_matrix = Matrix3(ctx, [[parse(e) for e in row] for row in record.q_rows])
        e_comp = {component_index(k): parse(v) for k, v in record.e_components.items()}
        f_comp = {component_index(k): parse(v) for k, v in record.f_components.items()}
        e_tensor, _ = complete_by_cyclicity(e_comp, q_matrix, "lower")
        p_matrix = x * x * q_matrix
        f_tensor, _ = complete_by_cyclicity(f_comp, p_matrix, "upper")
        return cls(
            ctx,
            record.id,
            e_tensor,
            f_tensor,
            x,
            q_matrix,
            parse(record.q_value),
            record=record,
            choices=chosen,
            symbols=symbols,
        )

    def conjugated(self) -> "SolutionData":
        """The whole instance under the field automorphism zeta -> zeta^(-1)."""

        def cm(m: Matrix3) -> Matrix3:
            return Matrix3(self.ctx, [[v.conjugate() for v in row] for row in m.rows])

        out = SolutionData(
            self.ctx,
            self.id,
            Tensor3(self.ctx, "lower", {k: v.conjugate() for k, v in self.E.items()}),
            Tensor3(self.ctx, "upper", {k: v.conjugate() for k, v in self.F.items()}),
            cm(self.X),
            cm(self.Q),
            self.q.conjugate(),
            record=self.record,
            choices=self.choices,
            symbols={k: v.conjugate() for k, v in self.symbols.items()},
        )
        out.branch = "conjugate" if self.branch == "principal" else "principal"
        return out

    # -- lazy derived quantities ---------------------------------------------

    def _get(self, key: str, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def P(self) -> Matrix3:
        return self._get("P", lambda: self.X * self.X * self.Q)

    @property
    def Y(self) -> Matrix3:
        return self._get("Y", lambda: char_matrix_y(self.E, self.F))

    @property
    def kappa(self) -> Scalar:
        return self._get("kappa", lambda: kappa_contraction(self.E, self.F))

    @property
    def f_family(self) -> RelationFamily:
        return self._get("f_family", lambda: RelationFamily.from_tensor_slices(self.F))

    @property
    def e_family(self) -> RelationFamily:
        """E-relations rescaled so that E^a_ij F^ij_b = delta^a_b."""

        def build():
            raw = RelationFamily.from_tensor_slices(self.E)
            fam, c = normalize_pair(raw, self.f_family)
            self._cache["pairing_C"] = c
            return fam

        return self._get("e_family", build)

    def _solve_coeff(self, tensor: Tensor3, family: RelationFamily, side: str) -> Matrix3:
        """Solve the defining equations of the intersection coefficients.

        side 'left':  T(j,k,l) = sum_a coeff[j][a] * rel^a(k,l)
        side 'right': T(i,j,l) = sum_a coeff[a][l] * rel^a(i,j)
        """
        ctx = self.ctx
        out = [[ctx.zero] * 3 for _ in range(3)]
        for fixed in range(3):
            rows = []
            rhs = []
            for (i, j) in IDX2:
                row = {}
                for a in range(3):
                    v = family.matrices[a][i][j]
                    if not v.is_zero():
                        row[a] = v
                rows.append(row)
                rhs.append(
                    tensor.get(fixed, i, j) if side == "left" else tensor.get(i, j, fixed)
                )
            solved = linalg.solve(rows, rhs, 3, ctx)
            if solved is None or solved[1]:
                raise ValueError(f"intersection coefficients not determined ({side})")
            sol, _ = solved
            for a in range(3):
                if side == "left":
                    out[fixed][a] = sol[a]
                else:
                    out[a][fixed] = sol[a]
        return Matrix3(ctx, out)

    @property
    def e_coeff(self) -> Matrix3:
        """e_ja with E_jkl = e_ja E^a_kl (Latin row, Greek column)."""
        return self._get("e_coeff", lambda: self._solve_coeff(self.E, self.e_family, "left"))

    @property
    def f_coeff(self) -> Matrix3:
        """f_al with E_ijl = f_al E^a_ij (Greek row, Latin column)."""
        return self._get("f_coeff", lambda: self._solve_coeff(self.E, self.e_family, "right"))

    @property
    def g_coeff(self) -> Matrix3:
        """g^ja with F^jkl = g^ja F^a_kl."""
        return self._get("g_coeff", lambda: self._solve_coeff(self.F, self.f_family, "left"))

    @property
    def h_coeff(self) -> Matrix3:
        """h^al with F^ijl = h^al F^a_ij."""
        return self._get("h_coeff", lambda: self._solve_coeff(self.F, self.f_family, "right"))

    @property
    def antisym(self) -> Mat9:
        return self._get("antisym", lambda: antisymmetrizer(self.E, self.F, self.X))

    @property
    def MN(self) -> tuple[Mat9, Mat9]:
        from ..tensor import build_mn

        return self._get("MN", lambda: build_mn(self.e_family, self.f_family))

    # -- specialization helpers ----------------------------------------------

    def excluded_roots(self) -> dict[str, tuple[Fraction, ...]]:
        if self.record is None:
            return {}
        return {p.name: p.excluded for p in self.record.parameters}

    def __repr__(self) -> str:
        extra = "" if not self.choices else f" choices={self.choices}"
        return f"SolutionData({self.id}{extra})"
