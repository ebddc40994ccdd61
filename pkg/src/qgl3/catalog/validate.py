"""Cross-checks of a record against the plane/X class tables."""

from __future__ import annotations

from ..report import ConditionReport, failed, passed
from ..scalar import render_scalar
from .runtime import SolutionData, component_index
from .tables import TABLE1, TABLE2, plane_constraint_residual, x_in_reduced_list


def validate_record(data: SolutionData) -> list[ConditionReport]:
    """Mask and classification checks (catalog-level, not tensor identities)."""
    reports = []
    rec = data.record
    if rec is None:
        return [failed("catalog_class", {"reason": "no record attached"})]

    row1 = TABLE1[rec.table1_row - 1]
    assign = row1.match(data.Q)
    if assign is None:
        reports.append(
            failed("table1_class", {"row": rec.table1_row, "reason": "Q does not match"})
        )
    else:
        bad = None
        for comp in row1.zeros:
            v = data.E.get(*component_index(comp))
            if not v.is_zero():
                bad = {"component": comp, "value": render_scalar(v)}
                break
        if bad is None:
            for fn in row1.constraints:
                res = plane_constraint_residual(fn, data.E, data.Q, assign)
                if not res.is_zero():
                    bad = {"constraint": fn, "residual": render_scalar(res)}
                    break
        if bad is None:
            reports.append(passed("table1_class", f"row {rec.table1_row}"))
        else:
            reports.append(failed("table1_class", {"row": rec.table1_row, **bad}))

    row2 = TABLE2[rec.table2_row - 1]
    # the X-class table is stated up to an overall cube-root factor on X
    if data.ctx.conductor % 3 == 0:
        z3 = data.ctx.root_of_unity(3, 1)
        scales = [z3 ** k for k in range(3)]
    else:
        scales = [data.ctx.one]
    matched = None
    for scale_pow, factor in enumerate(scales):
        scaled = data.X.scale(factor)
        if row2.match(scaled) is not None:
            matched = scale_pow
            break
    if matched is None:
        reports.append(
            failed("table2_class", {"row": rec.table2_row, "reason": "X does not match"})
        )
    else:
        bad = None
        for comp in row2.zeros:
            idx = component_index(comp)
            ve = data.E.get(*idx)
            vf = data.F.get(*idx)
            if not ve.is_zero():
                bad = {"component": comp, "tensor": "E", "value": render_scalar(ve)}
                break
            if not vf.is_zero():
                bad = {"component": comp, "tensor": "F", "value": render_scalar(vf)}
                break
        if bad is None:
            reports.append(passed("table2_class", f"row {rec.table2_row}"))
        else:
            reports.append(failed("table2_class", {"row": rec.table2_row, **bad}))

    if x_in_reduced_list(data.X):
        reports.append(passed("x_reduced_form"))
    else:
        reports.append(failed("x_reduced_form", {"reason": "X not in the reduced list"}))

    xq = data.X * data.Q
    t1, t2 = xq.trace(), xq.inverse().trace()
    if t1 == t2:
        reports.append(passed("trace_twist_invariant"))
    else:
        reports.append(
            failed("trace_twist_invariant", {"residual": render_scalar(t1 - t2)})
        )
    return reports
