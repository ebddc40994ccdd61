"""Catalog record types and the JSON loader.

Solution data lives in one JSON file per family under data/.  All scalar
values are grammar strings; discrete choices (g3 roots, sign switches) are
declared per record and substituted at instantiation time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

FAMILIES = ["A", "B", "C", "D", "E", "F", "G"]
EXPECTED_COUNTS = {"A": 4, "B": 2, "C": 2, "D": 2, "E": 2, "F": 12, "G": 2}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class ParamDecl:
    name: str
    root_order: int = 1
    excluded: tuple[Fraction, ...] = ()  # excluded values of the root t


@dataclass(frozen=True)
class ChoiceDecl:
    name: str
    values: tuple[str, ...]  # grammar strings; first value is the default


@dataclass(frozen=True)
class AutomorphismFamily:
    """One automorphism family attached to a record: a Z template."""

    z_rows: tuple  # 3x3 grammar strings over record params + free + choices
    free: tuple[ParamDecl, ...] = ()
    choices: tuple[ChoiceDecl, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class AppendixBlock:
    """A printed R-matrix block; rows carry the printed row convention.

    The printed blocks enumerate the row composite index as (j,i); the
    canonical matrix is recovered by swapping printed rows (i,j) <-> (j,i).
    global_factor, when set, records a provable normalization slip in the
    print: the block equals that constant times 1-(1+q)A.
    """

    rows: tuple  # 9x9 grammar strings
    symbols: dict  # per-id extra symbol values, e.g. {"si": "0"}
    global_factor: str | None = None


@dataclass(frozen=True)
class SolutionRecord:
    id: str
    family: str
    conductor: int
    parameters: tuple[ParamDecl, ...]
    choices: tuple[ChoiceDecl, ...]
    x_rows: tuple
    q_rows: tuple
    e_components: dict  # "ijk" (1-based digits) -> grammar string
    f_components: dict
    q_value: str
    table1_row: int
    table2_row: int
    orderings: dict  # {"plane": [..], "coplane": [..], "group": [[u,l], ..]}
    automorphisms: tuple[AutomorphismFamily, ...]
    appendix: AppendixBlock | None = None
    notes: tuple[str, ...] = ()

    @property
    def has_orderings(self) -> bool:
        return bool(self.orderings)


@dataclass
class Catalog:
    records: dict[str, SolutionRecord] = field(default_factory=dict)

    def get(self, solution_id: str) -> SolutionRecord:
        rec = self.records.get(solution_id)
        if rec is None:
            raise KeyError(f"no catalog record {solution_id!r}")
        return rec

    def list(self, family: str | None = None) -> list[str]:
        ids = sorted(self.records, key=_id_key)
        if family is None:
            return ids
        return [i for i in ids if self.records[i].family == family]

    def __len__(self) -> int:
        return len(self.records)


def _id_key(solution_id: str):
    return (solution_id[0], int(solution_id[1:]))


def _parse_param(raw: dict) -> ParamDecl:
    return ParamDecl(
        raw["name"],
        int(raw.get("root_order", 1)),
        tuple(Fraction(str(v)) for v in raw.get("excluded", [])),
    )


def _parse_choice(raw: dict) -> ChoiceDecl:
    return ChoiceDecl(raw["name"], tuple(raw["values"]))


def _matrix_rows(raw) -> tuple:
    if isinstance(raw, dict) and "diag" in raw:
        d = raw["diag"]
        return (
            (d[0], "0", "0"),
            ("0", d[1], "0"),
            ("0", "0", d[2]),
        )
    return tuple(tuple(str(e) for e in row) for row in raw)


def _parse_automorphism(raw: dict) -> AutomorphismFamily:
    return AutomorphismFamily(
        z_rows=_matrix_rows(raw["Z"]),
        free=tuple(_parse_param(p) for p in raw.get("free", [])),
        choices=tuple(_parse_choice(c) for c in raw.get("choices", [])),
        note=raw.get("note", ""),
    )


def load(path: str | Path | None = None) -> Catalog:
    """Load and structurally validate the catalog (default: packaged data)."""
    catalog = Catalog()
    if path is None:
        base = resources.files("qgl3.catalog") / "data"
        files = [base / f"{fam}.json" for fam in FAMILIES]
        texts = [(f.name, f.read_text()) for f in files]
    else:
        p = Path(path)
        files = sorted(p.glob("*.json")) if p.is_dir() else [p]
        texts = [(f.name, f.read_text()) for f in files]
    for name, text in texts:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise CatalogError(f"{name}: invalid JSON: {err}") from err
        family = doc["family"]
        appendix_blocks = {}
        for block in doc.get("appendix", []):
            rows = tuple(tuple(str(e) for e in row) for row in block["rows"])
            factor = block.get("global_factor")
            for rec_id, symbols in block["applies"].items():
                appendix_blocks[rec_id] = AppendixBlock(rows, dict(symbols), factor)
        for raw in doc["records"]:
            rec_id = raw["id"]
            if rec_id in catalog.records:
                raise CatalogError(f"duplicate record id {rec_id}")
            try:
                rec = SolutionRecord(
                    id=rec_id,
                    family=family,
                    conductor=int(raw.get("conductor", doc.get("conductor", 36))),
                    parameters=tuple(_parse_param(p) for p in raw.get("parameters", [])),
                    choices=tuple(_parse_choice(c) for c in raw.get("choices", [])),
                    x_rows=_matrix_rows(raw["X"]),
                    q_rows=_matrix_rows(raw["Q"]),
                    e_components={str(k): str(v) for k, v in raw["E"].items()},
                    f_components={str(k): str(v) for k, v in raw["F"].items()},
                    q_value=str(raw["q"]),
                    table1_row=int(raw["table1_row"]),
                    table2_row=int(raw["table2_row"]),
                    orderings=raw.get("orderings", {}),
                    automorphisms=tuple(
                        _parse_automorphism(a) for a in raw.get("automorphisms", [])
                    ),
                    appendix=appendix_blocks.get(rec_id),
                    notes=tuple(raw.get("notes", [])),
                )
            except (KeyError, ValueError) as err:
                raise CatalogError(f"{name}: record {rec_id}: {err}") from err
            for key in list(rec.e_components) + list(rec.f_components):
                if len(key) != 3 or not all(c in "123" for c in key):
                    raise CatalogError(f"{name}: record {rec_id}: bad component key {key!r}")
            catalog.records[rec_id] = rec
    if path is None:
        counts = {fam: len(catalog.list(fam)) for fam in FAMILIES}
        if counts != EXPECTED_COUNTS:
            raise CatalogError(f"family counts {counts} do not match {EXPECTED_COUNTS}")
        if len(catalog) != 26:
            raise CatalogError(f"expected 26 records, found {len(catalog)}")
    return catalog
