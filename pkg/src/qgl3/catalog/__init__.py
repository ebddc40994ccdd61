"""Machine-readable catalog of the 26 solutions plus the reference tables."""

from .records import (
    AppendixBlock,
    AutomorphismFamily,
    Catalog,
    CatalogError,
    ChoiceDecl,
    ParamDecl,
    SolutionRecord,
    load,
)
from .runtime import SolutionData, component_index
from .tables import TABLE1, TABLE2, PlaneClassRecord, XClassRecord, x_in_reduced_list
from .validate import validate_record

__all__ = [
    "AppendixBlock",
    "AutomorphismFamily",
    "Catalog",
    "CatalogError",
    "ChoiceDecl",
    "ParamDecl",
    "PlaneClassRecord",
    "SolutionData",
    "SolutionRecord",
    "TABLE1",
    "TABLE2",
    "XClassRecord",
    "component_index",
    "load",
    "validate_record",
    "x_in_reduced_list",
]
