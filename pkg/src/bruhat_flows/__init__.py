"""Exact Poisson geometry of generalized Bruhat cells and double Bruhat cells.

Typical use::

    from bruhat_flows import cartan_type, CellSpec, compute_bracket_table
    bt = compute_bracket_table(CellSpec(cartan_type("A2"), (1, 2, 1)))
"""

from .cells import (
    CellSpec,
    build_doubled_system,
    compute_bracket_table,
    dressed_interval,
    torus_extension,
    y_interval,
)
from .doublecells import DoubleCellSpec, fz_embed, fz_embed_inverse, kz_bracket_oracle, kz_system
from .exactalg import BracketTable, Poly, QuasiPoly, parse_poly, poisson_bracket
from .flows import flow_of, numeric_check
from .repkit import RepPack, bundled_pack
from .rootdata import RootData, cartan_type

__version__ = "0.1.0"

__all__ = [
    "BracketTable",
    "CellSpec",
    "DoubleCellSpec",
    "Poly",
    "QuasiPoly",
    "RepPack",
    "RootData",
    "build_doubled_system",
    "bundled_pack",
    "cartan_type",
    "compute_bracket_table",
    "dressed_interval",
    "flow_of",
    "fz_embed",
    "fz_embed_inverse",
    "kz_bracket_oracle",
    "kz_system",
    "numeric_check",
    "parse_poly",
    "poisson_bracket",
    "torus_extension",
    "y_interval",
]
