"""Exact arithmetic for cork and plug twists, rational blowdowns, knot surgery
and Seiberg-Witten basic-class bookkeeping on simply connected 4-manifolds."""

from .exactlin import AbelianGroup, IntMatrix, cokernel, determinant, form_invariants, smith_normal_form
from .fourmanifold import (
    ClosedRecord,
    connected_sum,
    cork_twist_record,
    homeo_classify,
    knot_surgery_record,
    plug_twist_record,
    rational_blowdown_record,
    record_preset,
    two_path_consistency,
    y_family,
)
from .handlebody import HandlePresentation, homology, preset
from .knots import LaurentPoly, alexander_family, alexander_from_seifert
from .scenarios import ScenarioReport, run_scenario
from .swalgebra import BasicClassSet, beta_elliptic, blowup_formula, knot_surgery_beta, rbd_transfer, sw_compare

__version__ = "0.1.0"

__all__ = [
    "AbelianGroup",
    "BasicClassSet",
    "ClosedRecord",
    "HandlePresentation",
    "IntMatrix",
    "LaurentPoly",
    "ScenarioReport",
    "alexander_family",
    "alexander_from_seifert",
    "beta_elliptic",
    "blowup_formula",
    "cokernel",
    "connected_sum",
    "cork_twist_record",
    "determinant",
    "form_invariants",
    "homeo_classify",
    "homology",
    "knot_surgery_beta",
    "knot_surgery_record",
    "plug_twist_record",
    "preset",
    "rational_blowdown_record",
    "rbd_transfer",
    "record_preset",
    "run_scenario",
    "smith_normal_form",
    "sw_compare",
    "two_path_consistency",
    "y_family",
]
