"""Local reduction data and inertial Weil-Deligne types of elliptic curves
over Q_ell: exact p-adic arithmetic in extension towers, Tate's algorithm,
explicit class field theory for the quadratic extensions of Q_2 and Q_3,
the character calculus of inertial types, and the classification itself."""

from .chars import TypeLabel, UnitChar, context, named_table
from .classify import (ClassificationReport, classify, good_reduction_signature,
                       semistability_defect)
from .curves import WeierstrassModel
from .fieldenum import enumerate_fields, load_fields
from .tate import LocalData, good_reduction_trace, local_data
from .towers import FieldTower, PrecisionError, hensel_root, find_roots, is_square

__all__ = [
    "ClassificationReport", "FieldTower", "LocalData", "PrecisionError",
    "TypeLabel", "UnitChar", "WeierstrassModel", "classify", "context",
    "enumerate_fields", "find_roots", "good_reduction_signature",
    "good_reduction_trace", "hensel_root", "is_square", "load_fields",
    "local_data", "named_table", "semistability_defect",
]

__version__ = "0.1.0"
