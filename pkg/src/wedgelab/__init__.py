"""Exact q-series, Hecke operators, Shimura-lift coefficients and wedge scans
for angular changes of cusp-form coefficients."""

__version__ = "0.1.0"

from .characters import DirichletCharacter, chi_tN, kronecker
from .cyclotomic import CycNumber
from .hecke import FormContext, apply_Tj, euler_roots, hecke_eigenvalue, Tj_as_polynomial
from .series import EtaSpec, PrecisionError, QSeries, eta_quotient, unary_theta
from .shimura import HalfIntegralContext, invert_lift, lift, synthetic_context
from .wedge import Wedge, contains, scan

__all__ = [
    "CycNumber",
    "DirichletCharacter",
    "EtaSpec",
    "FormContext",
    "HalfIntegralContext",
    "PrecisionError",
    "QSeries",
    "Tj_as_polynomial",
    "Wedge",
    "apply_Tj",
    "chi_tN",
    "contains",
    "euler_roots",
    "eta_quotient",
    "hecke_eigenvalue",
    "invert_lift",
    "kronecker",
    "lift",
    "scan",
    "synthetic_context",
    "unary_theta",
]
