"""Exact harmonicity analysis of Hermitian structures on 4-dimensional metric Lie algebras."""

from .config import AnalysisConfig, builtin, parse_config, render_config
from .errors import ConfigError, NotIntegrableError, RouteMismatchError, TwistorError
from .harmonicity import (
    CONDITIONAL,
    HARMONIC,
    NOT_HARMONIC,
    ConstraintSystem,
    Verdict,
    bismut_tau,
    check_candidate,
    verdict,
)
from .hermitian import HermitianData, validate_J
from .liealg import MetricLieAlgebra, curvature, levi_civita
from .report import AnalysisOptions, AnalysisReport, render, run_analysis
from .scalars import ParameterSet, Polynomial, format_scalar, parse_scalar
from .torsion import make_connection, make_torsion

__all__ = [
    "AnalysisConfig", "AnalysisOptions", "AnalysisReport", "CONDITIONAL", "ConfigError",
    "ConstraintSystem", "HARMONIC", "HermitianData", "MetricLieAlgebra", "NOT_HARMONIC",
    "NotIntegrableError", "ParameterSet", "Polynomial", "RouteMismatchError", "TwistorError",
    "Verdict", "bismut_tau", "builtin", "check_candidate", "curvature", "format_scalar",
    "levi_civita", "make_connection", "make_torsion", "parse_config", "parse_scalar",
    "render", "render_config", "run_analysis", "validate_J", "verdict",
]
