"""Scripted numerical experiments built on the library."""

from .ftl import FtlConfig, FtlReport, ftl_experiment
from .logic import LogicReport, logic_isomorphism_check
from .mixture import Ensemble, MixtureReport, mixture_experiment
from .momentum import (
    ConservationReport,
    ConvergenceReport,
    conservation_experiment,
    momentum_convergence,
    momentum_expectation_agreement,
)
from .overlap import OverlapResult, overlap_experiment
from .states import FootnotePair, footnote_pair, gaussian, two_plateau

__all__ = [
    "ConservationReport", "ConvergenceReport", "Ensemble", "FootnotePair", "FtlConfig",
    "FtlReport", "LogicReport", "MixtureReport", "OverlapResult", "conservation_experiment",
    "footnote_pair", "ftl_experiment", "gaussian", "logic_isomorphism_check",
    "mixture_experiment", "momentum_convergence", "momentum_expectation_agreement",
    "overlap_experiment", "two_plateau",
]
