"""Corpus generation and the structural check suite."""

from .generate import CorpusSpec, generate
from .suite import CHECKS, SuiteReport, Violation, check_graft, replay, run_suite

__all__ = ["CHECKS", "CorpusSpec", "SuiteReport", "Violation", "check_graft", "generate", "replay", "run_suite"]
