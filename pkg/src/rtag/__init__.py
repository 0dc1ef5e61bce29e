"""Reductionistic rule-based part-of-speech tagger.

Morphological analysis introduces ambiguity, constraint rules delete
contextually illegitimate readings, and a finite-state intersection
grammar resolves what remains, falling back to the constraint-stage
output when the intersection gives no parse.
"""

from .model import (
    Cohort,
    Reading,
    Sentence,
    Symbol,
    resolve_strings,
)
from .streams import emit_cohort_stream, emit_tabular, parse_cohort_stream
from .pipeline import PipelineConfig, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Cohort",
    "PipelineConfig",
    "Reading",
    "Sentence",
    "Symbol",
    "emit_cohort_stream",
    "emit_tabular",
    "parse_cohort_stream",
    "resolve_strings",
    "run_pipeline",
    "__version__",
]
