"""Shipped demo grammars, lexicon and corpus."""
from pathlib import Path

_ROOT = Path(__file__).parent

LEXICON = _ROOT / "lexicon.txt"
HEURISTICS = _ROOT / "heuristics.txt"
TOKENIZER = _ROOT / "tokenizer.cfg"
CG_GRAMMAR = _ROOT / "grammar.cg"
FSIG_GRAMMAR = _ROOT / "grammar.fsig"
SYNTAX_MAP = _ROOT / "syntax.map"
APPENDIX_INPUT = _ROOT / "corpus" / "appendix_input.txt"
APPENDIX_GOLD_D3 = _ROOT / "corpus" / "appendix_gold_d3.txt"
APPENDIX_GOLD_VERTICAL = _ROOT / "corpus" / "appendix_gold.vrt"


def path(name: str) -> Path:
    """Demo file by its base name, e.g. path('lexicon.txt')."""
    candidate = _ROOT / name
    if not candidate.exists():
        candidate = _ROOT / "corpus" / name
    if not candidate.exists():
        raise FileNotFoundError(name)
    return candidate
