"""Splits raw text into surface tokens.

Words, punctuation markers (e.g. ``,`` becomes ``@comma``), document
markers (``<...>`` lines, passed through untouched) and configured fixed
multiword syntagms, fused longest-match-first.
"""
from __future__ import annotations

import re


class TokenizerConfigError(ValueError):
    pass


class TokenizerConfig:
    """Immutable tokenizer settings.

    multiword_syntagms: word sequences fused into a single token.
    punctuation_map: punctuation character -> marker token.
    abbreviations: tokens whose trailing period is part of the word.
    """

    def __init__(self, multiword_syntagms=(), punctuation_map=None,
                 abbreviations=()):
        syntagms = []
        for seq in multiword_syntagms:
            seq = tuple(seq)
            if not seq or not all(seq):
                raise TokenizerConfigError(f"bad syntagm {seq!r}")
            syntagms.append(seq)
        # Longest match first makes fusion precedence well-defined.
        self.multiword_syntagms = tuple(sorted(syntagms, key=len, reverse=True))
        self.punctuation_map = dict(punctuation_map or {})
        for char, marker in self.punctuation_map.items():
            if len(char) != 1 or not marker.startswith("@"):
                raise TokenizerConfigError(f"bad punctuation entry {char!r} -> {marker!r}")
        self.abbreviations = frozenset(abbreviations)


DEFAULT_PUNCTUATION = {",": "@comma", ".": "@fullstop"}

_DOC_MARKER = re.compile(r"^<[^<>]+>$")


def load_tokenizer_config(text: str) -> TokenizerConfig:
    """Parse the plain-text config: [syntagms], [punctuation],
    [abbreviations] sections."""
    section = None
    syntagms: list[tuple[str, ...]] = []
    punct: dict[str, str] = {}
    abbrevs: list[str] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in ("syntagms", "punctuation", "abbreviations"):
                raise TokenizerConfigError(f"line {line_no}: unknown section {section!r}")
            continue
        if section == "syntagms":
            syntagms.append(tuple(line.split()))
        elif section == "punctuation":
            parts = line.split("\t")
            if len(parts) != 2 or len(parts[0]) != 1:
                raise TokenizerConfigError(f"line {line_no}: expected CHAR<TAB>MARKER")
            punct[parts[0]] = parts[1].strip()
        elif section == "abbreviations":
            abbrevs.append(line.strip())
        else:
            raise TokenizerConfigError(f"line {line_no}: content before any section")
    return TokenizerConfig(syntagms, punct, abbrevs)


def _split_word(word: str, config: TokenizerConfig) -> list[str]:
    """Peel mapped punctuation off both ends of a whitespace word."""
    leading: list[str] = []
    trailing: list[str] = []
    while len(word) > 1 and word[0] in config.punctuation_map:
        leading.append(config.punctuation_map[word[0]])
        word = word[1:]
    while len(word) > 1 and word[-1] in config.punctuation_map:
        if word[-1] == "." and word in config.abbreviations:
            break
        trailing.append(config.punctuation_map[word[-1]])
        word = word[:-1]
    if len(word) == 1 and word in config.punctuation_map:
        return leading + [config.punctuation_map[word]] + list(reversed(trailing))
    return leading + [word] + list(reversed(trailing))


def _fuse_syntagms(tokens: list[str], config: TokenizerConfig) -> list[str]:
    if not config.multiword_syntagms:
        return tokens
    out: list[str] = []
    i = 0
    while i < len(tokens):
        for seq in config.multiword_syntagms:
            if tuple(tokens[i:i + len(seq)]) == seq:
                out.append(" ".join(seq))
                i += len(seq)
                break
        else:
            out.append(tokens[i])
            i += 1
    return out


def tokenize(text: str, config: TokenizerConfig) -> list[str]:
    """Deterministic tokenization; unknown characters pass through inside
    their whitespace word."""
    tokens: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if _DOC_MARKER.match(stripped):
            tokens.append(stripped)
            continue
        for word in line.split():
            tokens.extend(_split_word(word, config))
    return _fuse_syntagms(tokens, config)
