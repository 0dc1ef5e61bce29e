"""Regular expressions and deterministic finite automata over tag symbols.

Languages are sets of symbol strings over the open universe of all
Symbols.  Each automaton mentions a finite alphabet explicitly and keeps
one OTHER transition per state covering every unmentioned symbol, so
rule automata stay small no matter how large the tag inventory grows.

Minimization produces a canonical machine (breadth-first state numbering
over the reduced alphabet), so two minimized automata accept the same
language exactly when they compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .model import Symbol, SymbolString

DEFAULT_STATE_CAP = 100_000


class UnknownReference(ValueError):
    """A named regex refers to a definition that does not exist."""


class CyclicDefinition(ValueError):
    """Named regex definitions form a reference cycle."""


class StateLimitExceeded(RuntimeError):
    """A product construction grew past the configured state cap."""

    def __init__(self, cap: int):
        super().__init__(f"automaton grew past {cap} states")
        self.cap = cap


class EnumerationOverflow(RuntimeError):
    """An automaton accepts more strings than the enumeration cap."""


class CyclicAutomaton(ValueError):
    """Enumeration requested on an automaton with productive cycles."""


class OpenAlphabet(ValueError):
    """Enumeration would have to invent symbols for an OTHER transition."""


def _symbol_key(s: Symbol):
    return s.sort_key()


class Dfa:
    """Deterministic automaton; treat as immutable after construction.

    ``edges[q]`` maps explicitly mentioned symbols to target states and
    ``other[q]`` is the target for every other symbol.  Transitions are
    total by construction.
    """

    __slots__ = ("edges", "other", "start", "accepting", "alphabet")

    def __init__(self, edges: Sequence[dict[Symbol, int]], other: Sequence[int],
                 start: int, accepting: Iterable[int]):
        n = len(edges)
        if len(other) != n or not (0 <= start < n):
            raise ValueError("inconsistent automaton tables")
        # Drop explicit edges that duplicate the state's OTHER target.
        self.edges = [{s: t for s, t in e.items() if t != other[q]}
                      for q, e in enumerate(edges)]
        self.other = list(other)
        self.start = start
        self.accepting = frozenset(accepting)
        alphabet: set[Symbol] = set()
        for e in self.edges:
            alphabet.update(e)
        self.alphabet = frozenset(alphabet)

    def __len__(self) -> int:
        return len(self.edges)

    def step(self, state: int, symbol: Symbol) -> int:
        e = self.edges[state]
        return e.get(symbol, self.other[state])

    def accepts(self, word: Iterable[Symbol]) -> bool:
        state = self.start
        for sym in word:
            state = self.step(state, sym)
        return state in self.accepting

    def __eq__(self, other):
        return (isinstance(other, Dfa)
                and self.start == other.start
                and self.accepting == other.accepting
                and self.other == other.other
                and self.edges == other.edges)

    def __hash__(self):
        return hash((self.start, self.accepting, tuple(self.other),
                     tuple(tuple(sorted(e.items(), key=lambda kv: _symbol_key(kv[0])))
                           for e in self.edges)))

    def __repr__(self):
        return (f"Dfa({len(self.edges)} states, {len(self.alphabet)} symbols, "
                f"{len(self.accepting)} accepting)")


def empty_dfa() -> Dfa:
    return Dfa([{}], [0], 0, [])


def epsilon_dfa() -> Dfa:
    return Dfa([{}, {}], [1, 1], 0, [0])


def universe_dfa() -> Dfa:
    return Dfa([{}], [0], 0, [0])


def symbol_dfa(symbol: Symbol) -> Dfa:
    return Dfa([{symbol: 1}, {}, {}], [2, 2, 2], 0, [1])


def any_symbol_dfa() -> Dfa:
    return Dfa([{}, {}, {}], [1, 2, 2], 0, [1])


def any_except_dfa(excluded: Iterable[Symbol]) -> Dfa:
    banned = {s: 2 for s in excluded}
    return Dfa([banned, {}, {}], [1, 2, 2], 0, [1])


# ---------------------------------------------------------------------------
# Nondeterministic machines, used to glue concatenations/unions/stars
# before determinizing.

class Nfa:
    """Epsilon-NFA with per-state OTHER transition sets."""

    __slots__ = ("edges", "other", "eps", "starts", "accepting")

    def __init__(self):
        self.edges: list[dict[Symbol, set[int]]] = []
        self.other: list[set[int]] = []
        self.eps: list[set[int]] = []
        self.starts: set[int] = set()
        self.accepting: set[int] = set()

    def add_state(self) -> int:
        self.edges.append({})
        self.other.append(set())
        self.eps.append(set())
        return len(self.edges) - 1

    def mentioned(self) -> set[Symbol]:
        out: set[Symbol] = set()
        for e in self.edges:
            out.update(e)
        return out

    def closure(self, states: Iterable[int]) -> frozenset[int]:
        seen = set(states)
        stack = list(seen)
        while stack:
            q = stack.pop()
            for t in self.eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    def move(self, states: Iterable[int], symbol: Symbol | None) -> set[int]:
        """Targets on a symbol; None means any unmentioned symbol."""
        out: set[int] = set()
        for q in states:
            if symbol is not None and symbol in self.edges[q]:
                out.update(self.edges[q][symbol])
            else:
                out.update(self.other[q])
        return out


def dfa_to_nfa(dfa: Dfa) -> Nfa:
    nfa = Nfa()
    for _ in range(len(dfa)):
        nfa.add_state()
    for q, e in enumerate(dfa.edges):
        for s, t in e.items():
            nfa.edges[q][s] = {t}
        nfa.other[q] = {dfa.other[q]}
    nfa.starts = {dfa.start}
    nfa.accepting = set(dfa.accepting)
    return nfa


def _absorb(dst: Nfa, src: Nfa) -> int:
    base = len(dst.edges)
    for q in range(len(src.edges)):
        dst.add_state()
        dst.edges[base + q] = {s: {base + t for t in ts}
                               for s, ts in src.edges[q].items()}
        dst.other[base + q] = {base + t for t in src.other[q]}
        dst.eps[base + q] = {base + t for t in src.eps[q]}
    return base


def concat_nfa(parts: Sequence[Nfa]) -> Nfa:
    out = Nfa()
    prev_accepting: set[int] | None = None
    for part in parts:
        base = _absorb(out, part)
        starts = {base + q for q in part.starts}
        if prev_accepting is None:
            out.starts = starts
        else:
            for q in prev_accepting:
                out.eps[q].update(starts)
        prev_accepting = {base + q for q in part.accepting}
    out.accepting = prev_accepting if prev_accepting is not None else set()
    return out


def union_nfa(parts: Sequence[Nfa]) -> Nfa:
    out = Nfa()
    for part in parts:
        base = _absorb(out, part)
        out.starts.update(base + q for q in part.starts)
        out.accepting.update(base + q for q in part.accepting)
    return out


def star_nfa(inner: Nfa) -> Nfa:
    out = Nfa()
    hub = out.add_state()
    base = _absorb(out, inner)
    out.eps[hub].update(base + q for q in inner.starts)
    for q in inner.accepting:
        out.eps[base + q].add(hub)
    out.starts = {hub}
    out.accepting = {hub}
    return out


def determinize(nfa: Nfa, cap: int | None = None) -> Dfa:
    """Subset construction preserving per-state OTHER semantics."""
    start = nfa.closure(nfa.starts)
    ids: dict[frozenset[int], int] = {start: 0}
    worklist = [start]
    edges: list[dict[Symbol, int]] = []
    other: list[int] = []
    accepting: list[int] = []

    def intern(subset: frozenset[int]) -> int:
        sid = ids.get(subset)
        if sid is None:
            sid = len(ids)
            if cap is not None and sid >= cap:
                raise StateLimitExceeded(cap)
            ids[subset] = sid
            worklist.append(subset)
        return sid

    while worklist:
        subset = worklist.pop()
        sid = ids[subset]
        while len(edges) <= sid:
            edges.append({})
            other.append(0)
        if subset & nfa.accepting:
            accepting.append(sid)
        other_target = intern(nfa.closure(nfa.move(subset, None)))
        row: dict[Symbol, int] = {}
        local: set[Symbol] = set()
        for q in subset:
            local.update(nfa.edges[q])
        for sym in local:
            target = intern(nfa.closure(nfa.move(subset, sym)))
            if target != other_target:
                row[sym] = target
        edges[sid] = row
        other[sid] = other_target
    return Dfa(edges, other, 0, accepting)


# ---------------------------------------------------------------------------
# DFA algebra

def _reachable(dfa: Dfa) -> list[int]:
    seen = {dfa.start}
    order = [dfa.start]
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for t in list(dfa.edges[q].values()) + [dfa.other[q]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
    return order

def minimize(dfa: Dfa) -> Dfa:
    """Minimal canonical form: partition refinement, then breadth-first
    renumbering with edges ordered by symbol.  Equal languages map to
    equal objects."""
    reach = _reachable(dfa)
    remap = {q: i for i, q in enumerate(reach)}
    edges = [{s: remap[t] for s, t in dfa.edges[q].items()} for q in reach]
    other = [remap[dfa.other[q]] for q in reach]
    accepting = {remap[q] for q in dfa.accepting if q in remap}
    n = len(reach)

    cls = [1 if q in accepting else 0 for q in range(n)]
    while True:
        sigs: dict[tuple, int] = {}
        new_cls = [0] * n
        for q in range(n):
            oth = cls[other[q]]
            # Sparse signature: explicit edges matter only where they leave
            # the OTHER class; states with equal signatures are equivalent.
            sig = (cls[q], oth, frozenset(
                (s, cls[t]) for s, t in edges[q].items() if cls[t] != oth))
            new_cls[q] = sigs.setdefault(sig, len(sigs))
        if new_cls == cls:
            break
        cls = new_cls

    n_classes = max(cls) + 1 if n else 0
    c_edges: list[dict[Symbol, int]] = [{} for _ in range(n_classes)]
    c_other = [0] * n_classes
    c_accepting: set[int] = set()
    done = [False] * n_classes
    for q in range(n):
        c = cls[q]
        if done[c]:
            continue
        done[c] = True
        c_other[c] = cls[other[q]]
        c_edges[c] = {s: cls[t] for s, t in edges[q].items() if cls[t] != cls[other[q]]}
        if q in accepting:
            c_accepting.add(c)

    # Canonical renumbering: BFS from the start class, symbol order first.
    order = [cls[0] if n else 0]
    seen = set(order)
    i = 0
    while i < len(order):
        c = order[i]
        i += 1
        targets = [c_edges[c][s] for s in sorted(c_edges[c], key=_symbol_key)]
        targets.append(c_other[c])
        for t in targets:
            if t not in seen:
                seen.add(t)
                order.append(t)
    remap2 = {c: i for i, c in enumerate(order)}
    final_edges = [{s: remap2[t] for s, t in c_edges[c].items()} for c in order]
    final_other = [remap2[c_other[c]] for c in order]
    final_accepting = [remap2[c] for c in c_accepting if c in remap2]
    return Dfa(final_edges, final_other, remap2[cls[0]] if n else 0, final_accepting)


def product(a: Dfa, b: Dfa, keep: Callable[[bool, bool], bool],
            cap: int | None = None) -> Dfa:
    """Product automaton; ``keep`` combines the two acceptance flags."""
    ids: dict[tuple[int, int], int] = {}
    edges: list[dict[Symbol, int]] = []
    other: list[int] = []
    accepting: list[int] = []
    worklist: list[tuple[int, int]] = []

    def intern(pair: tuple[int, int]) -> int:
        pid = ids.get(pair)
        if pid is None:
            pid = len(ids)
            if cap is not None and pid >= cap:
                raise StateLimitExceeded(cap)
            ids[pair] = pid
            worklist.append(pair)
        return pid

    intern((a.start, b.start))
    while worklist:
        pair = worklist.pop()
        qa, qb = pair
        pid = ids[pair]
        while len(edges) <= pid:
            edges.append({})
            other.append(0)
        if keep(qa in a.accepting, qb in b.accepting):
            accepting.append(pid)
        other_target = intern((a.other[qa], b.other[qb]))
        row: dict[Symbol, int] = {}
        # Symbols explicit in neither state behave exactly like OTHER.
        for sym in set(a.edges[qa]) | set(b.edges[qb]):
            target = intern((a.step(qa, sym), b.step(qb, sym)))
            if target != other_target:
                row[sym] = target
        edges[pid] = row
        other[pid] = other_target
    return Dfa(edges, other, 0, accepting)


def intersect(a: Dfa, b: Dfa, cap: int | None = None) -> Dfa:
    return minimize(product(a, b, lambda x, y: x and y, cap))


def union(a: Dfa, b: Dfa, cap: int | None = None) -> Dfa:
    return minimize(product(a, b, lambda x, y: x or y, cap))


def complement(a: Dfa) -> Dfa:
    flipped = Dfa(a.edges, a.other, a.start,
                  set(range(len(a))) - set(a.accepting))
    return minimize(flipped)


def is_empty(a: Dfa) -> bool:
    return not any(q in a.accepting for q in _reachable(a))


def language_equal(a: Dfa, b: Dfa) -> bool:
    return minimize(a) == minimize(b)


def _useful_states(dfa: Dfa) -> set[int]:
    reach = set(_reachable(dfa))
    back: dict[int, set[int]] = {q: set() for q in range(len(dfa))}
    for q in range(len(dfa)):
        for t in list(dfa.edges[q].values()) + [dfa.other[q]]:
            back[t].add(q)
    alive = set(dfa.accepting)
    stack = list(alive)
    while stack:
        q = stack.pop()
        for p in back[q]:
            if p not in alive:
                alive.add(p)
                stack.append(p)
    return reach & alive


def trim(dfa: Dfa) -> Dfa:
    """Collapse every non-useful state into a single dead state."""
    useful = _useful_states(dfa)
    if dfa.start not in useful:
        return empty_dfa()
    order = [q for q in _reachable(dfa) if q in useful]
    remap = {q: i for i, q in enumerate(order)}
    dead = len(order)
    edges = []
    other = []
    for q in order:
        edges.append({s: remap.get(t, dead) for s, t in dfa.edges[q].items()})
        other.append(remap.get(dfa.other[q], dead))
    edges.append({})
    other.append(dead)
    return Dfa(edges, other, remap[dfa.start],
               [remap[q] for q in dfa.accepting if q in useful])


def language_size(dfa: Dfa) -> int:
    """Number of accepted strings; the useful part must be acyclic."""
    t = trim(dfa)
    useful = _useful_states(t)
    succ = {q: [x for x in list(t.edges[q].values()) + [t.other[q]] if x in useful]
            for q in useful}
    color: dict[int, int] = {}
    counts: dict[int, int] = {}
    if t.start not in useful:
        return 0

    def visit(q: int) -> int:
        state = color.get(q)
        if state == 1:
            raise CyclicAutomaton("automaton has productive cycles")
        if state == 2:
            return counts[q]
        color[q] = 1
        if t.other[q] in useful:
            raise OpenAlphabet("accepting paths run through OTHER transitions")
        total = 1 if q in t.accepting else 0
        for target in t.edges[q].values():
            if target in useful:
                total += visit(target)
        color[q] = 2
        counts[q] = total
        return total

    return visit(t.start)


def enumerate_language(dfa: Dfa, max_count: int | None = None) -> list[SymbolString]:
    """All accepted strings in lexicographic symbol order.

    The useful part of the automaton must be acyclic and must not accept
    through OTHER transitions.  Raises EnumerationOverflow when more than
    ``max_count`` strings would be produced.
    """
    total = language_size(dfa)
    if max_count is not None and total > max_count:
        raise EnumerationOverflow(
            f"{total} accepted strings exceed the cap of {max_count}")
    t = trim(dfa)
    useful = _useful_states(t)
    if t.start not in useful:
        return []
    out: list[SymbolString] = []
    prefix: list[Symbol] = []

    def walk(q: int) -> None:
        if q in t.accepting:
            out.append(tuple(prefix))
        for sym in sorted(t.edges[q], key=_symbol_key):
            target = t.edges[q][sym]
            if target in useful:
                prefix.append(sym)
                walk(target)
                prefix.pop()

    walk(t.start)
    return out


def dump(dfa: Dfa) -> str:
    """Line-based transition table for golden tests and debugging."""
    lines = [f"start\t{dfa.start}",
             "accept\t" + " ".join(str(q) for q in sorted(dfa.accepting))]
    for q in range(len(dfa)):
        for sym in sorted(dfa.edges[q], key=_symbol_key):
            lines.append(f"{q}\t{sym}\t{dfa.edges[q][sym]}")
        lines.append(f"{q}\t<OTHER>\t{dfa.other[q]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Regular expressions

@dataclass(frozen=True)
class Regex:
    pass


@dataclass(frozen=True)
class RSymbol(Regex):
    symbol: Symbol


@dataclass(frozen=True)
class RAny(Regex):
    pass


@dataclass(frozen=True)
class RAnyExcept(Regex):
    excluded: frozenset[Symbol]


@dataclass(frozen=True)
class REpsilon(Regex):
    pass


@dataclass(frozen=True)
class REmpty(Regex):
    pass


@dataclass(frozen=True)
class RConcat(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RUnion(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RStar(Regex):
    child: Regex


@dataclass(frozen=True)
class RAnd(Regex):
    parts: tuple[Regex, ...]


@dataclass(frozen=True)
class RNot(Regex):
    child: Regex


@dataclass(frozen=True)
class RRef(Regex):
    name: str


def rconcat(*parts: Regex) -> Regex:
    return RConcat(tuple(parts))


def runion(*parts: Regex) -> Regex:
    return RUnion(tuple(parts))


def rsym(symbol: Symbol) -> Regex:
    return RSymbol(symbol)


SIGMA_STAR = RStar(RAny())


class RegexCompiler:
    """Compiles regex trees against a table of named definitions."""

    def __init__(self, definitions: dict[str, Regex] | None = None,
                 cap: int | None = None):
        self.definitions = definitions or {}
        self.cap = cap
        self._memo: dict[Regex, Dfa] = {}
        self._resolving: set[str] = set()

    def compile(self, regex: Regex) -> Dfa:
        hit = self._memo.get(regex)
        if hit is not None:
            return hit
        result = minimize(self._build(regex))
        self._memo[regex] = result
        return result

    def _build(self, regex: Regex) -> Dfa:
        if isinstance(regex, RSymbol):
            return symbol_dfa(regex.symbol)
        if isinstance(regex, RAny):
            return any_symbol_dfa()
        if isinstance(regex, RAnyExcept):
            return any_except_dfa(regex.excluded)
        if isinstance(regex, REpsilon):
            return epsilon_dfa()
        if isinstance(regex, REmpty):
            return empty_dfa()
        if isinstance(regex, RConcat):
            if not regex.parts:
                return epsilon_dfa()
            return determinize(concat_nfa([dfa_to_nfa(self.compile(p))
                                           for p in regex.parts]), self.cap)
        if isinstance(regex, RUnion):
            if not regex.parts:
                return empty_dfa()
            return determinize(union_nfa([dfa_to_nfa(self.compile(p))
                                          for p in regex.parts]), self.cap)
        if isinstance(regex, RStar):
            return determinize(star_nfa(dfa_to_nfa(self.compile(regex.child))),
                               self.cap)
        if isinstance(regex, RAnd):
            if not regex.parts:
                return universe_dfa()
            acc = self.compile(regex.parts[0])
            for p in regex.parts[1:]:
                acc = intersect(acc, self.compile(p), self.cap)
            return acc
        if isinstance(regex, RNot):
            return complement(self.compile(regex.child))
        if isinstance(regex, RRef):
            if regex.name in self._resolving:
                raise CyclicDefinition(f"definition cycle through {regex.name!r}")
            target = self.definitions.get(regex.name)
            if target is None:
                raise UnknownReference(f"unknown definition {regex.name!r}")
            self._resolving.add(regex.name)
            try:
                return self.compile(target)
            finally:
                self._resolving.discard(regex.name)
        raise TypeError(f"unknown regex node {regex!r}")


def compile_regex(regex: Regex, definitions: dict[str, Regex] | None = None,
                  cap: int | None = None) -> Dfa:
    return RegexCompiler(definitions, cap).compile(regex)
