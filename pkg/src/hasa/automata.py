"""Hedge automata over unranked trees.

A hedge automaton has transition rules ``a(R) -> q`` where ``R`` is a
regular word language over the automaton's own states, recognized here by
a small NFA (the "horizontal" automaton).  A tree node labeled ``a`` may
evaluate to ``q`` whenever the sequence of states assigned to its children
spells a word of ``R``; a tree is accepted when its root can evaluate to a
final state.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import SymbolNotInAlphabet
from .trees import Tree, is_token

#: Transition symbol standing for the empty word.
EPSILON = None

Transition = tuple[str, Optional[str], str]


class FreshNames:
    """Mints identifiers that collide neither with reserved names nor with
    each other.  Candidates are ``base.f1``, ``base.f2``, ... so generated
    names stay readable and valid as tokens."""

    def __init__(self, reserved: Iterable[str] = ()):
        self._taken = set(reserved)
        self._counter = itertools.count(1)

    def reserve(self, names: Iterable[str]) -> None:
        self._taken.update(names)

    def fresh(self, base: str) -> str:
        while True:
            candidate = f"{base}.f{next(self._counter)}"
            if candidate not in self._taken:
                self._taken.add(candidate)
                return candidate


@dataclass(frozen=True, eq=False)
class HorizontalNFA:
    """Word automaton over state symbols, with a single initial state,
    a set of final states, and optional epsilon moves.

    Instances are immutable; construction helpers below derive new
    automata instead of mutating.
    """

    states: frozenset[str]
    alphabet: frozenset[str]
    initial: str
    finals: frozenset[str]
    transitions: frozenset[Transition]

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not among states")
        if not self.finals <= self.states:
            raise ValueError("final states must be a subset of states")
        for src, sym, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition {(src, sym, dst)} leaves the state set")
            if sym is not EPSILON and sym not in self.alphabet:
                raise ValueError(f"transition symbol {sym!r} not in the alphabet")

    def with_alphabet(self, alphabet: Iterable[str]) -> "HorizontalNFA":
        return HorizontalNFA(
            self.states, frozenset(alphabet), self.initial, self.finals, self.transitions
        )

    def replace_transitions(self, transitions: Iterable[Transition],
                            extra_states: Iterable[str] = ()) -> "HorizontalNFA":
        return HorizontalNFA(
            self.states | frozenset(extra_states),
            self.alphabet,
            self.initial,
            self.finals,
            frozenset(transitions),
        )


def hnfa(initial: str, finals: Iterable[str], transitions: Iterable[Transition],
         alphabet: Iterable[str] = (), states: Iterable[str] = ()) -> HorizontalNFA:
    """Build a :class:`HorizontalNFA`, inferring states and alphabet from
    the transitions."""
    transitions = frozenset(transitions)
    all_states = {initial} | set(finals) | set(states)
    symbols = set(alphabet)
    for src, sym, dst in transitions:
        all_states.add(src)
        all_states.add(dst)
        if sym is not EPSILON:
            symbols.add(sym)
    return HorizontalNFA(
        frozenset(all_states), frozenset(symbols), initial, frozenset(finals), transitions
    )


def epsilon_language() -> HorizontalNFA:
    """The automaton accepting only the empty word."""
    return hnfa("n0", ["n0"], [])


def word_language(word: Sequence[str]) -> HorizontalNFA:
    """The automaton accepting exactly one word."""
    trans = [(f"n{i}", sym, f"n{i + 1}") for i, sym in enumerate(word)]
    return hnfa("n0", [f"n{len(word)}"], trans, states=[f"n{i}" for i in range(len(word) + 1)])


@functools.lru_cache(maxsize=None)
def _adjacency(nfa: HorizontalNFA):
    """(symbol adjacency, epsilon adjacency) keyed by source state.

    Cached per automaton instance; safe because instances are immutable.
    """
    by_symbol: dict[str, dict[str, set[str]]] = {}
    eps: dict[str, set[str]] = {}
    for src, sym, dst in nfa.transitions:
        if sym is EPSILON:
            eps.setdefault(src, set()).add(dst)
        else:
            by_symbol.setdefault(src, {}).setdefault(sym, set()).add(dst)
    return by_symbol, eps


def _closure(nfa: HorizontalNFA, states: Iterable[str]) -> frozenset[str]:
    _, eps = _adjacency(nfa)
    seen = set(states)
    stack = list(seen)
    while stack:
        s = stack.pop()
        for t in eps.get(s, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def nfa_step(nfa: HorizontalNFA, states: frozenset[str], symbol: str) -> frozenset[str]:
    """One subset-simulation step (epsilon closure applied afterwards)."""
    by_symbol, _ = _adjacency(nfa)
    nxt: set[str] = set()
    for s in states:
        nxt |= by_symbol.get(s, {}).get(symbol, set())
    return _closure(nfa, nxt)


def nfa_start(nfa: HorizontalNFA) -> frozenset[str]:
    return _closure(nfa, [nfa.initial])


def nfa_accepts(nfa: HorizontalNFA, word: Sequence[str]) -> bool:
    """Standard NFA acceptance with epsilon closure."""
    for sym in word:
        if sym not in nfa.alphabet:
            raise SymbolNotInAlphabet(f"symbol {sym!r} not in the automaton alphabet")
    cur = nfa_start(nfa)
    for sym in word:
        cur = nfa_step(nfa, cur, sym)
        if not cur:
            return False
    return bool(cur & nfa.finals)


def nfa_is_empty(nfa: HorizontalNFA) -> bool:
    """True iff the automaton accepts no word at all."""
    seen = set(nfa_start(nfa))
    stack = list(seen)
    by_symbol, _ = _adjacency(nfa)
    while stack:
        s = stack.pop()
        for targets in by_symbol.get(s, {}).values():
            for t in targets:
                for u in _closure(nfa, [t]):
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
    return not (seen & nfa.finals)


def epsilon_eliminate(nfa: HorizontalNFA) -> HorizontalNFA:
    """Equivalent automaton without epsilon moves.

    States whose closure contains a final state become final; unreachable
    states are dropped, so the result never has more states than the input.
    """
    by_symbol, _ = _adjacency(nfa)
    new_trans: set[Transition] = set()
    for s in nfa.states:
        for mid in _closure(nfa, [s]):
            for sym, targets in by_symbol.get(mid, {}).items():
                for t in targets:
                    new_trans.add((s, sym, t))
    new_finals = {s for s in nfa.states if _closure(nfa, [s]) & nfa.finals}

    reachable = {nfa.initial}
    stack = [nfa.initial]
    adj: dict[str, set[str]] = {}
    for src, _sym, dst in new_trans:
        adj.setdefault(src, set()).add(dst)
    while stack:
        s = stack.pop()
        for t in adj.get(s, ()):
            if t not in reachable:
                reachable.add(t)
                stack.append(t)

    return HorizontalNFA(
        frozenset(reachable),
        nfa.alphabet,
        nfa.initial,
        frozenset(new_finals & reachable),
        frozenset(tr for tr in new_trans if tr[0] in reachable),
    )


def nfa_union(a: HorizontalNFA, b: HorizontalNFA) -> HorizontalNFA:
    """Union via a fresh initial state with epsilon moves to both branches.

    The branch state spaces are kept apart by tagging, so the inputs need
    not be disjoint.
    """
    def tag(prefix: str, s: str) -> str:
        return f"{prefix}.{s}"

    states = {tag("u1", s) for s in a.states} | {tag("u2", s) for s in b.states} | {"u0"}
    trans: set[Transition] = {("u0", EPSILON, tag("u1", a.initial)),
                              ("u0", EPSILON, tag("u2", b.initial))}
    trans |= {(tag("u1", s), sym, tag("u1", t)) for s, sym, t in a.transitions}
    trans |= {(tag("u2", s), sym, tag("u2", t)) for s, sym, t in b.transitions}
    finals = {tag("u1", s) for s in a.finals} | {tag("u2", s) for s in b.finals}
    return HorizontalNFA(
        frozenset(states), a.alphabet | b.alphabet, "u0", frozenset(finals), frozenset(trans)
    )


@dataclass(frozen=True, eq=False)
class HedgeAutomaton:
    """Normalized hedge automaton: at most one rule per (label, state) pair.

    ``rules`` maps ``(label, state)`` to the horizontal automaton
    constraining the children of a node with that label that evaluates to
    that state.  An absent key means the horizontal language is empty.
    """

    alphabet: frozenset[str]
    states: frozenset[str]
    finals: frozenset[str]
    rules: Mapping[tuple[str, str], HorizontalNFA]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "finals", frozenset(self.finals))
        object.__setattr__(self, "rules", dict(self.rules))
        if not self.finals <= self.states:
            raise ValueError("final states must be a subset of states")
        for (label, state) in self.rules:
            if label not in self.alphabet:
                raise ValueError(f"rule label {label!r} not in the alphabet")
            if state not in self.states:
                raise ValueError(f"rule target state {state!r} not among states")

    def rules_for_label(self, label: str) -> list[tuple[str, HorizontalNFA]]:
        return _rules_by_label(self).get(label, [])


@functools.lru_cache(maxsize=None)
def _rules_by_label(automaton: HedgeAutomaton) -> dict[str, list[tuple[str, HorizontalNFA]]]:
    grouped: dict[str, list[tuple[str, HorizontalNFA]]] = {}
    for (label, state), nfa in sorted(automaton.rules.items()):
        grouped.setdefault(label, []).append((state, nfa))
    return grouped


def state_sets(automaton: HedgeAutomaton, t: Tree) -> dict[tuple[int, ...], frozenset[str]]:
    """Bottom-up admissible-state sets, keyed by position path.

    A state q is admissible at a node iff some rule for the node's label
    accepts a word drawable from the children's admissible sets.  Children
    of a node carry independent runs, so set-level simulation is exact.
    """
    table: dict[tuple[int, ...], frozenset[str]] = {}

    def walk(sub: Tree, here: tuple[int, ...]) -> frozenset[str]:
        child_sets = [walk(c, here + (i,)) for i, c in enumerate(sub.children, start=1)]
        admissible = set()
        for state, nfa in automaton.rules_for_label(sub.label):
            cur = nfa_start(nfa)
            for child_set in child_sets:
                step: set[str] = set()
                for sym in child_set:
                    if sym in nfa.alphabet:
                        step |= nfa_step(nfa, cur, sym)
                cur = frozenset(step)
                if not cur:
                    break
            if cur & nfa.finals:
                admissible.add(state)
        result = frozenset(admissible)
        table[here] = result
        return result

    walk(t, ())
    return table


def _find_word(nfa: HorizontalNFA, child_sets: list[frozenset[str]]) -> Optional[list[str]]:
    """A word, one symbol per child set, accepted by ``nfa``; None if none.

    Breadth-first search over (child index, NFA state set is overkill);
    track per-child frontiers of single NFA states with backpointers.
    """
    frontier: dict[str, Optional[tuple[str, str]]] = {s: None for s in nfa_start(nfa)}
    layers: list[dict[str, Optional[tuple[str, str]]]] = [frontier]
    for child_set in child_sets:
        nxt: dict[str, tuple[str, str]] = {}
        for s in layers[-1]:
            for sym in sorted(child_set):
                if sym not in nfa.alphabet:
                    continue
                for t in nfa_step(nfa, frozenset([s]), sym):
                    nxt.setdefault(t, (s, sym))
        if not nxt:
            return None
        layers.append(dict(nxt))
    accepting = sorted(set(layers[-1]) & nfa.finals)
    if not accepting:
        return None
    word: list[str] = []
    state = accepting[0]
    for depth in range(len(child_sets), 0, -1):
        back = layers[depth][state]
        assert back is not None
        state, sym = back
        word.append(sym)
    word.reverse()
    return word


def run(automaton: HedgeAutomaton, t: Tree) -> Optional[Tree]:
    """An accepting computation over ``t``, or None if ``t`` is rejected.

    The computation is returned as a tree of state names with the same
    shape as ``t``: the state at each position is the one the automaton
    assigns to the corresponding node.
    """
    if any(label not in automaton.alphabet for label in _labels_of(t)):
        return None
    table = state_sets(automaton, t)
    root_choices = sorted(table[()] & automaton.finals)
    if not root_choices:
        return None

    def build(sub: Tree, here: tuple[int, ...], state: str) -> Tree:
        nfa = automaton.rules[(sub.label, state)]
        child_sets = [table[here + (i,)] for i in range(1, len(sub.children) + 1)]
        word = _find_word(nfa, child_sets)
        assert word is not None, "state table and witness search disagree"
        kids = tuple(
            build(c, here + (i,), word[i - 1])
            for i, c in enumerate(sub.children, start=1)
        )
        return Tree(state, kids)

    return build(t, (), root_choices[0])


def accepts(automaton: HedgeAutomaton, t: Tree) -> bool:
    """Membership of ``t`` in the automaton's language."""
    if any(label not in automaton.alphabet for label in _labels_of(t)):
        return False
    table = state_sets(automaton, t)
    return bool(table[()] & automaton.finals)


def _labels_of(t: Tree):
    stack = [t]
    while stack:
        sub = stack.pop()
        yield sub.label
        stack.extend(sub.children)


def normalize(rule_list: Iterable[tuple[str, HorizontalNFA, str]],
              finals: Iterable[str] = (),
              alphabet: Iterable[str] = (),
              states: Iterable[str] = (),
              name: str = "") -> HedgeAutomaton:
    """Build a hedge automaton from a list of (label, NFA, state) rules.

    Rules sharing a (label, state) key are merged by language union, and
    rules whose horizontal language is empty are dropped, so the result
    satisfies the one-rule-per-key and no-empty-rule invariants.
    """
    merged: dict[tuple[str, str], HorizontalNFA] = {}
    all_labels = set(alphabet)
    all_states = set(states) | set(finals)
    for label, nfa, state in rule_list:
        if not is_token(label) or not is_token(state):
            raise ValueError(f"invalid rule key ({label!r}, {state!r})")
        all_labels.add(label)
        all_states.add(state)
        key = (label, state)
        if key in merged:
            merged[key] = epsilon_eliminate(nfa_union(merged[key], nfa))
        else:
            merged[key] = epsilon_eliminate(nfa)
    merged = {key: nfa for key, nfa in merged.items() if not nfa_is_empty(nfa)}
    return HedgeAutomaton(
        frozenset(all_labels), frozenset(all_states), frozenset(finals), merged, name=name
    )


def state_hygiene(automaton: HedgeAutomaton, reserved: Iterable[str]) -> HedgeAutomaton:
    """Rename states so they avoid ``reserved``; the language is unchanged.

    Horizontal alphabets and transition symbols are renamed consistently.
    The renaming is injective, so distinct states stay distinct.
    """
    reserved = set(reserved)
    clashing = automaton.states & reserved
    if not clashing:
        return automaton
    taken = set(automaton.states) | reserved
    mapping: dict[str, str] = {}
    for state in sorted(clashing):
        k = 1
        while f"{state}.r{k}" in taken:
            k += 1
        mapping[state] = f"{state}.r{k}"
        taken.add(mapping[state])

    def rename(s: str) -> str:
        return mapping.get(s, s)

    def rename_nfa(nfa: HorizontalNFA) -> HorizontalNFA:
        return HorizontalNFA(
            nfa.states,
            frozenset(rename(s) for s in nfa.alphabet),
            nfa.initial,
            nfa.finals,
            frozenset(
                (src, sym if sym is EPSILON else rename(sym), dst)
                for src, sym, dst in nfa.transitions
            ),
        )

    return HedgeAutomaton(
        automaton.alphabet,
        frozenset(rename(s) for s in automaton.states),
        frozenset(rename(s) for s in automaton.finals),
        {(label, rename(state)): rename_nfa(nfa)
         for (label, state), nfa in automaton.rules.items()},
        name=automaton.name,
    )
