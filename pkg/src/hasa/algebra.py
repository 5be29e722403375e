"""Language algebra on hedge automata.

Union, intersection, bottom-up determinization, complement, emptiness with
a minimal witness tree, inclusion with counterexample extraction, and
bounded enumeration of accepted trees.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional

from .automata import (
    EPSILON,
    HedgeAutomaton,
    HorizontalNFA,
    accepts,
    epsilon_eliminate,
    hnfa,
    nfa_is_empty,
    nfa_start,
    nfa_step,
    state_hygiene,
)
from .errors import EnumerationLimitExceeded, StateBudgetExceeded
from .trees import Tree

#: Default cap on subset states produced by determinization.
DEFAULT_STATE_BUDGET = 2 ** 16


@dataclass(frozen=True)
class InclusionVerdict:
    """Result of an inclusion test.

    When the inclusion fails, ``counterexample`` is a tree accepted by the
    left automaton and rejected by the right one.
    """

    holds: bool
    counterexample: Optional[Tree] = None


def union(a: HedgeAutomaton, b: HedgeAutomaton) -> HedgeAutomaton:
    """Automaton for L(a) ∪ L(b) by disjoint state union."""
    b = state_hygiene(b, a.states)
    rules = dict(a.rules)
    for key, nfa in b.rules.items():
        assert key not in rules, "state spaces overlap after hygiene"
        rules[key] = nfa
    return HedgeAutomaton(
        a.alphabet | b.alphabet,
        a.states | b.states,
        a.finals | b.finals,
        rules,
        name=f"{a.name or 'A'}|{b.name or 'B'}",
    )


def _ensure_eps_free(a: HedgeAutomaton) -> HedgeAutomaton:
    if all(
        all(sym is not EPSILON for _s, sym, _t in nfa.transitions)
        for nfa in a.rules.values()
    ):
        return a
    return HedgeAutomaton(
        a.alphabet,
        a.states,
        a.finals,
        {key: epsilon_eliminate(nfa) for key, nfa in a.rules.items()},
        name=a.name,
    )


class _Determinizer:
    """Subset construction for hedge automata.

    Output states are reachable subsets of the input states.  For each
    label the children words are tracked by running all of that label's
    horizontal automata jointly in subset mode; the joint simulation state
    (a set of (rule state, NFA state) pairs) determines, after any word,
    exactly which subset the node evaluates to.
    """

    def __init__(self, automaton: HedgeAutomaton, alphabet: Iterable[str],
                 budget: Optional[int]):
        self.source = _ensure_eps_free(automaton)
        self.labels = sorted(set(alphabet) | set(automaton.alphabet))
        self.budget = budget if budget is not None else DEFAULT_STATE_BUDGET
        self.rule_map = {
            label: dict(self.source.rules_for_label(label)) for label in self.labels
        }
        self.subset_names: dict[frozenset[str], str] = {}
        self.order: list[frozenset[str]] = []
        # per label: joint-simulation exploration
        self.fronts: dict[str, frozenset[tuple[str, str]]] = {}
        self.joint_trans: dict[str, dict[tuple[frozenset, frozenset[str]], frozenset]] = {}
        self.joint_states: dict[str, set[frozenset[tuple[str, str]]]] = {}

    def _name(self, subset: frozenset[str]) -> str:
        if subset not in self.subset_names:
            if len(self.subset_names) >= self.budget:
                raise StateBudgetExceeded(self.budget)
            self.subset_names[subset] = f"d{len(self.subset_names)}"
            self.order.append(subset)
        return self.subset_names[subset]

    def _start_front(self, label: str) -> frozenset[tuple[str, str]]:
        if label not in self.fronts:
            pairs = set()
            for state, nfa in self.source.rules_for_label(label):
                for s in nfa_start(nfa):
                    pairs.add((state, s))
            self.fronts[label] = frozenset(pairs)
            self.joint_states[label] = {self.fronts[label]}
            self.joint_trans[label] = {}
        return self.fronts[label]

    def _result_subset(self, label: str, joint: frozenset[tuple[str, str]]) -> frozenset[str]:
        rules = self.rule_map[label]
        return frozenset(
            state for state, s in joint if s in rules[state].finals
        )

    def _joint_step(self, label: str, joint: frozenset[tuple[str, str]],
                    subset: frozenset[str]) -> frozenset[tuple[str, str]]:
        key = (joint, subset)
        cached = self.joint_trans[label].get(key)
        if cached is not None:
            return cached
        rules = self.rule_map[label]
        by_rule: dict[str, set[str]] = {}
        for state, s in joint:
            by_rule.setdefault(state, set()).add(s)
        nxt: set[tuple[str, str]] = set()
        for state, nfa_states in by_rule.items():
            nfa = rules[state]
            moved: set[str] = set()
            for sym in subset:
                if sym in nfa.alphabet:
                    moved |= nfa_step(nfa, frozenset(nfa_states), sym)
            nxt.update((state, s) for s in moved)
        result = frozenset(nxt)
        self.joint_trans[label][key] = result
        self.joint_states[label].add(result)
        return result

    def explore(self) -> None:
        """Fixpoint over reachable subsets and joint simulation states."""
        for label in self.labels:
            self._name(self._result_subset(label, self._start_front(label)))
        while True:
            changed = False
            known_subsets = list(self.order)
            for label in self.labels:
                self._start_front(label)
                for joint in list(self.joint_states[label]):
                    for subset in known_subsets:
                        key = (joint, subset)
                        if key in self.joint_trans[label]:
                            continue
                        nxt = self._joint_step(label, joint, subset)
                        before = len(self.subset_names)
                        self._name(self._result_subset(label, nxt))
                        if len(self.subset_names) != before:
                            changed = True
                        changed = True
            if not changed and len(known_subsets) == len(self.order):
                break

    def build(self) -> tuple[HedgeAutomaton, dict[str, frozenset[str]]]:
        self.explore()
        d_alphabet = frozenset(self.subset_names.values())
        rules: dict[tuple[str, str], HorizontalNFA] = {}
        for label in self.labels:
            jstates = sorted(self.joint_states[label], key=sorted)
            jname = {j: f"j{i}" for i, j in enumerate(jstates)}
            transitions = set()
            for (joint, subset), nxt in self.joint_trans[label].items():
                transitions.add((jname[joint], self.subset_names[subset], jname[nxt]))
            by_result: dict[str, set[str]] = {}
            for j in jstates:
                by_result.setdefault(
                    self.subset_names[self._result_subset(label, j)], set()
                ).add(jname[j])
            for d_state, nfa_finals in by_result.items():
                rules[(label, d_state)] = HorizontalNFA(
                    frozenset(jname.values()),
                    d_alphabet,
                    jname[self.fronts[label]],
                    frozenset(nfa_finals),
                    frozenset(transitions),
                )
        subset_of = {name: subset for subset, name in self.subset_names.items()}
        finals = frozenset(
            name for name, subset in subset_of.items()
            if subset & self.source.finals
        )
        out = HedgeAutomaton(
            frozenset(self.labels),
            frozenset(self.subset_names.values()),
            finals,
            rules,
            name=f"det({self.source.name})" if self.source.name else "det",
        )
        return out, subset_of


def determinize(a: HedgeAutomaton, *, alphabet: Iterable[str] = (),
                budget: Optional[int] = None) -> HedgeAutomaton:
    """Bottom-up deterministic, complete equivalent of ``a``.

    Every (label, children word) leads to exactly one subset state, and
    only reachable subsets are materialized.  Raises
    :class:`StateBudgetExceeded` if more than ``budget`` subsets appear.
    """
    out, _ = _Determinizer(a, alphabet, budget).build()
    return out


def complement(a: HedgeAutomaton, sigma: Iterable[str], *,
               budget: Optional[int] = None) -> HedgeAutomaton:
    """Automaton for all trees over ``sigma`` not accepted by ``a``."""
    sigma = frozenset(sigma)
    if not a.alphabet <= sigma:
        raise ValueError("complement alphabet must cover the automaton alphabet")
    det, subset_of = _Determinizer(a, sigma, budget).build()
    flipped = frozenset(
        name for name in det.states if not (subset_of[name] & a.finals)
    )
    return HedgeAutomaton(
        det.alphabet, det.states, flipped, det.rules,
        name=f"co({a.name})" if a.name else "co",
    )


def intersect(a: HedgeAutomaton, b: HedgeAutomaton) -> HedgeAutomaton:
    """Product automaton for L(a) ∩ L(b).

    States are pairs of component states; the horizontal automaton of a
    pair rule is the product of the component NFAs reading pair symbols.
    Only (label, pair) rules with both components present are built.
    """
    a = _ensure_eps_free(a)
    b = _ensure_eps_free(b)

    def pair(x: str, y: str) -> str:
        return f"{x}&{y}"

    rules: dict[tuple[str, str], HorizontalNFA] = {}
    pair_states: set[str] = set()
    labels = a.alphabet & b.alphabet
    pair_alphabet = frozenset(pair(x, y) for x in a.states for y in b.states)
    for label in sorted(labels):
        for qa, nfa_a in a.rules_for_label(label):
            for qb, nfa_b in b.rules_for_label(label):
                product = _product_nfa(nfa_a, nfa_b, pair, pair_alphabet)
                if nfa_is_empty(product):
                    continue
                pair_states.add(pair(qa, qb))
                rules[(label, pair(qa, qb))] = product
    finals = frozenset(
        pair(x, y) for x in a.finals for y in b.finals
    ) & frozenset(pair_states)
    return HedgeAutomaton(labels, frozenset(pair_states), finals, rules, name="product")


def _product_nfa(na: HorizontalNFA, nb: HorizontalNFA, pair, pair_alphabet) -> HorizontalNFA:
    out_a: dict[str, list[tuple[str, str]]] = {}
    for s, sym, t in na.transitions:
        out_a.setdefault(s, []).append((sym, t))
    out_b: dict[str, list[tuple[str, str]]] = {}
    for s, sym, t in nb.transitions:
        out_b.setdefault(s, []).append((sym, t))
    start = (na.initial, nb.initial)
    states = {start}
    worklist = [start]
    transitions: set[tuple[str, str, str]] = set()
    while worklist:
        sa, sb = worklist.pop()
        for xa, ta in out_a.get(sa, ()):
            for xb, tb in out_b.get(sb, ()):
                transitions.add((pair(sa, sb), pair(xa, xb), pair(ta, tb)))
                if (ta, tb) not in states:
                    states.add((ta, tb))
                    worklist.append((ta, tb))
    finals = frozenset(
        pair(x, y) for (x, y) in states if x in na.finals and y in nb.finals
    )
    return HorizontalNFA(
        frozenset(pair(*st) for st in states),
        pair_alphabet,
        pair(*start),
        finals,
        frozenset(transitions),
    )


_Cost = tuple[int, tuple[str, ...]]


def _witness_table(a: HedgeAutomaton) -> dict[str, Tree]:
    """Minimal witness tree per productive state.

    Minimality is node count first, then the lexicographically least
    preorder label sequence; both orders are compatible with composition,
    so a Bellman-Ford style relaxation converges to the optimum.
    """
    a = _ensure_eps_free(a)
    best: dict[str, tuple[_Cost, Tree]] = {}

    def cost_of(t: Tree) -> _Cost:
        return (t.size, _preorder_labels(t))

    changed = True
    while changed:
        changed = False
        for (label, state), nfa in sorted(a.rules.items()):
            word = _cheapest_word(nfa, best)
            if word is None:
                continue
            candidate = Tree(label, tuple(best[q][1] for q in word))
            cand_cost = cost_of(candidate)
            if state not in best or cand_cost < best[state][0]:
                best[state] = (cand_cost, candidate)
                changed = True
    return {state: tree for state, (_c, tree) in best.items()}


def _cheapest_word(nfa: HorizontalNFA, best: dict[str, tuple[_Cost, Tree]]
                   ) -> Optional[tuple[str, ...]]:
    """Cheapest accepted word whose symbols all have witnesses.

    Dijkstra over NFA states: edge weight is the symbol's witness cost and
    path cost adds node counts and concatenates label sequences.
    """
    zero: _Cost = (0, ())

    def plus(c1: _Cost, c2: _Cost) -> _Cost:
        return (c1[0] + c2[0], c1[1] + c2[1])

    dist: dict[str, tuple[_Cost, tuple[str, ...]]] = {nfa.initial: (zero, ())}
    heap: list[tuple[_Cost, str, tuple[str, ...]]] = [(zero, nfa.initial, ())]
    settled: set[str] = set()
    by_state: dict[str, list[tuple[str, str]]] = {}
    for s, sym, t in nfa.transitions:
        by_state.setdefault(s, []).append((sym, t))
    while heap:
        cost, state, word = heapq.heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        if state in nfa.finals:
            return word
        for sym, target in sorted(by_state.get(state, [])):
            if sym not in best:
                continue
            ncost = plus(cost, best[sym][0])
            if target not in dist or ncost < dist[target][0]:
                dist[target] = (ncost, word + (sym,))
                heapq.heappush(heap, (ncost, target, word + (sym,)))
    return None


def is_empty(a: HedgeAutomaton) -> Optional[Tree]:
    """None if the language is empty, else a minimal accepted tree.

    Ties between equal-sized witnesses break toward the lexicographically
    least preorder label sequence.
    """
    table = _witness_table(a)
    candidates = [table[q] for q in a.finals if q in table]
    if not candidates:
        return None
    return min(candidates, key=lambda t: (t.size, _preorder_labels(t)))


def _preorder_labels(t: Tree) -> tuple[str, ...]:
    out = []
    stack = [t]
    while stack:
        sub = stack.pop()
        out.append(sub.label)
        stack.extend(reversed(sub.children))
    return tuple(out)


def trim_unproductive(a: HedgeAutomaton) -> HedgeAutomaton:
    """Drop states no tree can evaluate to, and the edges reading them.

    The language is unchanged: an edge whose symbol is unproductive can
    never fire, and a rule targeting an unproductive state can never
    conclude.  Constructions that reroute or erase edges (replacement,
    deletion) are only sound on trimmed automata, since they would turn
    such dead edges into live ones.
    """
    productive = frozenset(_witness_table(a))
    dead = a.states - productive
    if not dead:
        return a
    rules: dict[tuple[str, str], HorizontalNFA] = {}
    for (label, state), nfa in a.rules.items():
        if state in dead:
            continue
        kept = frozenset(
            tr for tr in nfa.transitions if tr[1] is EPSILON or tr[1] not in dead
        )
        trimmed = nfa if kept == nfa.transitions else HorizontalNFA(
            nfa.states, nfa.alphabet, nfa.initial, nfa.finals, kept
        )
        if nfa_is_empty(trimmed):
            continue
        rules[(label, state)] = trimmed
    return HedgeAutomaton(
        a.alphabet, productive, a.finals & productive, rules, name=a.name
    )


def included(a: HedgeAutomaton, b: HedgeAutomaton, *,
             budget: Optional[int] = None) -> InclusionVerdict:
    """Whether L(a) ⊆ L(b), with a counterexample on failure."""
    sigma = a.alphabet | b.alphabet
    gap = intersect(a, complement(b, sigma, budget=budget))
    witness = is_empty(gap)
    if witness is None:
        return InclusionVerdict(True)
    if not accepts(a, witness) or accepts(b, witness):
        raise RuntimeError("inclusion counterexample failed re-verification")
    return InclusionVerdict(False, witness)


def enumerate_trees(a: HedgeAutomaton, max_nodes: int, *,
                    limit: Optional[int] = None) -> set[Tree]:
    """All accepted trees with at most ``max_nodes`` nodes."""
    per_state = _state_trees(a, max_nodes, limit=limit)
    out: set[Tree] = set()
    for q in a.finals:
        for bucket in per_state.get(q, {}).values():
            out |= bucket
    return out


def enumerate_state(a: HedgeAutomaton, state: str, max_nodes: int, *,
                    limit: Optional[int] = None) -> set[Tree]:
    """All trees of at most ``max_nodes`` nodes that evaluate to ``state``."""
    per_state = _state_trees(a, max_nodes, limit=limit)
    out: set[Tree] = set()
    for bucket in per_state.get(state, {}).values():
        out |= bucket
    return out


def _state_trees(a: HedgeAutomaton, max_nodes: int, *, limit: Optional[int]
                 ) -> dict[str, dict[int, set[Tree]]]:
    """Dynamic program: trees of each exact size evaluating to each state.

    Sizes are filled in increasing order; hedges drawn along NFA paths are
    memoized per (rule, NFA state, size) once all smaller tree sizes are
    final.
    """
    a = _ensure_eps_free(a)
    table: dict[str, dict[int, set[Tree]]] = {q: {} for q in a.states}
    count = 0

    hedge_memo: dict[tuple[int, str, int], list[tuple[Tree, ...]]] = {}

    def hedges(nfa: HorizontalNFA, s: str, budget_nodes: int) -> list[tuple[Tree, ...]]:
        """Hedges of total size ``budget_nodes`` readable from NFA state s
        to a final state, drawing members from the finished table."""
        memo_key = (id(nfa), s, budget_nodes)
        got = hedge_memo.get(memo_key)
        if got is not None:
            return got
        results: list[tuple[Tree, ...]] = []
        if budget_nodes == 0:
            if s in nfa.finals:
                results.append(())
        else:
            for src, sym, dst in sorted(nfa.transitions):
                if src != s:
                    continue
                for first_size in range(1, budget_nodes + 1):
                    for first in table.get(sym, {}).get(first_size, ()):
                        for rest in hedges(nfa, dst, budget_nodes - first_size):
                            results.append((first,) + rest)
        hedge_memo[memo_key] = results
        return results

    for size in range(1, max_nodes + 1):
        new: dict[str, set[Tree]] = {}
        for (label, state), nfa in sorted(a.rules.items()):
            for kids in hedges(nfa, nfa.initial, size - 1):
                new.setdefault(state, set()).add(Tree(label, kids))
        for state, bucket in new.items():
            table[state][size] = bucket
            count += len(bucket)
            if limit is not None and count > limit:
                raise EnumerationLimitExceeded(
                    f"more than {limit} trees within {max_nodes} nodes"
                )
    return table
