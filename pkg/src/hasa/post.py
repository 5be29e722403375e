"""Symbolic update effect: transform a document automaton so it recognizes
exactly the trees obtainable by one parallel application of an update rule.

Given a document automaton and a types automaton with disjoint state
spaces, each primitive is realized by surgery on the document automaton's
horizontal NFAs; the types automaton is carried along untouched so
inserted subtrees can be evaluated.  Chaining the per-rule transformations
and merging in the types rules yields the post-update automaton.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .algebra import trim_unproductive
from .automata import (
    EPSILON,
    FreshNames,
    HedgeAutomaton,
    HorizontalNFA,
    Transition,
    epsilon_eliminate,
    nfa_is_empty,
    nfa_union,
    normalize,
    state_hygiene,
)
from .errors import UnknownTypeStateError
from .rewriting import UpdateKind, UpdateRule, UpdateScript


@dataclass(frozen=True)
class PostContext:
    """Working state threaded through a sequence of update constructions.

    ``doc`` is the evolving document automaton; ``types`` never changes.
    ``split_fresh`` records, per label, the fresh states minted by the most
    recent occurrence isolation for that label, which the four surgical
    primitives then operate on.
    """

    doc: HedgeAutomaton
    types: HedgeAutomaton
    fresh: FreshNames
    split_fresh: dict[str, frozenset[str]]

    @property
    def symbol_universe(self) -> frozenset[str]:
        return self.doc.states | self.types.states


def make_post_context(doc: HedgeAutomaton, types: HedgeAutomaton) -> PostContext:
    """Normalize inputs for the constructions.

    Document states are renamed away from the types states, unproductive
    states and empty-language rules are dropped, horizontal NFAs are made
    epsilon-free, and every document NFA alphabet is widened to read type
    states as well.  Trimming matters for correctness, not just size: the
    replacement and deletion constructions would otherwise animate edges
    that no tree could ever exercise.
    """
    doc = state_hygiene(doc, types.states)
    doc = normalize(
        [(label, nfa, state) for (label, state), nfa in doc.rules.items()],
        finals=doc.finals, alphabet=doc.alphabet, states=doc.states, name=doc.name,
    )
    doc = trim_unproductive(doc)
    types = normalize(
        [(label, nfa, state) for (label, state), nfa in types.rules.items()],
        finals=types.finals, alphabet=types.alphabet, states=types.states,
        name=types.name,
    )
    fresh = FreshNames(doc.states | types.states)
    ctx = PostContext(doc, types, fresh, {})
    return expand_alphabets(ctx)


def expand_alphabets(ctx: PostContext) -> PostContext:
    """Widen every document NFA alphabet to all document and type states."""
    universe = ctx.symbol_universe
    doc = ctx.doc
    new_rules = {
        key: (nfa if universe <= nfa.alphabet else nfa.with_alphabet(nfa.alphabet | universe))
        for key, nfa in doc.rules.items()
    }
    return replace(ctx, doc=HedgeAutomaton(
        doc.alphabet, doc.states, doc.finals, new_rules, name=doc.name))


def split_shared_state(ctx: PostContext, label: str) -> PostContext:
    """Isolate the subtrees rooted at ``label`` under dedicated fresh states.

    Every rule ``label(B) -> q`` is re-keyed to a fresh state, and every
    horizontal transition reading q gains a parallel twin reading the fresh
    state (the q reading stays for other producers of q).  Afterwards the
    fresh states are read exactly where a ``label`` subtree may occur, so
    the surgical primitives can touch those occurrences and no others.
    The recognized language is unchanged.
    """
    doc = ctx.doc
    split_pairs = [
        (state, nfa) for (lab, state), nfa in sorted(doc.rules.items()) if lab == label
    ]
    if not split_pairs:
        return replace(ctx, split_fresh={**ctx.split_fresh, label: frozenset()})

    mapping: dict[str, str] = {}
    for state, _nfa in split_pairs:
        mapping[state] = ctx.fresh.fresh(state)

    new_states = doc.states | frozenset(mapping.values())
    new_finals = set(doc.finals)
    rules: dict[tuple[str, str], HorizontalNFA] = {}
    for (lab, state), nfa in doc.rules.items():
        if lab == label and state in mapping:
            rules[(lab, mapping[state])] = nfa
        else:
            rules[(lab, state)] = nfa
    for old, fresh_state in mapping.items():
        if old in doc.finals:
            new_finals.add(fresh_state)
            if not any(key[1] == old for key in rules):
                new_finals.discard(old)

    def widen(nfa: HorizontalNFA) -> HorizontalNFA:
        extra: set[Transition] = set()
        for src, sym, dst in nfa.transitions:
            if sym in mapping:
                extra.add((src, mapping[sym], dst))
        return HorizontalNFA(
            nfa.states,
            nfa.alphabet | frozenset(mapping.values()),
            nfa.initial,
            nfa.finals,
            nfa.transitions | frozenset(extra),
        )

    doc = HedgeAutomaton(
        doc.alphabet, new_states, frozenset(new_finals),
        {key: widen(nfa) for key, nfa in rules.items()},
        name=doc.name,
    )
    ctx = replace(ctx, doc=doc,
                  split_fresh={**ctx.split_fresh, label: frozenset(mapping.values())})
    return expand_alphabets(ctx)


def _require_type_state(ctx: PostContext, state: str) -> None:
    if state not in ctx.types.states:
        raise UnknownTypeStateError(state)


def _replace_rule_nfas(ctx: PostContext, updates: dict[tuple[str, str], HorizontalNFA]
                       ) -> PostContext:
    doc = ctx.doc
    rules = dict(doc.rules)
    rules.update(updates)
    return replace(ctx, doc=HedgeAutomaton(
        doc.alphabet, doc.states, doc.finals, rules, name=doc.name))


def post_ren(ctx: PostContext, label: str, new_label: str) -> PostContext:
    """Renaming: move every rule of ``label`` over to ``new_label``.

    Where ``new_label`` already has a rule for the same state the two
    horizontal languages are unioned.  Transitions reading the target
    states stay as they are: subtrees keep their evaluation behaviour
    under the new name.
    """
    if label == new_label:
        return ctx
    doc = ctx.doc
    moved: dict[str, HorizontalNFA] = {
        state: nfa for (lab, state), nfa in doc.rules.items() if lab == label
    }
    if not moved:
        return ctx
    rules = {key: nfa for key, nfa in doc.rules.items() if key[0] != label}
    for state, nfa in moved.items():
        existing = rules.get((new_label, state))
        if existing is None:
            rules[(new_label, state)] = nfa
        else:
            merged = epsilon_eliminate(nfa_union(existing, nfa))
            rules[(new_label, state)] = merged.with_alphabet(
                merged.alphabet | ctx.symbol_universe
            )
    doc = HedgeAutomaton(
        doc.alphabet | frozenset({new_label}), doc.states, doc.finals, rules,
        name=doc.name,
    )
    return replace(ctx, doc=doc)


def post_ins_first(ctx: PostContext, label: str, type_state: str) -> PostContext:
    """Every ``label`` node gains a leading child of the given type: each
    horizontal language L of the label becomes {p}.L."""
    _require_type_state(ctx, type_state)
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for (lab, state), nfa in sorted(ctx.doc.rules.items()):
        if lab != label:
            continue
        entry = _fresh_nfa_state(nfa, "in")
        updates[(lab, state)] = HorizontalNFA(
            nfa.states | {entry},
            nfa.alphabet,
            entry,
            nfa.finals,
            nfa.transitions | {(entry, type_state, nfa.initial)},
        )
    return _replace_rule_nfas(ctx, updates)


def post_ins_last(ctx: PostContext, label: str, type_state: str) -> PostContext:
    """Mirror image of :func:`post_ins_first`: L becomes L.{p}, via a fresh
    unique final state fed from every old final."""
    _require_type_state(ctx, type_state)
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for (lab, state), nfa in sorted(ctx.doc.rules.items()):
        if lab != label:
            continue
        exit_state = _fresh_nfa_state(nfa, "out")
        updates[(lab, state)] = HorizontalNFA(
            nfa.states | {exit_state},
            nfa.alphabet,
            nfa.initial,
            frozenset({exit_state}),
            nfa.transitions | {(f, type_state, exit_state) for f in nfa.finals},
        )
    return _replace_rule_nfas(ctx, updates)


def post_ins_before(ctx: PostContext, label: str, type_state: str) -> PostContext:
    """Each occurrence of a ``label`` subtree in any child word is preceded
    by one instance of the type.

    Requires :func:`split_shared_state` for the label; every transition
    reading one of its fresh states is expanded into a two-step path that
    first reads the type state.  One intermediate NFA state per expanded
    transition keeps unrelated paths apart.
    """
    _require_type_state(ctx, type_state)
    return _expand_transitions(ctx, label, lambda sym, mid: (
        lambda src, dst: [(src, type_state, mid), (mid, sym, dst)]
    ))


def post_ins_after(ctx: PostContext, label: str, type_state: str) -> PostContext:
    """Mirror image of :func:`post_ins_before`: the instance follows the
    occurrence."""
    _require_type_state(ctx, type_state)
    return _expand_transitions(ctx, label, lambda sym, mid: (
        lambda src, dst: [(src, sym, mid), (mid, type_state, dst)]
    ))


def _expand_transitions(ctx: PostContext, label: str, make_edges) -> PostContext:
    if label not in ctx.split_fresh:
        raise ValueError(f"occurrence split for label {label!r} has not been applied")
    fresh_states = ctx.split_fresh[label]
    if not fresh_states:
        return ctx
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for key, nfa in sorted(ctx.doc.rules.items()):
        touched = [tr for tr in nfa.transitions if tr[1] in fresh_states]
        if not touched:
            continue
        keep = set(nfa.transitions) - set(touched)
        states = set(nfa.states)
        counter = 0
        for src, sym, dst in sorted(touched):
            counter += 1
            mid = _fresh_nfa_state(nfa, f"m{counter}", states)
            states.add(mid)
            keep.update(make_edges(sym, mid)(src, dst))
        updates[key] = HorizontalNFA(
            frozenset(states), nfa.alphabet, nfa.initial, nfa.finals, frozenset(keep)
        )
    return _replace_rule_nfas(ctx, updates)


def post_rpl(ctx: PostContext, label: str, type_state: str) -> PostContext:
    """Each ``label`` subtree occurrence is replaced by an instance of the
    type: transitions reading the label's fresh states read the type state
    instead.

    A fresh state that was final marks trees rooted at the label; those
    roots are replaced wholesale, so finality moves to the type state.
    """
    _require_type_state(ctx, type_state)
    if label not in ctx.split_fresh:
        raise ValueError(f"occurrence split for label {label!r} has not been applied")
    fresh_states = ctx.split_fresh[label]
    doc = ctx.doc
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for key, nfa in sorted(doc.rules.items()):
        if not any(tr[1] in fresh_states for tr in nfa.transitions):
            continue
        updates[key] = nfa.replace_transitions(
            (src, type_state if sym in fresh_states else sym, dst)
            for src, sym, dst in nfa.transitions
        )
    ctx = _replace_rule_nfas(ctx, updates)
    doc = ctx.doc
    if fresh_states & doc.finals:
        finals = (doc.finals - fresh_states) | {type_state}
        doc = HedgeAutomaton(
            doc.alphabet, doc.states | {type_state}, finals, doc.rules, name=doc.name
        )
        ctx = replace(ctx, doc=doc)
    return ctx


def post_del(ctx: PostContext, label: str) -> PostContext:
    """Each ``label`` subtree occurrence disappears from its child word:
    transitions reading the label's fresh states become epsilon moves,
    which are then eliminated again.

    The label's own rules stay, so a root occurrence (which the parallel
    semantics never deletes) is still accepted, with its children edited.
    """
    if label not in ctx.split_fresh:
        raise ValueError(f"occurrence split for label {label!r} has not been applied")
    fresh_states = ctx.split_fresh[label]
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for key, nfa in sorted(ctx.doc.rules.items()):
        if not any(tr[1] in fresh_states for tr in nfa.transitions):
            continue
        with_eps = nfa.replace_transitions(
            (src, EPSILON if sym in fresh_states else sym, dst)
            for src, sym, dst in nfa.transitions
        )
        updates[key] = epsilon_eliminate(with_eps).with_alphabet(nfa.alphabet)
    return _replace_rule_nfas(ctx, updates)


def post_ins_into(ctx: PostContext, label: str, type_state: str,
                  mode: str = "anywhere") -> PostContext:
    """One instance of the type appears somewhere among each ``label``
    node's children.

    ``anywhere`` builds, per horizontal language L, a two-copy automaton
    for { u p v : uv in L }: both copies carry the original transitions
    and every state reachable in the first copy bridges to its twin by
    reading the type state.  ``first`` and ``last`` delegate to the fixed
    insertion points instead.
    """
    if mode == "first":
        return post_ins_first(ctx, label, type_state)
    if mode == "last":
        return post_ins_last(ctx, label, type_state)
    if mode != "anywhere":
        raise ValueError(f"unknown insertion mode {mode!r}")
    _require_type_state(ctx, type_state)
    updates: dict[tuple[str, str], HorizontalNFA] = {}
    for (lab, state), nfa in sorted(ctx.doc.rules.items()):
        if lab != label:
            continue
        updates[(lab, state)] = two_copy_insertion(nfa, type_state)
    return _replace_rule_nfas(ctx, updates)


def two_copy_insertion(nfa: HorizontalNFA, type_state: str,
                       bridge_at: Optional[str] = None) -> HorizontalNFA:
    """Automaton for the words of ``nfa`` with one ``type_state`` symbol
    inserted.

    With ``bridge_at`` the insertion point is pinned to that state
    (useful for comparing against a union of single-guess automata);
    otherwise every reachable state bridges.
    """
    def pre(s: str) -> str:
        return f"{s}@0"

    def post_(s: str) -> str:
        return f"{s}@1"

    reachable = _reachable_states(nfa)
    bridges = [bridge_at] if bridge_at is not None else sorted(reachable)
    states = {pre(s) for s in nfa.states} | {post_(s) for s in nfa.states}
    transitions: set[Transition] = set()
    for src, sym, dst in nfa.transitions:
        transitions.add((pre(src), sym, pre(dst)))
        transitions.add((post_(src), sym, post_(dst)))
    for s in bridges:
        if s in reachable:
            transitions.add((pre(s), type_state, post_(s)))
    return HorizontalNFA(
        frozenset(states),
        nfa.alphabet | frozenset({type_state}),
        pre(nfa.initial),
        frozenset(post_(f) for f in nfa.finals),
        frozenset(transitions),
    )


def _reachable_states(nfa: HorizontalNFA) -> set[str]:
    seen = {nfa.initial}
    stack = [nfa.initial]
    adjacency: dict[str, set[str]] = {}
    for src, _sym, dst in nfa.transitions:
        adjacency.setdefault(src, set()).add(dst)
    while stack:
        s = stack.pop()
        for t in adjacency.get(s, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def _fresh_nfa_state(nfa: HorizontalNFA, base: str, taken: Optional[set[str]] = None) -> str:
    pool = set(nfa.states) | (taken or set())
    candidate = base
    k = 0
    while candidate in pool:
        k += 1
        candidate = f"{base}.{k}"
    return candidate


def assemble(ctx: PostContext) -> HedgeAutomaton:
    """Merge the edited document rules with the types rules.

    Rules whose horizontal language is empty are dropped.  The types rules
    let the result evaluate inserted subtrees; the finals are the document
    finals (plus a type state when a replacement consumed the root).
    """
    doc, types = ctx.doc, ctx.types
    rules: dict[tuple[str, str], HorizontalNFA] = {}
    for key, nfa in types.rules.items():
        rules[key] = nfa
    for key, nfa in doc.rules.items():
        if nfa_is_empty(nfa):
            continue
        assert key not in rules, "document and types rule keys must not overlap"
        rules[key] = nfa
    return HedgeAutomaton(
        doc.alphabet | types.alphabet,
        doc.states | types.states,
        doc.finals,
        rules,
        name=f"post({doc.name})" if doc.name else "post",
    )


def post_rule(ctx: PostContext, rule: UpdateRule, *,
              ins_into_mode: str = "anywhere") -> PostContext:
    """Apply one primitive's construction, with its required preprocessing."""
    kind = rule.kind
    if kind is UpdateKind.REN:
        return post_ren(ctx, rule.target, rule.new_label)
    if kind is UpdateKind.INS_FIRST:
        return post_ins_first(ctx, rule.target, rule.type_state)
    if kind is UpdateKind.INS_LAST:
        return post_ins_last(ctx, rule.target, rule.type_state)
    if kind is UpdateKind.INS_INTO:
        return post_ins_into(ctx, rule.target, rule.type_state, mode=ins_into_mode)
    ctx = split_shared_state(ctx, rule.target)
    if kind is UpdateKind.INS_BEFORE:
        return post_ins_before(ctx, rule.target, rule.type_state)
    if kind is UpdateKind.INS_AFTER:
        return post_ins_after(ctx, rule.target, rule.type_state)
    if kind is UpdateKind.RPL:
        return post_rpl(ctx, rule.target, rule.type_state)
    if kind is UpdateKind.DEL:
        return post_del(ctx, rule.target)
    raise AssertionError(f"unhandled kind {kind}")


def post_script(doc: HedgeAutomaton, script: UpdateScript, *,
                ins_into_mode: str = "anywhere") -> HedgeAutomaton:
    """Chain the per-rule constructions over the script and assemble."""
    ctx = make_post_context(doc, script.types)
    for rule in script.rules:
        ctx = post_rule(ctx, rule, ins_into_mode=ins_into_mode)
    return assemble(ctx)
