"""Concrete update semantics: the eight primitive operations applied as one
maximal parallel rewriting step over a document tree.

Each primitive targets every node carrying a given label.  Targets are
located once, on the input tree, and rewritten in decreasing document
order, so a rewrite never touches material inserted by the same step.
Insertion and replacement primitives draw their new subtrees from a pool
of instance trees for a state of a companion types automaton.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .algebra import enumerate_state, _witness_table
from .automata import HedgeAutomaton
from .errors import EmptyPoolError, UnknownTypeStateError
from .trees import Position, Tree, iter_subtrees, print_term, replace_at, subtree_at


class UpdateKind(enum.Enum):
    REN = "ren"
    RPL = "rpl"
    DEL = "del"
    INS_FIRST = "ins_first"
    INS_LAST = "ins_last"
    INS_INTO = "ins_into"
    INS_BEFORE = "ins_before"
    INS_AFTER = "ins_after"


#: Kinds that never apply at the document root: removing the root or giving
#: it a sibling would break the single-rooted tree structure.
ROOT_EXCLUDED_KINDS = frozenset(
    {UpdateKind.DEL, UpdateKind.INS_BEFORE, UpdateKind.INS_AFTER}
)

#: Kinds that instantiate a type state.
TYPED_KINDS = frozenset(
    {UpdateKind.RPL, UpdateKind.INS_FIRST, UpdateKind.INS_LAST,
     UpdateKind.INS_INTO, UpdateKind.INS_BEFORE, UpdateKind.INS_AFTER}
)


@dataclass(frozen=True)
class UpdateRule:
    """One primitive update.

    ``target`` is the node label the rule applies to.  REN carries the
    replacement label in ``new_label``; every kind except REN and DEL
    carries the type state whose instances get inserted or substituted.
    """

    kind: UpdateKind
    target: str
    new_label: Optional[str] = None
    type_state: Optional[str] = None

    def __post_init__(self):
        if self.kind is UpdateKind.REN:
            if self.new_label is None or self.type_state is not None:
                raise ValueError("REN takes a new label and no type state")
        elif self.kind is UpdateKind.DEL:
            if self.new_label is not None or self.type_state is not None:
                raise ValueError("DEL takes neither a new label nor a type state")
        else:
            if self.type_state is None or self.new_label is not None:
                raise ValueError(f"{self.kind.value} takes a type state only")

    def __str__(self) -> str:
        if self.kind is UpdateKind.REN:
            return f"ren {self.target} -> {self.new_label}"
        if self.kind is UpdateKind.DEL:
            return f"del {self.target}"
        return f"{self.kind.value} {self.target} <- {self.type_state}"


@dataclass(frozen=True)
class UpdateScript:
    """An ordered sequence of update rules plus the types automaton whose
    states the rules' type parameters refer to."""

    rules: tuple[UpdateRule, ...]
    types: HedgeAutomaton

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for rule in self.rules:
            if rule.type_state is not None and rule.type_state not in self.types.states:
                raise UnknownTypeStateError(rule.type_state)


InstancePool = Mapping[str, Sequence[Tree]]


def build_pool(types: HedgeAutomaton, states: Iterable[str], bound: int) -> dict[str, tuple[Tree, ...]]:
    """Instance trees per type state, all members up to ``bound`` nodes.

    Pools are sorted by (size, term text) so downstream results are
    reproducible.
    """
    pool: dict[str, tuple[Tree, ...]] = {}
    for state in sorted(set(states)):
        if state not in types.states:
            raise UnknownTypeStateError(state)
        members = enumerate_state(types, state, bound)
        pool[state] = tuple(sorted(members, key=lambda t: (t.size, print_term(t))))
    return pool


def targets(t: Tree, rule: UpdateRule) -> list[Position]:
    """Positions the rule applies to, in ascending document order.

    The root is excluded for DEL / INS_BEFORE / INS_AFTER.
    """
    found = [
        p for p, sub in iter_subtrees(t)
        if sub.label == rule.target
        and not (rule.kind in ROOT_EXCLUDED_KINDS and not p.path)
    ]
    return found


TraceFn = Callable[[Tree, Position], None]


def parallel_step(t: Tree, rule: UpdateRule, pool: InstancePool, *,
                  trace: Optional[TraceFn] = None) -> set[Tree]:
    """All trees reachable by one maximal parallel application of ``rule``.

    Targets are processed in decreasing document order; each target draws
    its instance (and, for INS_INTO, its insertion slot) independently, so
    the result is a set.  ``trace``, when given, is called with every
    intermediate tree right after a target has been rewritten.
    """
    if rule.kind in TYPED_KINDS:
        instances = tuple(pool.get(rule.type_state, ()))
        if not instances:
            raise EmptyPoolError(rule.type_state)
    else:
        instances = ()

    variants = [t]
    for p in reversed(targets(t, rule)):
        next_variants: list[Tree] = []
        for variant in variants:
            for rewritten in _rewrite_at(variant, p, rule, instances):
                if trace is not None:
                    trace(rewritten, p)
                next_variants.append(rewritten)
        variants = next_variants
    return set(variants)


def _rewrite_at(t: Tree, p: Position, rule: UpdateRule,
                instances: tuple[Tree, ...]) -> list[Tree]:
    cur = subtree_at(t, p)
    kind = rule.kind
    if kind is UpdateKind.REN:
        return [replace_at(t, p, [Tree(rule.new_label, cur.children)])]
    if kind is UpdateKind.DEL:
        return [replace_at(t, p, [])]
    if kind is UpdateKind.RPL:
        return [replace_at(t, p, [u]) for u in instances]
    if kind is UpdateKind.INS_FIRST:
        return [replace_at(t, p, [Tree(cur.label, (u,) + cur.children)]) for u in instances]
    if kind is UpdateKind.INS_LAST:
        return [replace_at(t, p, [Tree(cur.label, cur.children + (u,))]) for u in instances]
    if kind is UpdateKind.INS_BEFORE:
        return [replace_at(t, p, [u, cur]) for u in instances]
    if kind is UpdateKind.INS_AFTER:
        return [replace_at(t, p, [cur, u]) for u in instances]
    if kind is UpdateKind.INS_INTO:
        out = []
        for u in instances:
            for i in range(len(cur.children) + 1):
                kids = cur.children[:i] + (u,) + cur.children[i:]
                out.append(replace_at(t, p, [Tree(cur.label, kids)]))
        return out
    raise AssertionError(f"unhandled kind {kind}")


def apply_script(t: Tree, script: UpdateScript, bound: int, *,
                 pool: Optional[InstancePool] = None) -> set[Tree]:
    """Fold the script's rules over ``t``, unioning the alternatives.

    Instance pools are built once, from all trees of the types automaton
    up to ``bound`` nodes per referenced type state.
    """
    if pool is None:
        pool = build_pool(
            script.types,
            [r.type_state for r in script.rules if r.type_state is not None],
            bound,
        )
    current = {t}
    for rule in script.rules:
        step_result: set[Tree] = set()
        for variant in current:
            step_result |= parallel_step(variant, rule, pool)
        current = step_result
    return current


def post_oracle(doc: HedgeAutomaton, script: UpdateScript, tree_bound: int,
                pool_bound: int) -> set[Tree]:
    """Ground-truth slice of the post-update language.

    Applies the script concretely to every accepted tree of up to
    ``tree_bound`` nodes, with instance pools bounded by ``pool_bound``.
    """
    from .algebra import enumerate_trees

    pool = build_pool(
        script.types,
        [r.type_state for r in script.rules if r.type_state is not None],
        pool_bound,
    )
    out: set[Tree] = set()
    for t in enumerate_trees(doc, tree_bound):
        out |= apply_script(t, script, pool_bound, pool=pool)
    return out


def root_producible_labels(doc: HedgeAutomaton) -> set[str]:
    """Labels that can appear at the root of some accepted tree.

    Used to warn when a root-excluded rule targets such a label: root
    occurrences will survive the update.
    """
    productive = _witness_table(doc)
    out = set()
    for (label, state), nfa in doc.rules.items():
        if state not in doc.finals or state not in productive:
            continue
        word_ok = _some_productive_word(nfa, set(productive))
        if word_ok:
            out.add(label)
    return out


def _some_productive_word(nfa, productive: set[str]) -> bool:
    seen = {nfa.initial}
    stack = [nfa.initial]
    while stack:
        s = stack.pop()
        if s in nfa.finals:
            return True
        for src, sym, dst in nfa.transitions:
            if src == s and dst not in seen and (sym is None or sym in productive):
                seen.add(dst)
                stack.append(dst)
    return False
