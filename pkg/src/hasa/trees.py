"""Finite ordered unranked labeled trees, positions, and a textual term syntax.

A document is a tree; the children of a node form a hedge (an ordered,
possibly empty sequence of trees).  Positions address nodes with 1-based
child indices, the empty position being the root.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import ParseError, PositionNotInTree, RootReplacementError

# Tokens usable as node labels (and automaton state names).  Whitespace and
# the punctuation of the term / automaton text formats are excluded; anything
# else goes, so purely numeric labels are fine.
_TOKEN_RE = re.compile(r"""[^\s(),;{}|#<>"']+""")


def is_token(text: str) -> bool:
    return bool(_TOKEN_RE.fullmatch(text))


@functools.total_ordering
@dataclass(frozen=True)
class Position:
    """A path of 1-based child indices; the empty path is the root.

    Ordering is lexicographic: a proper prefix precedes its extensions and
    siblings compare by index.  This matches the document order of nodes.
    """

    path: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(self.path))
        if any((not isinstance(i, int)) or i < 1 for i in self.path):
            raise ValueError(f"child indices must be positive integers: {self.path}")

    @classmethod
    def parse(cls, text: str) -> "Position":
        text = text.strip()
        if text in ("", "ε", "e"):
            return cls()
        return cls(tuple(int(part) for part in text.split(".")))

    def child(self, index: int) -> "Position":
        return Position(self.path + (index,))

    @property
    def parent(self) -> "Position":
        if not self.path:
            raise PositionNotInTree("the root position has no parent")
        return Position(self.path[:-1])

    def is_prefix_of(self, other: "Position") -> bool:
        return self.path == other.path[: len(self.path)]

    def __lt__(self, other: "Position") -> bool:
        return self.path < other.path

    def __str__(self) -> str:
        return ".".join(str(i) for i in self.path) if self.path else "ε"

    def __repr__(self) -> str:
        return f"Position({self.path!r})"


ROOT = Position()


@dataclass(frozen=True, eq=False)
class Tree:
    """An unranked ordered tree: a label and a sequence of child trees."""

    label: str
    children: tuple["Tree", ...] = ()
    _size: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not is_token(self.label):
            raise ValueError(f"invalid node label: {self.label!r}")
        object.__setattr__(self, "_size", 1 + sum(c._size for c in self.children))
        object.__setattr__(self, "_hash", hash((self.label, self.children)))

    @property
    def size(self) -> int:
        """Number of nodes."""
        return self._size

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.label == other.label
            and self.children == other.children
        )

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return print_term(self)

    def __repr__(self) -> str:
        return f"Tree({print_term(self)!r})"


Hedge = tuple[Tree, ...]


def leaf(label: str) -> Tree:
    return Tree(label)


def node(label: str, *children: Tree) -> Tree:
    return Tree(label, children)


def positions(t: Tree) -> list[Position]:
    """All positions of ``t`` in ascending lexicographic (document) order.

    The result is prefix-closed, starts at the root, and has one entry per
    node.  Preorder traversal produces exactly this order.
    """
    out: list[Position] = []

    def walk(sub: Tree, here: tuple[int, ...]) -> None:
        out.append(Position(here))
        for i, child in enumerate(sub.children, start=1):
            walk(child, here + (i,))

    walk(t, ())
    return out


def subtree_at(t: Tree, p: Position) -> Tree:
    """The subtree rooted at position ``p``."""
    sub = t
    for i in p.path:
        if i > len(sub.children):
            raise PositionNotInTree(f"position {p} not in tree {print_term(t)}")
        sub = sub.children[i - 1]
    return sub


def replace_at(t: Tree, p: Position, h: Sequence[Tree]) -> Tree:
    """Splice the hedge ``h`` in place of the subtree at ``p``.

    An empty hedge deletes the subtree; right siblings shift accordingly.
    At the root the hedge must contain exactly one tree, since the result
    has to be a tree again.
    """
    h = tuple(h)
    if not p.path:
        if len(h) != 1:
            raise RootReplacementError(
                f"root can only be replaced by a single tree, got {len(h)}"
            )
        return h[0]

    def rebuild(sub: Tree, path: tuple[int, ...]) -> Tree:
        i = path[0]
        if i > len(sub.children):
            raise PositionNotInTree(f"position {p} not in tree {print_term(t)}")
        kids = sub.children
        if len(path) == 1:
            new_kids = kids[: i - 1] + h + kids[i:]
        else:
            new_kids = kids[: i - 1] + (rebuild(kids[i - 1], path[1:]),) + kids[i:]
        return Tree(sub.label, new_kids)

    return rebuild(t, p.path)


def iter_subtrees(t: Tree) -> Iterator[tuple[Position, Tree]]:
    """(position, subtree) pairs in document order."""

    def walk(sub: Tree, here: tuple[int, ...]) -> Iterator[tuple[Position, Tree]]:
        yield Position(here), sub
        for i, child in enumerate(sub.children, start=1):
            yield from walk(child, here + (i,))

    return walk(t, ())


def print_term(t: Tree) -> str:
    """Canonical term text: no whitespace, leaves without parentheses."""
    if not t.children:
        return t.label
    return f"{t.label}({','.join(print_term(c) for c in t.children)})"


class _TermScanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def location(self) -> tuple[int, int]:
        consumed = self.text[: self.pos]
        line = consumed.count("\n") + 1
        col = self.pos - (consumed.rfind("\n") + 1) + 1
        return line, col

    def error(self, message: str) -> ParseError:
        line, col = self.location()
        return ParseError(message, line=line, column=col)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}, found {self.peek()!r}")
        self.pos += 1

    def token(self) -> str:
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected a label, found {self.peek()!r}")
        self.pos = m.end()
        return m.group()


def parse_term(text: str) -> Tree:
    """Parse the term syntax ``label`` or ``label(child, ...)``.

    ``label()`` is accepted as a leaf.  Raises :class:`ParseError` with a
    line/column location on malformed input.
    """
    sc = _TermScanner(text)
    sc.skip_ws()
    tree = _parse_tree(sc)
    sc.skip_ws()
    if sc.pos != len(text):
        raise sc.error(f"unexpected trailing input {sc.peek()!r}")
    return tree


def _parse_tree(sc: _TermScanner) -> Tree:
    label = sc.token()
    sc.skip_ws()
    if sc.peek() != "(":
        return Tree(label)
    sc.expect("(")
    sc.skip_ws()
    if sc.peek() == ")":
        sc.expect(")")
        return Tree(label)
    children = [_parse_tree(sc)]
    sc.skip_ws()
    while sc.peek() == ",":
        sc.expect(",")
        sc.skip_ws()
        children.append(_parse_tree(sc))
        sc.skip_ws()
    sc.expect(")")
    return Tree(label, tuple(children))
