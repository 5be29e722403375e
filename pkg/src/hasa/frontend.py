"""Text formats: DTD-subset schemas, the native automaton format, update
scripts, and XML element skeletons.

File extensions by convention: ``.dtd`` (schema subset), ``.ha`` (native
automaton), ``.upd`` (update script), ``.xml``.  Everything is UTF-8.
"""

from __future__ import annotations

import re
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .automata import (
    EPSILON,
    HedgeAutomaton,
    HorizontalNFA,
    epsilon_eliminate,
    normalize,
)
from .errors import ParseError
from .rewriting import UpdateKind, UpdateRule, UpdateScript
from .trees import Tree, is_token


class FormatWarning(UserWarning):
    """Recoverable oddity in an input file (duplicate rule, skipped XML
    content, ...)."""


class XmlContentError(ParseError):
    """Strict mode rejected non-element XML content."""


# ---------------------------------------------------------------------------
# regular expressions over tokens (content models, rule bodies)

@dataclass(frozen=True)
class RSym:
    symbol: str


@dataclass(frozen=True)
class REps:
    pass


@dataclass(frozen=True)
class RSeq:
    items: tuple


@dataclass(frozen=True)
class RAlt:
    items: tuple


@dataclass(frozen=True)
class RStar:
    item: object


@dataclass(frozen=True)
class RPlus:
    item: object


@dataclass(frozen=True)
class ROpt:
    item: object


Regex = Union[RSym, REps, RSeq, RAlt, RStar, RPlus, ROpt]


def regex_symbols(rx: Regex) -> set[str]:
    if isinstance(rx, RSym):
        return {rx.symbol}
    if isinstance(rx, (RSeq, RAlt)):
        out: set[str] = set()
        for item in rx.items:
            out |= regex_symbols(item)
        return out
    if isinstance(rx, (RStar, RPlus, ROpt)):
        return regex_symbols(rx.item)
    return set()


def regex_to_nfa(rx: Regex, alphabet: Iterable[str]) -> HorizontalNFA:
    """Thompson construction followed by epsilon elimination."""
    counter = [0]

    def new_state() -> str:
        counter[0] += 1
        return f"r{counter[0]}"

    transitions: set[tuple[str, Optional[str], str]] = set()

    def build(node: Regex) -> tuple[str, str]:
        start, end = new_state(), new_state()
        if isinstance(node, REps):
            transitions.add((start, EPSILON, end))
        elif isinstance(node, RSym):
            transitions.add((start, node.symbol, end))
        elif isinstance(node, RSeq):
            prev = start
            for item in node.items:
                s, e = build(item)
                transitions.add((prev, EPSILON, s))
                prev = e
            transitions.add((prev, EPSILON, end))
        elif isinstance(node, RAlt):
            for item in node.items:
                s, e = build(item)
                transitions.add((start, EPSILON, s))
                transitions.add((e, EPSILON, end))
        elif isinstance(node, RStar):
            s, e = build(node.item)
            transitions.add((start, EPSILON, end))
            transitions.add((start, EPSILON, s))
            transitions.add((e, EPSILON, s))
            transitions.add((e, EPSILON, end))
        elif isinstance(node, RPlus):
            s, e = build(node.item)
            transitions.add((start, EPSILON, s))
            transitions.add((e, EPSILON, s))
            transitions.add((e, EPSILON, end))
        elif isinstance(node, ROpt):
            s, e = build(node.item)
            transitions.add((start, EPSILON, end))
            transitions.add((start, EPSILON, s))
            transitions.add((e, EPSILON, end))
        else:
            raise AssertionError(f"unknown regex node {node!r}")
        return start, end

    start, end = build(rx)
    states = {start, end}
    for s, _sym, t in transitions:
        states.add(s)
        states.add(t)
    nfa = HorizontalNFA(
        frozenset(states), frozenset(alphabet) | frozenset(regex_symbols(rx)),
        start, frozenset({end}), frozenset(transitions),
    )
    return epsilon_eliminate(nfa)


# ---------------------------------------------------------------------------
# shared scanning machinery

class _Scanner:
    token_re = re.compile(r"""[^\s(),;{}|#<>"']+""")
    # in regex bodies the postfix operators delimit tokens, and '-' only
    # belongs to a token when it does not open an '->' arrow
    regex_token_re = re.compile(r"""(?:[^\s(),;{}|#<>"'*+?-]|-(?!>))+""")

    def __init__(self, text: str, source: Optional[str] = None,
                 hash_comments: bool = True):
        self.text = text
        self.pos = 0
        self.source = source
        self.hash_comments = hash_comments

    def location(self) -> tuple[int, int]:
        consumed = self.text[: self.pos]
        return consumed.count("\n") + 1, self.pos - (consumed.rfind("\n") + 1) + 1

    def error(self, message: str) -> ParseError:
        line, col = self.location()
        return ParseError(message, line=line, column=col, source=self.source)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip_ws(self, *, newlines: bool = True) -> None:
        while not self.at_end():
            ch = self.text[self.pos]
            if ch == "#" and self.hash_comments:
                while not self.at_end() and self.text[self.pos] != "\n":
                    self.pos += 1
            elif ch.isspace() and (newlines or ch != "\n"):
                self.pos += 1
            else:
                break

    def expect(self, literal: str) -> None:
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def try_literal(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def token(self, what: str = "name") -> str:
        m = self.token_re.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}, found {self.peek()!r}")
        self.pos = m.end()
        return m.group()

    def regex_token(self, what: str = "state symbol") -> str:
        m = self.regex_token_re.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}, found {self.peek()!r}")
        self.pos = m.end()
        return m.group()


# ---------------------------------------------------------------------------
# native automaton format

_RESERVED_STATE_NAMES = {"eps"}


def parse_ha(text: str, source: Optional[str] = None) -> HedgeAutomaton:
    """Parse the native automaton format.

    Header lines declare the name, label alphabet, states, and final
    states; each ``rule`` line carries either a regular expression over
    state tokens or an explicit ``nfa { ... }`` block.
    """
    sc = _Scanner(text, source)
    name = ""
    alphabet: list[str] = []
    states: list[str] = []
    finals: list[str] = []
    seen_sections: set[str] = set()
    rule_list: list[tuple[str, HorizontalNFA, str]] = []

    def token_list() -> list[str]:
        out = []
        while True:
            sc.skip_ws(newlines=False)
            if sc.at_end() or sc.peek() == "\n":
                return out
            out.append(sc.token())

    sc.skip_ws()
    while not sc.at_end():
        keyword = sc.token("keyword")
        if keyword == "automaton":
            sc.skip_ws(newlines=False)
            name = sc.token("automaton name")
        elif keyword in ("alphabet", "states", "final"):
            if keyword in seen_sections:
                raise sc.error(f"duplicate {keyword} line")
            seen_sections.add(keyword)
            items = token_list()
            if keyword == "alphabet":
                alphabet = items
            elif keyword == "states":
                for s in items:
                    if s in _RESERVED_STATE_NAMES:
                        raise sc.error(f"{s!r} is reserved and cannot name a state")
                states = items
            else:
                finals = items
        elif keyword == "rule":
            rule_list.append(_parse_rule_line(sc))
        else:
            raise sc.error(f"unknown keyword {keyword!r}")
        sc.skip_ws()

    declared_states = set(states)
    for label, nfa, state in rule_list:
        if label not in set(alphabet):
            raise ParseError(f"rule uses undeclared label {label!r}", source=source)
        if state not in declared_states:
            raise ParseError(f"rule targets undeclared state {state!r}", source=source)
        for sym in {sym for _s, sym, _t in nfa.transitions if sym is not EPSILON}:
            if sym not in declared_states:
                raise ParseError(
                    f"rule body reads undeclared state {sym!r}", source=source
                )
    for f in finals:
        if f not in declared_states:
            raise ParseError(f"final state {f!r} is not declared", source=source)

    keys = [(label, state) for label, _n, state in rule_list]
    for key in sorted({k for k in keys if keys.count(k) > 1}):
        warnings.warn(
            f"duplicate rule for {key[0]!r} -> {key[1]!r}; horizontal languages merged",
            FormatWarning,
            stacklevel=2,
        )
    widened = [
        (label, nfa.with_alphabet(nfa.alphabet | declared_states), state)
        for label, nfa, state in rule_list
    ]
    return normalize(
        widened, finals=finals, alphabet=alphabet, states=declared_states, name=name
    )


def _parse_rule_line(sc: _Scanner) -> tuple[str, HorizontalNFA, str]:
    sc.skip_ws(newlines=False)
    label = sc.token("rule label")
    sc.skip_ws(newlines=False)
    if sc.try_literal("->"):
        sc.skip_ws(newlines=False)
        state = sc.token("target state")
        sc.skip_ws(newlines=False)
        keyword = sc.token("'nfa'")
        if keyword != "nfa":
            raise sc.error("a rule without a regular expression needs an nfa block")
        sc.skip_ws()
        nfa = _parse_nfa_block(sc)
        return label, nfa, state
    rx = _parse_regex(sc, stop="->")
    sc.skip_ws(newlines=False)
    sc.expect("->")
    sc.skip_ws(newlines=False)
    state = sc.token("target state")
    return label, regex_to_nfa(rx, ()), state


def _parse_regex(sc: _Scanner, stop: str) -> Regex:
    rx = _parse_alt(sc, stop)
    return rx


def _parse_alt(sc: _Scanner, stop: str) -> Regex:
    branches = [_parse_seq(sc, stop)]
    while True:
        sc.skip_ws(newlines=False)
        if sc.peek() == "|":
            sc.expect("|")
            branches.append(_parse_seq(sc, stop))
        else:
            break
    return branches[0] if len(branches) == 1 else RAlt(tuple(branches))


def _parse_seq(sc: _Scanner, stop: str) -> Regex:
    items = []
    while True:
        sc.skip_ws(newlines=False)
        if (sc.at_end() or sc.peek() in "\n|)"
                or sc.text.startswith(stop, sc.pos)):
            break
        items.append(_parse_postfix(sc, stop))
    if not items:
        raise sc.error("empty regular expression branch; use () for the empty word")
    return items[0] if len(items) == 1 else RSeq(tuple(items))


def _parse_postfix(sc: _Scanner, stop: str) -> Regex:
    base = _parse_atom(sc, stop)
    while True:
        ch = sc.peek()
        if ch == "*":
            sc.expect("*")
            base = RStar(base)
        elif ch == "+":
            sc.expect("+")
            base = RPlus(base)
        elif ch == "?":
            sc.expect("?")
            base = ROpt(base)
        else:
            return base


def _parse_atom(sc: _Scanner, stop: str) -> Regex:
    if sc.peek() == "(":
        sc.expect("(")
        sc.skip_ws(newlines=False)
        if sc.peek() == ")":
            sc.expect(")")
            return REps()
        inner = _parse_alt(sc, stop)
        sc.skip_ws(newlines=False)
        sc.expect(")")
        return inner
    token = sc.regex_token()
    if token in _RESERVED_STATE_NAMES:
        raise sc.error(f"{token!r} is reserved; it cannot appear in a regex body")
    return RSym(token)


def _parse_nfa_block(sc: _Scanner) -> HorizontalNFA:
    sc.expect("{")
    initial: Optional[str] = None
    finals: list[str] = []
    states: set[str] = set()
    transitions: set[tuple[str, Optional[str], str]] = set()
    while True:
        sc.skip_ws()
        if sc.try_literal("}"):
            break
        if sc.at_end():
            raise sc.error("unterminated nfa block")
        head = sc.token("nfa statement")
        parts = [head]
        while True:
            sc.skip_ws()
            if sc.peek() == ";":
                sc.expect(";")
                break
            if sc.peek() == "}" or sc.at_end():
                raise sc.error("nfa statement must end with ';'")
            parts.append(sc.token())
        if parts[0] == "start":
            if len(parts) != 2:
                raise sc.error("start takes exactly one state")
            if initial is not None:
                raise sc.error("duplicate start statement")
            initial = parts[1]
            states.add(initial)
        elif parts[0] == "final":
            if len(parts) < 2:
                raise sc.error("final takes at least one state")
            finals.extend(parts[1:])
            states.update(parts[1:])
        elif len(parts) == 3:
            src, sym, dst = parts
            states.update((src, dst))
            transitions.add((src, EPSILON if sym == "eps" else sym, dst))
        else:
            raise sc.error(f"bad nfa statement {' '.join(parts)!r}")
    if initial is None:
        raise sc.error("nfa block needs a start statement")
    return HorizontalNFA(
        frozenset(states),
        frozenset(sym for _s, sym, _t in transitions if sym is not EPSILON),
        initial,
        frozenset(finals),
        frozenset(transitions),
    )


def print_ha(automaton: HedgeAutomaton, name: Optional[str] = None) -> str:
    """Serialize to the native format.

    Rule bodies are always emitted as explicit nfa blocks (lossless for
    the language); block-internal states are renumbered s0, s1, ...
    """
    for state in automaton.states:
        if state in _RESERVED_STATE_NAMES or not is_token(state):
            raise ValueError(f"state {state!r} cannot be serialized")
    lines = [f"automaton {name or automaton.name or 'main'}"]
    lines.append("alphabet " + " ".join(sorted(automaton.alphabet)))
    lines.append("states " + " ".join(sorted(automaton.states)))
    lines.append("final " + " ".join(sorted(automaton.finals)))
    for (label, state), nfa in sorted(automaton.rules.items()):
        rename = {nfa.initial: "s0"}
        for s in sorted(nfa.states - {nfa.initial}):
            rename[s] = f"s{len(rename)}"
        stmts = [f"start s0;"]
        if nfa.finals:
            stmts.append("final " + " ".join(sorted(rename[f] for f in nfa.finals)) + ";")
        for src, sym, dst in sorted(
            nfa.transitions, key=lambda tr: (rename[tr[0]], tr[1] or "", rename[tr[2]])
        ):
            stmts.append(f"{rename[src]} {'eps' if sym is EPSILON else sym} {rename[dst]};")
        lines.append(f"rule {label} -> {state} nfa {{ " + " ".join(stmts) + " }")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# DTD subset

_XML_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.:-]*")


@dataclass(frozen=True)
class DtdSchema:
    """Element declarations of the supported DTD subset.

    The document root is, by convention, the first declared element.
    """

    root: str
    elements: dict[str, Regex]


def parse_dtd(text: str, source: Optional[str] = None) -> DtdSchema:
    """Parse ``<!ELEMENT name content>`` declarations.

    Content models support sequences (','), choices ('|'), the postfix
    operators, EMPTY and ANY.  Attribute lists, entities and mixed
    content are outside the subset and rejected.
    """
    sc = _Scanner(text, source, hash_comments=False)
    elements: dict[str, Regex] = {}
    order: list[str] = []
    while True:
        _skip_dtd_trivia(sc)
        if sc.at_end():
            break
        if not sc.try_literal("<!ELEMENT"):
            if sc.text.startswith("<!ATTLIST", sc.pos) or sc.text.startswith("<!ENTITY", sc.pos):
                raise sc.error("only <!ELEMENT ...> declarations are supported")
            raise sc.error("expected an <!ELEMENT ...> declaration")
        sc.skip_ws()
        name = sc.token("element name")
        if not _XML_NAME_RE.fullmatch(name):
            raise sc.error(f"invalid element name {name!r}")
        if name in elements:
            raise sc.error(f"duplicate declaration of element {name!r}")
        sc.skip_ws()
        model = _parse_content_model(sc)
        sc.skip_ws()
        sc.expect(">")
        elements[name] = model
        order.append(name)
    if not elements:
        raise ParseError("no element declarations found", source=source)
    declared = set(elements)
    for name, model in elements.items():
        for ref in sorted(regex_symbols(model) - {"#any"}):
            if ref not in declared:
                raise ParseError(
                    f"element {name!r} references undeclared element {ref!r}",
                    source=source,
                )
    return DtdSchema(root=order[0], elements=elements)


def _skip_dtd_trivia(sc: _Scanner) -> None:
    while True:
        while not sc.at_end() and sc.peek().isspace():
            sc.pos += 1
        if sc.text.startswith("<!--", sc.pos):
            end = sc.text.find("-->", sc.pos + 4)
            if end < 0:
                raise sc.error("unterminated comment")
            sc.pos = end + 3
        else:
            return


_ANY = object()


def _parse_content_model(sc: _Scanner) -> Regex:
    if sc.try_literal("EMPTY"):
        return REps()
    if sc.try_literal("ANY"):
        return RStar(RSym("#any"))
    if sc.peek() != "(":
        raise sc.error("expected EMPTY, ANY or a parenthesized content model")
    return _parse_dtd_group(sc)


def _parse_dtd_cp(sc: _Scanner) -> Regex:
    sc.skip_ws()
    if sc.peek() == "(":
        base = _parse_dtd_group(sc)
    elif sc.try_literal("#PCDATA"):
        raise sc.error("text content (#PCDATA) is outside the supported subset")
    else:
        name = sc.regex_token("element name")
        if not _XML_NAME_RE.fullmatch(name):
            raise sc.error(f"invalid element name {name!r}")
        base = RSym(name)
    return _parse_dtd_postfix(sc, base)


def _parse_dtd_postfix(sc: _Scanner, base: Regex) -> Regex:
    ch = sc.peek()
    if ch == "*":
        sc.expect("*")
        return RStar(base)
    if ch == "+":
        sc.expect("+")
        return RPlus(base)
    if ch == "?":
        sc.expect("?")
        return ROpt(base)
    return base


def _parse_dtd_group(sc: _Scanner) -> Regex:
    sc.expect("(")
    items = [_parse_dtd_cp(sc)]
    sep: Optional[str] = None
    while True:
        sc.skip_ws()
        ch = sc.peek()
        if ch == ")":
            sc.expect(")")
            break
        if ch not in ",|":
            raise sc.error(f"expected ',', '|' or ')', found {ch!r}")
        if sep is None:
            sep = ch
        elif ch != sep:
            raise sc.error("',' and '|' cannot be mixed at the same level")
        sc.pos += 1
        items.append(_parse_dtd_cp(sc))
    if len(items) == 1:
        grouped = items[0]
    elif sep == ",":
        grouped = RSeq(tuple(items))
    else:
        grouped = RAlt(tuple(items))
    return _parse_dtd_postfix(sc, grouped)


def compile_dtd(schema: DtdSchema) -> HedgeAutomaton:
    """One automaton state per element; the content model, with element
    names replaced by their states, becomes the horizontal language."""
    state_of = {name: f"q_{name}" for name in schema.elements}
    any_states = RStar(RAlt(tuple(RSym(state_of[n]) for n in sorted(schema.elements)))) \
        if schema.elements else REps()

    def to_states(rx: Regex) -> Regex:
        if isinstance(rx, RSym):
            if rx.symbol == "#any":
                return any_states
            return RSym(state_of[rx.symbol])
        if isinstance(rx, RSeq):
            return RSeq(tuple(to_states(i) for i in rx.items))
        if isinstance(rx, RAlt):
            return RAlt(tuple(to_states(i) for i in rx.items))
        if isinstance(rx, RStar):
            return RStar(to_states(rx.item))
        if isinstance(rx, RPlus):
            return RPlus(to_states(rx.item))
        if isinstance(rx, ROpt):
            return ROpt(to_states(rx.item))
        return rx

    all_states = set(state_of.values())
    rule_list = [
        (name, regex_to_nfa(to_states(model), all_states), state_of[name])
        for name, model in schema.elements.items()
    ]
    return normalize(
        rule_list,
        finals=[state_of[schema.root]],
        alphabet=set(schema.elements),
        states=all_states,
        name=schema.root,
    )


# ---------------------------------------------------------------------------
# update scripts

_RULE_SHAPES = {
    UpdateKind.REN: "ren LABEL -> LABEL",
    UpdateKind.DEL: "del LABEL",
    UpdateKind.RPL: "rpl LABEL <- STATE",
    UpdateKind.INS_FIRST: "ins_first LABEL <- STATE",
    UpdateKind.INS_LAST: "ins_last LABEL <- STATE",
    UpdateKind.INS_INTO: "ins_into LABEL <- STATE",
    UpdateKind.INS_BEFORE: "ins_before LABEL <- STATE",
    UpdateKind.INS_AFTER: "ins_after LABEL <- STATE",
}


def parse_updates(text: str, types: HedgeAutomaton,
                  source: Optional[str] = None) -> UpdateScript:
    """Parse one update rule per line; '#' starts a comment.

    Type states are resolved against ``types``; an unknown state raises
    :class:`~hasa.errors.UnknownTypeStateError`.
    """
    rules: list[UpdateRule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind_name = parts[0]
        try:
            kind = UpdateKind(kind_name)
        except ValueError:
            raise ParseError(
                f"unknown update primitive {kind_name!r}",
                line=lineno, source=source,
            ) from None
        shape = _RULE_SHAPES[kind]
        if kind is UpdateKind.REN:
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError(f"expected '{shape}'", line=lineno, source=source)
            rules.append(UpdateRule(kind, parts[1], new_label=parts[3]))
        elif kind is UpdateKind.DEL:
            if len(parts) != 2:
                raise ParseError(f"expected '{shape}'", line=lineno, source=source)
            rules.append(UpdateRule(kind, parts[1]))
        else:
            if len(parts) != 4 or parts[2] != "<-":
                raise ParseError(f"expected '{shape}'", line=lineno, source=source)
            rules.append(UpdateRule(kind, parts[1], type_state=parts[3]))
    return UpdateScript(tuple(rules), types)


def print_updates(script: UpdateScript) -> str:
    return "\n".join(str(rule) for rule in script.rules) + ("\n" if script.rules else "")


# ---------------------------------------------------------------------------
# XML element skeletons

def read_xml(text: str, *, strict: bool = False, source: Optional[str] = None) -> Tree:
    """Element skeleton of an XML document.

    Attributes, text, comments and processing instructions are skipped
    with a warning; in strict mode they are an error.  Whitespace-only
    text (indentation) is always ignored.
    """
    builder = ET.TreeBuilder(insert_comments=True, insert_pis=True)
    parser = ET.XMLParser(target=builder)
    try:
        root = ET.fromstring(text, parser=parser)
    except ET.ParseError as exc:
        line, col = exc.position if exc.position else (None, None)
        raise ParseError(
            f"malformed XML: {exc.msg if hasattr(exc, 'msg') else exc}",
            line=line, column=col and col + 1, source=source,
        ) from None

    def skip(what: str) -> None:
        if strict:
            raise XmlContentError(f"non-element content: {what}", source=source)
        warnings.warn(f"skipping {what}", FormatWarning, stacklevel=3)

    def convert(elem: ET.Element) -> Optional[Tree]:
        if elem.tag in (ET.Comment, ET.ProcessingInstruction):
            skip("comment" if elem.tag is ET.Comment else "processing instruction")
            return None
        for attr in sorted(elem.attrib):
            skip(f"attribute {attr!r} on <{elem.tag}>")
        if elem.text and elem.text.strip():
            skip(f"text {elem.text.strip()!r} in <{elem.tag}>")
        children = []
        for child in elem:
            if child.tail and child.tail.strip():
                skip(f"text {child.tail.strip()!r} in <{elem.tag}>")
            converted = convert(child)
            if converted is not None:
                children.append(converted)
        return Tree(elem.tag, tuple(children))

    tree = convert(root)
    if tree is None:
        raise ParseError("document has no root element", source=source)
    return tree


def write_xml(t: Tree) -> str:
    """Nested empty-element serialization of a tree."""
    def emit(sub: Tree) -> str:
        if not _XML_NAME_RE.fullmatch(sub.label):
            raise ValueError(f"label {sub.label!r} is not a valid XML element name")
        if not sub.children:
            return f"<{sub.label}/>"
        return f"<{sub.label}>" + "".join(emit(c) for c in sub.children) + f"</{sub.label}>"

    return emit(t) + "\n"


# ---------------------------------------------------------------------------
# file loading helpers

def load_automaton(path: str) -> HedgeAutomaton:
    """Read a ``.ha`` automaton or compile a ``.dtd`` schema."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    if path.endswith(".dtd"):
        return compile_dtd(parse_dtd(text, source=path))
    return parse_ha(text, source=path)
