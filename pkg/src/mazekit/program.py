"""Program AST, the mini-language parser, and the canonical printer.

Grammar:

    program := stmt+
    stmt    := "move" | "turn_left" | "turn_right" | "turn_back" | "attack"
             | "repeat" INT block
             | "while" cond block
             | "if" cond block ("else" block)?
    block   := "{" stmt+ "}"
    cond    := ("not")? ("path_ahead" | "monster_ahead" | "gems_remaining" | "at_goal")

Statements are newline- or semicolon-separated. Nesting depth is capped at 32.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import LimitError, ParseError

MAX_DEPTH = 32


class Action(Enum):
    MOVE_FORWARD = "move"
    TURN_LEFT = "turn_left"
    TURN_RIGHT = "turn_right"
    TURN_BACK = "turn_back"
    ATTACK = "attack"


class ConditionKind(Enum):
    PATH_AHEAD = "path_ahead"
    MONSTER_AHEAD = "monster_ahead"
    GEMS_REMAINING = "gems_remaining"
    AT_GOAL = "at_goal"


@dataclass(frozen=True)
class Condition:
    kind: ConditionKind
    negated: bool = False


@dataclass(frozen=True)
class ActionNode:
    action: Action


@dataclass(frozen=True)
class Sequence:
    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))


@dataclass(frozen=True)
class Repeat:
    count: int
    body: tuple

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        if self.count < 1:
            raise LimitError(f"repeat count must be >= 1, got {self.count}")
        if not self.body:
            raise LimitError("repeat body must be non-empty")


@dataclass(frozen=True)
class While:
    condition: Condition
    body: tuple

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        if not self.body:
            raise LimitError("while body must be non-empty")


@dataclass(frozen=True)
class If:
    condition: Condition
    then: tuple

    def __post_init__(self):
        object.__setattr__(self, "then", tuple(self.then))
        if not self.then:
            raise LimitError("if body must be non-empty")


@dataclass(frozen=True)
class IfElse:
    condition: Condition
    then: tuple
    orelse: tuple

    def __post_init__(self):
        object.__setattr__(self, "then", tuple(self.then))
        object.__setattr__(self, "orelse", tuple(self.orelse))
        if not self.then or not self.orelse:
            raise LimitError("if-else branches must be non-empty")


# A Program is any node; multi-statement programs are a Sequence.
Program = object


def seq(*nodes):
    """Wrap nodes in a Sequence, collapsing the single-node case."""
    if len(nodes) == 1:
        return nodes[0]
    return Sequence(nodes)


def statements(p) -> tuple:
    """Top-level statement list of a program."""
    return p.children if isinstance(p, Sequence) else (p,)


def depth(node) -> int:
    if isinstance(node, ActionNode):
        return 1
    if isinstance(node, Sequence):
        return 1 + max((depth(c) for c in node.children), default=0)
    if isinstance(node, Repeat):
        return 1 + max(depth(c) for c in node.body)
    if isinstance(node, While):
        return 1 + max(depth(c) for c in node.body)
    if isinstance(node, If):
        return 1 + max(depth(c) for c in node.then)
    if isinstance(node, IfElse):
        return 1 + max(depth(c) for c in node.then + node.orelse)
    raise TypeError(f"not a program node: {node!r}")


def block_count(node) -> int:
    """Structural-size metric: action/control nodes, Sequence wrappers free."""
    if isinstance(node, ActionNode):
        return 1
    if isinstance(node, Sequence):
        return sum(block_count(c) for c in node.children)
    if isinstance(node, (Repeat, While)):
        return 1 + sum(block_count(c) for c in node.body)
    if isinstance(node, If):
        return 1 + sum(block_count(c) for c in node.then)
    if isinstance(node, IfElse):
        return 1 + sum(block_count(c) for c in node.then + node.orelse)
    raise TypeError(f"not a program node: {node!r}")


# -- tokenizer ------------------------------------------------------------

_TOKEN_RE = re.compile(r"[a-z_]+|\d+|[{};]|\S")

_KEYWORDS = {a.value for a in Action} | {c.value for c in ConditionKind} | {
    "repeat", "while", "if", "else", "not",
}


def _tokenize(text):
    tokens = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0]
        for match in _TOKEN_RE.finditer(code):
            tokens.append((match.group(), lineno, match.start() + 1))
        if code.strip():
            tokens.append(("\n", lineno, len(line) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        while self.pos < len(self.tokens) and self.tokens[self.pos][0] in ("\n", ";"):
            self.pos += 1
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, value):
        tok = self.next()
        if tok[0] != value:
            raise ParseError(f"expected {value!r}, got {tok[0]!r}", tok[1], tok[2])
        return tok

    def parse_program(self):
        stmts = self.parse_stmts(depth=1, until=None)
        if self.peek() is not None:
            tok = self.peek()
            raise ParseError(f"unexpected token {tok[0]!r}", tok[1], tok[2])
        return seq(*stmts)

    def parse_stmts(self, depth, until):
        stmts = []
        while True:
            tok = self.peek()
            if tok is None or tok[0] == until:
                break
            stmts.append(self.parse_stmt(depth))
        if not stmts:
            tok = self.peek()
            if tok:
                raise ParseError("empty block", tok[1], tok[2])
            raise ParseError("empty program")
        return stmts

    def parse_stmt(self, depth):
        if depth > MAX_DEPTH:
            raise LimitError(f"nesting depth exceeds {MAX_DEPTH}")
        word, line, col = self.next()
        for action in Action:
            if word == action.value:
                return ActionNode(action)
        if word == "repeat":
            count_tok = self.next()
            if not count_tok[0].isdigit():
                raise ParseError(
                    f"repeat needs a count, got {count_tok[0]!r}",
                    count_tok[1], count_tok[2],
                )
            count = int(count_tok[0])
            if count < 1:
                raise LimitError(f"repeat count must be >= 1, got {count}")
            return Repeat(count, self.parse_block(depth + 1))
        if word == "while":
            cond = self.parse_cond()
            return While(cond, self.parse_block(depth + 1))
        if word == "if":
            cond = self.parse_cond()
            then = self.parse_block(depth + 1)
            tok = self.peek()
            if tok and tok[0] == "else":
                self.next()
                return IfElse(cond, then, self.parse_block(depth + 1))
            return If(cond, then)
        raise ParseError(f"unknown statement {word!r}", line, col)

    def parse_block(self, depth):
        self.expect("{")
        stmts = self.parse_stmts(depth, until="}")
        self.expect("}")
        return tuple(stmts)

    def parse_cond(self):
        word, line, col = self.next()
        negated = False
        if word == "not":
            negated = True
            word, line, col = self.next()
        for kind in ConditionKind:
            if word == kind.value:
                return Condition(kind, negated)
        raise ParseError(f"unknown condition {word!r}", line, col)


def parse_program(text: str):
    """Parse mini-language text into a Program AST."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty program")
    return _Parser(tokens).parse_program()


# -- printer --------------------------------------------------------------


def _print_cond(cond: Condition) -> str:
    return ("not " if cond.negated else "") + cond.kind.value


def _print_lines(node, indent):
    pad = "  " * indent
    if isinstance(node, ActionNode):
        return [pad + node.action.value]
    if isinstance(node, Sequence):
        lines = []
        for child in node.children:
            lines.extend(_print_lines(child, indent))
        return lines
    if isinstance(node, Repeat):
        header = f"{pad}repeat {node.count} {{"
        return [header, *_body_lines(node.body, indent), pad + "}"]
    if isinstance(node, While):
        header = f"{pad}while {_print_cond(node.condition)} {{"
        return [header, *_body_lines(node.body, indent), pad + "}"]
    if isinstance(node, If):
        header = f"{pad}if {_print_cond(node.condition)} {{"
        return [header, *_body_lines(node.then, indent), pad + "}"]
    if isinstance(node, IfElse):
        header = f"{pad}if {_print_cond(node.condition)} {{"
        return [
            header,
            *_body_lines(node.then, indent),
            pad + "} else {",
            *_body_lines(node.orelse, indent),
            pad + "}",
        ]
    raise TypeError(f"not a program node: {node!r}")


def _body_lines(body, indent):
    lines = []
    for child in body:
        lines.extend(_print_lines(child, indent + 1))
    return lines


def print_program(p) -> str:
    """Canonical text form; parse_program(print_program(p)) == p."""
    if depth(p) > MAX_DEPTH:
        raise LimitError(f"nesting depth exceeds {MAX_DEPTH}")
    return "\n".join(_print_lines(p, 0)) + "\n"
