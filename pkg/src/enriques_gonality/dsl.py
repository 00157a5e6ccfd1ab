"""A small expression language for lattice classes.

Grammar:

    program := (let ';')* expr
    let     := 'let' ident (',' ident)* '=' (constructor | expr)
    constructor := 'isotropic' '(' pairing (',' pairing)* ')'
    pairing := ident '.' ident '=' ['-'] int
    expr    := term (('+' | '-') term)*
    term    := [int '*'] atom
    atom    := 'v' '[' int{10, comma separated} ']' | ident

The isotropic constructor resolves the named classes to concrete primitive
effective isotropic coordinate witnesses with the requested pairwise
pairings, deterministically (minimal in the ample-pairing-then-lex order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .decompose import realize_isotropic_tuple
from .errors import InvalidInput, ParseError, UnboundNameError
from .lattice import RANK, STANDARD, EnriquesLattice, as_vec
from .linalg import Vec

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
                       r"|(?P<sym>[+\-*,;=.()\[\]]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "sym" | "end"
    text: str
    pos: int


@dataclass(frozen=True)
class ClassExpression:
    source: str
    resolved: Vec


def _tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad_at]!r}", bad_at)
        for kind in ("int", "ident", "sym"):
            val = m.group(kind)
            if val is not None:
                tokens.append(Token(kind, val, m.start(kind)))
                break
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, bindings, lattice: EnriquesLattice):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.env: dict[str, Vec] = dict(bindings or {})
        self.lattice = lattice

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str) -> Token:
        tok = self.peek()
        if tok.kind != "sym" or tok.text != sym:
            raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, expected=repr(sym))
        return self.advance()

    def expect_int(self) -> int:
        tok = self.peek()
        if tok.kind != "int":
            raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, expected="integer")
        self.advance()
        return int(tok.text)

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, expected="name")
        return self.advance()

    # -- grammar -----------------------------------------------------------

    def program(self) -> Vec:
        while self.peek().kind == "ident" and self.peek().text == "let":
            self.let_statement()
            self.expect_sym(";")
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"trailing input {tok.text!r}", tok.pos)
        return value

    def let_statement(self):
        self.advance()  # 'let'
        names = [self.expect_ident().text]
        while self.peek().kind == "sym" and self.peek().text == ",":
            self.advance()
            names.append(self.expect_ident().text)
        self.expect_sym("=")
        nxt = self.peek()
        if nxt.kind == "ident" and nxt.text == "isotropic":
            self.advance()
            classes = self.isotropic_constructor(names)
            for name, cls in zip(names, classes):
                self.env[name] = cls
            return
        if len(names) != 1:
            raise ParseError("only the isotropic constructor binds several names", nxt.pos)
        self.env[names[0]] = self.expr()

    def isotropic_constructor(self, names: list[str]) -> tuple[Vec, ...]:
        self.expect_sym("(")
        slot = {name: k for k, name in enumerate(names)}
        if len(slot) != len(names):
            raise InvalidInput(f"duplicate names in let: {names}")
        n = len(names)
        gram = [[0] * n for _ in range(n)]
        seen = [[i == j for j in range(n)] for i in range(n)]
        fixed: dict[int, list] = {}
        while True:
            a = self.expect_ident()
            self.expect_sym(".")
            b = self.expect_ident()
            self.expect_sym("=")
            sign = 1
            if self.peek().kind == "sym" and self.peek().text == "-":
                self.advance()
                sign = -1
            value = sign * self.expect_int()
            self._record_pairing(a, b, value, slot, gram, seen, fixed)
            if self.peek().kind == "sym" and self.peek().text == ",":
                self.advance()
                continue
            break
        self.expect_sym(")")
        for i in range(n):
            for j in range(i + 1, n):
                if not seen[i][j]:
                    raise InvalidInput(
                        f"pairing {names[i]}.{names[j]} not specified in isotropic(...)")
        return realize_isotropic_tuple(tuple(tuple(row) for row in gram),
                                       fixed=fixed, lattice=self.lattice)

    def _record_pairing(self, a: Token, b: Token, value: int, slot, gram, seen, fixed):
        a_slot, b_slot = slot.get(a.text), slot.get(b.text)
        if a_slot is not None and b_slot is not None:
            if a_slot == b_slot:
                raise InvalidInput(f"self-pairing {a.text}.{b.text} is always 0 for isotropics")
            gram[a_slot][b_slot] = gram[b_slot][a_slot] = value
            seen[a_slot][b_slot] = seen[b_slot][a_slot] = True
            return
        if a_slot is None and b_slot is None:
            raise ParseError(f"pairing {a.text}.{b.text} binds none of the new names", a.pos)
        name, idx = (b, a_slot) if a_slot is not None else (a, b_slot)
        if name.text not in self.env:
            raise UnboundNameError(f"unbound name {name.text!r} in pairing spec")
        fixed.setdefault(idx, []).append((self.env[name.text], value))

    def expr(self) -> Vec:
        value = self.term()
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            if op == "+":
                value = tuple(x + y for x, y in zip(value, rhs))
            else:
                value = tuple(x - y for x, y in zip(value, rhs))
        return value

    def term(self) -> Vec:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            self.expect_sym("*")
            atom = self.atom()
            return tuple(int(tok.text) * x for x in atom)
        return self.atom()

    def atom(self) -> Vec:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "v" \
                and self.tokens[self.i + 1].kind == "sym" and self.tokens[self.i + 1].text == "[":
            self.advance()
            self.advance()
            coords = [self.signed_int()]
            while self.peek().kind == "sym" and self.peek().text == ",":
                self.advance()
                coords.append(self.signed_int())
            closing = self.expect_sym("]")
            if len(coords) != RANK:
                raise ParseError(f"vector literal has {len(coords)} coordinates, needs {RANK}",
                                 closing.pos)
            return as_vec(coords)
        if tok.kind == "ident":
            self.advance()
            if tok.text not in self.env:
                raise UnboundNameError(f"unbound name {tok.text!r}")
            return self.env[tok.text]
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos,
                         expected="a class name or v[...] literal")

    def signed_int(self) -> int:
        sign = 1
        if self.peek().kind == "sym" and self.peek().text == "-":
            self.advance()
            sign = -1
        return sign * self.expect_int()


def parse_class(text: str, bindings=None, lattice: EnriquesLattice = STANDARD) -> ClassExpression:
    """Parse and resolve a class expression; raises ParseError / UnboundNameError /
    UnsatisfiablePairingSpec with position information where applicable."""
    if not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(text, bindings, lattice)
    return ClassExpression(source=text, resolved=parser.program())
