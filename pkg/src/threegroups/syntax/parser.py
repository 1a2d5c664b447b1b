"""Recursive-descent parser for the formula grammar.

Precedence, tightest first: ``not``, ``&``, ``|``, ``->``, ``<->``.  The body
of a quantifier extends as far right as possible.  ``->`` and ``<->`` group to
the right.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .formula import (
    FALSE, TRUE, And, Cmp, Cong, Exists, Forall, Formula, Iff, Implies, InL, InZ, Not,
    Or, QisL, RELS,
)
from .linear import FLOOR, FRAC, PLAIN, LinearForm, Var

KEYWORDS = {"true", "false", "not", "exists", "forall", "mod", "floor", "frac"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<=|>=|<|>|=|~|&|\||\(|\)|\.|:|\+|-|\*|/)
  | (?P<num>\d+)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

VAR_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        else:
            for i, ch in enumerate(m.group()):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.used = {t.text for t in self.tokens if t.kind == "word"}
        self.counter = 0
        # floor/frac of compound terms awaiting an existential wrapper
        self.pending: list[tuple[str, LinearForm]] = []

    # -- token helpers -------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "word")

    def take(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def fresh(self, base: str = "u") -> str:
        while True:
            self.counter += 1
            name = f"{base}_{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name

    def variable(self) -> str:
        tok = self.tok
        if tok.kind != "word" or tok.text in KEYWORDS or not VAR_RE.match(tok.text):
            raise self.error(f"expected a variable, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok.text

    # -- formulas ------------------------------------------------------
    def formula(self) -> Formula:
        lhs = self.implication()
        if self.at("<->"):
            self.i += 1
            return Iff(lhs, self.formula())
        return lhs

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.at("->"):
            self.i += 1
            return Implies(lhs, self.implication())
        return lhs

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.at("|"):
            self.i += 1
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else Or(tuple(args))

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.at("&"):
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else And(tuple(args))

    def unary(self) -> Formula:
        if self.at("not"):
            self.i += 1
            return Not(self.unary())
        if self.at("exists") or self.at("forall"):
            return self.quantified()
        return self.primary()

    def quantified(self) -> Formula:
        kind = self.tok.text
        self.i += 1
        var = self.variable()
        guard = None
        if self.at(":"):
            self.i += 1
            if self.at("Z") or self.at("L"):
                guard = self.tok.text
                self.i += 1
            else:
                raise self.error("expected sort Z or L after ':'")
        self.take(".")
        body = self.formula()
        if guard is not None:
            term = LinearForm.var(var)
            sort_atom = InZ(term) if guard == "Z" else InL(term)
            body = And((sort_atom, body)) if kind == "exists" else Implies(sort_atom, body)
        return Exists(var, body) if kind == "exists" else Forall(var, body)

    def primary(self) -> Formula:
        tok = self.tok
        if self.at("true"):
            self.i += 1
            return TRUE
        if self.at("false"):
            self.i += 1
            return FALSE
        if self.at("QisL"):
            self.i += 1
            return QisL()
        if self.at("("):
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        saved = self.pending
        self.pending = []
        if self.at("Z") or self.at("L"):
            pred = tok.text
            self.i += 1
            self.take("(")
            term = self.term()
            self.take(")")
            atom: Formula = InZ(term) if pred == "Z" else InL(term)
        else:
            if tok.kind == "eof":
                raise self.error("unexpected end of input")
            lhs = self.term()
            if self.at("~"):
                self.i += 1
                ktok = self.tok
                k = self.rational()
                self.take("mod")
                mtok = self.tok
                if mtok.kind != "num":
                    raise self.error("expected a positive integer modulus")
                self.i += 1
                m = int(mtok.text)
                if k.denominator != 1:
                    raise self.error("congruence residue must be an integer", ktok)
                if m <= 0:
                    raise self.error("congruence modulus must be positive", mtok)
                if not 0 <= k < m:
                    raise self.error(f"congruence residue must satisfy 0 <= k < {m}", ktok)
                atom = Cong(lhs, int(k), m)
            elif self.tok.kind == "op" and self.tok.text in RELS:
                rel = self.tok.text
                self.i += 1
                atom = Cmp(lhs, rel, self.term())
            else:
                raise self.error(f"expected a relation, found {self.tok.text or 'end of input'!r}")
        atom = self.wrap_pending(atom)
        self.pending = saved
        return atom

    def wrap_pending(self, atom: Formula) -> Formula:
        # floor(t) -> u with Z(u) & u <= t & t < u + 1
        for name, t in reversed(self.pending):
            u = LinearForm.var(name)
            guard = (InZ(u), Cmp(u, "<=", t), Cmp(t, "<", u + 1))
            atom = Exists(name, And(guard + (atom,)))
        return atom

    # -- terms ---------------------------------------------------------
    def rational(self) -> Fraction:
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        tok = self.tok
        if tok.kind != "num":
            raise self.error("expected a number")
        self.i += 1
        num = int(tok.text)
        if self.at("/"):
            self.i += 1
            dtok = self.tok
            if dtok.kind != "num":
                raise self.error("expected a denominator")
            self.i += 1
            if int(dtok.text) == 0:
                raise self.error("zero denominator", dtok)
            return sign * Fraction(num, int(dtok.text))
        return Fraction(sign * num)

    def term(self) -> LinearForm:
        sign = 1
        if self.at("-"):
            self.i += 1
            sign = -1
        acc = self.product() * sign
        while self.at("+") or self.at("-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            acc = acc + self.product() * sign
        return acc

    def product(self) -> LinearForm:
        if self.tok.kind == "num":
            q = self.rational()
            if self.at("*"):
                self.i += 1
                return self.factor() * q
            return LinearForm.constant(q)
        return self.factor()

    def factor(self) -> LinearForm:
        if self.at("floor") or self.at("frac"):
            part = self.tok.text
            self.i += 1
            self.take("(")
            inner = self.term()
            self.take(")")
            return self.apply_part(part, inner)
        if self.tok.kind == "word" and self.tok.text not in KEYWORDS and VAR_RE.match(self.tok.text):
            return LinearForm.var(self.variable())
        raise self.error(f"expected a term, found {self.tok.text or 'end of input'!r}")

    def apply_part(self, part: str, t: LinearForm) -> LinearForm:
        c = t.const
        if t.is_constant():
            fl = Fraction(floor(c))
            return LinearForm.constant(fl if part == FLOOR else c - fl)
        if len(t.terms) == 1 and c.denominator == 1:
            key, coeff = t.terms[0]
            if coeff == 1:
                if key.part == PLAIN:
                    return LinearForm.make({Var(key.name, part): 1}, c if part == FLOOR else 0)
                if key.part == FLOOR:
                    return t if part == FLOOR else LinearForm()
                if key.part == FRAC:
                    return LinearForm.constant(c) if part == FLOOR else LinearForm.var(key.name, FRAC)
        name = self.fresh()
        self.pending.append((name, t))
        u = LinearForm.var(name)
        return u if part == FLOOR else t - u


def parse(text: str) -> Formula:
    """Parse ``text``; bound variables that would shadow are renamed apart."""
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "eof":
        raise p.error(f"unexpected {p.tok.text!r}")
    from .transform import free_vars, rename_bound
    return rename_bound(f, set(free_vars(f)), p.used)
