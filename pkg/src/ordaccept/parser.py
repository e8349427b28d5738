"""Reader for definite programs with ``entry``, ``type`` and ``mode`` directives."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .terms import CONS, NIL, Clause, Program, Struct, Var

# (precedence, left-arg max, right-arg max)
_INFIX = {
    ":-": (1200, 1199, 1199),
    "::=": (1150, 1149, 1149),
    ";": (1100, 1099, 1100),
    ",": (1000, 999, 1000),
    "+": (500, 500, 499),
    "*": (400, 400, 399),
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<num>\d+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*')
  | (?P<sym>::=|:-|\[\]|[()\[\]|,;+*])
  | (?P<end>\.(?=\s|%|$))
  | (?P<bad>.)
    """,
    re.VERBOSE | re.DOTALL,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int, offset: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.col, self.offset = line, col, offset


@dataclass
class _Tok:
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    for m in _TOKEN.finditer(text):
        kind = m.lastgroup
        if kind == "ws":
            continue
        out.append(_Tok(kind, m.group(), m.start()))
    out.append(_Tok("eof", "", len(text)))
    return out


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.varmap: dict[str, Var] = {}
        self.anon = 0

    def error(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        line = self.text.count("\n", 0, tok.offset) + 1
        col = tok.offset - (self.text.rfind("\n", 0, tok.offset) + 1) + 1
        return ParseError(msg, line, col, tok.offset)

    @property
    def tok(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        if self.tok.text != text or self.tok.kind in ("quoted",):
            raise self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def clause_term(self):
        self.varmap = {}
        if self.tok.kind == "sym" and self.tok.text == ":-":
            self.next()
            kw, nxt = self.tok, self.toks[self.i + 1]
            if kw.kind == "name" and not (nxt.text == "(" and nxt.offset == kw.offset + len(kw.text)):
                self.next()
                t = Struct(kw.text, (self.parse(1199),))
            else:
                t = self.parse(1199)
            self._end()
            return ("directive", t)
        t = self.parse(1200)
        self._end()
        return ("clause", t)

    def _end(self):
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text or 'end of input'!r}")
        self.next()

    def parse(self, maxprec):
        left = self.primary()
        leftprec = 0
        while True:
            t = self.tok
            if t.kind != "sym" or t.text not in _INFIX:
                break
            prec, lmax, rmax = _INFIX[t.text]
            if prec > maxprec or leftprec > lmax:
                break
            self.next()
            right = self.parse(rmax)
            left = Struct(t.text, (left, right))
            leftprec = prec
        return left

    def primary(self):
        t = self.next()
        if t.kind == "var":
            if t.text == "_":
                self.anon += 1
                return Var(f"_A{self.anon}")
            return self.varmap.setdefault(t.text, Var(t.text))
        if t.kind == "num":
            return Struct(t.text)
        if t.kind in ("name", "quoted"):
            name = t.text if t.kind == "name" else re.sub(r"\\(.)", r"\1", t.text[1:-1])
            if self.tok.kind == "sym" and self.tok.text == "(" and self.tok.offset == t.offset + len(t.text):
                self.next()
                args = [self.parse(999)]
                while self.tok.text == "," and self.tok.kind == "sym":
                    self.next()
                    args.append(self.parse(999))
                self.expect(")")
                return Struct(name, tuple(args))
            return Struct(name)
        if t.kind == "sym":
            if t.text == "(":
                inner = self.parse(1200)
                self.expect(")")
                return inner
            if t.text == "[]":
                return NIL
            if t.text == "[":
                if self.tok.text == "]":
                    self.next()
                    return NIL
                items = [self.parse(999)]
                while self.tok.text == "," and self.tok.kind == "sym":
                    self.next()
                    items.append(self.parse(999))
                tail = NIL
                if self.tok.text == "|":
                    self.next()
                    tail = self.parse(999)
                self.expect("]")
                for it in reversed(items):
                    tail = Struct(CONS, (it, tail))
                return tail
        raise self.error(f"unexpected {t.text or 'end of input'!r}", t)


def _conj(t) -> list:
    if isinstance(t, Struct) and t.name == "," and len(t.args) == 2:
        return _conj(t.args[0]) + _conj(t.args[1])
    return [t]


def _alts(t) -> list:
    if isinstance(t, Struct) and t.name == ";" and len(t.args) == 2:
        return _alts(t.args[0]) + _alts(t.args[1])
    return [t]


def parse_term(text: str):
    """Parse a single term (no terminating period needed)."""
    text = text.strip()
    if text.endswith("."):
        text = text[:-1]
    r = _Reader(text)
    t = r.parse(1200)
    if r.tok.kind != "eof":
        raise r.error(f"unexpected {r.tok.text!r}")
    return t


def parse_query(text: str) -> tuple:
    return tuple(_conj(parse_term(text)))


def parse_source(text: str) -> Program:
    """Parse program text into a :class:`Program` with clauses in source order."""
    r = _Reader(text)
    clauses, entries, modes, types = [], [], [], []
    arities: dict[str, int] = {}
    while r.tok.kind != "eof":
        start = r.tok
        kind, t = r.clause_term()
        if kind == "directive":
            if not isinstance(t, Struct) or len(t.args) != 1 or t.name not in ("entry", "mode", "type"):
                raise r.error("unknown directive", start)
            arg = t.args[0]
            if t.name == "entry":
                entries.append(_atom(arg, r, start))
            elif t.name == "mode":
                modes.append(_atom(arg, r, start))
            else:
                if not (isinstance(arg, Struct) and arg.name == "::=" and isinstance(arg.args[0], Struct)
                        and not arg.args[0].args):
                    raise r.error("malformed type directive", start)
                types.append((arg.args[0].name, tuple(_alts(arg.args[1]))))
            continue
        if isinstance(t, Struct) and t.name == ":-" and len(t.args) == 2:
            head, body = t.args[0], tuple(_conj(t.args[1]))
        else:
            head, body = t, ()
        head = _atom(head, r, start)
        body = tuple(_atom(b, r, start) for b in body)
        for a in (head, *body):
            if arities.setdefault(a.name, a.arity) != a.arity:
                raise r.error(f"arity-inconsistent predicate {a.name}", start)
        clauses.append(Clause(head, body))
    return Program(tuple(clauses), tuple(entries), tuple(modes), tuple(types))


def _atom(t, r, tok):
    if not isinstance(t, Struct):
        raise r.error("atom expected", tok)
    return t


def parse_file(path) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_source(fh.read())


def corpus_path(name: str) -> str:
    """Path of a bundled sample program, e.g. ``corpus_path("permute")``."""
    return str(resources.files("ordaccept") / "corpus" / f"{name}.pl")
