"""Parser for the text form of elements, e.g. ``a(1/2)*b(-3/2)*x(-1)^2 + c(0)*d(0)``.

Grammar (whitespace is ignored)::

    element := term ('+' term)*
    term    := factor ('*' factor)*
    factor  := atom ('^' nat)?  |  '1'  |  '0'
    atom    := sym '(' sub ')'
    sub     := int | int '/' '2'
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagrams import (
    EMPTY,
    ArcA,
    ArcC,
    ClosedMonomial,
    Complex,
    Element,
    Generator,
    Insular,
    Traversing,
)


class ParseError(ValueError):
    """Malformed or inconsistent input; ``position`` is a 0-based column."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} at position {position}")
        self.message = message
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<sym>[A-Za-z])|(?P<op>[()*+^/]))")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            j = pos
            while text[j].isspace():
                j += 1
            raise ParseError(f"unexpected character {text[j]!r}", j)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


@dataclass(frozen=True)
class Atom:
    sym: str
    doubled: int  # subscript times two
    power: int
    pos: int


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: str | None = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t.pos)
        self.i += 1
        return t

    def term(self) -> list[Atom] | None:
        """Atoms of a product, or ``None`` for a literal zero."""
        factors: list[Atom] = []
        zero = False
        while True:
            t = self.peek()
            if t.kind == "int":
                if t.text not in ("0", "1"):
                    raise ParseError(f"unexpected number {t.text}", t.pos)
                self.i += 1
                zero = zero or t.text == "0"
            else:
                factors.append(self.atom())
            if self.peek().text != "*":
                break
            self.take("op", "*")
        return None if zero else factors

    def atom(self) -> Atom:
        sym = self.take("sym")
        if sym.text not in "xabcd":
            raise ParseError(f"unknown symbol {sym.text!r}", sym.pos)
        self.take("op", "(")
        num = self.take("int")
        doubled = 2 * int(num.text)
        if self.peek().text == "/":
            self.take("op", "/")
            den = self.take("int")
            if den.text != "2":
                raise ParseError("only the denominator 2 is allowed", den.pos)
            doubled = int(num.text)
        self.take("op", ")")
        power = 1
        if self.peek().text == "^":
            self.take("op", "^")
            p = self.take("int")
            power = int(p.text)
            if power < 1:
                raise ParseError("exponent must be a positive integer", p.pos)
        return Atom(sym.text, doubled, power, sym.pos)


def _generator(atoms: list[Atom], complex: Complex, term_pos: int) -> Generator | None:
    closed: dict[int, int] = {}
    opens: dict[str, Atom] = {}
    zero = False
    for a in atoms:
        if a.sym == "x":
            if a.doubled % 2:
                raise ParseError("x subscripts must be integers", a.pos)
            k = a.doubled // 2
            if k == 0:
                zero = True
                continue
            closed[k] = closed.get(k, 0) + a.power
            continue
        if a.sym in "cd" and a.doubled % 2:
            raise ParseError(f"{a.sym} subscripts must be integers", a.pos)
        if a.sym in "ab" and a.doubled % 2 == 0:
            raise ParseError(f"{a.sym} subscripts must lie in Z+1/2", a.pos)
        if a.power != 1:
            raise ParseError("open strings cannot be raised to a power", a.pos)
        if a.sym in opens:
            raise ParseError(f"repeated open string {a.sym}", a.pos)
        opens[a.sym] = a
    kinds = "".join(sorted(opens))
    expected = {
        Complex.F00: ("",),
        Complex.F11: ("c",),
        Complex.F02: ("a",),
        Complex.F22: ("ab", "cd"),
    }[complex]
    if kinds not in expected:
        found = "open strings " + " and ".join(sorted(opens)) if opens else "a term without open strings"
        raise ParseError(f"{found} not allowed in complex {complex.value}", term_pos)
    if zero:
        return None
    if kinds == "":
        tag = EMPTY
    elif kinds == "c":
        tag = ArcC(opens["c"].doubled // 2)
    elif kinds == "a":
        tag = ArcA(opens["a"].doubled)
    elif kinds == "ab":
        tag = Insular(opens["a"].doubled, opens["b"].doubled)
    else:
        tag = Traversing(opens["c"].doubled // 2, opens["d"].doubled // 2)
    return Generator(complex, tag, ClosedMonomial.from_dict(closed))


def parse_element(text: str, complex: Complex | str) -> Element:
    """Parse ``text`` into an element of ``complex`` (terms add mod 2)."""
    cx = Complex.parse(complex)
    parser = _Parser(text)
    starts = []
    terms = []
    while True:
        starts.append(parser.peek().pos)
        terms.append(parser.term())
        if parser.peek().text != "+":
            break
        parser.take("op", "+")
    parser.take("end")
    gens = []
    for atoms, pos in zip(terms, starts):
        if atoms is None:
            continue
        g = _generator(atoms, cx, pos)
        if g is not None:
            gens.append(g)
    return Element.of(cx, gens)


def serialize(e: Element) -> str:
    return str(e)
