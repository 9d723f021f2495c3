"""String diagrams on marked annuli and their Z/2 linear combinations.

A basis diagram is an open-string tag together with a product of closed
curves ``x_k`` (``k`` nonzero).  Half-integer subscripts of the ``a`` and
``b`` arcs are stored doubled, so every quantity here is an exact int.

Elements are sets of generators: adding a generator twice removes it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Iterator, Mapping, Union


class Complex(str, enum.Enum):
    """Marking of the annulus: points on the outer and inner boundary."""

    F00 = "F00"
    F11 = "F11"
    F02 = "F02"
    F22 = "F22"

    @classmethod
    def parse(cls, name: str | Complex) -> Complex:
        if isinstance(name, Complex):
            return name
        try:
            return cls(name.upper())
        except ValueError:
            raise ValueError(f"unknown complex {name!r}") from None


class ComplexMismatch(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """The number ``doubled / 2``."""

    doubled: int

    @classmethod
    def of(cls, value: int | HalfInt) -> HalfInt:
        if isinstance(value, HalfInt):
            return value
        return cls(2 * value)

    @classmethod
    def parse(cls, text: str) -> HalfInt:
        text = text.strip()
        if text.endswith("/2"):
            return cls(int(text[:-2]))
        return cls(2 * int(text))

    def __add__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other: HalfInt | int) -> HalfInt:
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __neg__(self) -> HalfInt:
        return HalfInt(-self.doubled)

    def __abs__(self) -> HalfInt:
        return HalfInt(abs(self.doubled))

    def __lt__(self, other: HalfInt | int) -> bool:
        return self.doubled < HalfInt.of(other).doubled

    def __eq__(self, other: object) -> bool:
        if isinstance(other, HalfInt):
            return self.doubled == other.doubled
        if isinstance(other, int):
            return self.doubled == 2 * other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.doubled)

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __float__(self) -> float:
        return self.doubled / 2

    def __str__(self) -> str:
        if self.doubled % 2 == 0:
            return str(self.doubled // 2)
        return f"{self.doubled}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self})"


def half_str(doubled: int) -> str:
    """Always the ``p/2`` form, as used for ``a`` and ``b`` subscripts."""
    return f"{doubled}/2"


class ClosedMonomial(tuple):
    """Product of closed curves, stored as sorted ``(subscript, exponent)`` pairs."""

    __slots__ = ()

    def __new__(cls, pairs: Iterable[tuple[int, int]] = ()) -> ClosedMonomial:
        return super().__new__(cls, pairs)

    @classmethod
    def from_dict(cls, exponents: Mapping[int, int]) -> ClosedMonomial:
        for k, e in exponents.items():
            if k == 0:
                raise ValueError("x_0 is contractible and cannot be stored")
            if e < 0:
                raise ValueError("negative exponent")
        return cls(sorted((k, e) for k, e in exponents.items() if e))

    @classmethod
    def of(cls, *subscripts: int) -> ClosedMonomial:
        d: dict[int, int] = {}
        for k in subscripts:
            d[k] = d.get(k, 0) + 1
        return cls.from_dict(d)

    def as_dict(self) -> dict[int, int]:
        return dict(self)

    def exponent(self, k: int) -> int:
        for key, e in self:
            if key == k:
                return e
            if key > k:
                break
        return 0

    def times(self, k: int, power: int = 1) -> ClosedMonomial:
        """Multiply by ``x_k**power``; a negative power divides."""
        d = dict(self)
        e = d.get(k, 0) + power
        if e < 0:
            raise ValueError(f"x_{k} does not divide {self}")
        if e:
            d[k] = e
        else:
            d.pop(k, None)
        return ClosedMonomial(sorted(d.items()))

    def __mul__(self, other: ClosedMonomial) -> ClosedMonomial:  # type: ignore[override]
        d = dict(self)
        for k, e in other:
            d[k] = d.get(k, 0) + e
        return ClosedMonomial(sorted(d.items()))

    def negated(self) -> ClosedMonomial:
        return ClosedMonomial(sorted((-k, e) for k, e in self))

    @property
    def winding(self) -> int:
        return sum(k * e for k, e in self)

    @property
    def weight(self) -> int:
        return sum(abs(k) * e for k, e in self)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(f"x({k})" if e == 1 else f"x({k})^{e}" for k, e in self)

    def __repr__(self) -> str:
        return f"ClosedMonomial({self})"


ONE = ClosedMonomial()


# Open-string tags.  a/b subscripts are doubled (always odd).


@dataclass(frozen=True, order=True)
class Empty:
    def __str__(self) -> str:
        return ""


@dataclass(frozen=True, order=True)
class ArcC:
    n: int

    def __str__(self) -> str:
        return f"c({self.n})"


def _check_odd(*doubled: int) -> None:
    for v in doubled:
        if not isinstance(v, int) or v % 2 == 0:
            raise ValueError(f"a/b subscript must lie in Z+1/2, got doubled value {v}")


@dataclass(frozen=True, order=True)
class ArcA:
    h2: int

    def __post_init__(self) -> None:
        _check_odd(self.h2)

    @property
    def h(self) -> HalfInt:
        return HalfInt(self.h2)

    def __str__(self) -> str:
        return f"a({half_str(self.h2)})"


@dataclass(frozen=True, order=True)
class Insular:
    i2: int
    j2: int

    def __post_init__(self) -> None:
        _check_odd(self.i2, self.j2)

    @property
    def i(self) -> HalfInt:
        return HalfInt(self.i2)

    @property
    def j(self) -> HalfInt:
        return HalfInt(self.j2)

    def __str__(self) -> str:
        return f"a({half_str(self.i2)})*b({half_str(self.j2)})"


@dataclass(frozen=True, order=True)
class Traversing:
    m: int
    n: int

    def __str__(self) -> str:
        return f"c({self.m})*d({self.n})"


OpenTag = Union[Empty, ArcC, ArcA, Insular, Traversing]

EMPTY = Empty()

_TAG_COMPLEX = {
    Empty: Complex.F00,
    ArcC: Complex.F11,
    ArcA: Complex.F02,
    Insular: Complex.F22,
    Traversing: Complex.F22,
}

# serialization order of tag variants
_TAG_RANK = {Empty: 0, ArcC: 1, ArcA: 2, Traversing: 3, Insular: 4}


def tag_winding2(tag: OpenTag) -> int:
    t = type(tag)
    if t is Empty:
        return 0
    if t is ArcC:
        return 2 * tag.n
    if t is ArcA:
        return tag.h2
    if t is Insular:
        return tag.i2 + tag.j2
    return 2 * (tag.m + tag.n)


def tag_weight2(tag: OpenTag) -> int:
    t = type(tag)
    if t is Empty:
        return 0
    if t is ArcC:
        return 2 * abs(tag.n)
    if t is ArcA:
        return abs(tag.h2)
    if t is Insular:
        return abs(tag.i2) + abs(tag.j2)
    return 2 * (abs(tag.m) + abs(tag.n))


@dataclass(frozen=True)
class Generator:
    complex: Complex
    tag: OpenTag
    closed: ClosedMonomial = ONE

    def __post_init__(self) -> None:
        if _TAG_COMPLEX[type(self.tag)] is not self.complex:
            raise ComplexMismatch(f"tag {self.tag!r} does not belong to {self.complex.value}")

    def sort_key(self) -> tuple:
        tag = self.tag
        return (_TAG_RANK[type(tag)], tuple(vars(tag).values()), tuple(self.closed))

    def with_closed(self, closed: ClosedMonomial) -> Generator:
        return Generator(self.complex, self.tag, closed)

    def __str__(self) -> str:
        tag = str(self.tag)
        if not self.closed:
            return tag or "1"
        closed = str(self.closed)
        return f"{tag}*{closed}" if tag else closed

    def __repr__(self) -> str:
        return f"<{self.complex.value} {self}>"


def gen(complex: Complex | str, tag: OpenTag = EMPTY, closed: ClosedMonomial | Mapping[int, int] = ONE) -> Generator:
    if not isinstance(closed, ClosedMonomial):
        closed = ClosedMonomial.from_dict(closed)
    return Generator(Complex.parse(complex), tag, closed)


def winding2(g: Generator) -> int:
    return tag_winding2(g.tag) + 2 * g.closed.winding


def weight2(g: Generator) -> int:
    return tag_weight2(g.tag) + 2 * g.closed.weight


def winding(g: Generator) -> HalfInt:
    return HalfInt(winding2(g))


def weight(g: Generator) -> HalfInt:
    return HalfInt(weight2(g))


def xor_into(acc: set, items: Iterable) -> set:
    """Add ``items`` to ``acc`` with Z/2 coefficients."""
    for g in items:
        if g in acc:
            acc.remove(g)
        else:
            acc.add(g)
    return acc


@dataclass(frozen=True)
class Element:
    complex: Complex
    terms: frozenset = frozenset()

    def __post_init__(self) -> None:
        for g in self.terms:
            if g.complex is not self.complex:
                raise ComplexMismatch(f"{g!r} is not in {self.complex.value}")

    @classmethod
    def zero(cls, complex: Complex | str) -> Element:
        return cls(Complex.parse(complex))

    @classmethod
    def of(cls, complex: Complex | str, gens: Iterable[Generator] = ()) -> Element:
        """Sum of ``gens`` with Z/2 coefficients (repeats cancel in pairs)."""
        return cls(Complex.parse(complex), frozenset(xor_into(set(), gens)))

    def __add__(self, other: Element) -> Element:
        if other.complex is not self.complex:
            raise ComplexMismatch(f"cannot add {self.complex.value} and {other.complex.value}")
        return Element(self.complex, self.terms ^ other.terms)

    __sub__ = __add__

    def __iter__(self) -> Iterator[Generator]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __contains__(self, g: object) -> bool:
        return g in self.terms

    def sorted_terms(self) -> list[Generator]:
        return sorted(self.terms, key=Generator.sort_key)

    def windings2(self) -> set[int]:
        return {winding2(g) for g in self.terms}

    def max_weight2(self) -> int:
        return max((weight2(g) for g in self.terms), default=0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(str(g) for g in self.sorted_terms())

    def __repr__(self) -> str:
        return f"Element({self.complex.value}: {self})"


def add(e1: Element, e2: Element) -> Element:
    return e1 + e2


def mul_closed(e: Element, m: ClosedMonomial | int) -> Element:
    """Multiply every term by a closed monomial, or by ``x_m`` if ``m`` is an int.

    ``x_0`` bounds a disc, and a diagram containing it is zero.
    """
    if isinstance(m, int):
        if m == 0:
            return Element.zero(e.complex)
        m = ClosedMonomial.of(m)
    return Element(e.complex, frozenset(g.with_closed(g.closed * m) for g in e.terms))


def element(complex: Complex | str, *gens: Generator) -> Element:
    return Element.of(complex, gens)
