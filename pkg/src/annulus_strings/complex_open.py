"""Open-string complexes: one arc (F11), a boundary-parallel arc (F02),
and two arcs (F22), together with the small disc complex E.

Arc subscripts ``a_h``/``b_h`` are half-integers stored doubled.  A crossing
between an arc and ``x_k`` shifts the arc's subscript by ``k``; there are
``|k|`` such crossings, so only odd ``k`` survive mod 2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .complex_x import diff_monomial
from .diagrams import (
    EMPTY,
    ONE,
    ArcA,
    ArcC,
    ClosedMonomial,
    Complex,
    Element,
    Empty,
    Generator,
    HalfInt,
    Insular,
    Traversing,
    xor_into,
)

F00, F11, F02, F22 = Complex.F00, Complex.F11, Complex.F02, Complex.F22


# --- differential ----------------------------------------------------------------


def _arc_splits(h2: int) -> list[tuple[int, int]]:
    """Self-crossing resolutions of a boundary-parallel arc with doubled subscript ``h2``.

    Returns ``(i2, j)`` with ``i/2 + j == h2/2`` and ``i``, ``j`` of the sign of ``h2``.
    """
    if h2 > 0:
        return [(i2, (h2 - i2) // 2) for i2 in range(1, h2 - 1, 2)]
    return [(i2, (h2 - i2) // 2) for i2 in range(-1, h2 + 1, -2)]


def _crossings(closed: ClosedMonomial) -> list[tuple[int, ClosedMonomial]]:
    """Odd-parity crossings with closed curves: ``(k, x_k^{-1} x^e)`` when ``k*e_k`` is odd."""
    return [(k, closed.times(k, -1)) for k, e in closed if k % 2 and e % 2]


@lru_cache(maxsize=1 << 18)
def diff_generator(g: Generator) -> frozenset:
    """Boundary of one basis diagram as a set of generators."""
    acc: set = set()
    cx, tag, closed = g.complex, g.tag, g.closed
    xor_into(acc, (Generator(cx, tag, m) for m in diff_monomial(closed)))
    t = type(tag)
    if t is Empty:
        pass
    elif t is ArcC:
        xor_into(acc, (Generator(cx, ArcC(tag.n + k), rest) for k, rest in _crossings(closed)))
    elif t is ArcA:
        xor_into(
            acc,
            (Generator(cx, ArcA(i2), closed.times(j)) for i2, j in _arc_splits(tag.h2)),
        )
    elif t is Insular:
        xor_into(
            acc,
            (Generator(cx, Insular(i2, tag.j2), closed.times(j)) for i2, j in _arc_splits(tag.i2)),
        )
        xor_into(
            acc,
            (Generator(cx, Insular(tag.i2, j2), closed.times(j)) for j2, j in _arc_splits(tag.j2)),
        )
    else:
        m, n = tag.m, tag.n
        xor_into(acc, (Generator(cx, t2, closed) for t2 in _s_tags(m + n)))
        for k, rest in _crossings(closed):
            xor_into(acc, (Generator(cx, Traversing(m + k, n), rest), Generator(cx, Traversing(m, n + k), rest)))
    return frozenset(acc)


def diff(e: Element) -> Element:
    """The differential of any of the four complexes."""
    acc: set = set()
    for g in e.terms:
        xor_into(acc, diff_generator(g))
    return Element(e.complex, frozenset(acc))


# --- brackets and diagonals ------------------------------------------------------


@dataclass(frozen=True, order=True)
class ArcD:
    """The traversing arc ``d_n`` on its own (only used as a bracket argument)."""

    n: int

    def __str__(self) -> str:
        return f"d({self.n})"


def bracket_open_closed(arc: ArcC | ArcD, k: int) -> frozenset:
    """``[c_i, x_k] = k c_{i+k}`` and ``[d_j, x_k] = k d_{j+k}`` mod 2."""
    if k == 0:
        raise ValueError("x_0 is contractible")
    if k % 2 == 0:
        return frozenset()
    return frozenset({type(arc)(arc.n + k)})


@lru_cache(maxsize=None)
def _s_tags(n: int) -> tuple[Insular, ...]:
    if n > 0:
        return tuple(Insular(k2, 2 * n - k2) for k2 in range(1, 2 * n, 2))
    if n < 0:
        return tuple(Insular(k2, 2 * n - k2) for k2 in range(-1, 2 * n, -2))
    return ()


def s_n(n: int) -> Element:
    """Sum of ``a_k b_l`` with ``k + l = n`` and ``k``, ``l`` of the sign of ``n``."""
    return Element(F22, frozenset(Generator(F22, t, ONE) for t in _s_tags(n)))


# --- source operators on F11 -------------------------------------------------------


def _need(e: Element, complex: Complex, what: str) -> None:
    if e.complex is not complex:
        raise ValueError(f"{what} needs an element of {complex.value}, got {e.complex.value}")


def source_alpha(j: int, e: Element) -> Element:
    """Absorb one ``x_j`` into the arc: ``c_n x^e -> e_j c_{n+j} x_j^{-1} x^e``."""
    if j % 2 == 0:
        raise ValueError("source operators take odd j")
    _need(e, F11, "source_alpha")
    acc: set = set()
    for g in e.terms:
        if g.closed.exponent(j) % 2:
            xor_into(acc, [Generator(F11, ArcC(g.tag.n + j), g.closed.times(j, -1))])
    return Element(F11, frozenset(acc))


def source_alpha_star(j: int, e: Element) -> Element:
    """Split ``x_j`` off the arc: ``c_n x^e -> c_{n-j} x_j x^e``."""
    if j % 2 == 0:
        raise ValueError("source operators take odd j")
    _need(e, F11, "source_alpha_star")
    return Element(F11, frozenset(Generator(F11, ArcC(g.tag.n - j), g.closed.times(j)) for g in e.terms))


# --- involution and chain maps ---------------------------------------------------


def _negate_tag(tag):
    t = type(tag)
    if t is Empty:
        return tag
    if t is ArcC:
        return ArcC(-tag.n)
    if t is ArcA:
        return ArcA(-tag.h2)
    if t is Insular:
        return Insular(-tag.i2, -tag.j2)
    return Traversing(-tag.m, -tag.n)


def iota(e: Element) -> Element:
    """Negate every subscript (reflect the annulus)."""
    return Element(
        e.complex,
        frozenset(Generator(g.complex, _negate_tag(g.tag), g.closed.negated()) for g in e.terms),
    )


def diagonal_sum(n: int, e: Element) -> Element:
    """Sum of the closed coefficients of ``c_i d_j`` over ``i + j = n``."""
    _need(e, F22, "diagonal_sum")
    acc: set = set()
    for g in e.terms:
        if type(g.tag) is Traversing and g.tag.m + g.tag.n == n:
            xor_into(acc, [Generator(F00, EMPTY, g.closed)])
    return Element(F00, frozenset(acc))


def closeoff_plus(e: Element) -> Element:
    """Close the arc into a curve: ``a_{n-1/2} p -> x_n p`` on the positive arcs."""
    _need(e, F02, "closeoff_plus")
    acc: set = set()
    for g in e.terms:
        if g.tag.h2 < 0:
            raise ValueError(f"closeoff_plus is defined on positive arcs only, got {g}")
        xor_into(acc, [Generator(F00, EMPTY, g.closed.times((g.tag.h2 + 1) // 2))])
    return Element(F00, frozenset(acc))


def glue_both(e: Element) -> Element:
    """Glue the two arcs into curves: ``a_{i-1/2} b_{-j+1/2} p -> x_i x_{-j} p``."""
    _need(e, F22, "glue_both")
    acc: set = set()
    for g in e.terms:
        tag = g.tag
        if type(tag) is not Insular or not (tag.i2 > 0 > tag.j2):
            raise ValueError(f"glue_both needs a_i b_j with i > 0 > j, got {g}")
        m = g.closed.times((tag.i2 + 1) // 2).times((tag.j2 - 1) // 2)
        xor_into(acc, [Generator(F00, EMPTY, m)])
    return Element(F00, frozenset(acc))


# --- summands of F22 ------------------------------------------------------------------


class Summand(str, enum.Enum):
    APBP = "a+b+"
    APBM = "a+b-"
    AMBP = "a-b+"
    AMBM = "a-b-"
    CD = "cd"

    @classmethod
    def parse(cls, text: str | Summand) -> Summand:
        if isinstance(text, Summand):
            return text
        for s in cls:
            if text == s.value or text.upper() == s.name:
                return s
        raise ValueError(f"unknown summand {text!r}")


def summand_classify(g: Generator) -> Summand:
    tag = g.tag
    if type(tag) is Traversing:
        return Summand.CD
    if type(tag) is not Insular:
        raise ValueError(f"{g!r} is not an F22 generator")
    if tag.i2 > 0:
        return Summand.APBP if tag.j2 > 0 else Summand.APBM
    return Summand.AMBP if tag.j2 > 0 else Summand.AMBM


# --- the disc complex ---------------------------------------------------------------------


class EGen(str, enum.Enum):
    A_PLUS = "A+"
    A_MINUS = "A-"
    B = "B"
    T0 = "T0"
    T1 = "T1"
    U = "U"


EElement = frozenset  # of EGen


def e_element(*gens: EGen) -> frozenset:
    return frozenset(xor_into(set(), gens))


def diff_e(e: Iterable[EGen]) -> frozenset:
    acc: set = set()
    for g in e:
        if g is EGen.U:
            xor_into(acc, (EGen.B, EGen.T0, EGen.T1))
    return frozenset(acc)


_DISC_IMAGE = {
    EGen.A_PLUS: Generator(F22, Insular(1, -1)),
    EGen.A_MINUS: Generator(F22, Insular(-1, 1)),
    EGen.B: Generator(F22, Insular(1, 1), ClosedMonomial.of(-1)),
    EGen.T0: Generator(F22, Traversing(0, 0)),
    EGen.T1: Generator(F22, Traversing(-1, 1)),
    EGen.U: Generator(F22, Traversing(0, 1), ClosedMonomial.of(-1)),
}


def disc_incl(e: Iterable[EGen]) -> Element:
    """Glue the disc diagrams into the annulus."""
    return Element.of(F22, (_DISC_IMAGE[g] for g in e))


def _is_single(closed: ClosedMonomial, k: int) -> bool:
    return k != 0 and len(closed) == 1 and closed[0] == (k, 1)


def disc_proj_generator(g: Generator) -> EGen | None:
    tag, closed = g.tag, g.closed
    if type(tag) is Insular:
        if not closed:
            if (tag.i2, tag.j2) == (1, -1):
                return EGen.A_PLUS
            if (tag.i2, tag.j2) == (-1, 1):
                return EGen.A_MINUS
            return None
        same_sign = (tag.i2 > 0) == (tag.j2 > 0)
        if same_sign and _is_single(closed, -(tag.i2 + tag.j2) // 2):
            return EGen.B
        return None
    if type(tag) is Traversing:
        total = tag.m + tag.n
        if not closed:
            if total == 0:
                return EGen.T0 if tag.m % 2 == 0 else EGen.T1
            return None
        if total % 2 and _is_single(closed, -total):
            return EGen.U
        return None
    raise ValueError(f"{g!r} is not an F22 generator")


def disc_proj(e: Element) -> frozenset:
    """Project onto the disc complex by the case table on generators."""
    _need(e, F22, "disc_proj")
    acc: set = set()
    for g in e.terms:
        img = disc_proj_generator(g)
        if img is not None:
            xor_into(acc, [img])
    return frozenset(acc)


E_HOMOLOGY_BASIS = (EGen.A_PLUS, EGen.A_MINUS, EGen.T0, EGen.T1)


def e_homology_class(e: Iterable[EGen]) -> frozenset:
    """Coordinates of a cycle of E in the basis {A+, A-, T0, T1}.

    Boundaries are spanned by ``B + T0 + T1``, so ``B`` is rewritten as
    ``T0 + T1``.  Raises if ``e`` is not a cycle.
    """
    e = frozenset(e)
    if diff_e(e):
        raise ValueError("not a cycle of E")
    acc = set(e)
    if EGen.B in acc:
        acc.remove(EGen.B)
        xor_into(acc, (EGen.T0, EGen.T1))
    return frozenset(acc)


# --- standard forms -------------------------------------------------------------------------


def reduce_f02_plus(f: Element, bound: HalfInt | int):
    """Write a cycle on the positive arcs as ``a_{1/2} p + diff(g)``, ``p`` positively clean.

    Returns ``(p, g)`` with ``p`` an element of F00.
    """
    from .homology import reduce_standard

    return reduce_standard("f02_plus", f, HalfInt.of(bound))


def reduce_pp(f: Element, a_bound: HalfInt | int | None, bound: HalfInt | int):
    """Write a cycle of A+ X B+ as ``sum s_i q_i + diff(g)`` with ``q_i`` positively clean.

    Returns ``(q, g)`` where ``q`` maps ``i`` to an F00 element (only nonzero entries).
    """
    from .homology import reduce_standard

    cap = None if a_bound is None else HalfInt.of(a_bound)
    return reduce_standard("pp", f, HalfInt.of(bound), cap)


def reduce_pm(f: Element, bound: HalfInt | int):
    """Write a cycle of A+ X B- as ``a_{1/2} b_{-1/2} p + diff(g)``, ``p`` totally clean."""
    from .homology import reduce_standard

    return reduce_standard("pm", f, HalfInt.of(bound))
