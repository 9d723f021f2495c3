"""The closed-string complex X and the model decay algebra Y.

On X the differential sends ``x_{2k}`` to ``x_k**2`` and kills odd curves,
extended by the Leibniz rule.  Splitting nonzero integers as ``j * 2**k``
(``j`` odd) breaks X into copies of Y, where ``y_k`` decays to
``y_{k-1}**2``.  Decay operators split the differential into pieces, and
fusion operators undo a decay where possible.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Iterator

from .diagrams import (
    EMPTY,
    ONE,
    ClosedMonomial,
    Complex,
    Element,
    Generator,
    HalfInt,
    xor_into,
)

INF = math.inf
Level = float  # an int, or INF


# --- X ---------------------------------------------------------------------


def diff_monomial(m: ClosedMonomial) -> Iterator[ClosedMonomial]:
    """Terms of the differential of ``x^e`` (may repeat; caller reduces mod 2)."""
    for k, e in m:
        if k % 2 == 0 and e % 2 == 1:
            yield m.times(k, -1).times(k // 2, 2)


def diff_x(e: Element) -> Element:
    if e.complex is not Complex.F00:
        raise ValueError("diff_x needs an element of F00")
    acc: set = set()
    for g in e.terms:
        xor_into(acc, (Generator(Complex.F00, EMPTY, t) for t in diff_monomial(g.closed)))
    return Element(Complex.F00, frozenset(acc))


def odd_decompose(n: int) -> tuple[int, int]:
    """Write ``n = j * 2**k`` with ``j`` odd."""
    if n == 0:
        raise ValueError("0 has no odd decomposition")
    k = (n & -n).bit_length() - 1
    return n >> k, k


def _closed_map(e: Element, fn) -> Element:
    acc: set = set()
    for g in e.terms:
        xor_into(acc, (g.with_closed(t) for t in fn(g.closed)))
    return Element(e.complex, frozenset(acc))


def decay_monomial(j: int, k: int, m: ClosedMonomial) -> list[ClosedMonomial]:
    if k < 1 or j % 2 == 0:
        raise ValueError("decay needs odd j and k >= 1")
    src = j << k
    if m.exponent(src) % 2 == 0:
        return []
    return [m.times(src, -1).times(src >> 1, 2)]


def fusion_monomial(j: int, k: int, m: ClosedMonomial) -> list[ClosedMonomial]:
    if k < 1 or j % 2 == 0:
        raise ValueError("fusion needs odd j and k >= 1")
    low = j << (k - 1)
    if m.exponent(low) <= 1:
        return []
    return [m.times(low, -2).times(j << k)]


def decay(j: int, k: int, e: Element) -> Element:
    """``x_{j 2^k} -> x_{j 2^(k-1)}**2`` extended by the Leibniz rule.

    Acts on the closed part only, so it applies to any complex.
    """
    return _closed_map(e, lambda m: decay_monomial(j, k, m))


def fusion(j: int, k: int, e: Element) -> Element:
    return _closed_map(e, lambda m: fusion_monomial(j, k, m))


def active_decays(m: ClosedMonomial) -> list[tuple[int, int]]:
    """The ``(j, k)`` whose decay operator can be nonzero on ``m``."""
    out = []
    for n, _ in m:
        j, k = odd_decompose(n)
        if k:
            out.append((j, k))
    return out


# --- fermionic and clean monomials -----------------------------------------


def is_fermionic(m: ClosedMonomial) -> bool:
    return all(k % 2 and e == 1 for k, e in m)


def is_clean_pos(m: ClosedMonomial) -> bool:
    return is_fermionic(m) and m.exponent(1) == 0


def is_clean_neg(m: ClosedMonomial) -> bool:
    return is_fermionic(m) and m.exponent(-1) == 0


def is_clean_total(m: ClosedMonomial) -> bool:
    return is_clean_pos(m) and m.exponent(-1) == 0


# --- enumeration -------------------------------------------------------------


@lru_cache(maxsize=None)
def closed_monomials(max_weight: int) -> tuple[ClosedMonomial, ...]:
    """Every closed monomial of weight at most ``max_weight``."""
    out: list[ClosedMonomial] = []

    # subscripts in the fixed order 1, -1, 2, -2, ...
    order = []
    for a in range(1, max_weight + 1):
        order += [a, -a]

    def rec(idx: int, budget: int, acc: list[tuple[int, int]]) -> None:
        if idx == len(order):
            out.append(ClosedMonomial(sorted(acc)))
            return
        k = order[idx]
        rec(idx + 1, budget, acc)
        e = 1
        while abs(k) * e <= budget:
            acc.append((k, e))
            rec(idx + 1, budget - abs(k) * e, acc)
            acc.pop()
            e += 1

    rec(0, max_weight, [])
    return tuple(out)


@lru_cache(maxsize=None)
def closed_by_grading(max_weight: int) -> dict[tuple[int, int], tuple[ClosedMonomial, ...]]:
    """Closed monomials bucketed by ``(winding, weight)``."""
    buckets: dict[tuple[int, int], list[ClosedMonomial]] = {}
    for m in closed_monomials(max_weight):
        buckets.setdefault((m.winding, m.weight), []).append(m)
    return {k: tuple(sorted(v)) for k, v in buckets.items()}


def closed_window(winding: int, max_weight: int, min_weight: int = 0) -> list[ClosedMonomial]:
    if max_weight < 0:
        return []
    table = closed_by_grading(max_weight)
    out = []
    for w in range(max(min_weight, abs(winding)), max_weight + 1):
        out.extend(table.get((winding, w), ()))
    return out


def fermionic_monomials(winding: int, max_weight: int, kind: str = "fermionic") -> list[ClosedMonomial]:
    """Fermionic (or clean) monomials of the given winding, by brute enumeration."""
    test = {
        "fermionic": is_fermionic,
        "clean_pos": is_clean_pos,
        "clean_neg": is_clean_neg,
        "clean_total": is_clean_total,
    }[kind]
    return [m for m in closed_window(winding, max_weight) if test(m)]


# --- Y -------------------------------------------------------------------------


class YMonomial(tuple):
    """Monomial in ``y_0, y_1, ...`` as sorted ``(index, exponent)`` pairs."""

    __slots__ = ()

    @classmethod
    def from_dict(cls, exponents: dict[int, int]) -> YMonomial:
        if any(i < 0 for i in exponents):
            raise ValueError("Y indices are nonnegative")
        return cls(sorted((i, e) for i, e in exponents.items() if e))

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> YMonomial:
        return cls.from_dict(dict(enumerate(exps)))

    def exponent(self, i: int) -> int:
        for key, e in self:
            if key == i:
                return e
        return 0

    def shift(self, i: int, delta: int) -> YMonomial:
        d = dict(self)
        e = d.get(i, 0) + delta
        if e < 0:
            raise ValueError("negative exponent")
        if e:
            d[i] = e
        else:
            d.pop(i, None)
        return YMonomial(sorted(d.items()))

    @property
    def grade(self) -> int:
        return sum(e << i for i, e in self)

    def __str__(self) -> str:
        if not self:
            return "1"
        return "*".join(f"y{i}" if e == 1 else f"y{i}^{e}" for i, e in self)

    def __repr__(self) -> str:
        return f"YMonomial({self})"


YElement = frozenset  # of YMonomial


def _y_apply(e: Iterable[YMonomial], fn) -> frozenset:
    acc: set = set()
    for m in e:
        xor_into(acc, fn(m))
    return frozenset(acc)


def _alpha_y_mono(k: int, m: YMonomial) -> list[YMonomial]:
    if k <= 0 or m.exponent(k) % 2 == 0:
        return []
    return [m.shift(k, -1).shift(k - 1, 2)]


def _alpha_y_star_mono(k: int, m: YMonomial) -> list[YMonomial]:
    if k <= 0 or m.exponent(k - 1) <= 1:
        return []
    return [m.shift(k - 1, -2).shift(k, 1)]


def alpha_y(k: int, e: Iterable[YMonomial]) -> frozenset:
    """Decay operator on Y; ``alpha_0`` is zero."""
    return _y_apply(e, lambda m: _alpha_y_mono(k, m))


def alpha_y_star(k: int, e: Iterable[YMonomial]) -> frozenset:
    """Fusion operator on Y; ``alpha*_0`` is zero."""
    return _y_apply(e, lambda m: _alpha_y_star_mono(k, m))


def diff_y(e: Iterable[YMonomial]) -> frozenset:
    def one(m: YMonomial) -> list[YMonomial]:
        out = []
        for i, _ in m:
            out += _alpha_y_mono(i, m)
        return out

    return _y_apply(e, one)


def level_of(m: YMonomial) -> Level:
    e = m.exponent
    if e(0) >= 2 or e(1) % 2 == 1:
        return 0
    top = max((i for i, _ in m), default=0)
    for i in range(1, top + 1):
        if any(e(j) for j in range(1, i)):
            break
        if e(i) % 2 == 0 and (e(i) >= 2 or e(i + 1) % 2 == 1):
            return i
    if all(i == 0 for i, _ in m):
        return INF
    raise AssertionError(f"{m} fits no level")  # unreachable: every monomial has exactly one level


@lru_cache(maxsize=None)
def y_monomials_of_grade(d: int) -> tuple[YMonomial, ...]:
    """All Y monomials with ``sum e_i 2**i == d`` (binary partitions of d)."""
    out: list[YMonomial] = []
    top = max(d.bit_length() - 1, 0)

    def rec(i: int, rest: int, acc: list[tuple[int, int]]) -> None:
        if i < 0:
            if rest == 0:
                out.append(YMonomial(sorted(acc)))
            return
        part = 1 << i
        for e in range(rest // part, -1, -1):
            if e:
                acc.append((i, e))
            rec(i - 1, rest - e * part, acc)
            if e:
                acc.pop()

    rec(top, d, [])
    return tuple(sorted(out))


def x_to_y(j: int, m: ClosedMonomial) -> YMonomial:
    """The isomorphism ``X_j -> Y``, ``x_{j 2^k} -> y_k``."""
    d = {}
    for n, e in m:
        jj, k = odd_decompose(n)
        if jj != j:
            raise ValueError(f"x_{n} is not in X_{j}")
        d[k] = e
    return YMonomial.from_dict(d)


def y_to_x(j: int, m: YMonomial) -> ClosedMonomial:
    return ClosedMonomial.from_dict({j << i: e for i, e in m})


# --- homology representatives ----------------------------------------------------


def fermionic_rep(p: Element, bound: HalfInt | int) -> tuple[Element, Element]:
    """Split a cycle ``p`` of X as ``r + diff_x(u)`` with ``r`` fermionic.

    Solved inside the weight window ``<= bound`` of each winding present.
    """
    from .homology import standard_form_solve

    return standard_form_solve(p, "fermionic", HalfInt.of(bound))


def x_element(*monomials: ClosedMonomial | dict) -> Element:
    gens = []
    for m in monomials:
        if not isinstance(m, ClosedMonomial):
            m = ClosedMonomial.from_dict(m)
        gens.append(Generator(Complex.F00, EMPTY, m))
    return Element.of(Complex.F00, gens)


__all__ = [
    "INF",
    "ONE",
    "YMonomial",
    "active_decays",
    "alpha_y",
    "alpha_y_star",
    "closed_monomials",
    "closed_window",
    "decay",
    "diff_monomial",
    "diff_x",
    "diff_y",
    "fermionic_monomials",
    "fermionic_rep",
    "fusion",
    "is_clean_neg",
    "is_clean_pos",
    "is_clean_total",
    "is_fermionic",
    "level_of",
    "odd_decompose",
    "x_element",
    "x_to_y",
    "y_monomials_of_grade",
    "y_to_x",
]
