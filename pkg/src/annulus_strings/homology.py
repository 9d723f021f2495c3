"""Homology of finite windows of the string complexes.

A window fixes the winding and bounds the weight.  The differential keeps
winding and never raises weight, so every window spans a subcomplex and its
homology is a finite GF(2) computation.  Optional filters select the
differential-stable pieces of F02 and F22.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Sequence

from . import gf2
from .complex_open import Summand, diff, diff_generator, s_n, summand_classify
from .complex_x import closed_window, is_clean_pos, is_clean_total, is_fermionic
from .diagrams import (
    EMPTY,
    ArcA,
    ArcC,
    ClosedMonomial,
    Complex,
    Element,
    Generator,
    HalfInt,
    Insular,
    Traversing,
    weight2,
    winding2,
)

F00, F11, F02, F22 = Complex.F00, Complex.F11, Complex.F02, Complex.F22

A_PLUS = "a+"
A_MINUS = "a-"


class InvalidSpec(ValueError):
    pass


class NotACycle(ValueError):
    pass


class InconsistentResult(RuntimeError):
    """A solve that the theory guarantees failed; indicates a bug."""


@dataclass(frozen=True)
class TruncationSpec:
    """A finite window: fixed winding, weight in ``[min_weight, max_weight]``.

    ``summand`` is ``"a+"``/``"a-"`` for F02 or a :class:`Summand` for F22;
    ``Summand.CD`` selects the stable block CD + APBP + AMBM.  ``max_a_degree``
    caps the subscript of a positive ``a`` arc.
    """

    complex: Complex
    winding: HalfInt
    max_weight: HalfInt
    summand: Summand | str | None = None
    max_a_degree: HalfInt | None = None
    min_weight: HalfInt | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "complex", Complex.parse(self.complex))
        for name in ("winding", "max_weight", "max_a_degree", "min_weight"):
            v = getattr(self, name)
            if v is not None and not isinstance(v, HalfInt):
                object.__setattr__(self, name, HalfInt.of(v))
        cx, s = self.complex, self.summand
        if cx is F22 and s is not None:
            object.__setattr__(self, "summand", Summand.parse(s))
        elif cx is F02 and s is not None:
            if s not in (A_PLUS, A_MINUS):
                raise InvalidSpec(f"F02 summand must be 'a+' or 'a-', got {s!r}")
        elif s is not None:
            raise InvalidSpec(f"{cx.value} has no summand filter")
        if self.max_a_degree is not None:
            ok = (cx is F02 and self.summand == A_PLUS) or (
                cx is F22 and self.summand in (Summand.APBP, Summand.APBM)
            )
            if not ok:
                raise InvalidSpec("max_a_degree needs a summand with positive a arcs")
            if self.max_a_degree.is_integer:
                raise InvalidSpec("max_a_degree must lie in Z+1/2")

    def key(self) -> tuple:
        return (self.winding.doubled, self.max_weight.doubled)


def _window_closed(w2: int, budget2: int) -> list[ClosedMonomial]:
    """Closed monomials of doubled winding ``w2`` and doubled weight ``<= budget2``."""
    if w2 % 2 or budget2 < 0:
        return []
    return closed_window(w2 // 2, budget2 // 2)


def _filter_insular(spec: TruncationSpec, i2: int, j2: int) -> bool:
    s = spec.summand
    if s is None:
        return True
    if s is Summand.CD:
        return (i2 > 0) == (j2 > 0)
    g = summand_classify(Generator(F22, Insular(i2, j2)))
    return g is s


def _generate(spec: TruncationSpec) -> Iterable[Generator]:
    cx = spec.complex
    w2, m2 = spec.winding.doubled, spec.max_weight.doubled
    if abs(w2) > m2:
        return
    cap = spec.max_a_degree.doubled if spec.max_a_degree is not None else None
    if cx is F00:
        for m in _window_closed(w2, m2):
            yield Generator(F00, EMPTY, m)
    elif cx is F11:
        for n in range(-(m2 // 2), m2 // 2 + 1):
            for m in _window_closed(w2 - 2 * n, m2 - 2 * abs(n)):
                yield Generator(F11, ArcC(n), m)
    elif cx is F02:
        for h2 in range(-m2, m2 + 1):
            if h2 % 2 == 0:
                continue
            if spec.summand == A_PLUS and h2 < 0 or spec.summand == A_MINUS and h2 > 0:
                continue
            if cap is not None and h2 > cap:
                continue
            for m in _window_closed(w2 - h2, m2 - abs(h2)):
                yield Generator(F02, ArcA(h2), m)
    else:
        s = spec.summand
        for i2 in range(-m2, m2 + 1):
            if i2 % 2 == 0 or (cap is not None and i2 > cap):
                continue
            rest = m2 - abs(i2)
            for j2 in range(-rest, rest + 1):
                if j2 % 2 == 0 or not _filter_insular(spec, i2, j2):
                    continue
                for m in _window_closed(w2 - i2 - j2, rest - abs(j2)):
                    yield Generator(F22, Insular(i2, j2), m)
        if s is None or s is Summand.CD:
            half = m2 // 2
            for a in range(-half, half + 1):
                rest = half - abs(a)
                for b in range(-rest, rest + 1):
                    for m in _window_closed(w2 - 2 * (a + b), 2 * (rest - abs(b))):
                        yield Generator(F22, Traversing(a, b), m)


def basis_key(g: Generator) -> tuple:
    return (weight2(g), g.sort_key())


@lru_cache(maxsize=4096)
def enumerate_basis(spec: TruncationSpec) -> tuple[Generator, ...]:
    """Every generator in the window, ordered by weight then canonical key."""
    lo = spec.min_weight.doubled if spec.min_weight is not None else None
    gens = (g for g in _generate(spec) if lo is None or weight2(g) >= lo)
    return tuple(sorted(gens, key=basis_key))


def _column_ints(spec: TruncationSpec) -> tuple[dict[Generator, int], list[int]]:
    basis = enumerate_basis(spec)
    index = {g: i for i, g in enumerate(basis)}
    cols = []
    for g in basis:
        bits = 0
        for t in diff_generator(g):
            try:
                bits ^= 1 << index[t]
            except KeyError:
                raise InconsistentResult(f"diff({g}) leaves the window at {t}") from None
        cols.append(bits)
    return index, cols


def boundary_matrix(spec: TruncationSpec) -> gf2.BitMatrix:
    """Matrix of the differential; column ``j`` is the boundary of basis element ``j``."""
    _, cols = _column_ints(spec)
    return gf2.BitMatrix.from_columns(len(cols), cols)


# --- predictions ---------------------------------------------------------------------


THEOREMS = (
    "fermionic",
    "clean_a_plus",
    "clean_a_minus",
    "s_clean",
    "totally_clean",
    "s_clean_mirror",
    "totally_clean_mirror",
    "f11_vanishing",
)


def default_theorem(spec: TruncationSpec) -> str | None:
    cx, s = spec.complex, spec.summand
    if cx is F00:
        return "fermionic"
    if cx is F11:
        return "f11_vanishing"
    if cx is F02:
        return {A_PLUS: "clean_a_plus", A_MINUS: "clean_a_minus"}.get(s)
    return {
        Summand.APBP: "s_clean",
        Summand.APBM: "totally_clean",
        Summand.AMBM: "s_clean_mirror",
        Summand.AMBP: "totally_clean_mirror",
    }.get(s)


def _count(w2: int, budget2: int, test) -> int:
    return sum(1 for m in _window_closed(w2, budget2) if test(m))


def _count_s_clean(w2: int, m2: int, cap2: int | None) -> int:
    total = 0
    i = 1
    while 2 * i <= m2:
        if cap2 is not None and 2 * i - 1 > cap2:
            break
        total += _count(w2 - 2 * i, m2 - 2 * i, is_clean_pos)
        i += 1
    return total


def predicted_dim(theorem: str, spec: TruncationSpec) -> int | None:
    """Dimension forecast by a homology theorem, or ``None`` if it does not apply.

    ``f11_vanishing`` describes the limit over all weights, not single windows.
    """
    if spec.min_weight is not None:
        return None
    if theorem != default_theorem(spec):
        return None
    w2, m2 = spec.winding.doubled, spec.max_weight.doubled
    cap = spec.max_a_degree.doubled if spec.max_a_degree is not None else None
    if theorem == "fermionic":
        return _count(w2, m2, is_fermionic)
    if theorem == "f11_vanishing":
        return 0
    if theorem == "clean_a_plus":
        if cap is not None and cap < 1:
            return 0
        return _count(w2 - 1, m2 - 1, is_clean_pos)
    if theorem == "clean_a_minus":
        return _count(-w2 - 1, m2 - 1, is_clean_pos)
    if theorem == "s_clean":
        return _count_s_clean(w2, m2, cap)
    if theorem == "s_clean_mirror":
        return _count_s_clean(-w2, m2, None)
    if theorem == "totally_clean":
        if cap is not None:
            return None
        return _count(w2, m2 - 2, is_clean_total)
    if theorem == "totally_clean_mirror":
        return _count(-w2, m2 - 2, is_clean_total)
    return None


def limit_only(theorem: str | None) -> bool:
    return theorem == "f11_vanishing"


# --- homology -------------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyReport:
    spec: TruncationSpec
    dim_space: int
    dim_kernel: int
    dim_image: int
    dim_homology: int
    predicted: int | None = None
    limit_predicted: int | None = None
    basis_reps: tuple[Element, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        assert self.dim_homology == self.dim_kernel - self.dim_image
        assert self.dim_kernel + self.dim_image == self.dim_space


def homology_dim(spec: TruncationSpec, with_reps: bool = False) -> HomologyReport:
    basis = enumerate_basis(spec)
    _, cols = _column_ints(spec)
    n = len(cols)
    image = gf2.ColumnSolver(n, cols)
    r = image.rank
    theorem = default_theorem(spec)
    pred = predicted_dim(theorem, spec) if theorem else None
    window_pred = None if limit_only(theorem) else pred
    limit_pred = pred if limit_only(theorem) else None
    reps = None
    if with_reps:
        reps = tuple(_homology_reps(spec.complex, basis, cols, image))
    return HomologyReport(spec, n, n - r, r, n - 2 * r, window_pred, limit_pred, reps)


def _homology_reps(cx: Complex, basis, cols: list[int], image: gf2.ColumnSolver) -> list[Element]:
    n = len(cols)
    matrix = gf2.BitMatrix.from_columns(n, cols)
    reps = []
    for v in gf2.kernel_basis(matrix):
        if image.add_column(v.bits):
            reps.append(Element(cx, frozenset(basis[i] for i in v.support())))
    return reps


def is_cycle(e: Element) -> bool:
    return not diff(e)


def _single_winding(e: Element) -> int:
    ws = e.windings2()
    if len(ws) > 1:
        raise ValueError("element mixes windings")
    return ws.pop() if ws else 0


@lru_cache(maxsize=512)
def _boundary_solver(spec: TruncationSpec) -> tuple[dict[Generator, int], tuple[Generator, ...], gf2.ColumnSolver]:
    index, cols = _column_ints(spec)
    return index, enumerate_basis(spec), gf2.ColumnSolver(len(cols), cols)


def _bits(e: Element, index: dict[Generator, int]) -> int | None:
    bits = 0
    for g in e.terms:
        i = index.get(g)
        if i is None:
            return None
        bits |= 1 << i
    return bits


def _combo_element(cx: Complex, basis: Sequence[Generator], combo: int) -> Element:
    return Element(cx, frozenset(basis[i] for i in gf2._support(combo)))


def is_boundary(e: Element, max_weight: HalfInt | int) -> Element | None:
    """A ``u`` with ``diff(u) == e`` inside the weight window, or ``None``.

    ``None`` only says no witness exists up to ``max_weight``.
    """
    w2 = _single_winding(e)
    if not e:
        return Element.zero(e.complex)
    spec = TruncationSpec(e.complex, HalfInt(w2), HalfInt.of(max_weight))
    index, basis, solver = _boundary_solver(spec)
    bits = _bits(e, index)
    if bits is None:
        return None
    combo = solver.solve_bits(bits)
    if combo is None:
        return None
    return _combo_element(e.complex, basis, combo)


# --- standard forms -----------------------------------------------------------------------------


def _standard_columns(kind: str, spec: TruncationSpec) -> list[tuple[object, Element]]:
    """Labelled standard-form elements spanning a complement of boundaries in cycles."""
    w2, m2 = spec.winding.doubled, spec.max_weight.doubled
    out: list[tuple[object, Element]] = []
    if kind == "fermionic":
        for m in _window_closed(w2, m2):
            if is_fermionic(m):
                out.append((m, Element(F00, frozenset({Generator(F00, EMPTY, m)}))))
    elif kind == "f02_plus":
        for m in _window_closed(w2 - 1, m2 - 1):
            if is_clean_pos(m):
                out.append((m, Element(F02, frozenset({Generator(F02, ArcA(1), m)}))))
    elif kind == "pm":
        for m in _window_closed(w2, m2 - 2):
            if is_clean_total(m):
                out.append((m, Element(F22, frozenset({Generator(F22, Insular(1, -1), m)}))))
    elif kind == "pp":
        cap = spec.max_a_degree.doubled if spec.max_a_degree is not None else None
        i = 1
        while 2 * i <= m2 and (cap is None or 2 * i - 1 <= cap):
            s = s_n(i)
            for m in _window_closed(w2 - 2 * i, m2 - 2 * i):
                if is_clean_pos(m):
                    out.append(((i, m), Element(F22, frozenset(g.with_closed(m) for g in s.terms))))
            i += 1
    else:
        raise ValueError(kind)
    return out


_KIND_SPEC = {
    "fermionic": (F00, None),
    "f02_plus": (F02, A_PLUS),
    "pp": (F22, Summand.APBP),
    "pm": (F22, Summand.APBM),
}


@dataclass
class StandardSolver:
    """Solve ``f = standard + diff(g)`` inside one window.

    Standard-form columns enter first, so whenever the standard part is
    determined (it is unique when the theory holds) the solver finds it.
    """

    spec: TruncationSpec
    kind: str
    index: dict
    basis: tuple
    labels: list
    solver: gf2.ColumnSolver

    @classmethod
    def build(cls, kind: str, spec: TruncationSpec) -> StandardSolver:
        index, cols = _column_ints(spec)
        std = _standard_columns(kind, spec)
        solver = gf2.ColumnSolver(len(cols))
        for _, el in std:
            b = _bits(el, index)
            if b is None:
                raise InconsistentResult("standard form outside its window")
            solver.add_column(b)
        for c in cols:
            solver.add_column(c)
        return cls(spec, kind, index, enumerate_basis(spec), std, solver)

    def solve(self, f: Element) -> tuple[list, Element]:
        bits = _bits(f, self.index)
        if bits is None:
            raise ValueError("element leaves the window")
        combo = self.solver.solve_bits(bits)
        if combo is None:
            raise NotACycle("no standard form: input is not a cycle in this window")
        k = len(self.labels)
        chosen = [self.labels[i][0] for i in gf2._support(combo & ((1 << k) - 1))]
        g = _combo_element(self.spec.complex, self.basis, combo >> k)
        return chosen, g


@lru_cache(maxsize=512)
def standard_solver(kind: str, winding2_: int, max_weight2: int, cap2: int | None = None) -> StandardSolver:
    cx, summand = _KIND_SPEC[kind]
    spec = TruncationSpec(
        cx,
        HalfInt(winding2_),
        HalfInt(max_weight2),
        summand,
        None if cap2 is None else HalfInt(cap2),
    )
    return StandardSolver.build(kind, spec)


def _check_support(kind: str, f: Element, bound2: int, cap2: int | None) -> None:
    cx, summand = _KIND_SPEC[kind]
    if f.complex is not cx:
        raise ValueError(f"{kind} reduction needs an element of {cx.value}")
    for g in f.terms:
        if weight2(g) > bound2:
            raise ValueError(f"{g} exceeds the weight bound")
        if kind == "f02_plus" and g.tag.h2 < 0:
            raise ValueError(f"{g} is not on a positive arc")
        if kind in ("pp", "pm") and (type(g.tag) is not Insular or summand_classify(g) is not summand):
            raise ValueError(f"{g} is not in summand {summand.value}")
        if cap2 is not None and g.tag.i2 > cap2:
            raise ValueError(f"{g} exceeds the a-degree cap")


def standard_form_solve(f: Element, kind: str, bound: HalfInt, cap: HalfInt | None = None):
    """Split a cycle as ``standard + diff(g)``; returns ``(labels, g)``."""
    cap2 = cap.doubled if cap is not None else None
    _check_support(kind, f, bound.doubled, cap2)
    by_winding: dict[int, set] = {}
    for g in f.terms:
        by_winding.setdefault(winding2(g), set()).add(g)
    labels: list = []
    witness = Element.zero(f.complex)
    for w2 in sorted(by_winding):
        part = Element(f.complex, frozenset(by_winding[w2]))
        chosen, g = standard_solver(kind, w2, bound.doubled, cap2).solve(part)
        labels += chosen
        witness = witness + g
    if kind == "fermionic":
        rep = Element.of(F00, (Generator(F00, EMPTY, m) for m in labels))
        return rep, witness
    return labels, witness


def reduce_standard(kind: str, f: Element, bound: HalfInt, cap: HalfInt | None = None):
    if diff(f):
        raise NotACycle("input is not a cycle")
    labels, g = standard_form_solve(f, kind, bound, cap)
    if kind == "pp":
        q: dict[int, set] = {}
        for i, m in labels:
            q.setdefault(i, set()).add(Generator(F00, EMPTY, m))
        return {i: Element(F00, frozenset(v)) for i, v in sorted(q.items())}, g
    return Element.of(F00, (Generator(F00, EMPTY, m) for m in labels)), g


# --- scans -------------------------------------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    report: HomologyReport
    stable: bool

    @property
    def max_weight(self) -> HalfInt:
        return self.report.spec.max_weight

    @property
    def dim_homology(self) -> int:
        return self.report.dim_homology


def mark_stable(reports: Sequence[HomologyReport]) -> list[bool]:
    """Flag the longest tail on which dims match the forecast.

    With a per-window or limit forecast, a row is stable when it matches and
    every later row matches too.  Without any forecast, the tail of equal
    dims is stable if it has at least two rows.
    """
    flags = [False] * len(reports)
    has_pred = any(r.predicted is not None or r.limit_predicted is not None for r in reports)
    if has_pred:
        for i in range(len(reports) - 1, -1, -1):
            r = reports[i]
            target = r.predicted if r.predicted is not None else r.limit_predicted
            if target is None or r.dim_homology != target:
                break
            flags[i] = True
        return flags
    if len(reports) >= 2:
        last = reports[-1].dim_homology
        i = len(reports) - 1
        while i >= 0 and reports[i].dim_homology == last:
            i -= 1
        if len(reports) - 1 - i >= 2:
            for k in range(i + 1, len(reports)):
                flags[k] = True
    return flags


def stabilization_scan(
    complex: Complex | str,
    winding: HalfInt | int,
    weights: Iterable[HalfInt | int],
    **filters,
) -> list[ScanRow]:
    reports = [
        homology_dim(TruncationSpec(Complex.parse(complex), HalfInt.of(winding), HalfInt.of(m), **filters))
        for m in weights
    ]
    return [ScanRow(r, s) for r, s in zip(reports, mark_stable(reports))]


def with_weight(spec: TruncationSpec, max_weight: HalfInt) -> TruncationSpec:
    return replace(spec, max_weight=max_weight)
