"""Named suites of identity checks, run by ``annulus verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator

from . import gf2
from .complex_open import (
    EGen,
    Summand,
    closeoff_plus,
    diagonal_sum,
    diff,
    diff_e,
    disc_incl,
    disc_proj,
    e_homology_class,
    glue_both,
    iota,
    reduce_f02_plus,
    reduce_pm,
    reduce_pp,
    s_n,
    source_alpha_star,
)
from .complex_x import (
    INF,
    YMonomial,
    alpha_y,
    alpha_y_star,
    closed_monomials,
    decay,
    diff_x,
    diff_y,
    fusion,
    level_of,
    y_monomials_of_grade,
)
from .diagrams import (
    EMPTY,
    ArcA,
    ClosedMonomial,
    Complex,
    Element,
    Generator,
    HalfInt,
    Insular,
    Traversing,
    mul_closed,
)
from .homology import (
    A_PLUS,
    TruncationSpec,
    enumerate_basis,
    homology_dim,
    is_boundary,
    standard_solver,
)

F00, F11, F02, F22 = Complex.F00, Complex.F11, Complex.F02, Complex.F22


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def _all_generators(cx: Complex, max_weight: int, **filters) -> Iterator[Generator]:
    for w2 in range(-2 * max_weight, 2 * max_weight + 1):
        yield from enumerate_basis(TruncationSpec(cx, HalfInt(w2), HalfInt.of(max_weight), **filters))


def _one(cx: Complex, g: Generator) -> Element:
    return Element(cx, frozenset({g}))


def _first_failure(items, predicate) -> tuple[int, object | None]:
    n = 0
    for it in items:
        n += 1
        if not predicate(it):
            return n, it
    return n, None


def _check(name: str, items, predicate) -> Check:
    n, bad = _first_failure(items, predicate)
    if bad is None:
        return Check(name, True, f"{n} cases")
    return Check(name, False, f"fails on {bad}")


# --- suites -----------------------------------------------------------------


def suite_d2(max_weight: int = 10, f22_weight: int | None = None) -> list[Check]:
    f22_weight = min(max_weight, 8) if f22_weight is None else f22_weight
    out = []
    for cx in (F00, F11, F02, F22):
        m = f22_weight if cx is F22 else max_weight
        out.append(_check(f"d2 {cx.value} weight<={m}", _all_generators(cx, m), lambda g: not diff(diff(_one(g.complex, g)))))
    ys = [m for d in range(max_weight + 3) for m in y_monomials_of_grade(d)]
    out.append(_check(f"d2 Y grade<={max_weight + 2}", ys, lambda m: not diff_y(diff_y([m]))))
    return out


def _y_upto(grade: int) -> list[YMonomial]:
    return [m for d in range(grade + 1) for m in y_monomials_of_grade(d)]


def _sym(a: frozenset, b: frozenset) -> frozenset:
    return a ^ b


def suite_commutators(max_weight: int = 10) -> list[Check]:
    out = []
    ys = _y_upto(max_weight)

    def y_cross(m: YMonomial) -> bool:
        for i, j in product(range(1, 6), repeat=2):
            if i != j and _sym(alpha_y_star(i, alpha_y(j, [m])), alpha_y(j, alpha_y_star(i, [m]))):
                return False
        return True

    def y_same(m: YMonomial) -> bool:
        for i in range(1, 6):
            comm = _sym(alpha_y(i, alpha_y_star(i, [m])), alpha_y_star(i, alpha_y(i, [m])))
            acts = m.exponent(i - 1) >= 2 or m.exponent(i) % 2 == 1
            if comm != (frozenset({m}) if acts else frozenset()):
                return False
        return True

    out.append(_check(f"Y [a*_i, a_j] = 0 grade<={max_weight}", ys, y_cross))
    out.append(_check(f"Y [a_i, a*_i] grade<={max_weight}", ys, y_same))

    indices = [(j, k) for j in range(-5, 6, 2) for k in range(1, 4)]
    xs = closed_monomials(max_weight)

    def x_one(m):
        return Element(F00, frozenset({Generator(F00, EMPTY, m)}))

    def x_same(m) -> bool:
        e = x_one(m)
        for j, k in indices:
            comm = decay(j, k, fusion(j, k, e)) + fusion(j, k, decay(j, k, e))
            low, high = m.exponent(j << (k - 1)), m.exponent(j << k)
            acts = low >= 2 or high % 2 == 1
            if comm != (e if acts else Element.zero(F00)):
                return False
        return True

    def x_cross(m) -> bool:
        e = x_one(m)
        for a, b in product(indices, repeat=2):
            if a == b:
                continue
            if fusion(*a, decay(*b, e)) != decay(*b, fusion(*a, e)):
                return False
        return True

    def decay_sum(m) -> bool:
        e = x_one(m)
        total = Element.zero(F00)
        for n, _ in m:
            j, k = n, 0
            while j % 2 == 0:
                j //= 2
                k += 1
            if k:
                total = total + decay(j, k, e)
        return total == diff_x(e)

    out.append(_check(f"X [decay, fusion] same index weight<={max_weight}", xs, x_same))
    out.append(_check(f"X [fusion, decay] distinct indices weight<={max_weight}", xs, x_cross))
    out.append(_check(f"X sum of decays = diff weight<={max_weight}", xs, decay_sum))
    return out


def y_homology_dims(max_grade: int) -> list[int]:
    dims = []
    for d in range(max_grade + 1):
        basis = y_monomials_of_grade(d)
        index = {m: i for i, m in enumerate(basis)}
        cols = []
        for m in basis:
            bits = 0
            for t in diff_y([m]):
                bits ^= 1 << index[t]
            cols.append(bits)
        r = gf2.ColumnSolver(len(basis), cols).rank
        dims.append(len(basis) - 2 * r)
    return dims


def suite_weyl(max_weight: int = 12) -> list[Check]:
    out = []
    ys = _y_upto(max_weight)
    dims = y_homology_dims(max_weight)
    want = [1 if d < 2 else 0 for d in range(max_weight + 1)]
    out.append(Check(f"H(Y) by grade <= {max_weight}", dims == want, f"dims {dims}"))

    def same_level(m) -> bool:
        lv = level_of(m)
        return all(level_of(t) == lv for t in diff_y([m]))

    def killed_below(m) -> bool:
        lv = level_of(m)
        top = max((i for i, _ in m), default=0) + 1
        bound = top if lv == INF else int(lv)
        return all(not alpha_y(j, [m]) for j in range(1, bound + 1))

    def homotopy(m) -> bool:
        lv = level_of(m)
        if lv == INF:
            return True
        k = int(lv) + 1
        h = alpha_y_star(k, diff_y([m])) ^ diff_y(alpha_y_star(k, [m]))
        return h == frozenset({m})

    out.append(_check("levels preserved by diff", ys, same_level))
    out.append(_check("decays below the level vanish", ys, killed_below))
    out.append(_check("level homotopy [diff, a*_(i+1)] = 1", ys, homotopy))
    return out


def suite_sources(max_weight: int = 10, scan_weight: int = 8, scan_winding: int = 4) -> list[Check]:
    out = []
    gens = list(_all_generators(F11, max_weight))
    for i in (-3, -1, 1, 3):
        def homotopy(g, i=i) -> bool:
            e = _one(F11, g)
            return diff(source_alpha_star(i, e)) + source_alpha_star(i, diff(e)) == e

        out.append(_check(f"[diff, a*_({i},0)] = 1 weight<={max_weight}", gens, homotopy))
    for w in range(-scan_winding, scan_winding + 1):
        out.append(
            _check(
                f"F11 winding {w}: classes of window M die in window M+2, M<={scan_weight}",
                range(scan_weight + 1),
                lambda m, w=w: classes_die(TruncationSpec(F11, w, m), 2),
            )
        )
    return out


def classes_die(spec: TruncationSpec, extra: int) -> bool:
    """Every homology class of the window is a boundary once the weight bound grows by ``extra``."""
    report = homology_dim(spec, with_reps=True)
    bigger = spec.max_weight + extra
    return all(is_boundary(r, bigger) is not None for r in report.basis_reps)


def _e_all() -> list[frozenset]:
    gens = list(EGen)
    return [frozenset(g for b, g in enumerate(gens) if mask >> b & 1) for mask in range(64)]


def suite_chainmaps(max_weight: int = 10, f22_weight: int | None = None) -> list[Check]:
    f22_weight = min(max_weight, 8) if f22_weight is None else f22_weight
    out = []
    f22 = list(_all_generators(F22, f22_weight))
    for n in range(-6, 7):
        out.append(
            _check(
                f"diagonal_sum({n}) chain map",
                f22,
                lambda g, n=n: diagonal_sum(n, diff(_one(F22, g))) == diff_x(diagonal_sum(n, _one(F22, g))),
            )
        )
    plus = list(_all_generators(F02, max_weight, summand=A_PLUS))
    out.append(_check("closeoff_plus chain map", plus, lambda g: closeoff_plus(diff(_one(F02, g))) == diff_x(closeoff_plus(_one(F02, g)))))
    pm = list(_all_generators(F22, f22_weight, summand=Summand.APBM))
    out.append(_check("glue_both chain map", pm, lambda g: glue_both(diff(_one(F22, g))) == diff_x(glue_both(_one(F22, g)))))
    out.append(_check("disc_proj chain map", f22, lambda g: disc_proj(diff(_one(F22, g))) == diff_e(disc_proj(_one(F22, g)))))
    es = _e_all()
    out.append(_check("disc_incl chain map", es, lambda e: disc_incl(diff_e(e)) == diff(disc_incl(e))))
    out.append(_check("disc_proj . disc_incl = 1", es, lambda e: disc_proj(disc_incl(e)) == e))
    for cx in (F00, F11, F02, F22):
        m = f22_weight if cx is F22 else max_weight
        gens = list(_all_generators(cx, m))
        out.append(_check(f"iota chain map {cx.value}", gens, lambda g, cx=cx: iota(diff(_one(cx, g))) == diff(iota(_one(cx, g)))))
        out.append(_check(f"iota involution {cx.value}", gens, lambda g, cx=cx: iota(iota(_one(cx, g))) == _one(cx, g)))
    pairs = [(i, j) for i in range(-4, 5) for j in range(-4, 5)]

    def bracket(ij) -> bool:
        i, j = ij
        d = diff(_one(F22, Generator(F22, Traversing(i, j))))
        insular = Element(F22, frozenset(g for g in d.terms if type(g.tag) is Insular))
        return insular == s_n(i + j)

    out.append(_check("insular part of diff(c_i d_j) = s_(i+j)", pairs, bracket))
    out.append(_check("x1 s_n relation, n = 1..8", range(1, 9), lambda n: diff(x1_sn_witness(n)) == x1_sn_target(n)))

    def diagonal_step(ij) -> bool:
        i, j = ij
        lhs = _cd(i, j) + _cd(i + 2, j - 2)
        g = mul_closed(_cd(i, j - 1) + _cd(i + 1, j - 2), 1)
        return diff(g) == lhs

    small = [(i, j) for i in range(-3, 4) for j in range(-3, 4)]
    out.append(_check("c_i d_j + c_(i+2) d_(j-2) is a boundary", small, diagonal_step))
    odd = [m for m in range(-7, 8, 2)]
    out.append(_check("c_0 d_m + c_m d_0 = diff(c_0 d_0 x_m), m odd", odd, lambda m: diff(mul_closed(_cd(0, 0), m)) == _cd(0, m) + _cd(m, 0)))
    return out


def _cd(i: int, j: int) -> Element:
    return Element(F22, frozenset({Generator(F22, Traversing(i, j))}))


def x1_sn_witness(n: int) -> Element:
    """Every second term of ``s_{n+1}``: ``a_{1/2+2m} b_{n+1/2-2m}``, both positive."""
    gens = []
    m = 0
    while 4 * m + 1 < 2 * n + 2:
        i2, j2 = 4 * m + 1, 2 * n + 1 - 4 * m
        if j2 > 0:
            gens.append(Generator(F22, Insular(i2, j2)))
        m += 1
    return Element.of(F22, gens)


def x1_sn_target(n: int) -> Element:
    total = Element.zero(F22)
    k = 1
    while n - (k - 1) >= 1:
        total = total + mul_closed(s_n(n - (k - 1)), k)
        k += 2
    return total


# --- standard forms ---------------------------------------------------------------


def planted_cycle(kind: str, rng: random.Random, max_weight: int = 8):
    """A random ``standard + diff(g)`` in the window of ``kind``; returns ``(f, labels, g)``."""
    windings = {
        "f02_plus": [2 * w + 1 for w in range(-4, 5)],
        "pp": list(range(-12, 13, 2)),
        "pm": list(range(-12, 13, 2)),
    }[kind]
    while True:
        w2 = rng.choice(windings)
        solver = standard_solver(kind, w2, 2 * max_weight)
        if solver.labels or solver.basis:
            break
    labels = [lab for lab, _ in solver.labels if rng.random() < 0.4]
    std = Element.zero(solver.spec.complex)
    chosen = set(labels)
    for lab, el in solver.labels:
        if lab in chosen:
            std = std + el
    g = Element(solver.spec.complex, frozenset(b for b in solver.basis if rng.random() < 0.3))
    return std + diff(g), labels, g


def _recover(kind: str, f: Element, max_weight: int):
    if kind == "f02_plus":
        p, g = reduce_f02_plus(f, max_weight)
        return sorted(t.closed for t in p.terms), g
    if kind == "pm":
        p, g = reduce_pm(f, max_weight)
        return sorted(t.closed for t in p.terms), g
    q, g = reduce_pp(f, None, max_weight)
    return sorted((i, t.closed) for i, e in q.items() for t in e.terms), g


def _standard_element(kind: str, labels) -> Element:
    if kind == "f02_plus":
        return Element.of(F02, (Generator(F02, ArcA(1), m) for m in labels))
    if kind == "pm":
        return Element.of(F22, (Generator(F22, Insular(1, -1), m) for m in labels))
    total = Element.zero(F22)
    for i, m in labels:
        total = total + mul_closed(s_n(i), m)
    return total


def suite_standardforms(max_weight: int = 8, count: int = 500, seed: int = 0) -> list[Check]:
    out = []
    for kind in ("f02_plus", "pp", "pm"):
        rng = random.Random(f"{seed}-{kind}")
        bad = None
        for _ in range(count):
            f, labels, _g = planted_cycle(kind, rng, max_weight)
            got, witness = _recover(kind, f, max_weight)
            ok = got == sorted(labels) and f == _standard_element(kind, got) + diff(witness)
            if not ok:
                bad = f
                break
        out.append(Check(f"{kind}: {count} planted cycles recovered", bad is None, "" if bad is None else f"fails on {bad}"))
    return out


# --- dimensions -------------------------------------------------------------------


def dims_windows(max_weight: int = 10, f22_weight: int = 8) -> Iterator[TruncationSpec]:
    for w in range(-8, 9):
        for m in range(max_weight + 1):
            yield TruncationSpec(F00, w, m)
    for w in range(-4, 5):
        for m2 in range(1, 2 * max_weight + 1, 2):
            yield TruncationSpec(F02, HalfInt(2 * w + 1), HalfInt(m2), A_PLUS)
            yield TruncationSpec(F02, HalfInt(-2 * w - 1), HalfInt(m2), "a-")
    for s in (Summand.APBP, Summand.APBM, Summand.AMBP, Summand.AMBM):
        for w in range(-6, 7):
            for m in range(f22_weight + 1):
                yield TruncationSpec(F22, w, m, s)
    for w in range(-6, 7):
        for cap2 in (1, 3, 5, 7):
            yield TruncationSpec(F22, w, f22_weight, Summand.APBP, HalfInt(cap2))


def suite_dims(max_weight: int = 10, f22_weight: int | None = None) -> list[Check]:
    f22_weight = min(max_weight, 8) if f22_weight is None else f22_weight
    groups: dict[str, list] = {}
    for spec in dims_windows(max_weight, f22_weight):
        label = spec.complex.value + (f" {spec.summand.value if hasattr(spec.summand, 'value') else spec.summand}" if spec.summand else "")
        if spec.max_a_degree is not None:
            label += " capped"
        groups.setdefault(label, []).append(spec)
    out = []
    for label, specs in groups.items():
        def agrees(spec) -> bool:
            r = homology_dim(spec)
            return r.predicted is not None and r.dim_homology == r.predicted

        out.append(_check(f"dims {label}", specs, agrees))
    return out


# --- nonvanishing ---------------------------------------------------------------------


def mixed_cycle(insular: tuple[tuple[int, int], ...] = ((5, 1), (1, 5))) -> Element:
    """``c0 d0 x3 + (c2 d0 + c1 d1 + c0 d2) x1`` plus two ``a b`` terms (doubled subscripts).

    The default ``a_{5/2} b_{1/2} + a_{1/2} b_{5/2}`` cancels the ``s_2 x_1``
    produced by the traversing part.  The variant with ``a_{7/2} b_{1/2} +
    a_{3/2} b_{5/2}`` has winding 4 on the insular side and is not a cycle.
    """
    cd = _cd(2, 0) + _cd(1, 1) + _cd(0, 2)
    return (
        mul_closed(_cd(0, 0), 3)
        + mul_closed(cd, 1)
        + Element.of(F22, [Generator(F22, Insular(i2, j2)) for i2, j2 in insular])
    )


def suite_nonvanishing(max_weight: int = 10) -> list[Check]:
    out = []
    es = _e_all()
    out.append(_check("disc_proj . disc_incl = 1 on all 64", es, lambda e: disc_proj(disc_incl(e)) == e))
    cycles = [e for e in es if not diff_e(e)]
    boundaries = {diff_e(e) for e in es}
    out.append(Check("H(E) has dim 4", len(cycles) == 2 * 16 and len(boundaries) == 2, f"{len(cycles)} cycles, {len(boundaries)} boundaries"))
    basis_ok = all(
        e_homology_class(frozenset({g})) == frozenset({g}) for g in (EGen.A_PLUS, EGen.A_MINUS, EGen.T0, EGen.T1)
    )
    out.append(Check("H(E) basis A+, A-, T0, T1", basis_ok))
    one = Element(F00, frozenset({Generator(F00, EMPTY)}))
    for n in range(-3, 4):
        e = _cd(n, -n)
        cyc = not diff(e)
        cls = e_homology_class(disc_proj(e)) if cyc else None
        out.append(Check(f"c_{n} d_{-n} cycle with nonzero disc class", cyc and bool(cls), f"class {sorted(g.value for g in cls or ())}"))
        sig = diagonal_sum(0, e)
        out.append(
            Check(
                f"sigma_0(c_{n} d_{-n}) = 1 is no boundary up to weight {max_weight}",
                sig == one and is_boundary(sig, max_weight) is None,
            )
        )
    lhs = diff(mul_closed(_cd(1, 0), -1))
    rhs = _cd(0, 0) + _cd(1, -1) + Element(F22, frozenset({Generator(F22, Insular(1, 1), ClosedMonomial.of(-1))}))
    out.append(Check("diff(c1 d0 x-1) = c0 d0 + c1 d-1 + a1/2 b1/2 x-1", lhs == rhs, str(lhs)))
    f = mixed_cycle()
    s0, s2 = diagonal_sum(0, f), diagonal_sum(2, f)
    out.append(Check("mixed element is a cycle", not diff(f), str(f)))
    out.append(Check("its sigma_0 = x3 is no boundary", str(s0) == "x(3)" and is_boundary(s0, max_weight) is None))
    out.append(Check("its sigma_2 = x1 is no boundary", str(s2) == "x(1)" and is_boundary(s2, max_weight) is None))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "d2": suite_d2,
    "commutators": suite_commutators,
    "weyl": suite_weyl,
    "sources": suite_sources,
    "chainmaps": suite_chainmaps,
    "standardforms": suite_standardforms,
    "dims": suite_dims,
    "nonvanishing": suite_nonvanishing,
}

DEFAULT_WEIGHT = {
    "d2": 10,
    "commutators": 10,
    "weyl": 12,
    "sources": 10,
    "chainmaps": 10,
    "standardforms": 8,
    "dims": 10,
    "nonvanishing": 10,
}


def run_suite(name: str, max_weight: int | None = None) -> list[Check]:
    if name == "all":
        out = []
        for n in SUITES:
            out += run_suite(n, max_weight)
        return out
    fn = SUITES[name]
    return fn(DEFAULT_WEIGHT[name] if max_weight is None else max_weight)
