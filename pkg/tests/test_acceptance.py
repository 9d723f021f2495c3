"""Acceptance criteria.

Each test records exactly one ``CRITERION n: PASS|FAIL`` line (printed in the
terminal summary) and then asserts the same verdict.  Expected values come
from the independent oracle in ``oracles.py`` or are written out by hand.
"""

import random
import time
from itertools import product

import pytest

from annulus_strings.complex_open import (
    EGen,
    Summand,
    diagonal_sum,
    diff,
    diff_e,
    disc_incl,
    disc_proj,
    iota,
    reduce_f02_plus,
    reduce_pm,
    reduce_pp,
    s_n,
    source_alpha_star,
)
from annulus_strings.complex_x import (
    INF,
    alpha_y,
    alpha_y_star,
    closed_monomials,
    decay,
    diff_y,
    fusion,
    is_clean_pos,
    is_clean_total,
    level_of,
    x_element,
    y_monomials_of_grade,
)
from annulus_strings.diagrams import ArcA, Complex, Element, Generator, HalfInt, Insular, mul_closed
from annulus_strings.homology import TruncationSpec, enumerate_basis, homology_dim, is_boundary
from annulus_strings.parsing import parse_element
from conftest import ACCEPTANCE_LINES
from oracles import fermionic_count, rank_gf2

F00, F11, F02, F22 = Complex.F00, Complex.F11, Complex.F02, Complex.F22


def verdict(number: int, checks: list[tuple[str, bool, str]]) -> None:
    """Record one line for the criterion and fail the test if any sub-check failed."""
    failed = [c for c in checks if not c[1]]
    status = "PASS" if not failed else "FAIL"
    summary = "; ".join(f"{name}: {'ok' if ok else 'FAILED'}" + (f" ({detail})" if detail else "") for name, ok, detail in checks)
    line = f"CRITERION {number}: {status}  {summary}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert not failed, line


def P(text, cx):
    return parse_element(text, cx)


def single(g: Generator) -> Element:
    return Element(g.complex, frozenset({g}))


# --- 1 -----------------------------------------------------------------------------


def _all_generators(cx: Complex, max_weight: int):
    if cx is F02:
        for w2 in range(-2 * max_weight - 1, 2 * max_weight + 2, 2):
            yield from enumerate_basis(TruncationSpec(cx, HalfInt(w2), HalfInt(2 * max_weight)))
        return
    for w in range(-max_weight, max_weight + 1):
        yield from enumerate_basis(TruncationSpec(cx, w, max_weight))


def test_criterion_1_d_squared():
    start = time.perf_counter()
    checks = []
    for cx, bound in ((F00, 10), (F11, 10), (F02, 10), (F22, 8)):
        count = failures = 0
        for g in _all_generators(cx, bound):
            count += 1
            if diff(diff(single(g))):
                failures += 1
        checks.append((f"{cx.value} weight<={bound}", failures == 0 and count > 0, f"{count} generators, {failures} failures"))
    elapsed = time.perf_counter() - start
    checks.append(("runtime < 60 s", elapsed < 60, f"{elapsed:.1f} s"))
    verdict(1, checks)


# --- 2 -----------------------------------------------------------------------------


def test_criterion_2_homology_of_x():
    mismatches = []
    for w in range(-8, 9):
        for m in range(0, 11):
            got = homology_dim(TruncationSpec(F00, w, m)).dim_homology
            want = fermionic_count(w, m)
            if got != want:
                mismatches.append((w, m, got, want))
    verdict(2, [("dim H = fermionic count, |w|<=8, M<=10", not mismatches, f"{len(mismatches)} mismatches")])


# --- 3 -----------------------------------------------------------------------------


def _y_homology(d: int) -> int:
    basis = list(y_monomials_of_grade(d))
    index = {m: i for i, m in enumerate(basis)}
    rows = [[0] * len(basis) for _ in basis]
    for j, m in enumerate(basis):
        for t in diff_y({m}):
            rows[index[t]][j] ^= 1
    return len(basis) - 2 * rank_gf2(rows)


def test_criterion_3_model_algebra():
    dims = [_y_homology(d) for d in range(13)]
    want = [1, 1] + [0] * 11
    monomials = [m for d in range(13) for m in y_monomials_of_grade(d)]
    levels_ok = homotopy_ok = killed_ok = True
    for m in monomials:
        lv = level_of(m)
        if any(level_of(t) != lv for t in diff_y({m})):
            levels_ok = False
        if (lv == INF) != (m.grade <= 1):
            levels_ok = False
        if lv == INF:
            continue
        i = int(lv)
        if diff_y(alpha_y_star(i + 1, {m})) ^ alpha_y_star(i + 1, diff_y({m})) != {m}:
            homotopy_ok = False
        if any(alpha_y(j, {m}) for j in range(1, i + 1)):
            killed_ok = False
    verdict(
        3,
        [
            ("H(Y) per grade <= 12", dims == want, f"dims {dims}"),
            ("levels preserved by diff", levels_ok, ""),
            ("decays at or below the level vanish", killed_ok, ""),
            ("[diff, a*_(i+1)] = 1 on level i", homotopy_ok, f"{len(monomials)} monomials"),
        ],
    )


# --- 4 -----------------------------------------------------------------------------


def test_criterion_4_commutators():
    ys = [m for d in range(11) for m in y_monomials_of_grade(d)]
    y_cross = all(
        alpha_y_star(i, alpha_y(j, {m})) == alpha_y(j, alpha_y_star(i, {m}))
        for m in ys
        for i, j in product(range(1, 6), repeat=2)
        if i != j
    )
    y_same = True
    for m in ys:
        for i in range(1, 6):
            comm = alpha_y(i, alpha_y_star(i, {m})) ^ alpha_y_star(i, alpha_y(i, {m}))
            acts = m.exponent(i - 1) >= 2 or m.exponent(i) % 2 == 1
            y_same &= comm == ({m} if acts else frozenset())

    indices = [(j, k) for j in range(-5, 6, 2) for k in range(1, 4)]
    x_same = x_cross = True
    xs = closed_monomials(10)
    zero = Element.zero(F00)
    for mono in xs:
        e = x_element(mono)
        images = {jk: (decay(*jk, e), fusion(*jk, e)) for jk in indices}
        for j, k in indices:
            d_e, f_e = images[(j, k)]
            comm = decay(j, k, f_e) + fusion(j, k, d_e)
            acts = mono.exponent(j << (k - 1)) >= 2 or mono.exponent(j << k) % 2 == 1
            x_same &= comm == (e if acts else zero)
        for a, b in product(indices, repeat=2):
            if a != b and (images[b][0] or images[a][1]):
                x_cross &= fusion(*a, images[b][0]) == decay(*b, images[a][1])
    verdict(
        4,
        [
            ("Y [a*_i, a_j] = 0, i != j", y_cross, f"{len(ys)} monomials"),
            ("Y [a_i, a*_i] = 1 exactly where it acts", y_same, ""),
            ("X [decay, fusion] same index", x_same, f"{len(xs)} monomials"),
            ("X decay and fusion commute across indices", x_cross, ""),
        ],
    )


# --- 5 -----------------------------------------------------------------------------


def test_criterion_5_f11_vanishing():
    homotopy_ok = True
    count = 0
    for g in _all_generators(F11, 10):
        count += 1
        e = single(g)
        if diff(source_alpha_star(1, e)) + source_alpha_star(1, diff(e)) != e:
            homotopy_ok = False
    nonzero = []
    for w in range(-4, 5):
        dims = [homology_dim(TruncationSpec(F11, w, m)).dim_homology for m in range(0, 9)]
        if dims[-1] != 0:
            nonzero.append(f"w={w} dims {dims}")
    verdict(
        5,
        [
            ("(a) [diff, a*_(1,0)] = 1 weight<=10", homotopy_ok, f"{count} generators"),
            ("(b) dim 0 at max_weight 8 for |w|<=4", not nonzero, "; ".join(nonzero)),
        ],
    )


# --- 6 -----------------------------------------------------------------------------


def test_criterion_6_positive_arc_complex():
    plus_bad, minus_bad = [], []
    for shift in range(-4, 5):
        w = HalfInt(2 * shift + 1)
        for m2 in range(1, 21, 2):
            want = fermionic_count(shift, (m2 - 1) // 2, exclude=(1,))
            got = homology_dim(TruncationSpec(F02, w, HalfInt(m2), "a+")).dim_homology
            if got != want:
                plus_bad.append((str(w), m2, got, want))
            mirror = homology_dim(TruncationSpec(F02, -w, HalfInt(m2), "a-")).dim_homology
            if mirror != got:
                minus_bad.append((str(-w), m2, mirror, got))
    # iota carries the positive-arc window onto the negative-arc one
    spec = TruncationSpec(F02, HalfInt(3), HalfInt(9), "a+")
    flipped = {g for g in iota(Element(F02, frozenset(enumerate_basis(spec)))).terms}
    iota_ok = flipped == set(enumerate_basis(TruncationSpec(F02, HalfInt(-3), HalfInt(9), "a-")))
    verdict(
        6,
        [
            ("A+ dims = clean counts", not plus_bad, f"{len(plus_bad)} mismatches"),
            ("A- mirror dims", not minus_bad and iota_ok, f"{len(minus_bad)} mismatches"),
        ],
    )


# --- 7 -----------------------------------------------------------------------------


def _s_clean_count(w: int, m: int, cap2: int | None = None) -> int:
    total = 0
    for i in range(1, m + 1):
        if cap2 is not None and 2 * i - 1 > cap2:
            break
        total += fermionic_count(w - i, m - i, exclude=(1,))
    return total


def test_criterion_7_four_insular_summands():
    bad = {"a+b+": [], "a+b-": [], "a-b-": [], "a-b+": [], "capped": []}
    for w in range(-6, 7):
        for m in range(0, 9):
            pp = homology_dim(TruncationSpec(F22, w, m, Summand.APBP)).dim_homology
            pm = homology_dim(TruncationSpec(F22, w, m, Summand.APBM)).dim_homology
            mm = homology_dim(TruncationSpec(F22, -w, m, Summand.AMBM)).dim_homology
            mp = homology_dim(TruncationSpec(F22, -w, m, Summand.AMBP)).dim_homology
            want_pp = _s_clean_count(w, m)
            want_pm = fermionic_count(w, m - 1, exclude=(1, -1)) if m >= 1 else 0
            if pp != want_pp:
                bad["a+b+"].append((w, m, pp, want_pp))
            if pm != want_pm:
                bad["a+b-"].append((w, m, pm, want_pm))
            if mm != want_pp:
                bad["a-b-"].append((-w, m, mm, want_pp))
            if mp != want_pm:
                bad["a-b+"].append((-w, m, mp, want_pm))
        for cap2 in (1, 3, 5, 7):
            got = homology_dim(TruncationSpec(F22, w, 8, Summand.APBP, HalfInt(cap2))).dim_homology
            want = _s_clean_count(w, 8, cap2)
            if got != want:
                bad["capped"].append((w, cap2, got, want))
    verdict(7, [(name, not rows, f"{len(rows)} mismatches") for name, rows in bad.items()])


# --- 8 -----------------------------------------------------------------------------


def _every_second_term(n: int) -> Element:
    terms = []
    for m in range(n + 1):
        j = n - 2 * m
        if j >= 0:
            terms.append(f"a({4 * m + 1}/2)*b({2 * j + 1}/2)")
    return P(" + ".join(terms), F22)


def _x_odd_times_s(n: int) -> Element:
    total = Element.zero(F22)
    k = 1
    while n - k + 1 >= 1:
        total = total + mul_closed(s_n(n - k + 1), k)
        k += 2
    return total


def test_criterion_8_x1_sn_relation():
    failures = [n for n in range(1, 9) if diff(_every_second_term(n)) != _x_odd_times_s(n)]
    verdict(8, [("diff(h_n) = x1 s_n + x3 s_(n-2) + ..., n = 1..8", not failures, f"failing n: {failures}" if failures else "")])


# --- 9 -----------------------------------------------------------------------------


E_GENS = list(EGen)


def _e_subsets():
    for mask in range(64):
        yield frozenset(g for i, g in enumerate(E_GENS) if mask >> i & 1)


def _e_vector(e) -> list[int]:
    return [1 if g in e else 0 for g in E_GENS]


def _e_nonzero_class(e) -> bool:
    """A cycle of E is nonzero in homology iff it is outside the boundary span."""
    boundaries = [_e_vector(diff_e({g})) for g in E_GENS]
    return rank_gf2(boundaries + [_e_vector(e)]) > rank_gf2(boundaries)


def test_criterion_9_disc_certificates():
    checks = []
    checks.append(("disc_proj . disc_incl = 1 on 64", all(disc_proj(disc_incl(e)) == e for e in _e_subsets()), ""))

    boundary_rows = [_e_vector(diff_e({g})) for g in E_GENS]
    cycles = [e for e in _e_subsets() if not diff_e(e)]
    dim_h = 6 - 2 * rank_gf2(boundary_rows)
    basis = [EGen.A_PLUS, EGen.A_MINUS, EGen.T0, EGen.T1]
    basis_ok = rank_gf2(boundary_rows + [_e_vector({g}) for g in basis]) == 5 and all(not diff_e({g}) for g in basis)
    checks.append(("H(E) dim 4", dim_h == 4 and len(cycles) == 32, f"dim {dim_h}"))
    checks.append(("H(E) basis A+, A-, T0, T1", basis_ok, ""))

    cn_ok = True
    for n in range(-3, 4):
        e = P(f"c({n})*d({-n})", F22)
        image = disc_proj(e)
        cn_ok &= not diff(e) and not diff_e(image) and _e_nonzero_class(image)
    checks.append(("c_n d_-n cycles, nonzero disc class, |n|<=3", cn_ok, ""))

    one = P("1", F00)
    sigma_ok = all(diagonal_sum(0, P(f"c({n})*d({-n})", F22)) == one for n in range(-3, 4))
    sigma_ok &= all(is_boundary(one, m) is None for m in range(0, 11))
    checks.append(("sigma_0 = 1 no boundary, windows <= 10", sigma_ok, ""))

    lhs = diff(P("c(1)*d(0)*x(-1)", F22))
    checks.append(("diff(c1 d0 x-1)", lhs == P("c(0)*d(0) + c(1)*d(-1) + a(1/2)*b(1/2)*x(-1)", F22), ""))

    # The element exactly as stated.
    stated = P("c(0)*d(0)*x(3) + c(2)*d(0)*x(1) + c(1)*d(1)*x(1) + c(0)*d(2)*x(1) + a(7/2)*b(1/2) + a(3/2)*b(5/2)", F22)
    boundary_of_stated = diff(stated)
    checks.append(("stated element is a cycle", not boundary_of_stated, f"diff = {boundary_of_stated}"))
    s0, s1 = diagonal_sum(0, stated), diagonal_sum(1, stated)
    checks.append(("sigma_0 = x3, no boundary", s0 == P("x(3)", F00) and is_boundary(s0, 10) is None, f"sigma_0 = {s0}"))
    checks.append(("sigma_1 = x1, no boundary", s1 == P("x(1)", F00) and is_boundary(s1, 10) is None, f"sigma_1 = {s1}"))
    verdict(9, checks)


# --- 10 ----------------------------------------------------------------------------


def _random_subset(rng, items, p):
    return [x for x in items if rng.random() < p]


def _plant(kind: str, rng: random.Random, max_weight: int = 8):
    """Return ``(f, planted)``: a cycle ``standard + diff(g)`` and its standard labels."""
    if kind == "f02_plus":
        shift = rng.randrange(-4, 5)
        w, m2 = HalfInt(2 * shift + 1), 2 * max_weight
        qs = [q for q in closed_monomials(max_weight) if q.winding == shift and 2 * q.weight + 1 <= m2 and is_clean_pos(q)]
        planted = _random_subset(rng, qs, 0.5)
        std = Element.of(F02, (Generator(F02, ArcA(1), q) for q in planted))
        basis = enumerate_basis(TruncationSpec(F02, w, HalfInt(m2), "a+"))
    elif kind == "pm":
        w = rng.randrange(-6, 7)
        qs = [q for q in closed_monomials(max_weight - 1) if q.winding == w and is_clean_total(q)]
        planted = _random_subset(rng, qs, 0.5)
        std = Element.of(F22, (Generator(F22, Insular(1, -1), q) for q in planted))
        basis = enumerate_basis(TruncationSpec(F22, w, max_weight, Summand.APBM))
    else:
        w = rng.randrange(-6, 7)
        pairs = [
            (i, q)
            for i in range(1, max_weight + 1)
            for q in closed_monomials(max_weight - i)
            if q.winding == w - i and is_clean_pos(q)
        ]
        planted = _random_subset(rng, pairs, 0.5)
        std = Element.zero(F22)
        for i, q in planted:
            std = std + mul_closed(s_n(i), q)
        basis = enumerate_basis(TruncationSpec(F22, w, max_weight, Summand.APBP))
    g = Element(basis[0].complex if basis else std.complex, frozenset(_random_subset(rng, basis, 0.3)))
    return std + diff(g), sorted(planted)


def _recovered(kind: str, f: Element, max_weight: int = 8):
    if kind == "f02_plus":
        p, g = reduce_f02_plus(f, max_weight)
        standard = Element.of(F02, (Generator(F02, ArcA(1), t.closed) for t in p.terms))
        return sorted(t.closed for t in p.terms), standard, g
    if kind == "pm":
        p, g = reduce_pm(f, max_weight)
        standard = Element.of(F22, (Generator(F22, Insular(1, -1), t.closed) for t in p.terms))
        return sorted(t.closed for t in p.terms), standard, g
    q, g = reduce_pp(f, None, max_weight)
    labels = sorted((i, t.closed) for i, e in q.items() for t in e.terms)
    standard = Element.zero(F22)
    for i, m in labels:
        standard = standard + mul_closed(s_n(i), m)
    return labels, standard, g


def test_criterion_10_standard_forms():
    checks = []
    for kind in ("f02_plus", "pp", "pm"):
        rng = random.Random(f"acceptance-{kind}")
        failures = nontrivial = 0
        for _ in range(500):
            f, planted = _plant(kind, rng)
            nontrivial += bool(planted)
            labels, standard, witness = _recovered(kind, f)
            if labels != planted or standard + diff(witness) != f:
                failures += 1
        checks.append((f"{kind}: 500 planted cycles", failures == 0, f"{failures} failures, {nontrivial} with nonzero standard part"))
    verdict(10, checks)



@pytest.mark.parametrize("n", range(1, 5))
def test_every_second_term_matches_library_helper(n):
    from annulus_strings.verify import x1_sn_witness

    assert _every_second_term(n) == x1_sn_witness(n)


# --- supplementary checks next to the two criteria that fail as stated ---------------


@pytest.mark.parametrize("w", range(-4, 5))
def test_f11_window_classes_die_two_weights_later(w):
    # Windowed F11 homology is not monotone in M; every class that survives a
    # window is nevertheless a boundary once the window grows by 2.
    for m in range(0, 9):
        report = homology_dim(TruncationSpec(F11, w, m), with_reps=True)
        for rep in report.basis_reps:
            assert is_boundary(rep, m + 2) is not None


def test_corrected_mixed_cycle():
    corrected = P("c(0)*d(0)*x(3) + c(2)*d(0)*x(1) + c(1)*d(1)*x(1) + c(0)*d(2)*x(1) + a(5/2)*b(1/2) + a(1/2)*b(5/2)", F22)
    assert not diff(corrected)
    s0, s2 = diagonal_sum(0, corrected), diagonal_sum(2, corrected)
    assert s0 == P("x(3)", F00) and is_boundary(s0, 10) is None
    assert s2 == P("x(1)", F00) and is_boundary(s2, 10) is None
    # the disc projection cannot see this class
    assert disc_proj(corrected) == frozenset()
