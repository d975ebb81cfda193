import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import product_form, random_tracked_instance
from thuecc import polyutil
from thuecc.enumerate import primitive_solutions
from thuecc.forms import BinaryForm, ThueInstance, factor_shape, monicize
from thuecc.padic import (
    INF,
    RamifiedCase,
    check_vb_zero,
    default_precision,
    difference_valuations,
    hensel_track_roots,
    newton_polygon,
    root_valuations,
    solution_valuations,
    val_from_str,
    val_to_str,
)


def test_newton_polygon_basic():
    assert newton_polygon((-5, 0, 1), 5) == [(Fraction(-1, 2), 2)]
    assert root_valuations((-5, 0, 1), 5) == [(Fraction(1, 2), 2)]
    assert root_valuations((-25, 0, 1), 5) == [(Fraction(1), 2)]
    # (x-1)(x-5) = 5 - 6x + x^2
    assert root_valuations((5, -6, 1), 5) == [(Fraction(1), 1), (Fraction(0), 1)]


def test_newton_polygon_zero_roots():
    # x^2 (x - 5)
    assert root_valuations((0, 0, -5, 1), 5) == [(INF, 2), (Fraction(1), 1)]


def test_newton_polygon_product_additivity():
    rng = random.Random(19)
    for p in (3, 5, 7):
        for _ in range(25):
            f = tuple(rng.randint(-40, 40) for _ in range(rng.randint(2, 5)))
            g = tuple(rng.randint(-40, 40) for _ in range(rng.randint(2, 5)))
            if not polyutil.trim(f) or not polyutil.trim(g):
                continue
            fg = polyutil.mul(f, g)

            def flat(vals):
                out = []
                for v, mult in vals:
                    out.extend([v] * mult)
                return sorted(out, key=str)

            assert flat(root_valuations(fg, p)) == flat(
                root_valuations(f, p) + root_valuations(g, p)
            )


def test_difference_valuations_examples():
    sh = factor_shape(product_form([0, 5], [1, 1]))
    assert difference_valuations(sh, 5) == [(Fraction(1), 2)]
    sh2 = factor_shape(product_form([0, 1, 6], [1, 1, 1]))
    assert sorted(difference_valuations(sh2, 5)) == [(Fraction(0), 4), (Fraction(1), 2)]
    sh3 = factor_shape(BinaryForm.from_coeffs([1, 0, 1]))
    assert difference_valuations(sh3, 5) == [(Fraction(0), 2)]


def test_difference_valuations_sum_matches_discriminant():
    rng = random.Random(23)
    count = 0
    while count < 25:
        n = rng.randint(2, 5)
        coeffs = [rng.randint(-9, 9) for _ in range(n + 1)]
        if not any(coeffs):
            continue
        sh = factor_shape(BinaryForm.from_coeffs(coeffs))
        if sh.s < 2:
            continue
        for p in (3, 5, 7):
            disc = polyutil.discriminant(sh.radical)
            expected = polyutil.vp(disc, p) - (2 * sh.s - 2) * polyutil.vp(
                sh.radical[-1], p
            )
            total = sum(Fraction(v) * m for v, m in difference_valuations(sh, p))
            assert total == expected
        count += 1


def test_hensel_track_unramified_quadratic():
    sh = factor_shape(BinaryForm.from_coeffs([1, 0, -2]))
    tr = hensel_track_roots(sh, 7, 3)
    approx = sorted(r.approx for r in tr.roots)
    assert approx == [108, 235]
    assert all((r.approx**2 - 2) % 343 == 0 for r in tr.roots)


def test_hensel_ramified_raises():
    sh = factor_shape(BinaryForm.from_coeffs([1, 0, -5]))
    with pytest.raises(RamifiedCase):
        hensel_track_roots(sh, 5, 3)


def test_hensel_partial_mode():
    # (x^2 - 5)(x - 1): ramified quadratic part skipped, rational root kept
    form = BinaryForm.from_coeffs([1, -1, -5, 5])
    tr = hensel_track_roots(factor_shape(form), 5, 3, partial=True)
    assert tr.partial
    assert [r.kind for r in tr.roots] == ["rational"]


def test_hensel_rational_roots_exact():
    sh = factor_shape(BinaryForm.from_coeffs([1, -3, 2]))  # (x-1)(x-2)
    tr = hensel_track_roots(sh, 5, 2)
    assert sorted(r.rational for r in tr.roots) == [1, 2]


def test_hensel_lifted_roots_satisfy_minpoly():
    rng = random.Random(61)
    done = 0
    while done < 20:
        p = rng.choice([5, 7, 11])
        n = rng.randint(2, 5)
        if n % p == 0:
            continue
        coeffs = [rng.randint(-20, 20) for _ in range(n)] + [1]
        form = BinaryForm.from_coeffs(list(reversed(coeffs)))
        sh = factor_shape(form)
        prec = 6
        try:
            tr = hensel_track_roots(sh, p, prec)
        except (RamifiedCase, ValueError):
            continue
        for r in tr.roots:
            if r.kind == "lifted":
                val = polyutil.evaluate(r.minpoly, r.approx)
                assert val % p**prec == 0
            elif r.kind == "inert":
                # the lifted factor divides its minimal polynomial mod p^prec
                from thuecc.padic import _pdivmod

                lc_inv = pow(r.minpoly[-1], -1, p**prec)
                monic = tuple(c * lc_inv % p**prec for c in r.minpoly)
                _, rem = _pdivmod(monic, r.factor, p**prec)
                assert not rem
        done += 1


def test_hensel_inert_factor():
    # x^2 + x + 1 is irreducible mod 5
    sh = factor_shape(BinaryForm.from_coeffs([1, 1, 1]))
    tr = hensel_track_roots(sh, 5, 4)
    assert [r.kind for r in tr.roots] == ["inert"]
    # lifted factor divides the polynomial mod 5^4
    fac = tr.roots[0].factor
    assert fac[-1] == 1 and len(fac) == 3


def test_tracking_degree_divisible_by_p_rejected():
    sh = factor_shape(BinaryForm.from_coeffs([1, 0, 0, 0, 0, 1]))
    with pytest.raises(ValueError):
        hensel_track_roots(sh, 5, 3)


def test_solution_valuations_profile_examples():
    inst = ThueInstance.build(BinaryForm.from_coeffs([1, 0, -1]), 15)
    prof = solution_valuations(4, 1, inst, 5)
    assert sorted(e.value for e in prof.per_root) == [0, 1]
    assert prof.t == 1

    inst2 = ThueInstance.build(product_form([0, 5, 30], [1, 1, 1]), -2500)
    prof2 = solution_valuations(25, 1, inst2, 5)
    assert sorted(e.value for e in prof2.per_root) == [1, 1, 2]
    assert prof2.t == 2


def test_solution_valuations_tracked_matches_profile():
    rng = random.Random(31)
    for p in (5, 7):
        for _ in range(10):
            inst, _ = random_tracked_instance(rng, p)
            tracked = hensel_track_roots(inst.shape, p, default_precision(inst, p))
            for _ in range(8):
                a, b = rng.randint(-30, 30), rng.randint(1, 9)
                from math import gcd

                if gcd(a, b) != 1:
                    continue
                pm = solution_valuations(a, b, inst, p)
                tm = solution_valuations(a, b, inst, p, tracked)
                key = lambda e: (str(e.value), e.multiplicity)
                assert sorted(map(key, pm.per_root)) == sorted(map(key, tm.per_root))
                assert pm.t == tm.t


def test_solution_valuations_ultrametric_single_positive():
    # all roots distinct mod p, v(b) = 0: at most one positive entry
    inst = ThueInstance.build(product_form([0, 1, 2], [1, 1, 1]), 7)
    for a in range(-10, 11):
        for b in (1, 2, 3):
            from math import gcd

            if gcd(a, b) != 1:
                continue
            prof = solution_valuations(a, b, inst, 5)
            positives = [e for e in prof.per_root if e.value > 0]
            assert len(positives) <= 1


def test_solution_valuations_b_zero():
    inst = ThueInstance.build(BinaryForm.from_coeffs([1, 0, -1]), 15)
    prof = solution_valuations(1, 0, inst, 5)
    assert all(e.value == 0 for e in prof.per_root)
    assert prof.vb == INF


def test_solution_valuations_rejects_imprimitive():
    inst = ThueInstance.build(BinaryForm.from_coeffs([1, 0, -1]), 15)
    with pytest.raises(ValueError):
        solution_valuations(5, 0, inst, 5)


def test_form_valuation_consistency():
    rng = random.Random(37)
    inst = ThueInstance.build(product_form([0, 5, 30], [1, 1, 1]), -2500)
    from math import gcd

    for _ in range(40):
        a, b = rng.randint(-40, 40), rng.randint(1, 6)
        if gcd(a, b) != 1 or inst.form(a, b) == 0:
            continue
        prof = solution_valuations(a, b, inst, 5)
        assert prof.form_valuation(inst.shape) == polyutil.vp(inst.form(a, b), 5)


def test_check_vb_zero_on_enumerated_solutions():
    rng = random.Random(41)
    for p in (5, 7):
        for _ in range(6):
            inst, seed_sol = random_tracked_instance(rng, p)
            sols = primitive_solutions(inst, 45)
            assert seed_sol in sols.solutions or (
                abs(seed_sol[0]) > 45 or abs(seed_sol[1]) > 45
            )
            for a, b in sols.solutions:
                assert check_vb_zero(a, b, inst, p)


def test_check_vb_zero_pre_enforced():
    inst = ThueInstance.build(BinaryForm.from_coeffs([1, 0, -1]), 15)
    with pytest.raises(ValueError):
        check_vb_zero(4, 1, inst, 7)  # 7 does not divide 15


def test_valuation_serialization():
    assert val_to_str(Fraction(3, 2)) == "3/2"
    assert val_to_str(INF) == "inf"
    assert val_from_str("5/1") == 5
    assert val_from_str("inf") == INF


@given(st.integers(-20, 20), st.integers(1, 6))
@settings(max_examples=40, deadline=None)
def test_profile_total_is_h_valuation_on_solutions(a_shift, b):
    # build a solution by construction: h := F(a, b)
    from math import gcd

    a = a_shift
    if gcd(a, b) != 1:
        return
    form = product_form([0, 1, 5], [1, 1, 1])
    h = form(a, b)
    if h == 0:
        return
    inst = ThueInstance.build(form, h)
    prof = solution_valuations(a, b, inst, 5)
    assert prof.form_valuation(inst.shape) == polyutil.vp(h, 5)
