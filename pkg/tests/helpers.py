"""Shared test utilities: random instance generators and independent
oracles (brute-force Z_p root counting, partition enumeration)."""

from __future__ import annotations

from math import gcd, lcm

from thuecc import polyutil
from thuecc.enumerate import _product_form_coeffs
from thuecc.forms import BinaryForm, ThueInstance
from thuecc.newton_zero import INF, CoeffValuationSeq


def random_form(rng, n: int, lo=-9, hi=9) -> BinaryForm:
    while True:
        coeffs = [rng.randint(lo, hi) for _ in range(n + 1)]
        if any(coeffs):
            try:
                return BinaryForm.from_coeffs(coeffs)
            except ValueError:
                continue


def product_form(roots, mults) -> BinaryForm:
    """prod (x - a_i y)^{m_i}, expanded exactly."""
    flat = []
    for a, m in zip(roots, mults):
        flat.extend([a] * m)
    return BinaryForm.from_coeffs(_product_form_coeffs(flat))


def random_tracked_instance(rng, p: int):
    """Instance with integer roots and a certified solution (x0, y0)
    such that p | h; fully trackable at p.  Returns (instance, (x0,y0))."""
    patterns = {
        4: [(1, 1, 1, 1), (3, 1)],
        5: [(1, 1, 1, 1, 1), (2, 1, 1, 1), (4, 1)],
        6: [(1, 1, 1, 1, 1, 1), (1, 1, 1, 3), (5, 1)],
    }
    while True:
        n = rng.choice([m for m in (4, 5, 6) if m % p != 0 and m < p])
        mults = list(rng.choice(patterns[n]))
        rng.shuffle(mults)
        k = len(mults)
        roots = rng.sample(range(-12, 13), k)
        y0 = rng.randint(1, 4)
        x0 = roots[0] * y0 + p * rng.randint(-2, 2)
        if abs(x0) > 40 or gcd(x0, y0) != 1:
            continue
        form = product_form(roots, mults)
        h = form(x0, y0)
        if h == 0 or h % p != 0:
            continue
        inst = ThueInstance.build(form, h)
        if not inst.irreducible:
            continue
        return inst, (x0, y0)


def random_valuation_seq(rng, p: int) -> CoeffValuationSeq:
    """Sequence with a forced first unit index strictly below p^2 - 2."""
    iu = rng.randint(0, min(18, p * p - 3))
    length = iu + rng.randint(2, 6)
    vals = []
    for m in range(length):
        if m < iu:
            vals.append(rng.choice([1, 1, 2, 3, INF]))
        elif m == iu:
            vals.append(0)
        else:
            vals.append(rng.choice([0, 0, 1, 2, INF]))
    return CoeffValuationSeq(p, tuple(vals))


def realize_series(seq: CoeffValuationSeq, rng):
    """Integer polynomial D * (a_0 + sum a_m p^m z^m / m) with
    v(a_m) = seq.vals[m] and random p-unit parts; zero beyond the
    truncation."""
    p = seq.p
    M = len(seq.vals) - 1
    d = lcm(*range(1, M + 1)) if M >= 1 else 1
    coeffs = []
    for m, v in enumerate(seq.vals):
        if v == INF:
            coeffs.append(0)
            continue
        unit = rng.randint(1, p - 1) * rng.choice([1, -1])
        a_m = unit * p ** int(v)
        if m == 0:
            coeffs.append(d * a_m)
        else:
            coeffs.append((d // m) * a_m * p**m)
    return polyutil.trim(tuple(coeffs))


def certified_zp_roots(f, p: int, depth: int = 6) -> tuple[int, int]:
    """(certified, ambiguous): distinct Z_p roots certified by Hensel
    refinement down to the given depth, plus the residue classes left
    unresolved.  certified is a lower bound for the true root count."""
    f = polyutil.trim(f)
    if not f:
        raise ValueError("zero polynomial")
    mv = min(polyutil.vp(c, p) for c in f if c != 0)
    f = tuple(c // p**mv for c in f)
    fd = polyutil.derivative(f)
    certified = 0
    ambiguous = 0
    for r in range(p):
        if polyutil.evaluate(f, r) % p != 0:
            continue
        if polyutil.evaluate(fd, r) % p != 0:
            certified += 1
        elif depth > 0:
            c, a = certified_zp_roots(polyutil.compose_linear(f, r, p), p, depth - 1)
            certified += c
            ambiguous += a
        else:
            ambiguous += 1
    return certified, ambiguous


def partitions(n: int, max_part: int | None = None):
    """All partitions of n as nonincreasing tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest
