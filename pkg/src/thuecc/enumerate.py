"""Brute-force oracles: box enumeration and finite-field point counts.

The box search is the ground truth everything else is checked against:
it scans every coprime pair with max(|x|, |y|) <= B.  Above a small box
the scan goes through an exact residue prefilter (two prime moduli whose
product exceeds the box diameter, combined by CRT), which provably
discards no solution: a true solution satisfies the congruence at every
modulus, and every surviving candidate is verified with exact integer
arithmetic.  Both strategies are exposed so they can be cross-checked.

The scan is organized in disjoint x-stripes with a deterministic merge,
so callers may fan stripes out to workers without changing the result.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import sympy

from thuecc import polyutil
from thuecc.forms import BinaryForm, FormShape, ThueInstance
from thuecc.padic import INF, TrackedRoots, solution_valuations
from thuecc.polyutil import vp

_PLAIN_SCAN_LIMIT = 256


@dataclass(frozen=True)
class SearchBox:
    bound: int

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("box bound must be >= 1")


def default_box(n: int) -> SearchBox:
    return SearchBox(10**4 if n <= 6 else 10**3)


@dataclass(frozen=True)
class SolutionSet:
    instance_id: str
    solutions: tuple[tuple[int, int], ...]
    box: int
    exhaustive: bool = True

    def __len__(self) -> int:
        return len(self.solutions)

    def csv_rows(self) -> list[str]:
        return [
            f"{self.instance_id},{self.box},{len(self.solutions)},{x},{y}"
            for x, y in self.solutions
        ]


def scan_stripe(
    instance: ThueInstance, box: int, x_lo: int, x_hi: int, strategy: str = "auto"
) -> list[tuple[int, int]]:
    """Primitive solutions with x in [x_lo, x_hi] and |y| <= box, in
    lexicographic order.  Strategies "plain" and "filtered" agree; auto
    picks by box size."""
    if strategy == "auto":
        strategy = "plain" if box <= _PLAIN_SCAN_LIMIT else "filtered"
    form, h = instance.form, instance.h
    out: list[tuple[int, int]] = []
    if strategy == "plain":
        for x in range(x_lo, x_hi + 1):
            for y in range(-box, box + 1):
                if gcd(x, y) == 1 and form(x, y) == h:
                    out.append((x, y))
        return out
    if strategy != "filtered":
        raise ValueError(f"unknown strategy {strategy!r}")
    q1, q2 = _filter_primes(h, box)
    t1, t2 = _root_table(form, h, q1), _root_table(form, h, q2)
    m = q1 * q2
    c1 = q2 * pow(q2, -1, q1)  # CRT basis: 1 mod q1, 0 mod q2
    c2 = q1 * pow(q1, -1, q2)
    for x in range(x_lo, x_hi + 1):
        rs1 = t1[x % q1]
        rs2 = t2[x % q2]
        if not rs1 or not rs2:
            continue
        cands = set()
        for r1 in rs1:
            for r2 in rs2:
                y0 = (r1 * c1 + r2 * c2) % m
                if y0 <= box:
                    cands.add(y0)
                if y0 - m >= -box:
                    cands.add(y0 - m)
        for y in sorted(cands):
            if gcd(x, y) == 1 and form(x, y) == h:
                out.append((x, y))
    return out


def _filter_primes(h: int, box: int) -> tuple[int, int]:
    q1 = int(sympy.nextprime(isqrt(2 * box + 1)))
    while h % q1 == 0:
        q1 = int(sympy.nextprime(q1))
    q2 = int(sympy.nextprime(q1))
    while h % q2 == 0:
        q2 = int(sympy.nextprime(q2))
    return q1, q2


def _root_table(form: BinaryForm, h: int, q: int) -> list[tuple[int, ...]]:
    n = form.degree
    table = []
    for x in range(q):
        xs = [pow(x, n - i, q) for i in range(n + 1)]
        roots = []
        for y in range(q):
            acc = 0
            yp = 1
            for i, c in enumerate(form.coeffs):
                acc = (acc + c * xs[i] * yp) % q
                yp = yp * y % q
            if acc == h % q:
                roots.append(y)
        table.append(tuple(roots))
    return table


def primitive_solutions(
    instance: ThueInstance,
    box: SearchBox | int,
    strategy: str = "auto",
    stripe_width: int = 512,
) -> SolutionSet:
    """Exhaustive primitive-solution scan over max(|x|,|y|) <= B.

    Deterministic lexicographic ordering; stripes are scanned left to
    right and concatenated, so a parallel driver mapping scan_stripe
    over the same stripes reproduces this output exactly.
    """
    b = box.bound if isinstance(box, SearchBox) else int(box)
    sols: list[tuple[int, int]] = []
    lo = -b
    while lo <= b:
        hi = min(lo + stripe_width - 1, b)
        sols.extend(scan_stripe(instance, b, lo, hi, strategy))
        lo = hi + 1
    return SolutionSet(instance.instance_id(), tuple(sols), b)


# ---------------------------------------------------------------------------
# Finite-field point counts


def count_affine_points_mod_p(instance: ThueInstance, p: int) -> int:
    """Number of (x, y) in F_p^2 with F(x,y) = h mod p."""
    form, h = instance.form, instance.h
    n = form.degree
    count = 0
    for x in range(p):
        xs = [pow(x, n - i, p) for i in range(n + 1)]
        coeffs = [c * xs[i] % p for i, c in enumerate(form.coeffs)]
        for y in range(p):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * y + c) % p
            if acc == h % p:
                count += 1
    return count


def count_projective_smooth(instance: ThueInstance, p: int) -> int:
    """Projective F_p-points of h z^n = F(x,y) when that plane curve is
    smooth: requires s = n (distinct roots, none at infinity) and p not
    dividing h*d*(F).  Cross-checked against the projection bound
    (n-1)(p+1) and the Weil interval |N - (p+1)| <= 2g sqrt(p).
    """
    shape = instance.shape
    n = instance.n
    if shape.s != n or shape.degree_deficit != 0:
        raise ValueError("smooth count requires n distinct finite roots")
    if instance.h % p == 0 or polyutil.vp_frac(instance.dstar, p) != 0:
        raise ValueError(
            "smooth count requires p coprime to h*d*(F); "
            "use projection_point_bound instead"
        )
    count = count_affine_points_mod_p(instance, p)
    # points at infinity: z = 0, F(x,y) = 0 on the projective line
    f = instance.form.dehomogenized()
    for x in range(p):
        if polyutil.evaluate(f, x) % p == 0:
            count += 1
    if instance.form.coeffs[0] % p == 0:
        count += 1
    g = instance.genus
    if count > 0 and count > (n - 1) * (p + 1):
        raise AssertionError("projective count exceeds the projection bound")
    if g is not None and (count - p - 1) ** 2 > 4 * g * g * p:
        raise AssertionError("projective count violates the Weil interval")
    return count


# ---------------------------------------------------------------------------
# Residue-class census


@dataclass(frozen=True)
class Census:
    """Distinct reduction data of a solution set at p.

    Full granularity (tracked mode): classes are (root index, depth t,
    unit (a - alpha b)/p^t mod p, b mod p).  Without tracked data the
    census degrades to depth granularity only.
    """

    instance_id: str
    p: int
    classes: tuple[tuple, ...]
    granularity: str  # "full" or "depth"

    @property
    def count(self) -> int:
        return len(self.classes)


def residue_class_census(
    solutions: SolutionSet,
    instance: ThueInstance,
    p: int,
    tracked: TrackedRoots | None,
) -> Census:
    """Census of reduction classes of primitive solutions, p | h."""
    if instance.h % p != 0:
        raise ValueError("census requires p | h")
    keys = set()
    if tracked is None:
        for a, b in solutions.solutions:
            prof = solution_valuations(a, b, instance, p)
            keys.add((prof.t,))
        return Census(solutions.instance_id, p, tuple(sorted(keys)), "depth")
    pn = p**tracked.precision
    by_index = {r.index: r for r in tracked.roots}
    for a, b in solutions.solutions:
        prof = solution_valuations(a, b, instance, p, tracked)
        root = by_index[prof.argmax_index]
        if root.kind == "rational":
            if root.rational.denominator % p == 0:
                raise ValueError("deepest root not integral at p")
            r = root.rational.numerator * pow(root.rational.denominator, -1, pn) % pn
        elif root.kind == "lifted":
            r = root.approx
        else:
            raise ValueError("deepest root is inert; census unavailable")
        t = int(prof.t)
        mres = (a - r * b) % pn
        unit = (mres // p**t) % p
        keys.add((root.index, t, unit, b % p))
    return Census(solutions.instance_id, p, tuple(sorted(keys)), "full")


# ---------------------------------------------------------------------------
# Certified instance families


def product_form_family(a_list, h: int) -> tuple[ThueInstance, list[tuple[int, int]]]:
    """The form prod_i (x - a_i y) + h y^n with its certified solutions.

    Every (a_i, 1) solves the equation with value h; for even n the
    negated pairs (-a_i, -1) solve it as well.
    """
    a_list = [int(a) for a in a_list]
    n = len(a_list)
    if len(set(a_list)) != n:
        raise ValueError("the a_i must be distinct")
    coeffs = _product_form_coeffs(a_list)
    coeffs[n] += h
    form = BinaryForm(n, tuple(coeffs))
    certified = [(a, 1) for a in a_list]
    if n % 2 == 0:
        certified += [(-a, -1) for a in a_list]
    for x, y in certified:
        if form(x, y) != h or gcd(x, y) != 1:
            raise AssertionError("certified solution fails")
    instance = ThueInstance.build(form, h)
    assert instance.content_removed == 1  # the x^n coefficient is 1
    return instance, sorted(set(certified))


def product_form_family_extra(
    a_rest, q: int
) -> tuple[ThueInstance, list[tuple[int, int]]]:
    """Extra-solution variant: a_1 = q^(n-1) and h = prod_{i>=2} (1 - a_i q)
    certify (1, q) on top of the standard (a_i, 1) set."""
    a_rest = [int(a) for a in a_rest]
    n = len(a_rest) + 1
    a1 = q ** (n - 1)
    if a1 in a_rest:
        raise ValueError("q^(n-1) collides with a supplied root")
    h = 1
    for a in a_rest:
        h *= 1 - a * q
    if h == 0:
        raise ValueError("h = 0: some 1 - a_i q vanishes")
    instance, certified = product_form_family([a1] + a_rest, h)
    if instance.form(1, q) != instance.h:
        raise AssertionError("extra solution (1, q) fails")
    certified = sorted(set(certified + [(1, q)]))
    return instance, certified


def _product_form_coeffs(a_list) -> list[int]:
    # prod (x - a_i y): elementary symmetric expansion, sign (-1)^i e_i
    n = len(a_list)
    e = [1] + [0] * n
    for a in a_list:
        for i in range(n, 0, -1):
            e[i] = e[i] + a * e[i - 1]
    return [(-1) ** i * e[i] for i in range(n + 1)]


# ---------------------------------------------------------------------------
# p-integral point classification


@dataclass(frozen=True)
class PointClass:
    kind: str  # "unit_z" (p coprime to z) or "divided_z" (p | z)
    level: int
    target_h: Fraction  # h of the instance whose primitive points biject


def classify_p_integral_points(
    points, instance: ThueInstance, p: int
) -> list[tuple[tuple[int, int, int], PointClass]]:
    """Sort projective integral points by their p-divisibility pattern.

    For a normalized point (x:y:z) with gcd(x,y,z) = 1: when p does not
    divide z, the level is i = v_p(gcd(x,y)) and the point corresponds
    to a primitive point of the instance with h p^(-i n); when p | z the
    level is i = v_p(z) and the target carries h p^(+i n).
    """
    n = instance.n
    out = []
    for x, y, z in points:
        if gcd(gcd(x, y), z) != 1:
            raise ValueError(f"point {(x, y, z)} is not normalized")
        if z % p != 0:
            gxy = gcd(x, y)
            i = vp(gxy, p) if gxy != 0 else 0
            cls = PointClass("unit_z", i, Fraction(instance.h, p ** (i * n)))
        else:
            i = vp(z, p)
            cls = PointClass("divided_z", i, Fraction(instance.h * p ** (i * n)))
        out.append(((x, y, z), cls))
    return out
