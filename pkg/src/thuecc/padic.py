"""Exact p-adic valuation computations.

Valuations are normalized so v(p) = 1 and represented as exact
``fractions.Fraction`` values; +infinity (the valuation of 0) is the
float ``INF``, which compares correctly against Fractions.  No floating
point enters any finite value.

Three layers live here:

* Newton polygons of integer polynomials, giving root valuations with
  multiplicity, and the resolvent-based multiset of pairwise root
  differences v(alpha_i - alpha_j).
* Hensel-lifted root tracking in unramified extensions: roots of the
  squarefree parts of F(x,1) are carried either exactly (rational
  roots), as integers mod p^N (Z_p roots of higher-degree rational
  factors), or as opaque monic factors mod p^N (roots generating a
  residue extension, whose distances to everything tracked are 0).
* Per-solution valuation profiles {v(a - alpha_j b)} for coprime (a,b),
  in profile mode (multisets off a Newton polygon) or tracked mode
  (valuations paired with root identities).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy
from sympy import Poly, Symbol

from thuecc import polyutil
from thuecc.forms import FormShape, ThueInstance
from thuecc.polyutil import IntPoly, vp

INF = float("inf")

Val = Fraction | float  # finite valuations are Fractions; INF only for 0

_X = Symbol("x")
_Y = Symbol("y")


class RamifiedCase(ValueError):
    """Tracked mode unavailable: root data cannot be separated into
    unramified residue towers at this prime (fall back to profile mode)."""


class PrecisionError(ValueError):
    """A valuation reached the tracking precision; re-track with larger N."""


def val_to_str(v: Val) -> str:
    if v == INF:
        return "inf"
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def val_from_str(s: str) -> Val:
    if s.strip() == "inf":
        return INF
    return Fraction(s)


# ---------------------------------------------------------------------------
# Newton polygons


def newton_polygon(f, p: int) -> list[tuple[Fraction, int]]:
    """Lower-convex-hull slopes of {(k, v_p(c_k))} with multiplicities.

    f is an ascending-coefficient integer polynomial.  Zero coefficients
    contribute no point.  The negatives of the slopes are the valuations
    of the nonzero roots of f, with multiplicity equal to the horizontal
    length of each segment.  Factors of x (zero roots) are skipped here;
    root_valuations accounts for them as +infinity entries.
    """
    f = polyutil.trim(f)
    if not f:
        raise ValueError("newton polygon of the zero polynomial")
    pts = [(k, vp(c, p)) for k, c in enumerate(f) if c != 0]
    if len(pts) == 1:
        return []
    # lower hull, left to right (monotone chain on the valuation points)
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep only right turns: drop x2 if it is above segment x1->pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return out


def root_valuations(f, p: int) -> list[tuple[Val, int]]:
    """Valuations of all roots of f with multiplicity, largest first.

    Zero roots (factors of x) appear as (+inf, k).
    """
    f = polyutil.trim(f)
    if not f:
        raise ValueError("zero polynomial")
    k0 = next(i for i, c in enumerate(f) if c != 0)
    out: list[tuple[Val, int]] = [(INF, k0)] if k0 else []
    out.extend((-slope, mult) for slope, mult in newton_polygon(f[k0:], p))
    out.sort(key=lambda t: (t[0] != INF, -t[0] if t[0] != INF else 0))
    return out


def difference_valuations(shape: FormShape, p: int) -> list[tuple[Fraction, int]]:
    """Multiset {v(alpha_i - alpha_j) : i != j} over the distinct roots.

    Computed as the root valuations of the resolvent
    Res_y(f0(y), f0(x+y)) / x^s where f0 is the squarefree part; the sum
    of the multiset equals v_p(d*(F)/c).
    """
    s = shape.s
    if s < 2:
        raise ValueError("difference valuations need at least two distinct roots")
    f0 = Poly(list(reversed(shape.radical)), _X).as_expr()
    res = sympy.resultant(f0.subs(_X, _Y), f0.subs(_X, _X + _Y), _Y)
    rpoly = polyutil.from_sympy(Poly(res, _X))
    if any(c != 0 for c in rpoly[:s]):
        raise ValueError("resolvent not divisible by x^s: radical was not squarefree")
    vals = root_valuations(rpoly[s:], p)
    assert all(v != INF for v, _ in vals)
    return [(Fraction(v), m) for v, m in vals]


# ---------------------------------------------------------------------------
# Hensel-lifted root tracking


def _pmod(f, m: int) -> IntPoly:
    return polyutil.trim(tuple(c % m for c in f))


def _pmul(f, g, m: int) -> IntPoly:
    return _pmod(polyutil.mul(f, g), m)


def _padd(f, g, m: int) -> IntPoly:
    return _pmod(polyutil.add(f, g), m)


def _pdivmod(f, g, m: int) -> tuple[IntPoly, IntPoly]:
    """Division with remainder mod m; g must be monic."""
    assert g and g[-1] == 1
    f = list(_pmod(f, m))
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and any(f):
        if f[-1] == 0:
            f.pop()
            continue
        k = len(f) - 1 - dg
        c = f[-1] % m
        q[k] = c
        for i, gc in enumerate(g):
            f[k + i] = (f[k + i] - c * gc) % m
        f.pop()
    return polyutil.trim(tuple(q)), polyutil.trim(tuple(f))


def _poly_ext_gcd_mod_p(f, g, p: int) -> tuple[IntPoly, IntPoly]:
    """(s, t) with s*f + t*g = 1 mod p, for f, g coprime mod p."""
    r0, r1 = _pmod(f, p), _pmod(g, p)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        lead_inv = pow(r1[-1], -1, p)
        r1m = _pmod(polyutil.scale(r1, lead_inv), p)
        q, r = _pdivmod(r0, r1m, p)
        q = _pmod(polyutil.scale(q, lead_inv), p)
        r0, r1 = r1, r
        s0, s1 = s1, _pmod(polyutil.add(s0, polyutil.scale(polyutil.mul(q, s1), -1)), p)
        t0, t1 = t1, _pmod(polyutil.add(t0, polyutil.scale(polyutil.mul(q, t1), -1)), p)
    if len(r0) != 1:
        raise ValueError("polynomials not coprime mod p")
    inv = pow(r0[0], -1, p)
    return _pmod(polyutil.scale(s0, inv), p), _pmod(polyutil.scale(t0, inv), p)


def _hensel_lift_pair(f, g, h, p: int, N: int) -> tuple[IntPoly, IntPoly]:
    """Lift a coprime monic factorization f = g*h mod p to mod p^N.

    f, g, h monic; returns (G, H) monic mod p^N with G*H = f mod p^N,
    G = g mod p, H = h mod p.
    """
    s, t = _poly_ext_gcd_mod_p(g, h, p)
    G, H = _pmod(g, p), _pmod(h, p)
    pk = p
    for _ in range(N - 1):
        m = pk * p
        diff = polyutil.add(_pmod(f, m), polyutil.scale(_pmul(G, H, m), -1))
        e = _pmod(tuple(c // pk for c in polyutil.trim(diff)), p)
        if e:
            te = _pmul(t, e, p)
            _, u = _pdivmod(te, G, p)
            num = polyutil.add(e, polyutil.scale(polyutil.mul(u, H), -1))
            w, rem = _pdivmod(_pmod(num, p), G, p)
            assert not rem, "hensel correction must divide exactly"
            G = _padd(G, polyutil.scale(u, pk), m)
            H = _padd(H, polyutil.scale(w, pk), m)
        else:
            G, H = _pmod(G, m), _pmod(H, m)
        pk = m
    return G, H


def _hensel_lift_factors(f, factors: list[IntPoly], p: int, N: int) -> list[IntPoly]:
    """Lift the pairwise-coprime monic factorization of monic f mod p."""
    if len(factors) == 1:
        return [_pmod(f, p**N)]
    g = factors[0]
    h = (1,)
    for fac in factors[1:]:
        h = _pmul(h, fac, p)
    G, H = _hensel_lift_pair(f, g, h, p, N)
    return [G] + _hensel_lift_factors(H, factors[1:], p, N)


@dataclass(frozen=True)
class TrackedRoot:
    """One distinct root of F(x,1), tracked to precision p^N.

    kind is "rational" (root is the exact Fraction `rational`),
    "lifted" (an irrational Z_p root, approximated by the integer
    `approx` mod p^N), or "inert" (a root generating a residue-field
    extension, carried only through its monic factor mod p^N; every
    tracked distance from an inert root to a rational or lifted root
    is 0 because their residues differ).
    """

    index: int
    multiplicity: int
    kind: str
    degree: int
    rational: Fraction | None = None
    approx: int | None = None
    factor: IntPoly = ()
    minpoly: IntPoly = ()  # exact integer polynomial this root satisfies


@dataclass(frozen=True)
class TrackedRoots:
    p: int
    precision: int
    roots: tuple[TrackedRoot, ...]
    partial: bool = False

    def root_minus_point(self, root: TrackedRoot, a: int, b: int) -> Val:
        """v(a - alpha*b) for the tracked root alpha and integers a, b."""
        p, N = self.p, self.precision
        if root.kind == "rational":
            nu, de = root.rational.numerator, root.rational.denominator
            m = a * de - nu * b
            if m == 0:
                return INF
            return Fraction(vp(m, p) - vp(de, p))
        if root.kind == "lifted":
            m = (a - root.approx * b) % p**N
            if m == 0:
                # saturated; genuine when a/b is an exact root of the factor's
                # minimal polynomial, impossible for an irrational root
                raise PrecisionError(
                    f"v(a - alpha b) >= {N} at tracked precision; raise N"
                )
            return Fraction(vp(m, p))
        # inert: residue of alpha generates an extension of F_p, while a - 0*b
        # reduces into F_p, so v = min(v(a), v(b))
        if a == 0:
            return Fraction(vp(b, p))
        if b == 0:
            return Fraction(vp(a, p))
        return Fraction(min(vp(a, p), vp(b, p)))

    def root_difference(self, r1: TrackedRoot, r2: TrackedRoot) -> Val:
        """v(alpha_1 - alpha_2) for two distinct tracked roots."""
        p, N = self.p, self.precision
        if r1.index == r2.index:
            return INF
        kinds = {r1.kind, r2.kind}
        if "inert" in kinds:
            if kinds == {"inert"}:
                raise ValueError("difference of two inert roots is not tracked")
            return Fraction(0)
        if kinds == {"rational"}:
            d = r1.rational - r2.rational
            return Fraction(vp(d.numerator, p) - vp(d.denominator, p))
        # at least one lifted root: work mod p^N
        def as_pair(r):
            if r.kind == "rational":
                return r.rational.numerator, r.rational.denominator
            return r.approx, 1

        n1, d1 = as_pair(r1)
        n2, d2 = as_pair(r2)
        m = (n1 * d2 - n2 * d1) % p**N
        if m == 0:
            raise PrecisionError("tracked roots collide mod p^N; raise N")
        return Fraction(vp(m, p) - vp(d1 * d2, p))


def default_precision(instance: ThueInstance, p: int) -> int:
    """Precision separating all roots and certifying every valuation in a
    primitive solution's profile: v_p(h) + v_p(disc(radical)) + 5."""
    disc = polyutil.discriminant(instance.shape.radical)
    return vp(instance.h, p) + (vp(disc, p) if disc else 0) + 5


def hensel_track_roots(
    shape: FormShape, p: int, precision: int, partial: bool = False
) -> TrackedRoots:
    """Track the distinct roots of F(x,1) in unramified residue towers.

    Each squarefree part w_k is factored over Q; rational roots are kept
    exact, and every higher-degree rational factor whose reduction mod p
    is squarefree is Hensel-lifted to mod p^precision, yielding integer
    approximations of its Z_p roots and opaque factors for the rest.

    Raises RamifiedCase when some factor cannot be separated this way
    (genuinely ramified data, or clustered roots inside one irreducible
    rational factor).  With partial=True such factors are skipped and the
    result is flagged partial.
    """
    n = sum(shape.multiplicities) + shape.degree_deficit
    if n % p == 0:
        raise ValueError(f"tracking requires p not dividing the degree n={n}")
    entries: list[TrackedRoot] = []
    skipped = False
    for mult, w in shape.sqf_parts:
        wpoly = polyutil.to_sympy(w)
        _, qfactors = wpoly.factor_list()
        for q, _e in qfactors:
            qc = polyutil.from_sympy(q)
            deg = polyutil.degree(qc)
            if deg == 1:
                root = Fraction(-qc[0], qc[1])
                entries.append(
                    TrackedRoot(0, mult, "rational", 1, rational=root, minpoly=qc)
                )
                continue
            if qc[-1] % p == 0:
                if partial:
                    skipped = True
                    continue
                raise RamifiedCase(
                    f"factor {qc} has p-divisible leading coefficient; monicize first"
                )
            modular = polyutil.factor_mod_p(qc, p)
            if any(e > 1 for _, e in modular):
                if partial:
                    skipped = True
                    continue
                raise RamifiedCase(
                    f"factor {qc} is not squarefree mod {p}: roots cannot be "
                    "separated in unramified towers (profile mode still applies)"
                )
            lc_inv = pow(qc[-1], -1, p**precision)
            monic = _pmod(polyutil.scale(qc, lc_inv), p**precision)
            lifted = _hensel_lift_factors(monic, [f for f, _ in modular], p, precision)
            for fac in lifted:
                d = polyutil.degree(fac)
                if d == 1:
                    entries.append(
                        TrackedRoot(
                            0,
                            mult,
                            "lifted",
                            1,
                            approx=(-fac[0]) % p**precision,
                            factor=fac,
                            minpoly=qc,
                        )
                    )
                else:
                    entries.append(
                        TrackedRoot(0, mult, "inert", d, factor=fac, minpoly=qc)
                    )
    # deterministic indexing: rational roots by value, then lifted by
    # approximation, then inert by factor
    def sort_key(r: TrackedRoot):
        rank = {"rational": 0, "lifted": 1, "inert": 2}[r.kind]
        key = r.rational if r.kind == "rational" else (r.approx if r.kind == "lifted" else r.factor)
        return (rank, key)

    entries.sort(key=sort_key)
    entries = [
        TrackedRoot(
            i, r.multiplicity, r.kind, r.degree,
            rational=r.rational, approx=r.approx, factor=r.factor, minpoly=r.minpoly,
        )
        for i, r in enumerate(entries)
    ]
    return TrackedRoots(p=p, precision=precision, roots=tuple(entries), partial=skipped)


# ---------------------------------------------------------------------------
# Per-solution valuation profiles


@dataclass(frozen=True)
class RootValuationEntry:
    value: Val
    multiplicity: int
    root_index: int | None = None  # tracked mode only


@dataclass(frozen=True)
class SolutionValuationProfile:
    """Valuations {v(a - alpha_j b)} over the distinct roots of F(x,1).

    t is the maximum; argmax_index identifies the achieving root in
    tracked mode (smallest index on ties, with argmax_tied set).
    vb = v_p(b).  degree_deficit entries contribute vb each to
    v_p(F(a,b)) but are not part of per_root.
    """

    a: int
    b: int
    p: int
    per_root: tuple[RootValuationEntry, ...]
    t: Val
    vb: Val
    argmax_index: int | None = None
    argmax_tied: bool = False
    tracked: bool = False

    def form_valuation(self, shape: FormShape) -> Val:
        """v_p(F(a,b)) reconstructed from the profile."""
        total: Val = Fraction(vp(shape.lead, self.p)) if shape.lead % self.p == 0 else Fraction(0)
        for e in self.per_root:
            if e.value == INF:
                return INF
            total += e.multiplicity * e.value
        if shape.degree_deficit:
            if self.vb == INF:
                return INF
            total += shape.degree_deficit * self.vb
        return total


def solution_valuations(
    a: int,
    b: int,
    instance: ThueInstance,
    p: int,
    tracked: TrackedRoots | None = None,
) -> SolutionValuationProfile:
    """Profile of v(a - alpha_j b) for a coprime integer pair.

    Profile mode reads the multiset off the Newton polygon of
    b^deg(w) * w((a-T)/b) for each squarefree part w; tracked mode
    additionally pairs each valuation with its root.
    """
    if gcd(a, b) != 1:
        raise ValueError(f"({a},{b}) is not coprime")
    shape = instance.shape
    entries: list[RootValuationEntry] = []
    if tracked is not None:
        for root in tracked.roots:
            v = tracked.root_minus_point(root, a, b)
            entries.append(RootValuationEntry(v, root.multiplicity, root.index))
    else:
        for mult, w in shape.sqf_parts:
            d = polyutil.degree(w)
            if b == 0:
                # a = +-1, so v(a - alpha*0) = 0 for every root
                entries.extend([RootValuationEntry(Fraction(0), mult)] * d)
                continue
            # g(T) = b^d w((a-T)/b) has roots T_j = a - alpha_j b
            g: IntPoly = ()
            shift = polyutil.trim((a, -1))
            pw: IntPoly = (1,)
            for j, wc in enumerate(w):
                if wc:
                    g = polyutil.add(g, polyutil.scale(pw, wc * b ** (d - j)))
                pw = polyutil.mul(pw, shift)
            for v, m in root_valuations(g, p):
                entries.extend([RootValuationEntry(v, mult)] * m)
    t: Val = max((e.value for e in entries), default=Fraction(0))
    argmax = None
    tied = False
    if tracked is not None:
        hits = [e.root_index for e in entries if e.value == t]
        argmax = min(hits) if hits else None
        tied = len(hits) > 1
    vb: Val = INF if b == 0 else Fraction(vp(b, p))
    return SolutionValuationProfile(
        a=a,
        b=b,
        p=p,
        per_root=tuple(entries),
        t=t,
        vb=vb,
        argmax_index=argmax,
        argmax_tied=tied,
        tracked=tracked is not None,
    )


def check_vb_zero(a: int, b: int, instance: ThueInstance, p: int) -> bool:
    """v_p(b) == 0 for a primitive solution of F(x,y) = h with p | h.

    Always true when the x^n coefficient of F is a p-unit (monicize
    first otherwise): v(b) > 0 would force every v(a - alpha_j b) to be
    0, contradicting v(F(a,b)) = v(h) > 0.
    """
    if gcd(a, b) != 1:
        raise ValueError(f"({a},{b}) is not coprime")
    if instance.h % p != 0:
        raise ValueError(f"p={p} does not divide h={instance.h}")
    if instance.form(a, b) != instance.h:
        raise ValueError(f"({a},{b}) does not solve F(x,y)={instance.h}")
    return b % p != 0
