"""Valuation charts attached to primitive solutions.

For a primitive solution (a,b) of F(x,y) = h with p | h, let alpha_i be
a root maximizing t = v(a - alpha_i b) and gamma_j = alpha_j - alpha_i
the differences to the other roots.  The chart ledger records the
increasing depth sequence s_0 = 0 < s_1 < ... < s_m = t picking out the
distinct values of v(gamma_j) up to t, the sets of roots S_k at each
depth (the chosen root itself, gamma = 0, sits at the deepest level with
its own multiplicity), and the running totals

    u_k = sum_{j<=k} |S_j| s_j + sum_{j>k} |S_j| s_k

(weighted by multiplicities), which measure the power of the uniformizer
factored out of the form after rescaling the coordinate by p^{s_k}.  For
a genuine primitive solution the deepest total u_m equals w = v(h).

Valuations with a common denominator e (ramified splitting data) are
rescaled by e so that every chart entry is an integer, matching the
normalization in which the uniformizer of the splitting field has
valuation 1; w rescales to e*v_p(h).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from thuecc.padic import INF, SolutionValuationProfile, TrackedRoots, Val

SELF = -1  # member reference for the chosen root's own factor (gamma = 0)


class ChartError(ValueError):
    pass


class AmbiguousArgmax(ChartError):
    """Profile mode cannot identify the deepest root when the maximum
    valuation is attained more than once; use tracked mode."""


@dataclass(frozen=True)
class ChartMember:
    ref: int  # root index, or SELF for the chosen root
    value: int | float  # rescaled integer valuation of gamma; INF for SELF
    multiplicity: int


@dataclass(frozen=True)
class ChartData:
    root_index: int | None
    t: int
    s_seq: tuple[int, ...]
    levels: tuple[tuple[ChartMember, ...], ...]
    u_seq: tuple[int, ...]
    w: int
    rescale: int = 1
    argmax_tied: bool = False

    @property
    def depth(self) -> int:
        return len(self.s_seq) - 1

    def level_weight(self, k: int) -> int:
        return sum(m.multiplicity for m in self.levels[k])

    def to_dict(self) -> dict:
        return {
            "root_index": self.root_index,
            "t": self.t,
            "s_seq": list(self.s_seq),
            "u_seq": list(self.u_seq),
            "w": self.w,
            "rescale": self.rescale,
            "levels": [
                [[m.ref, ("inf" if m.value == INF else m.value), m.multiplicity] for m in lv]
                for lv in self.levels
            ],
        }


def build_chart(
    t: int,
    gammas: list[tuple[int | float, int, int]],
    self_multiplicity: int,
    w: int,
    root_index: int | None = None,
    rescale: int = 1,
    argmax_tied: bool = False,
) -> ChartData:
    """Run the depth recursion on rescaled integer valuations.

    gammas lists (value, multiplicity, root_ref) for every root other
    than the chosen one; value is the integer valuation of the root
    difference (INF never occurs for distinct roots).  The chosen root
    contributes a member with gamma = 0 at the deepest level with
    multiplicity self_multiplicity.
    """
    if t < 0 or any(v != INF and v < 0 for v, _, _ in gammas):
        raise ChartError("valuations must be nonnegative after rescaling")
    if any(v != INF and v != int(v) for v, _, _ in gammas):
        raise ChartError("chart valuations must be integers; rescale first")
    s_seq = [0] + sorted({int(v) for v, _, _ in gammas if v != INF and 0 < v <= t})
    if s_seq[-1] != t:
        s_seq.append(t)
    m = len(s_seq) - 1
    levels: list[list[ChartMember]] = [[] for _ in s_seq]
    for v, mult, ref in gammas:
        if v >= s_seq[m]:
            levels[m].append(ChartMember(ref, v, mult))
        else:
            k = s_seq.index(int(v)) if v in s_seq else None
            if k is None or k == m:
                raise ChartError(f"gamma valuation {v} missed the depth sequence")
            levels[k].append(ChartMember(ref, v, mult))
    levels[m].append(ChartMember(SELF, INF, self_multiplicity))
    weights = [sum(mb.multiplicity for mb in lv) for lv in levels]
    u_seq = []
    for k in range(m + 1):
        u = sum(weights[j] * s_seq[j] for j in range(k + 1))
        u += sum(weights[j] for j in range(k + 1, m + 1)) * s_seq[k]
        u_seq.append(u)
    return ChartData(
        root_index=root_index,
        t=t,
        s_seq=tuple(s_seq),
        levels=tuple(tuple(lv) for lv in levels),
        u_seq=tuple(u_seq),
        w=w,
        rescale=rescale,
        argmax_tied=argmax_tied,
    )


def _common_rescale(values) -> int:
    den = 1
    for v in values:
        if v != INF:
            den = lcm(den, Fraction(v).denominator)
    return den


def chart_from_profile(profile: SolutionValuationProfile, w: Val) -> ChartData:
    """Chart of a solution from its valuation multiset alone.

    Requires the maximum t to be attained by exactly one entry: then
    every other root has v(a - alpha_j b) < t, which forces
    v(gamma_j) = v(a - alpha_j b), so the ledger is determined without
    root identities.  Fractional valuations are cleared by the common
    denominator.
    """
    if profile.t == INF:
        raise ChartError("profile has an exact rational root hit; not a solution")
    entries = list(profile.per_root)
    hits = [i for i, e in enumerate(entries) if e.value == profile.t]
    if len(hits) != 1:
        raise AmbiguousArgmax(
            f"maximum valuation attained {len(hits)} times; tracked mode required"
        )
    i0 = hits[0]
    raw = [e.value for e in entries] + [profile.t, w]
    e = _common_rescale(raw)
    gammas = [
        (int(ent.value * e), ent.multiplicity, ent.root_index if ent.root_index is not None else j)
        for j, ent in enumerate(entries)
        if j != i0
    ]
    return build_chart(
        t=int(profile.t * e),
        gammas=gammas,
        self_multiplicity=entries[i0].multiplicity,
        w=int(Fraction(w) * e),
        root_index=entries[i0].root_index,
        rescale=e,
    )


def chart_from_tracked(
    profile: SolutionValuationProfile, tracked: TrackedRoots, w: Val
) -> ChartData:
    """Chart of a solution with tracked root identities.

    Ties at the maximum are broken toward the smallest root index (the
    conjugate charts are isomorphic); the tie is flagged.  The chosen
    root must be a Z_p root (rational or lifted), which is automatic for
    a primitive solution when p | h.
    """
    if not profile.tracked or profile.argmax_index is None:
        raise ChartError("tracked profile required")
    if profile.t == INF:
        raise ChartError("profile has an exact root hit; not a solution")
    by_index = {r.index: r for r in tracked.roots}
    chosen = by_index[profile.argmax_index]
    if chosen.kind == "inert":
        raise ChartError("deepest root generates a residue extension; no chart")
    raw_gammas = []
    for r in tracked.roots:
        if r.index == chosen.index:
            continue
        raw_gammas.append((tracked.root_difference(r, chosen), r.multiplicity, r.index))
    e = _common_rescale([v for v, _, _ in raw_gammas] + [profile.t, w])
    gammas = [(int(v * e), mult, ref) for v, mult, ref in raw_gammas]
    return build_chart(
        t=int(profile.t * e),
        gammas=gammas,
        self_multiplicity=chosen.multiplicity,
        w=int(Fraction(w) * e),
        root_index=chosen.index,
        rescale=e,
        argmax_tied=profile.argmax_tied,
    )


def verify_w_equals_um(chart: ChartData) -> bool:
    """Whether the deepest running total matches w = v(h); always true
    for charts built from genuine primitive solutions with p | h."""
    return chart.w == chart.u_seq[-1]


@dataclass(frozen=True)
class DepthReport:
    root_index: int
    t_values: tuple[int, ...]
    passed: bool


def check_common_root_depth(profiles: list[SolutionValuationProfile]) -> DepthReport:
    """Solutions sharing the same deepest root must share the same depth.

    All profiles must be tracked, built from primitive solutions of one
    instance with p | h, and agree on the argmax root index.
    """
    if not profiles:
        raise ChartError("no profiles to compare")
    if any(not pr.tracked or pr.argmax_index is None for pr in profiles):
        raise ChartError("tracked profiles required")
    indices = {pr.argmax_index for pr in profiles}
    if len(indices) != 1:
        raise ChartError(f"profiles mix argmax roots {sorted(indices)}")
    ts = tuple(pr.t for pr in profiles)
    return DepthReport(root_index=indices.pop(), t_values=ts, passed=len(set(ts)) == 1)


@dataclass(frozen=True)
class DiskPartition:
    blocks: tuple[tuple[int, ...], ...]
    block_t: tuple[int, ...]
    merged: tuple[bool, ...]
    consistent: bool


def disk_partition(pairwise, charts: list[ChartData]) -> DiskPartition:
    """Merge chart roots into disks: i, j join when v(alpha_i - alpha_j)
    >= min(t_i, t_j).

    pairwise maps a frozenset {i, j} of root indices (or an (i, j)
    tuple) to the valuation of the difference, in the same rescaled
    units as the charts.  Union-find keeps the merge order-independent;
    within a block all depths must agree (a mismatch is reported as
    consistent=False, a violated hypothesis).
    """
    items = [(c.root_index, c.t) for c in charts]
    if any(i is None for i, _ in items):
        raise ChartError("charts must carry root indices for disk merging")
    parent = {i: i for i, _ in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def lookup(i, j):
        if (i, j) in pairwise:
            return pairwise[(i, j)]
        if (j, i) in pairwise:
            return pairwise[(j, i)]
        return pairwise[frozenset((i, j))]

    tmap = dict(items)
    idxs = sorted(tmap)
    for ii, i in enumerate(idxs):
        for j in idxs[ii + 1 :]:
            if lookup(i, j) >= min(tmap[i], tmap[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in idxs:
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(tuple(sorted(g)) for g in sorted(groups.values()))
    block_t = tuple(tmap[b[0]] for b in blocks)
    merged = tuple(len(b) > 1 for b in blocks)
    consistent = all(len({tmap[i] for i in b}) == 1 for b in blocks)
    return DiskPartition(blocks, block_t, merged, consistent)


@dataclass(frozen=True)
class SpecialFiberShape:
    """Reduction type of the regular piece around one disk.

    The defining equation reduces to f(u,y) * (unit) * y^(n - D) = mu
    with f of degree D = weighted count of roots in the disk; r counts
    the distinct roots.  For a disk with a single root, D = n_i and the
    fiber is the rational curve u^(n_i) y^(n - n_i) = mu (u y^(n-1) = mu
    in the simple-root case)."""

    distinct_roots: int
    weighted_degree: int
    cofactor_exponent: int
    fiber_poly: tuple | None = None  # ascending coeffs of f(u, 1) mod p, tracked mode
    unit: int | None = None
    mu: int | None = None


def special_fiber_shape(
    chart: ChartData,
    n: int,
    tracked: TrackedRoots | None = None,
    h: int | None = None,
) -> SpecialFiberShape:
    """Shape (r, n - r) of the special fiber of the chart's deepest piece.

    With tracked data and h, the reduced polynomial and unit are
    materialized over F_p so the fiber's affine points can be counted.
    """
    deepest = chart.levels[-1]
    distinct = len(deepest)
    weighted = sum(m.multiplicity for m in deepest)
    fiber_poly = None
    unit = None
    mu = None
    if tracked is not None and h is not None and chart.rescale == 1:
        p = tracked.p
        by_index = {r.index: r for r in tracked.roots}
        chosen = by_index[chart.root_index]

        def approx(root):
            if root.kind == "rational":
                if root.rational.denominator % p == 0:
                    raise ChartError("root not integral at p")
                return (
                    root.rational.numerator
                    * pow(root.rational.denominator, -1, p ** tracked.precision)
                ) % p ** tracked.precision
            if root.kind == "lifted":
                return root.approx
            raise ChartError("inert root inside a positive-depth disk")

        a_i = approx(chosen)
        # f(u) = prod over deepest members (u - gamma/p^t), gamma = alpha_j - alpha_i
        poly = (1,)
        for mb in deepest:
            if mb.ref == SELF:
                g_red = 0
            else:
                diff = (approx(by_index[mb.ref]) - a_i) % p ** tracked.precision
                g_red = (diff // p**chart.t) % p
            lin = (-g_red % p, 1)
            for _ in range(mb.multiplicity):
                poly = tuple(
                    c % p for c in _mul_ascending(poly, lin)
                )
        fiber_poly = poly
        unit = 1
        for k, lv in enumerate(chart.levels[:-1]):
            for mb in lv:
                diff = (approx(by_index[mb.ref]) - a_i) % p ** tracked.precision
                val = (-(diff // p ** chart.s_seq[k])) % p
                unit = unit * pow(val, mb.multiplicity, p) % p
        w = chart.w
        mu = (h // p**w) % p
    return SpecialFiberShape(
        distinct_roots=distinct,
        weighted_degree=weighted,
        cofactor_exponent=n - weighted,
        fiber_poly=fiber_poly,
        unit=unit,
        mu=mu,
    )


def _mul_ascending(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] += a * b
    return tuple(out)


def fiber_affine_points(fiber: SpecialFiberShape, p: int) -> int:
    """Count (u, y) in F_p^2 with f(u,y) * unit * y^(n-D) = mu."""
    if fiber.fiber_poly is None or fiber.mu is None:
        raise ChartError("materialized fiber required")
    f = fiber.fiber_poly
    d = len(f) - 1
    count = 0
    for u in range(p):
        for y in range(p):
            # homogenize f to degree d: f(u, y) = y^d * f_aff(u/y) when y != 0
            val = 0
            for k, c in enumerate(f):
                val += c * pow(u, k, p) * pow(y, d - k, p)
            val = val * fiber.unit * pow(y, fiber.cofactor_exponent, p) % p
            if val == fiber.mu % p:
                count += 1
    return count
