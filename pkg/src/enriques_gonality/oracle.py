"""Brute-force ground truth for the pruned enumerator.

box_solutions scans an explicit coordinate box: leading coordinates are
walked by nested loops with interval bounds on what the rest of the box can
still contribute, trailing coordinates are evaluated as one exhaustive
table.  Every solution of a query (x^2 = s, x.L = c) lies in a certified
per-coordinate range derived from the dual Gram matrix of L-perp, so the
scan over those ranges is a complete oracle; certified_coordinate_bound
publishes the sup-norm radius of that certificate.  Deliberately naive;
performance is a non-goal beyond keeping desk-scale runs finite.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .enumeration import EnumQuery, enumerate_classes, min_pairing_isotropic
from .errors import InfeasibleQuery, InvalidAnchor, InvalidInput, OverflowGuard
from .lattice import RANK, STANDARD, EnriquesLattice, as_vec
from .linalg import Vec, ceil_sqrt, frac_inverse, functional_kernel_basis, vec_gcd

# hard ceiling on how many box points one scan may touch
SCAN_POINTS_LIMIT = 30_000_000
_PREFIX = 5


@dataclass(frozen=True)
class Box:
    radius: int

    def __post_init__(self):
        if self.radius < 1:
            raise InvalidInput("box radius must be >= 1")


def _dual_diagonal(anchor: Vec, lattice: EnriquesLattice):
    """d_i with |y_i| <= sqrt(t * d_i) for y in L-perp of norm -t."""
    def build():
        v = lattice.gram_vector(anchor)
        w = tuple(t // vec_gcd(v) for t in v)
        _, basis = functional_kernel_basis(w)
        gram = lattice.gram
        p = [[-sum(gram[i][j] * ba[j] * bb[i] for i in range(RANK) for j in range(RANK))
              for bb in basis] for ba in basis]
        p_inv = frac_inverse(p)
        diag = []
        for i in range(RANK):
            row = [basis[k][i] for k in range(9)]
            diag.append(sum(row[a] * p_inv[a][b] * row[b]
                            for a in range(9) for b in range(9)))
        return diag
    return lattice.cache(("dual_diag", anchor), build)


def _ceil_frac_plus_sqrt(p: Fraction, v: Fraction) -> int:
    """Smallest integer r with r >= p + sqrt(v), exactly (v >= 0)."""
    r = -((-p.numerator) // p.denominator) + ceil_sqrt(-((-v.numerator) // v.denominator))
    while r - 1 >= p and (r - 1 - p) * (r - 1 - p) >= v:
        r -= 1
    return r


def certified_ranges(anchor, s: int, c: int,
                     lattice: EnriquesLattice = STANDARD) -> tuple[int, ...]:
    """Per-coordinate radii R_i containing every solution of (x^2 = s, x.L = c).

    Coordinate i of a solution equals c*L_i/L^2 plus coordinate i of a vector
    in L-perp of norm exactly s - c^2/L^2; both parts are bounded exactly.
    """
    anchor = as_vec(anchor)
    l2 = lattice.norm(anchor)
    if l2 <= 0:
        raise InvalidAnchor(f"anchor has L^2 = {l2} <= 0")
    t_budget = Fraction(c * c, l2) - s
    if t_budget < 0:
        return (0,) * RANK  # no real solutions
    diag = _dual_diagonal(anchor, lattice)
    out = []
    for i in range(RANK):
        proj = Fraction(abs(c * anchor[i]), l2)
        out.append(_ceil_frac_plus_sqrt(proj, t_budget * diag[i]))
    return tuple(out)


def certified_coordinate_bound(anchor, s: int, c: int,
                               lattice: EnriquesLattice = STANDARD) -> Box:
    """Sup-norm radius provably containing all solutions of (x^2 = s, x.L = c)."""
    return Box(max(1, max(certified_ranges(anchor, s, c, lattice))))


def scan_points(anchor, s: int, c: int, box: Box,
                lattice: EnriquesLattice = STANDARD) -> int:
    """Number of box points a scan of this query would touch."""
    ranges = certified_ranges(anchor, s, c, lattice)
    total = 1
    for ri in ranges:
        total *= 2 * min(ri, box.radius) + 1
    return total


def _quad_term_range(a: int, b: int, lo_t: int, hi_t: int) -> tuple[int, int]:
    # exact min/max of a*t^2 + b*t over integer t in [lo_t, hi_t]
    vals = [a * lo_t * lo_t + b * lo_t, a * hi_t * hi_t + b * hi_t]
    if a != 0:
        vertex = -(b // (2 * a))
        for t in (vertex - 1, vertex, vertex + 1):
            if lo_t <= t <= hi_t:
                vals.append(a * t * t + b * t)
    return min(vals), max(vals)


def box_solutions(anchor, s: int, c: int, box: Box, lattice: EnriquesLattice = STANDARD,
                  primitive_only: bool = False, effective_only: bool = False) -> list[Vec]:
    """Exhaustively scan the box for x with x^2 = s and x.L = c.

    Each coordinate loop runs over the box clamped to the certified range for
    that coordinate; the only further pruning is interval arithmetic on what
    the remaining coordinates can still contribute.
    """
    anchor = as_vec(anchor)
    r = box.radius
    g = lattice.gram
    v = lattice.gram_vector(anchor)
    if lattice.norm(anchor) > 0:
        # radius 0 clamps a coordinate to {0}; it does not mean "no solutions"
        radii = [min(r, ri) for ri in certified_ranges(anchor, s, c, lattice)]
    else:
        radii = [r] * RANK
    points = 1
    for ri in radii:
        points *= 2 * ri + 1
    if points > SCAN_POINTS_LIMIT:
        raise OverflowGuard(f"box scan rejected: {points} points exceed the scan budget")

    # trailing-coordinate table, bucketed by linear value
    axes = [np.arange(-radii[j], radii[j] + 1, dtype=np.int64) for j in range(_PREFIX, RANK)]
    grids = np.meshgrid(*axes, indexing="ij")
    suffix = np.stack([gg.ravel() for gg in grids], axis=1)
    g_ss = np.array([row[_PREFIX:] for row in g[_PREFIX:]], dtype=np.int64)
    suffix_quad = np.einsum("ij,jk,ik->i", suffix, g_ss, suffix)
    suffix_lin = suffix @ np.array(v[_PREFIX:], dtype=np.int64)
    lin_suf_min, lin_suf_max = int(suffix_lin.min()), int(suffix_lin.max())
    order = np.argsort(suffix_lin, kind="stable")
    sorted_lin = suffix_lin[order]
    buckets: dict[int, np.ndarray] = {}
    pos = 0
    while pos < len(sorted_lin):
        stop = int(np.searchsorted(sorted_lin, sorted_lin[pos], side="right"))
        buckets[int(sorted_lin[pos])] = order[pos:stop]
        pos = stop

    lin_slack = [0] * (_PREFIX + 1)
    for i in range(_PREFIX - 1, -1, -1):
        lin_slack[i] = lin_slack[i + 1] + abs(v[i]) * radii[i]
    cross_slack = [0] * (_PREFIX + 1)
    for k in range(_PREFIX - 1, -1, -1):
        extra = sum(2 * abs(g[k][j]) * radii[k] * radii[j] for j in range(k + 1, RANK))
        cross_slack[k] = cross_slack[k + 1] + extra
    suffix_quad_min = int(suffix_quad.min())
    suffix_quad_max = int(suffix_quad.max())

    ample_vec = lattice.gram_vector(lattice.reference_ample)
    sols: list[Vec] = []
    x = [0] * _PREFIX
    lam = [0] * RANK

    def emit(xt: Vec):
        if primitive_only:
            d = 0
            for t in xt:
                d = gcd(d, t)
            if d != 1:
                return
        if effective_only:
            if s < 0 or xt == (0,) * RANK:
                return
            if sum(a * b for a, b in zip(xt, ample_vec)) <= 0:
                return
        sols.append(xt)

    def scan(k: int, lin: int, quad: int):
        # lam[j] = 2 * sum_{i<k} g[i][j] * x[i] for j >= k
        if k == _PREFIX:
            rows = buckets.get(c - lin)
            if rows is None:
                return
            cross = suffix[rows] @ np.array(lam[_PREFIX:], dtype=np.int64)
            hits = rows[suffix_quad[rows] + cross == s - quad]
            head = tuple(x)
            for row in suffix[hits]:
                emit(head + tuple(int(t) for t in row))
            return
        if not (lin - lin_slack[k] + lin_suf_min <= c <= lin + lin_slack[k] + lin_suf_max):
            return
        lo = quad + suffix_quad_min - cross_slack[k]
        hi = quad + suffix_quad_max + cross_slack[k]
        for j in range(k, _PREFIX):
            tmin, tmax = _quad_term_range(g[j][j], lam[j], -radii[j], radii[j])
            lo += tmin
            hi += tmax
        spread = sum(abs(lam[j]) * radii[j] for j in range(_PREFIX, RANK))
        if not (lo - spread <= s <= hi + spread):
            return
        vk = v[k]
        gk = g[k]
        touched = [j for j in range(k + 1, RANK) if gk[j]]
        for t in range(-radii[k], radii[k] + 1):
            x[k] = t
            if t:
                for j in touched:
                    lam[j] += 2 * gk[j] * t
            scan(k + 1, lin + vk * t, quad + gk[k] * t * t + lam[k] * t)
            if t:
                for j in touched:
                    lam[j] -= 2 * gk[j] * t
        x[k] = 0

    scan(0, 0, 0)
    sols.sort()
    return sols


def naive_phi(anchor, lattice: EnriquesLattice = STANDARD) -> tuple[int, Vec]:
    """Ascending-pairing box scan for the minimal isotropic pairing."""
    anchor = as_vec(anchor)
    l2 = lattice.norm(anchor)
    if l2 <= 0 or not lattice.is_num_effective(anchor):
        raise InvalidInput("naive phi needs an effective class with L^2 > 0")
    for c in range(1, isqrt(l2) + 1):
        box = certified_coordinate_bound(anchor, 0, c, lattice)
        sols = box_solutions(anchor, 0, c, box, lattice,
                             primitive_only=True, effective_only=True)
        if sols:
            return c, sols[0]
    raise AssertionError("no isotropic pairing at most sqrt(L^2); oracle broken")


def naive_mu(anchor, cap: int, lattice: EnriquesLattice = STANDARD):
    """Box-scan mu up to pairing cap; returns (value, witness) or None."""
    anchor = as_vec(anchor)
    l2 = lattice.norm(anchor)
    for c in range(1, cap + 1):
        if 4 * l2 > c * c:
            continue  # no real solutions
        box = certified_coordinate_bound(anchor, 4, c, lattice)
        for b in box_solutions(anchor, 4, c, box, lattice, effective_only=True):
            if b == anchor:
                continue
            if naive_phi(b, lattice)[0] == 2:
                return c - 2, b
    return None


# ---------------------------------------------------------------------------
# differential check driver

GRID = tuple((s, c) for s in (0, 4) for c in range(1, 9))


@dataclass
class OracleReport:
    radius: int
    samples_requested: int
    eligible: int
    max_points: int
    anchors: list[Vec] = field(default_factory=list)
    queries_run: int = 0
    infeasible_agreements: int = 0
    discrepancies: list[dict] = field(default_factory=list)
    phi_checked: int = 0
    mu_checked: int = 0
    elapsed_seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def _grid_scan_points(anchor, lattice) -> int:
    worst = 0
    l2 = lattice.norm(anchor)
    for s, c in GRID:
        if s * l2 > c * c:
            continue
        box = certified_coordinate_bound(anchor, s, c, lattice)
        worst = max(worst, scan_points(anchor, s, c, box, lattice))
    return worst


def oracle_check(radius: int = 2, samples: int = 50, seed: int = 0,
                 max_points: int = 3_000_000, lattice: EnriquesLattice = STANDARD,
                 check_invariants: bool = True) -> OracleReport:
    """Differential test: pruned enumerator vs box scan over certified bounds.

    Anchors are sampled uniformly (seeded) from the effective classes of the
    region whose certified scan stays within max_points for every query of
    the grid; larger certificates are outside the naive scanner's budget by
    design (raise max_points to widen the net, at proportional cost).
    """
    from .regions import effective_classes

    start = time.time()
    pool = list(effective_classes(radius, lattice))
    eligible = [l for l in pool if _grid_scan_points(l, lattice) <= max_points]
    rng = random.Random(seed)
    anchors = eligible if len(eligible) <= samples else rng.sample(eligible, samples)
    anchors.sort()

    report = OracleReport(radius=radius, samples_requested=samples,
                          eligible=len(eligible), max_points=max_points, anchors=anchors)
    for anchor in anchors:
        for s, c in GRID:
            fast_sols, fast_infeasible = None, False
            try:
                fast_sols = set(enumerate_classes(EnumQuery(anchor, s, c), lattice).solutions)
            except InfeasibleQuery:
                fast_infeasible = True
            box = certified_coordinate_bound(anchor, s, c, lattice)
            slow_sols = set(box_solutions(anchor, s, c, box, lattice))
            report.queries_run += 1
            if fast_infeasible:
                if slow_sols:
                    report.discrepancies.append(
                        {"anchor": anchor, "s": s, "c": c,
                         "detail": "enumerator infeasible but oracle found solutions"})
                else:
                    report.infeasible_agreements += 1
                continue
            if fast_sols != slow_sols:
                report.discrepancies.append(
                    {"anchor": anchor, "s": s, "c": c,
                     "missing_from_fast": sorted(slow_sols - fast_sols)[:5],
                     "missing_from_slow": sorted(fast_sols - slow_sols)[:5]})
        if check_invariants:
            from .invariants import mu_capped
            fast_phi = min_pairing_isotropic(anchor, lattice)
            slow_phi = naive_phi(anchor, lattice)
            report.phi_checked += 1
            if fast_phi.value != slow_phi[0]:
                report.discrepancies.append(
                    {"anchor": anchor, "detail": "phi mismatch",
                     "fast": fast_phi.value, "slow": slow_phi[0]})
            cap = 2 * fast_phi.value + 2
            fast_mu = mu_capped(anchor, cap=cap, lattice=lattice)
            slow_mu = naive_mu(anchor, cap, lattice)
            report.mu_checked += 1
            fast_val = fast_mu.value if fast_mu.kind == "exact" else None
            slow_val = slow_mu[0] if slow_mu else None
            if fast_val != slow_val:
                report.discrepancies.append(
                    {"anchor": anchor, "detail": "mu mismatch",
                     "fast": fast_val, "slow": slow_val})
    report.elapsed_seconds = time.time() - start
    return report
