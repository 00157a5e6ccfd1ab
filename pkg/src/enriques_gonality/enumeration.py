"""Complete enumeration of classes with prescribed norm and pairings.

Every query (x^2 = s, x.L = c) with L^2 > 0 has finitely many solutions: the
coset {x : x.L = c} splits as a fixed shift plus a rank-9 negative definite
sublattice, which is enumerated by recursive coordinate bounding with exact
rational arithmetic.  The same machinery handles several simultaneous
pairing constraints as long as their span contains a positive-norm class.
Results are certified complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import InfeasibleQuery, InvalidAnchor, InvalidInput, OverflowGuard, TheoremViolation
from .lattice import STANDARD, EnriquesLattice, as_vec
from .linalg import (Vec, dot, integer_range, integral_affine_basis, ldl_decompose,
                     ldl_solve, vec_gcd)

# Loud failure instead of silent pathology: queries whose radius certificate
# exceeds this are rejected.
BOUND_CERTIFICATE_LIMIT = 2 ** 40


@dataclass(frozen=True)
class EnumQuery:
    anchor: Vec
    target_norm: int
    target_pairing: int
    primitive_only: bool = False
    effective_only: bool = False


@dataclass(frozen=True)
class EnumResult:
    solutions: tuple[Vec, ...]
    complete: bool = True


@dataclass(frozen=True)
class IsotropicWitness:
    """A primitive effective isotropic class together with its pairing against L."""

    cls: Vec
    value: int


def solve_shifted_form(d, mu, center, budget: Fraction, exact: bool, box=None):
    """All integer vectors t with Q(t - center) == budget (or <= when not exact).

    Q is the positive definite form with LDL data (d, mu); center is rational.
    Optional box clamps every coordinate to [-box, box].
    """
    n = len(d)
    out: list[tuple[int, ...]] = []
    t = [0] * n

    def recurse(i: int, remaining: Fraction, shifts):
        # shifts[j] = sum_{k>j} mu[j][k] * (t_k - center_k), valid for j <= i
        gamma = center[i] - shifts[i]
        lo, hi = integer_range(gamma, remaining / d[i])
        if box is not None:
            lo = max(lo, -box)
            hi = min(hi, box)
        for ti in range(lo, hi + 1):
            z = ti - gamma  # = (t_i - center_i) + sum_{k>i} mu[i][k] z_k
            used = d[i] * z * z
            if i == 0:
                if (used == remaining) if exact else (used <= remaining):
                    t[0] = ti
                    out.append(tuple(t))
                continue
            t[i] = ti
            zi = ti - center[i]
            nxt = list(shifts)
            for j in range(i):
                nxt[j] = shifts[j] + mu[j][i] * zi
            recurse(i - 1, remaining - used, nxt)

    if n == 0:
        if (budget == 0) if exact else (budget >= 0):
            out.append(())
        return out
    recurse(n - 1, budget, [Fraction(0)] * n)
    return out


class _CosetContext:
    """LDL data for the integer solutions of a pairing system, reused per norm."""

    def __init__(self, lattice: EnriquesLattice, rows, rhs):
        affine = integral_affine_basis(rows, rhs)
        self.empty = affine is None
        if self.empty:
            return
        x0, basis = affine
        self.x0 = x0
        self.basis = basis
        gram = lattice.gram
        n = len(x0)
        gb = [tuple(sum(gram[i][j] * b[j] for j in range(n)) for i in range(n)) for b in basis]
        gx0 = tuple(sum(gram[i][j] * x0[j] for j in range(n)) for i in range(n))
        self.k0 = dot(gx0, x0)
        self.w = [dot(gb[a], x0) for a in range(len(basis))]
        p = [[-dot(gb[a], basis[b]) for b in range(len(basis))] for a in range(len(basis))]
        if p:
            try:
                self.d, self.mu = ldl_decompose(p)
            except ArithmeticError as err:
                raise InvalidInput(
                    "pairing constraints do not span a positive-norm direction; "
                    "the residual form is not definite") from err
            self.center = ldl_solve(self.d, self.mu, self.w)

    def solutions(self, s: int):
        """All x in the coset with x^2 = s, unsorted."""
        if self.empty:
            return []
        x0, basis = self.x0, self.basis
        k = len(basis)
        if k == 0:
            return [x0] if self.k0 == s else []
        # x = x0 + B t; x^2 = k0 + 2 w.t - t^T P t with P positive definite
        budget = Fraction(self.k0 - s) + sum(self.center[a] * self.w[a] for a in range(k))
        if budget < 0:
            return []
        if budget > BOUND_CERTIFICATE_LIMIT:
            raise OverflowGuard(f"radius certificate {budget} exceeds 2^40")
        out = []
        n = len(x0)
        for t in solve_shifted_form(self.d, self.mu, self.center, budget, exact=True):
            x = tuple(x0[i] + sum(basis[a][i] * t[a] for a in range(k)) for i in range(n))
            out.append(x)
        return out


class _AnchorCoset:
    """Single-anchor specialization: one LDL per anchor serves every (s, c)."""

    def __init__(self, lattice: EnriquesLattice, anchor: Vec):
        v = lattice.gram_vector(anchor)
        self.g = vec_gcd(v)
        self.base = _CosetContext(lattice, [v], [self.g])

    def solutions(self, s: int, c: int):
        if c % self.g:
            return []
        base = self.base
        scale = c // self.g
        k = len(base.basis)
        shift = sum(base.center[a] * base.w[a] for a in range(k))
        budget = scale * scale * (Fraction(base.k0) + shift) - s
        if budget < 0:
            return []
        if budget > BOUND_CERTIFICATE_LIMIT:
            raise OverflowGuard(f"radius certificate {budget} exceeds 2^40")
        center = [scale * m for m in base.center]
        x0 = tuple(scale * t for t in base.x0)
        out = []
        n = len(x0)
        for t in solve_shifted_form(base.d, base.mu, center, budget, exact=True):
            x = tuple(x0[i] + sum(base.basis[a][i] * t[a] for a in range(k)) for i in range(n))
            out.append(x)
        return out


def enumerate_constrained(constraints, target_norm: int, lattice: EnriquesLattice = STANDARD,
                          primitive_only: bool = False, effective_only: bool = False) -> EnumResult:
    """All x with x^2 = target_norm and x.A_i = c_i for every (A_i, c_i) given.

    The constraint span must contain a positive-norm class (this makes the
    solution set finite); raises InvalidInput otherwise.
    """
    rows = [lattice.gram_vector(as_vec(a)) for a, _ in constraints]
    rhs = [c for _, c in constraints]
    ctx = _CosetContext(lattice, rows, rhs)
    sols = []
    for x in ctx.solutions(target_norm):
        assert lattice.norm(x) == target_norm
        if primitive_only and vec_gcd(x) != 1:
            continue
        if effective_only and not lattice.is_num_effective(x):
            continue
        sols.append(x)
    sols.sort()
    return EnumResult(solutions=tuple(sols))


def enumerate_classes(query: EnumQuery, lattice: EnriquesLattice = STANDARD) -> EnumResult:
    """All x with x^2 = target_norm and x.L = target_pairing, optionally filtered.

    Raises InvalidAnchor when L^2 <= 0 and InfeasibleQuery when the index
    bound s*L^2 > c^2 already rules out real solutions.
    """
    anchor = as_vec(query.anchor)
    s, c = query.target_norm, query.target_pairing
    l2 = lattice.norm(anchor)
    if l2 <= 0:
        raise InvalidAnchor(f"anchor has L^2 = {l2} <= 0")
    if c < 1:
        raise InvalidInput(f"target pairing must be >= 1, got {c}")
    if s * l2 > c * c:
        raise InfeasibleQuery(f"norm {s} with pairing {c} violates the index bound for L^2 = {l2}")
    if s % 2 != 0:
        return EnumResult(solutions=())

    ctx = lattice.cache(("anchor_coset", anchor), lambda: _AnchorCoset(lattice, anchor))
    sols = []
    for x in ctx.solutions(s, c):
        # index-theorem consistency: the verified norm/pairing imply s*L^2 <= c^2
        assert lattice.pairing(x, anchor) == c and lattice.norm(x) == s
        if query.primitive_only and vec_gcd(x) != 1:
            continue
        if query.effective_only and not lattice.is_num_effective(x):
            continue
        sols.append(x)
    sols.sort()
    return EnumResult(solutions=tuple(sols))


def min_pairing_isotropic(cls, lattice: EnriquesLattice = STANDARD) -> IsotropicWitness:
    """The minimal pairing of an effective L, L^2 > 0, against effective isotropics.

    Tries pairings 1, 2, ... and stops at the first realized one; termination
    is guaranteed because the minimum squared never exceeds L^2.
    """
    anchor = as_vec(cls)
    l2 = lattice.norm(anchor)
    if l2 <= 0 or not lattice.is_num_effective(anchor):
        raise InvalidInput("minimal isotropic pairing needs an effective class with L^2 > 0")

    def compute():
        for c in range(1, isqrt(l2) + 1):
            res = enumerate_classes(
                EnumQuery(anchor, 0, c, primitive_only=True, effective_only=True), lattice)
            if res.solutions:
                return IsotropicWitness(res.solutions[0], c)
        raise TheoremViolation(f"no isotropic pairing <= sqrt(L^2) found for {anchor}")

    return lattice.cache(("phi", anchor), compute)
