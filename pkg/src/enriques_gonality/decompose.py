"""Witness-producing decompositions into primitive effective isotropic classes.

Every effective class with nonnegative self-intersection splits as an
integer combination of at most ten isotropic classes whose pairwise pairings
follow one of three patterns (all ones; one pair equal to 2; two pairs equal
to 2 sharing a class).  The searches here produce such witnesses and verify
them exactly before returning; nothing is trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .enumeration import (EnumQuery, enumerate_classes, enumerate_constrained,
                          min_pairing_isotropic)
from .errors import (DecompositionNotFound, InvalidInput, InvalidPattern, TheoremViolation,
                     UnsatisfiablePairingSpec)
from .lattice import RANK, STANDARD, EnriquesLattice, as_vec, halve, scale, sub
from .linalg import Vec, symmetric_inertia

ALL_ONES = "all_ones"
ONE_DOUBLE = "one_double"
TWO_DOUBLES = "two_doubles"
CUSTOM = "custom"  # pattern searches may target Gram shapes beyond the three canonical ones


@dataclass(frozen=True)
class GramPattern:
    """Target pairing data for a pattern search: coefficients plus a Gram matrix
    with zero diagonal (the classes searched for are isotropic)."""

    coefficients: tuple[int, ...]
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.coefficients)
        if n == 0 or any(a < 1 for a in self.coefficients):
            raise InvalidPattern("coefficients must be positive")
        if len(self.gram) != n or any(len(row) != n for row in self.gram):
            raise InvalidPattern("Gram matrix shape must match the coefficients")
        for i in range(n):
            if self.gram[i][i] != 0:
                raise InvalidPattern("diagonal must be zero (classes are isotropic)")
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise InvalidPattern("Gram matrix must be symmetric")
                if self.gram[i][j] < 0:
                    raise InvalidPattern("pairings of effective isotropics are nonnegative")

    def forced_pairings(self) -> tuple[int, ...]:
        """E_i.L forced by Sum a_j E_j = L: row sums weighted by coefficients."""
        n = len(self.coefficients)
        return tuple(sum(self.coefficients[j] * self.gram[i][j] for j in range(n))
                     for i in range(n))


@dataclass(frozen=True)
class Decomposition:
    coefficients: tuple[int, ...]
    classes: tuple[Vec, ...]
    pattern: str  # ALL_ONES | ONE_DOUBLE | TWO_DOUBLES


@dataclass(frozen=True)
class IsotropicFrame:
    classes: tuple[Vec, ...]  # ten classes, pairwise pairing 1, summing to 3D


@dataclass(frozen=True)
class ExtremalCase:
    case: str  # "i" | "ii_a" | "ii_b" | "ii_c"
    h: int
    witnesses: tuple[Vec, ...]  # (E1, E2) for case i, else (E1, E2, E3)


def pattern_gram(kind: str, n: int) -> tuple[tuple[int, ...], ...]:
    g = [[1] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 0
    if kind == ONE_DOUBLE:
        if n < 2:
            raise InvalidPattern("one_double needs n >= 2")
        g[0][1] = g[1][0] = 2
    elif kind == TWO_DOUBLES:
        if n < 3:
            raise InvalidPattern("two_doubles needs n >= 3")
        g[0][1] = g[1][0] = 2
        g[0][2] = g[2][0] = 2
    elif kind != ALL_ONES:
        raise InvalidPattern(f"unknown pattern kind {kind!r}")
    return tuple(tuple(row) for row in g)


def _pattern_kind(gram) -> str | None:
    n = len(gram)
    twos = sorted((i, j) for i in range(n) for j in range(i + 1, n) if gram[i][j] == 2)
    if any(gram[i][j] not in (1, 2) for i in range(n) for j in range(i + 1, n)):
        return None
    if not twos:
        return ALL_ONES
    if twos == [(0, 1)]:
        return ONE_DOUBLE
    if twos == [(0, 1), (0, 2)]:
        return TWO_DOUBLES
    return None


def verify_decomposition(cls, dec: Decomposition, lattice: EnriquesLattice = STANDARD,
                         gram=None) -> bool:
    """Exact recomposition plus full Gram check; the only trusted exit."""
    cls = as_vec(cls)
    n = len(dec.coefficients)
    if n > RANK or n != len(dec.classes):
        return False
    actual = [[lattice.pairing(a, b) for b in dec.classes] for a in dec.classes]
    if gram is not None:
        for i in range(n):
            for j in range(n):
                if i != j and actual[i][j] != gram[i][j]:
                    return False
    elif _pattern_kind([[actual[i][j] if i != j else 0 for j in range(n)]
                        for i in range(n)]) != dec.pattern:
        return False
    total = (0,) * RANK
    for a, e in zip(dec.coefficients, dec.classes):
        if a < 1 or lattice.norm(e) != 0:
            return False
        if not (lattice.is_num_effective(e) and lattice.is_primitive(e)):
            return False
        total = tuple(t + a * x for t, x in zip(total, e))
    return total == cls


def search_pattern(cls, pattern: GramPattern, budget: int | None = None,
                   lattice: EnriquesLattice = STANDARD) -> Decomposition | None:
    """Backtracking search for isotropic classes matching the pattern with
    Sum coeff_i E_i = L, or None when none exist within the budget.

    Each slot's pairing against L is forced by the pattern, so candidates come
    from single enumeration queries; lexicographically first assignment wins.
    """
    cls = as_vec(cls)
    l2 = lattice.norm(cls)
    if l2 <= 0 or not lattice.is_num_effective(cls):
        raise InvalidInput("pattern search needs an effective class with L^2 > 0")
    if budget is None:
        budget = l2
    kind = _pattern_kind(pattern.gram)
    forced = pattern.forced_pairings()
    n = len(forced)
    if any(c < 1 or c > budget for c in forced):
        return None
    target_half = sum(pattern.coefficients[i] * pattern.coefficients[j] * pattern.gram[i][j]
                      for i in range(n) for j in range(i + 1, n))
    if 2 * target_half != l2:
        return None

    pools = {}
    for c in set(forced):
        res = enumerate_classes(EnumQuery(cls, 0, c, primitive_only=True, effective_only=True),
                                lattice)
        pools[c] = res.solutions

    chosen: list[Vec] = []

    def extend(i: int) -> bool:
        if i == n:
            return True
        for cand in pools[forced[i]]:
            if all(lattice.pairing(cand, chosen[j]) == pattern.gram[i][j] for j in range(i)):
                chosen.append(cand)
                if extend(i + 1):
                    return True
                chosen.pop()
        return False

    if not extend(0):
        return None
    dec = Decomposition(tuple(pattern.coefficients), tuple(chosen), kind or CUSTOM)
    if not verify_decomposition(cls, dec, lattice, gram=pattern.gram):
        raise TheoremViolation(f"pattern search produced an invalid decomposition for {cls}")
    return dec


def _coefficient_vectors(n: int, gram, target_half: int):
    """All positive coefficient vectors with sum_{i<j} a_i a_j gram[i][j] = target."""
    out = []
    coeffs = [1] * n

    def min_rest(i: int, a: int) -> int:
        # smallest contribution of the pairs not yet fixed, all later coeffs at 1
        total = 0
        for p in range(i + 1, n):
            for q in range(p):
                cq = coeffs[q] if q < i else (a if q == i else 1)
                total += cq * gram[p][q]
        return total

    def rec(i: int, partial: int):
        if i == n:
            if partial == target_half:
                out.append(tuple(coeffs))
            return
        a = 1
        while True:
            add = a * sum(coeffs[j] * gram[i][j] for j in range(i))
            low = partial + add + min_rest(i, a)
            if low > target_half:
                break  # both add and min_rest grow with a (n >= 2, entries >= 1)
            coeffs[i] = a
            rec(i + 1, partial + add)
            coeffs[i] = 1
            a += 1

    if n >= 2:
        rec(0, 0)
    elif target_half == 0:
        out.append((1,))
    return out


def isotropic_decompose(cls, lattice: EnriquesLattice = STANDARD) -> Decomposition:
    """Split an effective class with L^2 >= 0 into isotropic summands.

    Greedy reduction by a minimal-pairing isotropic class, with the merges the
    inductive argument provides; if a merge step does not apply, falls back to
    an exhaustive search over the three target patterns.  The result is always
    verified before being returned.
    """
    cls = as_vec(cls)
    l2 = lattice.norm(cls)
    if l2 < 0 or not lattice.is_num_effective(cls):
        raise InvalidInput("decomposition needs an effective class with L^2 >= 0")

    if l2 == 0:
        k, prim = lattice.primitive_part(cls)
        return Decomposition((k,), (prim,), ALL_ONES)

    f = min_pairing_isotropic(cls, lattice).cls
    rest = sub(cls, f)
    if lattice.norm(rest) >= 0 and lattice.is_num_effective(rest):
        subdec = isotropic_decompose(rest, lattice)
        merged = _merge(f, subdec, lattice)
        if merged is not None and verify_decomposition(cls, merged, lattice):
            return merged
    return _pattern_fallback(cls, l2, lattice)


def _merge(f: Vec, dec: Decomposition, lattice) -> Decomposition | None:
    classes = list(dec.classes)
    coeffs = list(dec.coefficients)
    if f in classes:
        i = classes.index(f)
        coeffs[i] += 1
        return Decomposition(tuple(coeffs), tuple(classes), dec.pattern)
    pv = [lattice.pairing(f, e) for e in classes]
    n = len(classes)
    if all(p == 1 for p in pv) and n + 1 <= RANK:
        return Decomposition(tuple(coeffs) + (1,), tuple(classes) + (f,), dec.pattern)
    twos = [i for i, p in enumerate(pv) if p == 2]
    rest_ones = all(p == 1 for i, p in enumerate(pv) if i not in twos)
    if not rest_ones:
        return None
    if dec.pattern == ALL_ONES and len(twos) == 1:
        i = twos[0]
        order = [n, i] + [j for j in range(n) if j != i]  # f first, doubled partner second
        new_classes = [f] + [classes[j] for j in order[1:]]
        new_coeffs = [1] + [coeffs[j] for j in order[1:]]
        return Decomposition(tuple(new_coeffs), tuple(new_classes), ONE_DOUBLE)
    if dec.pattern == ALL_ONES and len(twos) == 2:
        i, j = twos
        others = [k for k in range(n) if k not in (i, j)]
        new_classes = [f, classes[i], classes[j]] + [classes[k] for k in others]
        new_coeffs = [1, coeffs[i], coeffs[j]] + [coeffs[k] for k in others]
        return Decomposition(tuple(new_coeffs), tuple(new_classes), TWO_DOUBLES)
    if dec.pattern == ONE_DOUBLE and len(twos) == 1 and twos[0] in (0, 1):
        i = twos[0]
        partner = 1 - i
        others = list(range(2, n))
        new_classes = [classes[i], classes[partner], f] + [classes[k] for k in others]
        new_coeffs = [coeffs[i], coeffs[partner], 1] + [coeffs[k] for k in others]
        return Decomposition(tuple(new_coeffs), tuple(new_classes), TWO_DOUBLES)
    return None


def _pattern_fallback(cls, l2: int, lattice) -> Decomposition:
    target_half = l2 // 2
    for kind, n_min in ((ALL_ONES, 2), (ONE_DOUBLE, 2), (TWO_DOUBLES, 3)):
        for n in range(n_min, RANK + 1):
            gram = pattern_gram(kind, n)
            for coeffs in _coefficient_vectors(n, gram, target_half):
                dec = search_pattern(cls, GramPattern(coeffs, gram), lattice=lattice)
                if dec is not None:
                    return dec
    raise DecompositionNotFound(f"no isotropic decomposition found for {cls}; "
                                "this contradicts the structure theorem")


def ten_frame(cls, lattice: EnriquesLattice = STANDARD) -> IsotropicFrame:
    """The ten pairwise-pairing-one isotropic classes summing to 3D for D^2 = 10,
    minimal isotropic pairing 3."""
    d = as_vec(cls)
    if lattice.norm(d) != 10 or not lattice.is_num_effective(d):
        raise InvalidInput("ten_frame needs an effective class with D^2 = 10")
    if min_pairing_isotropic(d, lattice).value != 3:
        raise InvalidInput("ten_frame needs minimal isotropic pairing 3")
    res = enumerate_classes(EnumQuery(d, 0, 3, primitive_only=True, effective_only=True),
                            lattice)
    frame = res.solutions
    if len(frame) != 10:
        raise TheoremViolation(f"expected exactly 10 isotropics pairing 3 with D, got {len(frame)}")
    for a, b in combinations(frame, 2):
        if lattice.pairing(a, b) != 1:
            raise TheoremViolation("frame classes must pair to 1")
    total = tuple(sum(e[i] for e in frame) for i in range(RANK))
    if total != scale(3, d):
        raise TheoremViolation("frame does not sum to 3D")
    return IsotropicFrame(frame)


def extremal_decompose(cls, lattice: EnriquesLattice = STANDARD) -> ExtremalCase:
    """Witnesses for classes on the boundary of the positive cone, where
    L^2 <= phi^2 + phi - 2."""
    cls = as_vec(cls)
    l2 = lattice.norm(cls)
    if l2 <= 0 or not lattice.is_num_effective(cls):
        raise InvalidInput("extremal decomposition needs an effective class with L^2 > 0")
    phi = min_pairing_isotropic(cls, lattice).value
    if l2 > phi * phi + phi - 2:
        raise InvalidInput(f"L^2 = {l2} exceeds phi^2 + phi - 2 = {phi * phi + phi - 2}")
    if phi * phi < l2 < phi * phi + phi - 2:
        raise TheoremViolation(f"class in the forbidden gap: L^2 = {l2}, phi = {phi}")

    pair_gram = ((0, 2), (2, 0))
    triple_gram = ((0, 2, 2), (2, 0, 1), (2, 1, 0))
    if l2 == phi * phi:
        h = phi // 2
        dec = search_pattern(cls, GramPattern((h, h), pair_gram), lattice=lattice)
        if dec is None:
            raise TheoremViolation(f"no h(E1+E2) witness for L^2 = phi^2 class {cls}")
        return ExtremalCase("i", h, dec.classes)
    half = halve(cls)
    if half is not None and lattice.norm(half) == 10 \
            and lattice.is_num_effective(half) \
            and min_pairing_isotropic(half, lattice).value == 3:
        dec = search_pattern(cls, GramPattern((2, 2, 2), triple_gram), lattice=lattice)
        if dec is None:
            raise TheoremViolation(f"no 2(E1+E2+E3) witness for {cls}")
        return ExtremalCase("ii_c", 2, dec.classes)
    if phi % 2 == 1:
        h = (phi - 1) // 2
        dec = search_pattern(cls, GramPattern((h, h, 1), triple_gram), lattice=lattice)
        if dec is None:
            raise TheoremViolation(f"no h(E1+E2)+E3 witness for {cls}")
        return ExtremalCase("ii_a", h, dec.classes)
    h = (phi - 2) // 2
    dec = search_pattern(cls, GramPattern((h + 1, h, 1), triple_gram), lattice=lattice)
    if dec is None:
        raise TheoremViolation(f"no (h+1)E1+hE2+E3 witness for {cls}")
    return ExtremalCase("ii_b", h, dec.classes)


# ---------------------------------------------------------------------------
# free-standing realization of pairing specs (used by the expression DSL)

_REALIZE_DEPTHS = (1, 2, 3, 4, 6, 8, 12, 16, 24, 32)


def realize_isotropic_tuple(gram, fixed=None, lattice: EnriquesLattice = STANDARD,
                            max_depth: int = 32) -> tuple[Vec, ...]:
    """Primitive effective isotropic classes with the prescribed pairing matrix.

    fixed maps slot index -> (class, pairings-to-slots) for constraints against
    already-known classes.  Deterministic: candidates are ordered by pairing
    against the reference ample class, then lexicographically, and the search
    deepens iteratively, so the minimal solution in that order is returned.
    """
    n = len(gram)
    fixed = fixed or {}
    for i in range(n):
        for j in range(n):
            if gram[i][j] != gram[j][i]:
                raise UnsatisfiablePairingSpec("pairing spec must be symmetric", proven=True)
            if i == j and gram[i][j] != 0:
                raise UnsatisfiablePairingSpec(
                    "isotropic classes pair to 0 with themselves", proven=True)
            if i != j and gram[i][j] < 1:
                raise UnsatisfiablePairingSpec(
                    f"distinct effective isotropics pair to a positive integer, got {gram[i][j]}",
                    proven=True)
    if n > RANK:
        raise UnsatisfiablePairingSpec("more isotropic classes than the lattice rank", proven=True)
    pos, _, _ = symmetric_inertia([list(row) for row in gram])
    if pos > 1:
        raise UnsatisfiablePairingSpec(
            "pairing matrix needs more than one positive eigenvalue; "
            "impossible in signature (1, 9)", proven=True)

    ample = lattice.reference_ample
    chosen: list[Vec] = []

    def slot_candidates(i: int, depth: int):
        # exact-fit isotropics: prescribed pairings against every chosen class
        # and the fixed references, swept by ample-pairing depth
        for d in range(1, depth + 1):
            constraints = [(ample, d)]
            constraints += [(chosen[j], gram[i][j]) for j in range(i)]
            constraints += [(other, val) for other, val in fixed.get(i, ())]
            res = enumerate_constrained(constraints, 0, lattice,
                                        primitive_only=True, effective_only=True)
            yield from res.solutions

    def extend(i: int, depth: int) -> bool:
        if i == n:
            return True
        for cand in slot_candidates(i, depth):
            chosen.append(cand)
            if extend(i + 1, depth):
                return True
            chosen.pop()
        return False

    for depth in _REALIZE_DEPTHS:
        if depth > max_depth:
            break
        chosen.clear()
        if extend(0, depth):
            return tuple(chosen)
    raise UnsatisfiablePairingSpec(
        f"no witnesses found within search depth {max_depth}; "
        "the spec may be unsatisfiable or simply deep", proven=False)
