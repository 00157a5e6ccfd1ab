"""The rank-10 even unimodular lattice U + E8(-1) and its basic operations.

Classes live in Num(S) of an unnodal Enriques surface, written as integer
coordinate vectors of length 10: coordinates 0-1 span a hyperbolic plane U
(basis e, f with e.f = 1), coordinates 2-9 carry the negated E8 root lattice.
Effectivity is the numerical surrogate valid on the unnodal model: a nonzero
class with nonnegative self-intersection is effective iff it pairs positively
with the fixed positive-cone representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .errors import InvalidInput
from .linalg import Vec, det_bareiss, mat_vec, symmetric_inertia, vec_gcd

RANK = 10

# E8 Dynkin diagram (Bourbaki numbering): chain 1-3-4-5-6-7-8 with 2 hung off 4.
_E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def standard_gram() -> tuple[tuple[int, ...], ...]:
    """Gram matrix of U + E8(-1) in the standard basis."""
    g = [[0] * RANK for _ in range(RANK)]
    g[0][1] = g[1][0] = 1
    for i in range(2, RANK):
        g[i][i] = -2
    for a, b in _E8_EDGES:
        g[a + 1][b + 1] = g[b + 1][a + 1] = 1
    return tuple(tuple(row) for row in g)


def as_vec(coords) -> Vec:
    v = tuple(int(c) for c in coords)
    if len(v) != RANK:
        raise InvalidInput(f"lattice classes have {RANK} coordinates, got {len(v)}")
    return v


ZERO: Vec = (0,) * RANK
E: Vec = as_vec([1] + [0] * 9)
F: Vec = as_vec([0, 1] + [0] * 8)


@dataclass(frozen=True)
class EnriquesLattice:
    """Ambient lattice: Gram matrix plus a positive-cone representative."""

    gram: tuple[tuple[int, ...], ...]
    reference_ample: Vec
    _caches: dict = field(default_factory=dict, repr=False, compare=False)

    def __init__(self, gram=None, reference_ample=None, validate=True):
        gram = standard_gram() if gram is None else tuple(tuple(int(x) for x in row) for row in gram)
        reference_ample = as_vec(reference_ample) if reference_ample is not None \
            else tuple(a + b for a, b in zip(E, F))
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "reference_ample", reference_ample)
        object.__setattr__(self, "_caches", {})
        if validate:
            self._validate()

    def _validate(self):
        g = self.gram
        if len(g) != RANK or any(len(row) != RANK for row in g):
            raise InvalidInput("Gram matrix must be 10x10")
        for i in range(RANK):
            if g[i][i] % 2 != 0:
                raise InvalidInput("lattice must be even")
            for j in range(RANK):
                if g[i][j] != g[j][i]:
                    raise InvalidInput("Gram matrix must be symmetric")
        if det_bareiss(g) not in (1, -1):
            raise InvalidInput("lattice must be unimodular")
        if symmetric_inertia(g) != (1, RANK - 1, 0):
            raise InvalidInput("lattice must have signature (1, 9)")
        if self.norm(self.reference_ample) <= 0:
            raise InvalidInput("reference ample class must have positive self-intersection")

    # -- basic pairings ----------------------------------------------------

    def pairing(self, x, y) -> int:
        x, y = as_vec(x), as_vec(y)
        g = self.gram
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = g[i]
                total += xi * sum(row[j] * y[j] for j in range(RANK) if y[j])
        return total

    def norm(self, x) -> int:
        return self.pairing(x, x)

    def gram_vector(self, x) -> Vec:
        """The functional y -> x.y as a plain integer vector."""
        return mat_vec(self.gram, as_vec(x))

    # -- predicates ---------------------------------------------------------

    def is_primitive(self, x) -> bool:
        x = as_vec(x)
        if x == ZERO:
            raise InvalidInput("the zero class is neither primitive nor imprimitive")
        return vec_gcd(x) == 1

    def is_num_effective(self, x) -> bool:
        x = as_vec(x)
        if x == ZERO:
            return False
        if self.norm(x) < 0:
            return False
        return self.pairing(x, self.reference_ample) > 0

    def primitive_part(self, x) -> tuple[int, Vec]:
        """(k, y) with x = k*y, y primitive, k > 0 for nonzero x."""
        x = as_vec(x)
        k = vec_gcd(x)
        if k == 0:
            raise InvalidInput("the zero class has no primitive part")
        return k, tuple(c // k for c in x)

    def cache(self, key, build):
        store = self._caches
        if key not in store:
            store[key] = build()
        return store[key]


STANDARD = EnriquesLattice()


def add(x, y) -> Vec:
    return tuple(a + b for a, b in zip(as_vec(x), as_vec(y)))


def sub(x, y) -> Vec:
    return tuple(a - b for a, b in zip(as_vec(x), as_vec(y)))


def scale(k: int, x) -> Vec:
    return tuple(k * a for a in as_vec(x))


def halve(x) -> Vec | None:
    """x/2 when every coordinate is even, else None."""
    x = as_vec(x)
    if any(c % 2 for c in x):
        return None
    return tuple(c // 2 for c in x)
