"""Deterministic iteration over effective classes in a coordinate box."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .enumeration import solve_shifted_form
from .lattice import RANK, STANDARD, EnriquesLattice, standard_gram
from .linalg import ldl_decompose

_STANDARD_GRAM = standard_gram()


def effective_classes(radius: int, lattice: EnriquesLattice = STANDARD,
                      l2_min: int = 1, l2_max: int | None = None):
    """Yield every effective class with L^2 >= l2_min and sup-norm <= radius.

    The standard basis admits a fast split (hyperbolic coordinates force
    a, b >= 1, the rest is a definite-form enumeration); any other Gram
    matrix falls back to a raw box scan.
    """
    if lattice.gram == _STANDARD_GRAM and lattice.reference_ample == (1, 1) + (0,) * 8:
        yield from _split_iteration(radius, lattice, l2_min, l2_max)
    else:
        for coords in product(range(-radius, radius + 1), repeat=RANK):
            n = lattice.norm(coords)
            if n < l2_min or (l2_max is not None and n > l2_max):
                continue
            if lattice.is_num_effective(coords):
                yield coords


def _negated_tail_ldl(lattice):
    block = [[-lattice.gram[i][j] for j in range(2, RANK)] for i in range(2, RANK)]
    return ldl_decompose(block)


def _split_iteration(radius, lattice, l2_min, l2_max):
    d, mu = lattice.cache("tail_ldl", lambda: _negated_tail_ldl(lattice))
    zero_center = [Fraction(0)] * (RANK - 2)
    for a in range(1, radius + 1):
        for b in range(1, radius + 1):
            budget = 2 * a * b - l2_min
            if budget < 0:
                continue
            tails = solve_shifted_form(d, mu, zero_center, Fraction(budget),
                                       exact=False, box=radius)
            for t in sorted(tails):
                cls = (a, b) + t
                n = lattice.norm(cls)
                if n < l2_min or (l2_max is not None and n > l2_max):
                    continue
                yield cls
