"""Gonality invariants of an effective class with positive self-intersection.

The generic gonality of smooth curves in |L| is the minimum of three
quantities: twice the minimal isotropic pairing, the minimal pairing against
degree-4 classes of two-isotropic type (minus 2), and floor(L^2/4) + 2.
This module computes all three exactly, classifies the extremal lattice
shapes that make the second quantity small, and derives the interval the
minimal gonality over all smooth members must lie in.
"""

from __future__ import annotations

from dataclasses import dataclass

from .enumeration import EnumQuery, IsotropicWitness, enumerate_classes, min_pairing_isotropic
from .errors import CapTooSmall, InvalidInput, TheoremViolation
from .lattice import STANDARD, EnriquesLattice, as_vec, halve
from .linalg import Vec, ceil_sqrt

CASE_C_PAIRS = frozenset({(30, 5), (22, 4), (20, 4), (14, 3), (12, 3), (6, 2)})


@dataclass(frozen=True)
class MuWitness:
    """An effective B with B^2 = 4 and phi(B) = 2 realizing the mu minimum."""

    cls: Vec
    value: int  # B.L - 2
    splitting: tuple[Vec, Vec] | None = None  # B = F1 + F2 with F1.F2 = 2 when value < 2*phi


@dataclass(frozen=True)
class MuResult:
    kind: str  # "exact" | "lower_bound_only"
    value: int  # exact mu, or cap_used - 1 meaning mu > cap_used - 2
    witness: MuWitness | None
    cap_used: int


@dataclass(frozen=True)
class TypeTag:
    kind: str  # "mu1" | "mu2" | "mu3" | "two_d" | "general"
    h: int | None = None


@dataclass(frozen=True)
class GonalityReport:
    cls: Vec
    l_squared: int
    phi: IsotropicWitness
    mu: MuResult
    quarter_bound: int
    gengon: int
    case_tag: str  # "a" | "b" | "c" | "generic"
    type_tag: TypeTag
    mingon_interval: tuple[int, int]
    mingon_note: bool


def _require_positive_effective(cls, lattice) -> int:
    l2 = lattice.norm(cls)
    if l2 <= 0 or not lattice.is_num_effective(cls):
        raise InvalidInput(f"need an effective class with L^2 > 0, got L^2 = {l2}")
    return l2


def phi_of(cls, lattice: EnriquesLattice = STANDARD) -> int:
    return min_pairing_isotropic(cls, lattice).value


def _has_isotropic_pairing_one(cls, lattice) -> bool:
    cls = as_vec(cls)
    return lattice.cache(("phi_is_one", cls), lambda: bool(enumerate_classes(
        EnumQuery(cls, 0, 1, primitive_only=True, effective_only=True),
        lattice).solutions))


def mu_capped(cls, cap: int | None = None, lattice: EnriquesLattice = STANDARD) -> MuResult:
    """Minimal B.L - 2 over effective B with B^2 = 4, phi(B) = 2, B != L, up to B.L <= cap.

    The default cap 2*phi(L) + 2 decides both the gonality minimum (only
    values below 2*phi matter there) and exactness against the structural
    floor mu >= 2*phi - 2.  Returns a certified lower bound when no witness
    pairs within the cap.
    """
    cls = as_vec(cls)
    l2 = _require_positive_effective(cls, lattice)
    phi = phi_of(cls, lattice)
    if cap is None:
        cap = 2 * phi + 2
    if cap < 2 * phi:
        raise CapTooSmall(f"cap {cap} below 2*phi(L) = {2 * phi}")

    c_min = max(1, ceil_sqrt(4 * l2))  # index bound: (B.L)^2 >= B^2 * L^2
    for c in range(c_min, cap + 1):
        res = enumerate_classes(EnumQuery(cls, 4, c, effective_only=True), lattice)
        for b in res.solutions:  # lexicographic, so the first survivor is the witness
            if b == cls:
                continue
            if _has_isotropic_pairing_one(b, lattice):
                continue  # phi(B) = 1; for B^2 = 4 the only alternative to 2
            value = c - 2
            splitting = _mu_splitting(cls, b, phi, lattice) if value < 2 * phi else None
            return MuResult("exact", value, MuWitness(b, value, splitting), cap)
    return MuResult("lower_bound_only", cap - 1, None, cap)


def _mu_splitting(cls, b, phi, lattice) -> tuple[Vec, Vec]:
    # B = F1 + F2 with F1.F2 = 2, F1.L = phi, F2.L in {phi, phi+1}
    for f1 in enumerate_classes(
            EnumQuery(cls, 0, phi, primitive_only=True, effective_only=True),
            lattice).solutions:
        f2 = tuple(x - y for x, y in zip(b, f1))
        if lattice.norm(f2) != 0 or not lattice.is_num_effective(f2):
            continue
        if lattice.pairing(f1, f2) != 2:
            continue
        f2l = lattice.pairing(f2, cls)
        if f2l not in (phi, phi + 1):
            raise TheoremViolation(f"mu splitting with F2.L = {f2l} outside {{phi, phi+1}}")
        return f1, f2
    raise TheoremViolation(f"no isotropic splitting of the mu witness {b}")


def _is_double_of_ten(cls, lattice) -> bool:
    half = halve(cls)
    if half is None or lattice.norm(half) != 10:
        return False
    if not lattice.is_num_effective(half):
        return False
    return phi_of(half, lattice) == 3


def _classify(cls, l2: int, phi: int, lattice) -> tuple[str, TypeTag]:
    two_d = _is_double_of_ten(cls, lattice)
    if l2 == phi * phi:
        tag = TypeTag("mu1", phi // 2)
    elif l2 == phi * phi + phi - 2:
        if two_d:
            tag = TypeTag("two_d")
        elif phi % 2 == 1:
            tag = TypeTag("mu2", (phi - 1) // 2)
        else:
            tag = TypeTag("mu3", (phi - 2) // 2)
    else:
        tag = TypeTag("general")

    if tag.kind == "mu1":
        case = "a"
    elif l2 == phi * phi + phi - 2 and phi >= 3 and not two_d:
        case = "b"
    elif (l2, phi) in CASE_C_PAIRS:
        case = "c"
    else:
        case = "generic"
    return case, tag


def case_classify(cls, lattice: EnriquesLattice = STANDARD) -> tuple[str, TypeTag]:
    """Case tag of the gonality table plus the extremal type of the class."""
    cls = as_vec(cls)
    l2 = _require_positive_effective(cls, lattice)
    return _classify(cls, l2, phi_of(cls, lattice), lattice)


def case_table_gonality(case_tag: str, l2: int, phi: int) -> int:
    """Generic gonality read off the case table instead of the min formula.

    The (L^2, phi) = (4, 2) point is stated with the h >= 2 members of its
    family in the source table; there mu = 3 makes the value 2*phi - 1, not
    2*phi - 2, matching the min formula.
    """
    if case_tag == "a":
        return 3 if (l2, phi) == (4, 2) else 2 * phi - 2
    if case_tag == "b":
        return 2 * phi - 2 if phi in (3, 4) else 2 * phi - 1
    if case_tag == "c":
        return l2 // 4 + 2
    return 2 * phi


def _gonality_core(cls, lattice):
    cls = as_vec(cls)
    l2 = _require_positive_effective(cls, lattice)
    phi_witness = min_pairing_isotropic(cls, lattice)
    mu = mu_capped(cls, lattice=lattice)
    quarter = l2 // 4 + 2
    candidates = [2 * phi_witness.value, quarter]
    if mu.kind == "exact":
        candidates.append(mu.value)
    # a lower-bound-only mu exceeds 2*phi by the cap contract, so it never wins
    return cls, l2, phi_witness, mu, quarter, min(candidates)


def generic_gonality(cls, lattice: EnriquesLattice = STANDARD) -> GonalityReport:
    """Full report: phi, mu, quarter bound, their minimum, case tags, mingon interval."""
    cls, l2, phi_witness, mu, quarter, gengon = _gonality_core(cls, lattice)
    case, tag = _classify(cls, l2, phi_witness.value, lattice)
    interval, note = _mingon_from(gengon, l2, phi_witness.value)
    return GonalityReport(cls=cls, l_squared=l2, phi=phi_witness, mu=mu,
                          quarter_bound=quarter, gengon=gengon, case_tag=case,
                          type_tag=tag, mingon_interval=interval, mingon_note=note)


def _mingon_from(gengon: int, l2: int, phi: int) -> tuple[tuple[int, int], bool]:
    # dropping two below gengon requires phi >= ceil(sqrt(L^2/2)), i.e. 2*phi^2 >= L^2
    if 2 * phi * phi >= l2:
        return (gengon - 2, gengon), False
    return (gengon - 1, gengon), True


def mingon_bounds(cls, lattice: EnriquesLattice = STANDARD) -> tuple[tuple[int, int], bool]:
    """Interval containing the minimal gonality over smooth members, plus an
    exclusion flag set when the gengon - 2 endpoint is ruled out."""
    cls, l2, phi_witness, _, _, gengon = _gonality_core(cls, lattice)
    return _mingon_from(gengon, l2, phi_witness.value)
