"""Desk-scale falsification sweeps for the structure theorems.

Every effective class in a coordinate box (plus a set of injected
constructions guaranteeing each extremal shape is represented) is run
through the selected checks; a theorem holds on the region iff its
counterexample list is empty.  Failures are data, not exceptions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .decompose import extremal_decompose
from .errors import LatticeError
from .invariants import _classify, case_table_gonality, mu_capped
from .enumeration import min_pairing_isotropic
from .lattice import STANDARD, EnriquesLattice, as_vec
from .linalg import Vec
from .regions import effective_classes

ALL_CHECKS = ("poscone_gap", "mu_iff", "value_table", "gengon_table",
              "phi_bound", "mu_floor", "coherence")

_EXTREMAL_TO_TYPE = {"i": "mu1", "ii_a": "mu2", "ii_b": "mu3", "ii_c": "two_d"}

# Constructions keeping every extremal shape and every case-(c) pair in the
# tested set regardless of the region: the two-isotropic types for small h,
# the doubled degree-10 class, and one witness per case-(c) pair.
FIXTURES = (
    ("mu1_h1", "let A,B = isotropic(A.B=2); A+B", 4, 2),
    ("mu1_h2", "let A,B = isotropic(A.B=2); 2*A+2*B", 16, 4),
    ("mu1_h3", "let A,B = isotropic(A.B=2); 3*A+3*B", 36, 6),
    ("mu2_h1", "let E1,E2,E3 = isotropic(E1.E2=2, E1.E3=2, E2.E3=1); E1+E2+E3", 10, 3),
    ("mu2_h2", "let E1,E2,E3 = isotropic(E1.E2=2, E1.E3=2, E2.E3=1); 2*E1+2*E2+E3", 28, 5),
    ("mu3_h1", "let E1,E2,E3 = isotropic(E1.E2=2, E1.E3=2, E2.E3=1); 2*E1+E2+E3", 18, 4),
    ("mu3_h2", "let E1,E2,E3 = isotropic(E1.E2=2, E1.E3=2, E2.E3=1); 3*E1+2*E2+E3", 40, 6),
    ("two_d", "let E1,E2,E3 = isotropic(E1.E2=2, E1.E3=2, E2.E3=1); 2*E1+2*E2+2*E3", 40, 6),
    ("case_c_6_2", "let A,B,C = isotropic(A.B=1, A.C=1, B.C=1); A+B+C", 6, 2),
    ("case_c_12_3",
     "let A,B,C,D = isotropic(A.B=1, A.C=1, A.D=1, B.C=1, B.D=1, C.D=1); A+B+C+D", 12, 3),
    ("case_c_14_3", "let E,A,B = isotropic(E.A=1, E.B=2, A.B=1); 2*E+A+B", 14, 3),
    ("case_c_20_4",
     "let A,B,C,D,G = isotropic(A.B=1, A.C=1, A.D=1, A.G=1, B.C=1, B.D=1, B.G=1, "
     "C.D=1, C.G=1, D.G=1); A+B+C+D+G", 20, 4),
    ("case_c_22_4",
     "let E,A,B,C = isotropic(E.A=2, E.B=1, E.C=1, A.B=1, A.C=1, B.C=1); 2*E+A+B+C", 22, 4),
    ("case_c_30_5",
     "let E,A,B,C = isotropic(E.A=1, E.B=1, E.C=3, A.B=1, A.C=2, B.C=2); 2*E+A+B+C", 30, 5),
)


@dataclass(frozen=True)
class SweepSpec:
    radius: int
    checks: tuple[str, ...] = ALL_CHECKS
    l2_max: int | None = None
    include_fixtures: bool = True

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("region radius must be >= 1")
        if not self.checks:
            raise ValueError("select at least one check")
        for ch in self.checks:
            if ch not in ALL_CHECKS:
                raise ValueError(f"unknown check {ch!r}; known: {ALL_CHECKS}")


@dataclass
class SweepReport:
    spec: SweepSpec
    counters: dict  # check -> {"tested": int, "passed": int, "failed": int}
    counterexamples: list[dict] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)
    coverage: dict = field(default_factory=dict)
    classes_tested: int = 0
    fixtures_injected: int = 0
    elapsed_seconds: float = 0.0

    @property
    def total_failed(self) -> int:
        return sum(v["failed"] for v in self.counters.values())


def fixture_classes(lattice: EnriquesLattice = STANDARD) -> list[tuple[str, Vec]]:
    """Resolve the injected constructions once and pin their (L^2, phi)."""
    def build():
        from .dsl import parse_class
        out = []
        for name, text, l2, phi in FIXTURES:
            cls = parse_class(text, lattice=lattice).resolved
            got_l2 = lattice.norm(cls)
            got_phi = min_pairing_isotropic(cls, lattice).value
            if (got_l2, got_phi) != (l2, phi):
                raise AssertionError(
                    f"fixture {name} resolved to (L^2, phi) = ({got_l2}, {got_phi}), "
                    f"wanted ({l2}, {phi})")
            out.append((name, cls))
        return out
    return lattice.cache("verify_fixtures", build)


def _evaluate(cls: Vec, checks, lattice):
    """Run the selected checks on one class.

    Returns (results, warnings, coverage_key) where results maps check name to
    None (not applicable), True (pass) or a failure-detail dict.
    """
    results: dict[str, object] = {}
    warnings: list[dict] = []
    l2 = lattice.norm(cls)
    phi = min_pairing_isotropic(cls, lattice).value
    mu = mu_capped(cls, lattice=lattice)
    case, tag = _classify(cls, l2, phi, lattice)
    mu_exact = mu.kind == "exact"
    mu_below_2phi = mu_exact and mu.value < 2 * phi  # cap >= 2*phi decides this

    if "phi_bound" in checks:
        results["phi_bound"] = True if phi * phi <= l2 else {"phi": phi, "l2": l2}
    if "poscone_gap" in checks:
        in_gap = phi * phi < l2 < phi * phi + phi - 2
        results["poscone_gap"] = {"phi": phi, "l2": l2} if in_gap else True
    if "mu_floor" in checks:
        ok = mu.value >= 2 * phi - 2
        results["mu_floor"] = True if ok else {"mu": mu.value, "phi": phi}
    if "mu_iff" in checks:
        if (l2, phi) == (4, 2):
            results["mu_iff"] = None  # excluded by the classification's hypothesis
        else:
            extremal_type = tag.kind in ("mu1", "mu2", "mu3")
            if mu_below_2phi != extremal_type:
                results["mu_iff"] = {"mu": mu.value if mu_exact else f">{mu.cap_used - 2}",
                                     "phi": phi, "type": tag.kind}
            else:
                results["mu_iff"] = True
    if "value_table" in checks:
        expected = None
        if tag.kind == "mu1" and tag.h is not None and tag.h >= 2:
            expected = 2 * phi - 2
        elif tag.kind in ("mu2", "mu3"):
            expected = 2 * phi - 1
        if expected is None:
            results["value_table"] = None
        elif mu_exact and mu.value == expected:
            results["value_table"] = True
        else:
            results["value_table"] = {"type": tag.kind, "h": tag.h, "expected_mu": expected,
                                      "mu": mu.value if mu_exact else f">{mu.cap_used - 2}"}
    if "gengon_table" in checks:
        quarter = l2 // 4 + 2
        candidates = [2 * phi, quarter] + ([mu.value] if mu_exact else [])
        gengon = min(candidates)
        table = case_table_gonality(case, l2, phi)
        results["gengon_table"] = True if gengon == table else \
            {"formula": gengon, "table": table, "case": case}
    if "coherence" in checks:
        if l2 == phi * phi or l2 == phi * phi + phi - 2:
            try:
                ext = extremal_decompose(cls, lattice)
                ok = _EXTREMAL_TO_TYPE[ext.case] == tag.kind
                results["coherence"] = True if ok else \
                    {"extremal_case": ext.case, "type": tag.kind}
            except LatticeError as err:
                results["coherence"] = {"error": str(err)}
        else:
            results["coherence"] = None

    if (l2, phi) == (4, 2) and (not mu_exact or mu.value != 3):
        warnings.append({"cls": cls, "note": "expected mu = 3 at (L^2, phi) = (4, 2)",
                         "mu": mu.value if mu_exact else f">{mu.cap_used - 2}"})
    return results, warnings, (case, tag.kind)


def run_sweep(spec: SweepSpec, lattice: EnriquesLattice = STANDARD,
              threads: int = 1) -> SweepReport:
    """Evaluate the selected checks on every effective class of the region
    (plus the injected fixtures); report counters and counterexamples."""
    start = time.time()
    counters = {ch: {"tested": 0, "passed": 0, "failed": 0} for ch in spec.checks}
    report = SweepReport(spec=spec, counters=counters)
    coverage_cases: dict[str, int] = {}
    coverage_types: dict[str, int] = {}

    work: list[tuple[str | None, Vec]] = [
        (None, cls) for cls in effective_classes(spec.radius, lattice, l2_max=spec.l2_max)]
    if spec.include_fixtures:
        fixtures = fixture_classes(lattice)
        seen = {cls for _, cls in work}
        for name, cls in fixtures:
            if cls not in seen:
                work.append((name, cls))
                report.fixtures_injected += 1

    if threads > 1:
        rows = _parallel_evaluate(work, spec, lattice, threads)
    else:
        rows = (_safe_evaluate(item, spec.checks, lattice) for item in work)

    for (name, cls), (results, warnings, cov, error) in zip(work, rows):
        report.classes_tested += 1
        if error is not None:
            for ch in spec.checks:
                counters[ch]["tested"] += 1
                counters[ch]["failed"] += 1
            report.counterexamples.append(
                {"cls": list(cls), "check": "evaluation", "detail": error,
                 "fixture": name})
            continue
        case, kind = cov
        coverage_cases[case] = coverage_cases.get(case, 0) + 1
        coverage_types[kind] = coverage_types.get(kind, 0) + 1
        for ch in spec.checks:
            outcome = results.get(ch)
            if outcome is None:
                continue
            counters[ch]["tested"] += 1
            if outcome is True:
                counters[ch]["passed"] += 1
            else:
                counters[ch]["failed"] += 1
                report.counterexamples.append(
                    {"cls": list(cls), "check": ch, "detail": outcome, "fixture": name})
        report.warnings.extend(
            {**w, "cls": list(w["cls"])} for w in warnings)

    report.counterexamples.sort(key=lambda r: (r["check"], r["cls"]))
    report.coverage = {"case_tags": dict(sorted(coverage_cases.items())),
                       "types": dict(sorted(coverage_types.items()))}
    report.elapsed_seconds = time.time() - start
    return report


def _safe_evaluate(item, checks, lattice):
    _, cls = item
    try:
        results, warnings, cov = _evaluate(cls, checks, lattice)
        return results, warnings, cov, None
    except (LatticeError, ArithmeticError, AssertionError) as err:
        return {}, [], None, f"{type(err).__name__}: {err}"


def _parallel_worker(args):
    coords, checks = args
    return _safe_evaluate((None, as_vec(coords)), checks, STANDARD)


def _parallel_evaluate(work, spec, lattice, threads):
    if lattice is not STANDARD:
        raise ValueError("parallel sweeps only support the standard lattice")
    import multiprocessing as mp
    with mp.Pool(threads) as pool:
        args = [(cls, spec.checks) for _, cls in work]
        return pool.map(_parallel_worker, args, chunksize=64)
