"""
End-to-end implication checks: hypothesis margin, conclusion margin and the
status they imply, over whole corpora and in a seeded sharpness search.
"""
from __future__ import annotations

import logging
import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from strohhacker import config, thresholds
from strohhacker.corpus import (
    build_corpus,
    from_entry,
    generate,
    local_valence_guard,
    merge,
    unit_guard,
)
from strohhacker.errors import (
    ClassMismatch,
    DomainError,
    NotLocallyValent,
    StrohhackerError,
    UnitVanishes,
)
from strohhacker.functionals import pointwise_check
from strohhacker.schemas import (
    CaseSummary,
    Condition,
    CorpusEntry,
    CorpusManifest,
    DiskGrid,
    FamilyId,
    FamilySpec,
    FunctionalKind,
    ImplicationCase,
    SharpnessResult,
    Status,
    SuiteReport,
    TheoremId,
    VerificationReport,
)
from strohhacker.series import LEAD_TOL, MultivalentFunction, PowerSeries

logger = logging.getLogger(__name__)

PENALTY_WEIGHT = 1e3
RECHECK_FACTOR = 4
RECHECK_EXTRA_ORDER = 16

CONVEXITY, STARLIKENESS = FunctionalKind.CONVEXITY, FunctionalKind.STARLIKENESS
SQRT, RATIO = FunctionalKind.SQRT_DERIVATIVE, FunctionalKind.POWER_RATIO

# theorem -> (hypothesis functional, conclusion functional)
PAIRS = {
    TheoremId.T22: (CONVEXITY, SQRT),
    TheoremId.T33: (CONVEXITY, SQRT),
    TheoremId.T24: (SQRT, RATIO),
    TheoremId.T37: (SQRT, RATIO),
    TheoremId.T25: (SQRT, RATIO),
    TheoremId.T38: (SQRT, RATIO),
    TheoremId.T31: (CONVEXITY, STARLIKENESS),
    TheoremId.T32: (STARLIKENESS, RATIO),
}
FIXED = {TheoremId.T31, TheoremId.T32, TheoremId.T33, TheoremId.T37, TheoremId.T38}


def case_id(theorem_id: TheoremId, p: int, b: float | None, level: float | None) -> str:
    parts = [theorem_id.value, f"p{p}"]
    if b is not None:
        parts.append(f"b{b:g}")
    if level is not None:
        parts.append(f"l{level:g}")
    return "-".join(parts)


def build_case(theorem_id: TheoremId | str, p: int, b: float | None = None,
               level: float | None = None) -> ImplicationCase:
    tid = TheoremId(theorem_id)
    if tid not in PAIRS:
        raise DomainError(f"{tid.value} is not an implication")
    if tid in FIXED:
        if b is None:
            raise DomainError(f"{tid.value} needs the fixed coefficient b")
    elif b:
        raise DomainError(f"{tid.value} is stated on A_p, got b={b}")
    else:
        b = None
    if tid in (TheoremId.T25, TheoremId.T38):
        level = None
    bound = thresholds.threshold(tid, p, b, level).output_level
    conclusion = 0.5 if level is None else level
    hyp_kind, conc_kind = PAIRS[tid]
    return ImplicationCase(
        case_id=case_id(tid, p, b, level),
        theorem_id=tid,
        p=p,
        b=b,
        level=level,
        hypothesis=Condition(kind=hyp_kind, bound=bound),
        conclusion=Condition(kind=conc_kind, bound=conclusion),
    )


def _needs_valence(case: ImplicationCase) -> bool:
    kinds = {case.hypothesis.kind, case.conclusion.kind}
    return bool(kinds & {CONVEXITY, SQRT})


def _require_class(f: MultivalentFunction, case: ImplicationCase) -> None:
    if f.p != case.p:
        raise ClassMismatch(f"{case.case_id} needs p={case.p}, got p={f.p}")
    if case.fixed_coefficient and abs(f.second_coefficient - case.b) > LEAD_TOL:
        raise ClassMismatch(
            f"{case.case_id} needs second coefficient {case.b}, got {f.second_coefficient}"
        )


def _require_guards(f: MultivalentFunction, case: ImplicationCase, grid: DiskGrid) -> None:
    if not unit_guard(f, grid):
        raise UnitVanishes(f"{case.case_id}: f/z^p vanishes on the sampling disk")
    if _needs_valence(case) and not local_valence_guard(f, grid):
        raise NotLocallyValent(f"{case.case_id}: f'/(p z^(p-1)) vanishes on the sampling disk")


def _evaluate(f: MultivalentFunction, case: ImplicationCase, grid: DiskGrid,
              function_id: str) -> VerificationReport:
    hyp = pointwise_check(f, case.hypothesis.kind, case.hypothesis.bound, grid)
    conc = pointwise_check(f, case.conclusion.kind, case.conclusion.bound, grid)
    if hyp.margin <= 0:
        status = Status.HYPOTHESIS_FAILS
    elif conc.margin > 0:
        status = Status.VERIFIED
    else:
        status = Status.VIOLATION
    return VerificationReport(
        function_id=function_id,
        case_id=case.case_id,
        hypothesis_margin=hyp.margin,
        conclusion_margin=conc.margin,
        status=status,
        grid_fingerprint=grid.fingerprint,
        truncation_warning=hyp.estimate.truncation_warning or conc.estimate.truncation_warning,
    )


def check(f: MultivalentFunction, case: ImplicationCase, grid: DiskGrid | None = None,
          source: FamilySpec | None = None, function_id: str = "f") -> VerificationReport:
    """Margins of one function against one implication. A VIOLATION is re-checked
    on a finer grid (and, when `source` is known, at a higher truncation order)
    before it is reported."""
    grid = grid or DiskGrid.default()
    _require_class(f, case)
    _require_guards(f, case, grid)
    report = _evaluate(f, case, grid, function_id)
    if report.status is not Status.VIOLATION:
        return report

    logger.warning("[verify] %s on %s: conclusion margin %.3e with hypothesis margin %.3e, re-checking",
                   function_id, case.case_id, report.conclusion_margin, report.hypothesis_margin)
    fine = grid.refined(RECHECK_FACTOR)
    g = f
    if source is not None:
        try:
            g = generate(source.model_copy(update={"order": source.order + RECHECK_EXTRA_ORDER}), fine)
        except StrohhackerError as err:
            logger.info("[verify] keeping the original order for %s: %s", function_id, err)
    report = _evaluate(g, case, fine, function_id).model_copy(update={"rechecked": True})
    if report.status is Status.VIOLATION:
        logger.error("[verify] confirmed VIOLATION: %s on %s", function_id, case.case_id)
    return report


# ── suites ────────────────────────────────────────────
def _entry_second_coefficient(entry: CorpusEntry) -> complex:
    if len(entry.unit_coeffs) < 2:
        return 0j
    re, im = entry.unit_coeffs[1]
    return complex(re, im)


def in_class(entry: CorpusEntry, case: ImplicationCase) -> bool:
    if entry.p != case.p:
        return False
    if case.fixed_coefficient:
        return abs(_entry_second_coefficient(entry) - case.b) <= LEAD_TOL
    return True


def run_suite(cases: list[ImplicationCase], manifest: CorpusManifest,
              grid: DiskGrid | None = None, threads: int | None = None) -> SuiteReport:
    grid = grid or DiskGrid.default()
    skipped: Counter[str] = Counter()
    pairs = []
    for case in cases:
        for entry in manifest.entries:
            if in_class(entry, case):
                pairs.append((case, entry))
            else:
                skipped[case.case_id] += 1

    def task(pair):
        case, entry = pair
        try:
            return check(from_entry(entry), case, grid, entry.spec, entry.function_id)
        except (ClassMismatch, UnitVanishes, NotLocallyValent) as err:
            logger.info("[verify] skipping %s on %s: %s", entry.function_id, case.case_id, err)
            return None

    workers = max(1, min(threads or config.THREADS, len(pairs) or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(task, pairs))

    reports = []
    for (case, _), report in zip(pairs, results):
        if report is None:
            skipped[case.case_id] += 1
        else:
            reports.append(report)
    reports.sort(key=lambda r: (r.case_id, r.function_id))

    summaries = []
    for case in cases:
        counts = Counter(r.status.value for r in reports if r.case_id == case.case_id)
        summaries.append(CaseSummary(
            case_id=case.case_id,
            counts={s.value: counts.get(s.value, 0) for s in Status},
            skipped=skipped[case.case_id],
        ))
    violations = sum(r.status is Status.VIOLATION for r in reports)
    logger.info("[verify] %d cases, %d reports, %d violations", len(cases), len(reports), violations)
    return SuiteReport(grid_fingerprint=grid.fingerprint, cases=summaries, reports=reports,
                       violations=violations, passed=violations == 0)


def default_cases() -> list[ImplicationCase]:
    """The eight implications over in-domain parameter sweeps."""
    cases = []
    for p in (1, 2, 3):
        for beta in (0.25, 0.5, 0.75):
            cases.append(build_case(TheoremId.T22, p, level=beta))
        lo = thresholds.t24_lower(p)
        for frac in (0.25, 0.75):
            cases.append(build_case(TheoremId.T24, p, level=lo + (1 - lo) * frac))
        cases.append(build_case(TheoremId.T25, p))
    for p in (1, 2):
        for b in (0.0, 0.25):
            for frac in (0.25, 0.5, 0.75):
                cases.append(build_case(TheoremId.T31, p, b, frac * p))
            for gamma in (0.25, 0.5, 0.75):
                cases.append(build_case(TheoremId.T32, p, b, gamma))
            for beta in (0.25, 0.5, 0.75):
                cases.append(build_case(TheoremId.T33, p, b, beta))
        for b in (0.0, 0.1):
            for gamma in (0.75, 0.8):
                if thresholds.feasible_T37(gamma, p, b):
                    cases.append(build_case(TheoremId.T37, p, b, gamma))
        for b in (0.0, 0.25, 0.5):
            cases.append(build_case(TheoremId.T38, p, b))
    return cases


def suite_corpus(cases: list[ImplicationCase], size: int = 20, seed: int = 0,
                 order: int = config.DEFAULT_ORDER, grid: DiskGrid | None = None) -> CorpusManifest:
    """One corpus per class the cases live in, merged."""
    classes = sorted({(c.p, c.b if c.fixed_coefficient else None) for c in cases},
                     key=lambda k: (k[0], -1.0 if k[1] is None else k[1]))
    return merge((build_corpus(p, b, size, seed, order, grid) for p, b in classes), seed=seed)


# ── sharpness search ──────────────────────────────────
SEARCH_GRID = DiskGrid.default(levels=8, angular_count=512)
WARM_ORDER = 128
WARM_RADIUS = 0.9


def warm_start(case: ImplicationCase, order: int) -> MultivalentFunction:
    """On A_p the dilated half-plane kernel u = (1 - 0.9 z)^(-1); on A_{p,b}, b > 0,
    (1 - z/2)^(-2b). Truncated at no less than WARM_ORDER, where the dropped tail
    is below 1e-5."""
    order = max(order, WARM_ORDER)
    if not case.fixed_coefficient:
        spec = FamilySpec(family_id=FamilyId.DILATED_KERNEL, p=case.p, b=WARM_RADIUS,
                          parameter=WARM_RADIUS, order=order)
        kernel = generate(spec)
        return MultivalentFunction(p=case.p, unit=kernel.unit, b=None)
    if not case.b:
        spec = FamilySpec(family_id=FamilyId.MONOMIAL, p=case.p, b=0.0, order=order)
    else:
        spec = FamilySpec(family_id=FamilyId.DILATED_KERNEL, p=case.p, b=case.b,
                          parameter=0.5, order=order)
    return generate(spec)


def _default_start(case: ImplicationCase, order: int, grid: DiskGrid) -> MultivalentFunction:
    """The warm start on A_p. On A_{p,b}, u = 1 + b z, or the warm start once f' of
    that polynomial has a zero in the disk (b > p/(p + 1))."""
    if not case.fixed_coefficient:
        return warm_start(case, order)
    coeffs = np.zeros(order + 1)
    coeffs[0], coeffs[1] = 1.0, case.b
    f = MultivalentFunction(p=case.p, unit=PowerSeries(coeffs), b=case.b)
    if unit_guard(f, grid) and (not _needs_valence(case) or local_valence_guard(f, grid)):
        return f
    return warm_start(case, order)


def sharpness_search(case: ImplicationCase, free_degrees: int = 8, budget: int = 500,
                     seed: int = 0, start: MultivalentFunction | None = None,
                     grid: DiskGrid | None = None) -> SharpnessResult:
    """Seeded hill climbing on `free_degrees` coefficients of u (from u_1, or u_2
    when b is fixed), minimising conclusion margin + PENALTY_WEIGHT *
    max(0, -hypothesis margin). Higher coefficients of the start stay put."""
    if budget < 1:
        raise DomainError(f"budget must be at least 1, got {budget}")
    grid = grid or SEARCH_GRID
    first = 2 if case.fixed_coefficient else 1
    order = first + max(free_degrees, 1) - 1
    declared = case.b if case.fixed_coefficient else None
    if start is None:
        start = _default_start(case, order, grid)
    _require_class(start, case)
    _require_guards(start, case, grid)
    order = max(order, start.order)
    coeffs = np.array(start.unit.pad(order).coeffs)
    if case.fixed_coefficient:
        coeffs[1] = case.b
    free = np.arange(first, min(first + max(free_degrees, 1), order + 1))

    def objective(c: np.ndarray) -> float:
        try:
            f = MultivalentFunction(p=case.p, unit=PowerSeries(c), b=declared)
            _require_guards(f, case, grid)
            report = _evaluate(f, case, grid, "candidate")
        except StrohhackerError:
            return math.inf
        value = report.conclusion_margin + PENALTY_WEIGHT * max(0.0, -report.hypothesis_margin)
        return value if math.isfinite(value) else math.inf

    rng = np.random.default_rng(seed)
    best = objective(coeffs)
    history = [best]
    evaluations, accepted, misses, step = 1, 0, 0, 0.1
    while evaluations < budget:
        trial = coeffs.copy()
        trial[free] += step * (rng.normal(size=free.size) + 1j * rng.normal(size=free.size)) / math.sqrt(2)
        value = objective(trial)
        evaluations += 1
        if value < best:
            coeffs, best = trial, value
            history.append(value)
            accepted += 1
            misses = 0
        else:
            misses += 1
            if misses >= 20:
                step /= 2
                misses = 0
    logger.info("[sharpness] %s: %d evaluations, %d accepted, objective %.6g",
                case.case_id, evaluations, accepted, best)

    f = MultivalentFunction(p=case.p, unit=PowerSeries(coeffs), b=declared)
    final = check(f, case, grid.refined(2), function_id="sharpness")
    return SharpnessResult(
        case_id=case.case_id,
        seed=seed,
        evaluations=evaluations,
        accepted=accepted,
        penalty_weight=PENALTY_WEIGHT,
        hypothesis_margin=final.hypothesis_margin,
        conclusion_margin=final.conclusion_margin,
        objective_history=history,
        best_unit_coeffs=f.unit.to_json(),
        status=final.status,
    )
