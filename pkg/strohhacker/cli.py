"""
Command-line surface.

    python -m strohhacker.cli thresholds --theorem T25 --p 1..4
    python -m strohhacker.cli admissible --theorem T22 --p 1..3 --level 0.1..0.9/9
    python -m strohhacker.cli verify --corpus monomials
    python -m strohhacker.cli sharpness --theorem T24 --p 1 --level 0.75 --budget 200
    python -m strohhacker.cli minima --functional Starlikeness --p 1 --b 0.5 --format csv

Exit codes: 0 pass, 1 violation or failed certificate, 2 usage error,
3 infeasible parameters.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from strohhacker import admissibility, config, thresholds, verify
from strohhacker.corpus import build_corpus, from_entry, merge, monomial_corpus
from strohhacker.errors import DomainError, Infeasible, PoleHit, StrohhackerError
from strohhacker.functionals import FunctionalOnDisk, inf_real_disk
from strohhacker.schemas import (
    CorpusManifest,
    DiskGrid,
    FunctionalKind,
    PsiId,
    RunMeta,
    Status,
    TheoremId,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ── argument values ───────────────────────────────────
def parse_values(text: str | None, integer: bool = False) -> list[float] | list[int]:
    """Comma list of numbers, `lo..hi` (integer range, inclusive) or
    `lo..hi/n` (n evenly spaced points, ends included)."""
    if text is None:
        return []
    out: list = []
    for item in (s.strip() for s in str(text).split(",")):
        if not item:
            continue
        try:
            if ".." not in item:
                out.append(int(item) if integer else float(item))
                continue
            lo_text, rest = item.split("..", 1)
            if "/" in rest:
                hi_text, n_text = rest.split("/", 1)
                lo, hi, n = float(lo_text), float(hi_text), int(n_text)
                if n < 1:
                    raise UsageError(f"empty range {item!r}")
                step = (hi - lo) / (n - 1) if n > 1 else 0.0
                values = [lo + i * step for i in range(n)]
            else:
                values = list(range(int(lo_text), int(rest) + 1))
            out.extend(int(v) if integer else float(v) for v in values)
        except ValueError as err:
            raise UsageError(f"cannot read {item!r}: {err}") from None
    return out


def _values(raw: Any, integer: bool = False) -> list:
    if isinstance(raw, list):
        return [int(v) if integer else float(v) for v in raw]
    if isinstance(raw, (int, float)):
        return [int(raw) if integer else float(raw)]
    return parse_values(raw, integer)


def _defaults() -> dict[str, tuple[Any, type]]:
    """Option defaults, applied after the params file so that it can set them."""
    return {
        "format": ("table", str),
        "seed": (0, int),
        "rho_max": (admissibility.RHO_MAX, float),
        "samples": (admissibility.SAMPLES, int),
        "curve": (False, bool),
        "corpus": ("default", str),
        "size": (20, int),
        "order": (config.DEFAULT_ORDER, int),
        "levels": (10, int),
        "angular_count": (config.ANGULAR_COUNT, int),
        "threads": (config.THREADS, int),
        "budget": (500, int),
        "free_degrees": (8, int),
        "warm_start": (False, bool),
        "functional": (",".join(k.value for k in FunctionalKind), str),
    }


def _fill_defaults(ns: argparse.Namespace) -> None:
    for key, (default, kind) in _defaults().items():
        if not hasattr(ns, key):
            continue
        value = getattr(ns, key)
        if value is None:
            setattr(ns, key, default)
            continue
        try:
            setattr(ns, key, kind(value))
        except (TypeError, ValueError):
            raise UsageError(f"{key} must be {kind.__name__}, got {value!r}") from None
    if ns.format not in FORMATS:
        raise UsageError(f"format must be one of {', '.join(FORMATS)}, got {ns.format!r}")


def _apply_params(ns: argparse.Namespace) -> None:
    """Fill options left unset on the command line from the --params JSON file.
    Command-line values win."""
    if not getattr(ns, "params", None):
        return
    try:
        data = json.loads(Path(ns.params).read_text())
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read params file {ns.params}: {err}") from None
    if not isinstance(data, dict):
        raise UsageError("params file must hold a JSON object")
    for key, value in data.items():
        key = key.replace("-", "_")
        if key in ("beta", "gamma"):
            key = "level"
        if getattr(ns, key, None) is None:
            setattr(ns, key, value)


def _sweep(ns: argparse.Namespace) -> tuple[list[int], list[float | None], list[float | None]]:
    ps = _values(ns.p if ns.p is not None else "1", integer=True)
    bs = _values(ns.b) if ns.b is not None else [None]
    levels = _values(ns.level) if ns.level is not None else [None]
    return ps, bs, levels


def _theorem(ns: argparse.Namespace) -> TheoremId:
    if ns.theorem is None:
        raise UsageError("--theorem is required")
    try:
        return TheoremId(str(ns.theorem).removeprefix("Psi"))
    except ValueError:
        raise UsageError(f"unknown theorem {ns.theorem!r}") from None


# ── output ────────────────────────────────────────────
def _fmt(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _meta_lines(meta: RunMeta) -> list[str]:
    head = f"# strohhacker {meta.tool_version} seed={_fmt(meta.seed)} grid={_fmt(meta.grid_fingerprint)}"
    return [head] + [f"# {note}" for note in meta.notes]


def render(meta: RunMeta, rows: list[dict], columns: list[str], fmt: str,
           payload: dict | None = None) -> str:
    if fmt == "json":
        body = {"meta": meta.model_dump(mode="json"), "rows": rows}
        if payload:
            body.update(payload)
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        buf.writelines(line + "\n" for line in _meta_lines(meta))
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if row.get(c) is None else _fmt(row.get(c)) for c in columns])
        return buf.getvalue()
    cells = [[_fmt(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = _meta_lines(meta)
    lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# ── subcommands ───────────────────────────────────────
THRESHOLD_COLUMNS = ["theorem", "p", "b", "level", "bound", "error"]


def cmd_thresholds(ns: argparse.Namespace) -> int:
    tid = _theorem(ns)
    ps, bs, levels = _sweep(ns)
    rows = []
    for p in ps:
        for b in bs:
            for level in levels:
                row = {"theorem": tid.value, "p": p, "b": b, "level": level, "bound": None, "error": None}
                try:
                    row["bound"] = thresholds.threshold(tid, p, b, level).output_level
                except DomainError as err:
                    row["error"] = f"{type(err).__name__}: {err}"
                rows.append(row)
    _emit(render(RunMeta(seed=ns.seed), rows, THRESHOLD_COLUMNS, ns.format), ns.output)
    return EXIT_OK


ADMISSIBLE_COLUMNS = ["psi", "p", "b", "level", "threshold", "sup", "margin", "arg_rho",
                      "at_infinity", "certified", "error"]
CURVE_COLUMNS = ["psi", "p", "b", "level", "rho", "re_psi"]


def cmd_admissible(ns: argparse.Namespace) -> int:
    tid = _theorem(ns)
    if tid is TheoremId.LEMMA_PHI:
        raise UsageError("LemmaPhi has no admissibility problem")
    pid = PsiId("Psi" + tid.value)
    ps, bs, levels = _sweep(ns)
    rows, curves = [], []
    failed = infeasible = False
    for p in ps:
        for b in bs:
            for level in levels:
                row = dict.fromkeys(ADMISSIBLE_COLUMNS)
                row.update(psi=pid.value, p=p, b=b, level=level)
                try:
                    problem = admissibility.make_problem(pid, p, b or 0.0, level)
                    report = admissibility.sup_on_region(problem, ns.rho_max, ns.samples)
                except Infeasible as err:
                    infeasible = True
                    row["error"] = f"Infeasible: {err}"
                except PoleHit as err:
                    failed = True
                    row["error"] = f"PoleHit: {err}"
                except DomainError as err:
                    row["error"] = f"{type(err).__name__}: {err}"
                else:
                    failed |= not report.certified
                    row.update(threshold=report.threshold, sup=report.sup_value,
                               margin=report.margin, arg_rho=report.arg_rho,
                               at_infinity=report.attained_at_infinity,
                               certified=report.certified)
                    if ns.curve:
                        curves += [dict(psi=pid.value, p=p, b=b, level=level, rho=r, re_psi=v)
                                   for r, v in admissibility.rho_curve(problem, ns.rho_max, ns.samples)]
                rows.append(row)
    meta = RunMeta(seed=ns.seed, notes=[admissibility.REGION_NOTE])
    if ns.curve:
        _emit(render(meta, curves, CURVE_COLUMNS, ns.format), ns.output)
    else:
        _emit(render(meta, rows, ADMISSIBLE_COLUMNS, ns.format), ns.output)
    if failed:
        return EXIT_FAIL
    return EXIT_INFEASIBLE if infeasible else EXIT_OK


def _grid(ns: argparse.Namespace) -> DiskGrid:
    return DiskGrid.default(levels=ns.levels, angular_count=ns.angular_count)


def _cases(ns: argparse.Namespace) -> list:
    if ns.theorem is None:
        return verify.default_cases()
    tid = _theorem(ns)
    ps, bs, levels = _sweep(ns)
    return [verify.build_case(tid, p, b, level) for p in ps for b in bs for level in levels]


def _corpus(ns: argparse.Namespace, cases: list, grid: DiskGrid) -> CorpusManifest:
    if ns.corpus == "monomials":
        return monomial_corpus(c.p for c in cases)
    if ns.corpus == "default":
        return verify.suite_corpus(cases, ns.size, ns.seed, ns.order, grid)
    try:
        return CorpusManifest.model_validate_json(Path(ns.corpus).read_text())
    except (OSError, ValidationError) as err:
        raise UsageError(f"cannot load corpus manifest {ns.corpus}: {err}") from None


VERIFY_COLUMNS = ["case_id", "function_id", "hypothesis_margin", "conclusion_margin",
                  "status", "truncation_warning", "rechecked"]
SUMMARY_COLUMNS = ["case_id", Status.HYPOTHESIS_FAILS.value, Status.VERIFIED.value,
                   Status.VIOLATION.value, "skipped"]


def cmd_verify(ns: argparse.Namespace) -> int:
    grid = _grid(ns)
    cases = _cases(ns)
    manifest = _corpus(ns, cases, grid)
    if ns.corpus_out:
        Path(ns.corpus_out).write_text(
            json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n")
    report = verify.run_suite(cases, manifest, grid, ns.threads)
    meta = RunMeta(seed=ns.seed, grid_fingerprint=grid.fingerprint)
    if ns.format == "csv":
        rows = [r.model_dump(mode="json") for r in report.reports]
        text = render(meta, rows, VERIFY_COLUMNS, "csv")
    elif ns.format == "json":
        text = render(meta, [], [], "json", payload={"suite": report.model_dump(mode="json")})
    else:
        rows = [{"case_id": c.case_id, **c.counts, "skipped": c.skipped} for c in report.cases]
        text = render(meta, rows, SUMMARY_COLUMNS, "table")
        text += f"violations: {report.violations}\n"
    _emit(text, ns.output)
    return EXIT_OK if report.passed else EXIT_FAIL


SHARPNESS_COLUMNS = ["case_id", "evaluations", "accepted", "hypothesis_margin",
                     "conclusion_margin", "status"]


def cmd_sharpness(ns: argparse.Namespace) -> int:
    tid = _theorem(ns)
    ps, bs, levels = _sweep(ns)
    if len(ps) != 1 or len(bs) != 1 or len(levels) != 1:
        raise UsageError("sharpness takes a single parameter point")
    case = verify.build_case(tid, ps[0], bs[0], levels[0])
    first = 2 if case.fixed_coefficient else 1
    start = verify.warm_start(case, first + max(ns.free_degrees, 1) - 1) if ns.warm_start else None
    result = verify.sharpness_search(case, ns.free_degrees, ns.budget, ns.seed, start)
    meta = RunMeta(seed=ns.seed, grid_fingerprint=verify.SEARCH_GRID.refined(2).fingerprint,
                   notes=[f"penalty weight {verify.PENALTY_WEIGHT:g}"])
    row = result.model_dump(mode="json")
    _emit(render(meta, [row], SHARPNESS_COLUMNS, ns.format,
                 payload={"result": row} if ns.format == "json" else None), ns.output)
    return EXIT_FAIL if result.status is Status.VIOLATION else EXIT_OK


MINIMA_COLUMNS = ["function_id", "functional", "radius", "min_re", "error"]


def _minima_corpus(ns: argparse.Namespace, grid: DiskGrid) -> CorpusManifest:
    ps, bs, _ = _sweep(ns)
    if ns.corpus == "monomials":
        return monomial_corpus(ps)
    if ns.corpus == "default":
        return merge((build_corpus(p, b, ns.size, ns.seed, ns.order, grid) for p in ps for b in bs),
                     seed=ns.seed)
    return _corpus(ns, [], grid)


def cmd_minima(ns: argparse.Namespace) -> int:
    """Per-radius minima of Re of each functional over each corpus member."""
    try:
        kinds = [FunctionalKind(k.strip()) for k in str(ns.functional).split(",") if k.strip()]
    except ValueError:
        raise UsageError(f"unknown functional in {ns.functional!r}") from None
    grid = _grid(ns)
    manifest = _minima_corpus(ns, grid)
    rows = []
    for entry in manifest.entries:
        f = from_entry(entry)
        for kind in kinds:
            try:
                est = inf_real_disk(FunctionalOnDisk(f, kind), grid)
            except StrohhackerError as err:
                rows.append(dict(function_id=entry.function_id, functional=kind.value,
                                 error=f"{type(err).__name__}: {err}"))
                continue
            rows += [dict(function_id=entry.function_id, functional=kind.value, radius=r, min_re=m)
                     for r, m in zip(grid.radii, est.per_radius_min)]
    meta = RunMeta(seed=ns.seed, grid_fingerprint=grid.fingerprint)
    _emit(render(meta, rows, MINIMA_COLUMNS, ns.format), ns.output)
    return EXIT_OK


# ── parser ────────────────────────────────────────────
FORMATS = ("json", "csv", "table")


def build_parser() -> argparse.ArgumentParser:
    """Options read from --params are left as None here and defaulted by _fill_defaults."""
    parser = argparse.ArgumentParser(
        prog="strohhacker",
        description="Marx-Strohhäcker type thresholds for multivalent functions",
    )
    parser.add_argument("--log-level", default=config.LOG_LEVEL)
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = _defaults()

    def option(p: argparse.ArgumentParser, flag: str, text: str = "", **kw: Any) -> None:
        key = flag.lstrip("-").replace("-", "_")
        default = defaults[key][0]
        p.add_argument(flag, default=None, help=f"{text} (default: {default})".lstrip(), **kw)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--theorem", default=None,
                       help="T22 T24 T25 T31 T32 T33 T37 T38 (LemmaPhi for thresholds)")
        p.add_argument("--p", default=None, help="valence values, e.g. 1..4 or 1,3")
        p.add_argument("--b", default=None, help="fixed second coefficients")
        p.add_argument("--level", "--beta", "--gamma", dest="level", default=None,
                       help="beta or gamma values, e.g. 0.1..0.9/9")
        p.add_argument("--params", default=None, help="JSON file with the same keys")
        option(p, "--format", choices=FORMATS)
        option(p, "--seed", type=int)
        p.add_argument("--output", default=None)

    def disk(p: argparse.ArgumentParser) -> None:
        option(p, "--corpus", "default, monomials or a manifest path")
        option(p, "--size", "functions per class", type=int)
        option(p, "--order", "truncation order", type=int)
        option(p, "--levels", "radii 1 - 2^-j, j = 1..levels", type=int)
        option(p, "--angular-count", type=int)

    p_thr = sub.add_parser("thresholds", help="closed-form bounds")
    common(p_thr)
    p_thr.set_defaults(handler=cmd_thresholds)

    p_adm = sub.add_parser("admissible", help="admissibility certificates")
    common(p_adm)
    option(p_adm, "--rho-max", type=float)
    option(p_adm, "--samples", type=int)
    option(p_adm, "--curve", "dump (rho, Re psi) instead", action="store_true")
    p_adm.set_defaults(handler=cmd_admissible)

    p_ver = sub.add_parser("verify", help="implication suite")
    common(p_ver)
    disk(p_ver)
    p_ver.add_argument("--corpus-out", default=None)
    option(p_ver, "--threads", type=int)
    p_ver.set_defaults(handler=cmd_verify)

    p_shp = sub.add_parser("sharpness", help="hill-climbing search for small conclusion margins")
    common(p_shp)
    option(p_shp, "--budget", type=int)
    option(p_shp, "--free-degrees", type=int)
    option(p_shp, "--warm-start", action="store_true")
    p_shp.set_defaults(handler=cmd_sharpness)

    p_min = sub.add_parser("minima", help="per-radius minima of Re of the functionals")
    common(p_min)
    disk(p_min)
    option(p_min, "--functional", "comma list of functional kinds")
    p_min.set_defaults(handler=cmd_minima)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    config.configure_logging(ns.log_level)
    try:
        _apply_params(ns)
        _fill_defaults(ns)
        return ns.handler(ns)
    except UsageError as err:
        print(f"strohhacker: {err}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as err:
        print(f"strohhacker: infeasible parameters: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DomainError, ValidationError) as err:
        print(f"strohhacker: {err}", file=sys.stderr)
        return EXIT_USAGE
    except StrohhackerError as err:
        logger.error("[cli] %s", err)
        return EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
