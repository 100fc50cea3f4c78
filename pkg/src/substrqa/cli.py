"""Command-line front end.

Subcommands: classify, analyze (finite-size and/or limiting quantifiers),
densities (exact start-pair density tables), convergence (finite-size
sweep against the limit), render (ASCII/PGM plots), and verify (the
pinned golden-value suite).  Exit codes: 0 success, 1 a verify check
failed, 2 usage or parse problem, 3 a computation refused to certify its
result (saturation, reconstruction, or cross-check failure).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click

from .asymptotics import asymptotic_quantifiers, closed_form, quantifiers_via_sums
from .densities import (
    DEFAULT_SCALES,
    DensityTable,
    dens_K,
    reconstruct_base,
    table_from_json_dict,
    table_to_json_dict,
)
from .errors import DomainError, ParseError, SubstRQAError
from .recognizability import recognizability_constants
from .recplot import histogram, quantize_eps, render_ascii, render_pgm
from .rqa import (
    RQAReport,
    _frac_json,
    correlation_sum,
    measures_from_histogram,
    residuals,
)
from .substitution import Normalization, Substitution, SubshiftKind

# -h is the dyadic threshold exponent everywhere, so help is --help only.
HELP_SETTINGS = {"help_option_names": ["--help"]}

FORMATS = click.Choice(["text", "json", "csv"])
QUANTITIES = ("RR", "DET", "Lavg", "ENT", "C")


@dataclass(frozen=True)
class RunConfig:
    """Validated option bundle handed to one subcommand run."""

    spec: str
    subcommand: str
    m: int = 1
    lmin: int = 1
    h: int | None = None
    eps: float | None = None
    n: int | None = None
    asymptotic: bool = False
    quantity: str = "RR"
    scales: tuple[int, ...] = ()
    lmax: int = 64
    fmt: str = "text"
    use_cache: bool = True
    cache_dir: str | None = None
    seed: int = 0
    log_base: str = "e"
    render_format: str = "ascii"
    output: str | None = None
    filter: str | None = None

    def __post_init__(self):
        if self.m < 1 or self.lmin < 1:
            raise DomainError(f"m and lmin must be >= 1, got ({self.m}, {self.lmin})")
        if self.h is not None and self.h < 1:
            raise DomainError(f"threshold exponent must be >= 1, got {self.h}")
        if self.h is not None and self.eps is not None:
            raise DomainError("give either -h or --eps, not both")
        if self.n is not None and self.n < 2:
            raise DomainError(f"plot size must be at least 2, got {self.n}")

    def resolve_threshold(self) -> tuple[int, str | None]:
        """Effective dyadic exponent plus a quantization note for --eps."""
        if self.eps is not None:
            h = quantize_eps(self.eps)
            return h, f"threshold {self.eps} quantized to 2^-{h}"
        return (self.h if self.h is not None else 1), None

    def substitution(self) -> Substitution:
        return Substitution.parse(self.spec)


def _dispatch(runner, **options) -> None:
    try:
        code = runner(RunConfig(**options))
    except SubstRQAError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2 if isinstance(exc, (ParseError, DomainError)) else 3)
    if code:
        raise SystemExit(code)


# -- shared plumbing ---------------------------------------------------------


def _cache_dir(config: RunConfig) -> Path | None:
    if not config.use_cache:
        return None
    if config.cache_dir:
        return Path(config.cache_dir)
    env = os.environ.get("SUBSTRQA_CACHE_DIR")
    if env:
        return Path(env)
    root = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache"
    )
    return Path(root) / "substrqa"


def _load_table(sub: Substitution, config: RunConfig) -> DensityTable:
    """Density table via the disk cache; cached values are trusted as-is
    (verify compares them against the pinned goldens)."""
    scales = tuple(config.scales) or DEFAULT_SCALES
    directory = _cache_dir(config)
    if directory is None:
        return reconstruct_base(sub, scales=scales)
    path = directory / (
        f"dens-{sub.image0}-{sub.image1}-{scales[0]}-{scales[1]}.json"
    )
    if path.exists():
        try:
            table = table_from_json_dict(json.loads(path.read_text()))
            if table.subst == sub:
                return table
        except (ValueError, KeyError, TypeError):
            click.echo(f"note: unreadable cache {path}, recomputing", err=True)
    table = reconstruct_base(sub, scales=scales)
    directory.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(table_to_json_dict(table)))
    return table


def _empirical_report(
    sub: Substitution, n: int, m: int, lmin: int, h: int
) -> tuple[RQAReport, list[str]]:
    norm, how = sub.normalize()
    notes = []
    if how is not Normalization.IDENTITY:
        notes.append(f"analyzed the normalized form {norm} ({how.value})")
    x = norm.fixed_point_prefix(n + h + m)
    report = measures_from_histogram(histogram(x, n, h, m=m), lmin)
    return report.with_corsum(correlation_sum(x, n, lmin, h, m=m)), notes


def _frac_text(value) -> str:
    if value is None:
        return "absent"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator} (~{float(value):.6g})"
    if isinstance(value, float) and math.isinf(value):
        return "infinite"
    return f"{value:.12g}"


def _ent_text(ent: float | None, log_base: str) -> str:
    if ent is None:
        return "absent"
    in_log2 = ent / math.log(2.0)
    approx = Fraction(in_log2).limit_denominator(12)
    exact = abs(float(approx) - in_log2) < 1e-9
    if log_base == "2":
        return f"{approx} (log base 2)" if exact else f"{in_log2:.12g} (log base 2)"
    if exact and approx != 0:
        factor = "log 2" if approx == 1 else f"{approx}·log 2"
        return f"{ent:.12g} = {factor}"
    return f"{ent:.12g}"


def _report_text(report: RQAReport, log_base: str) -> list[str]:
    where = "limit" if report.n is None else f"n={report.n}"
    lines = [
        f"{report.provenance.value} quantifiers ({where}, m={report.m}, "
        f"h={report.h}, lmin={report.lmin})"
    ]
    lines.append(f"  RR   = {_frac_text(report.RR)}")
    lines.append(f"  DET  = {_frac_text(report.DET)}")
    lines.append(f"  Lavg = {_frac_text(report.Lavg)}")
    lines.append(f"  ENT  = {_ent_text(report.ENT, log_base)}")
    lines.append(f"  C    = {_frac_text(report.C)}")
    lines.append(f"  line density (lengths >= lmin) = {_frac_text(report.tail_density)}")
    return lines


def _value_gap(a, b):
    if a is None or b is None:
        return None
    fa, fb = float(a), float(b)
    if math.isinf(fa) and math.isinf(fb):
        return 0.0
    if math.isinf(fa) or math.isinf(fb):
        return math.inf
    return abs(fa - fb)


def _csv_out(rows: list[tuple[str, ...]], header: tuple[str, ...]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


# -- subcommand bodies -------------------------------------------------------


def run_classify(config: RunConfig) -> int:
    sub = config.substitution()
    cls = sub.classify()
    constants = None
    if cls.kind is SubshiftKind.PRIMITIVE_APERIODIC:
        constants = recognizability_constants(cls.normalized)
    if config.fmt == "json":
        payload = {
            "substitution": str(sub),
            "kind": cls.kind.value,
            "normalization": cls.normalization.value,
            "normalized": str(cls.normalized),
            "absorbing_letter": cls.absorbing_letter,
            "constants": None
            if constants is None
            else {
                "alpha": constants.alpha,
                "beta": constants.beta,
                "c": _frac_json(constants.c),
                "K": constants.K,
                "R": constants.R,
                "R0": constants.R0,
                "q": constants.q,
            },
        }
        click.echo(json.dumps(payload, indent=2))
        return 0
    click.echo(f"substitution : {sub}")
    click.echo(f"kind         : {cls.kind.value}")
    click.echo(f"normalization: {cls.normalization.value} -> {cls.normalized}")
    if cls.absorbing_letter is not None:
        click.echo(f"absorbing    : {cls.absorbing_letter}")
    if constants is not None:
        click.echo(
            f"constants    : alpha={constants.alpha} beta={constants.beta} "
            f"c={constants.c} K={constants.K} R={constants.R} R0={constants.R0} "
            f"q={constants.q}"
        )
    return 0


def run_analyze(config: RunConfig) -> int:
    sub = config.substitution()
    h, eps_note = config.resolve_threshold()
    if config.n is None and not config.asymptotic:
        raise DomainError("pass --n for a finite plot, --asymptotic, or both")
    notes = [eps_note] if eps_note else []
    empirical = asymptotic = None
    if config.n is not None:
        empirical, more = _empirical_report(sub, config.n, config.m, config.lmin, h)
        notes.extend(more)
    if config.asymptotic:
        limit = asymptotic_quantifiers(sub, config.m, config.lmin, Fraction(1, 2**h))
        if limit.note:
            notes.append(limit.note)
        asymptotic = limit.to_report()
    gap = None
    if empirical is not None and asymptotic is not None:
        gap = {
            key: _value_gap(getattr(empirical, key), getattr(asymptotic, key))
            for key in QUANTITIES
        }

    if config.fmt == "json":
        payload = {"notes": notes}
        if empirical is not None:
            payload["empirical"] = empirical.to_json_dict()
        if asymptotic is not None:
            payload["asymptotic"] = asymptotic.to_json_dict()
        if gap is not None:
            payload["gap"] = {
                k: (None if v is None else ("inf" if math.isinf(v) else v))
                for k, v in gap.items()
            }
        click.echo(json.dumps(payload, indent=2))
        return 0
    if config.fmt == "csv":
        rows = [r.to_csv_row() for r in (empirical, asymptotic) if r is not None]
        if gap is not None:
            rows.append(
                ("gap", "", str(config.m), str(h), str(config.lmin))
                + tuple("" if gap[k] is None else repr(gap[k]) for k in QUANTITIES)
            )
        click.echo(_csv_out(rows, RQAReport.CSV_HEADER), nl=False)
        return 0
    for note in notes:
        click.echo(f"note: {note}")
    for report in (empirical, asymptotic):
        if report is not None:
            for line in _report_text(report, config.log_base):
                click.echo(line)
    if gap is not None:
        shown = ", ".join(
            f"{k}={'absent' if v is None else format(v, '.3g')}" for k, v in gap.items()
        )
        click.echo(f"gap (|empirical - limit|): {shown}")
    return 0


def run_densities(config: RunConfig) -> int:
    sub = config.substitution()
    cls = sub.classify()
    if cls.kind is not SubshiftKind.PRIMITIVE_APERIODIC:
        raise DomainError(
            f"density tables exist for primitive aperiodic substitutions, "
            f"got {cls.kind.value}"
        )
    table = _load_table(cls.normalized, config)
    values = {l: dens_K(table, l) for l in range(1, config.lmax + 1)}
    if config.fmt == "json":
        payload = {
            "table": table_to_json_dict(table),
            "densities": {str(l): _frac_json(v) for l, v in values.items()},
        }
        click.echo(json.dumps(payload, indent=2))
        return 0
    if config.fmt == "csv":
        rows = [
            (str(l), str(v.numerator), str(v.denominator), repr(float(v)))
            for l, v in values.items()
        ]
        click.echo(_csv_out(rows, ("length", "numerator", "denominator", "approx")), nl=False)
        return 0
    k = table.constants
    origin = "" if table.subst == sub else f" (normalized from {sub})"
    click.echo(f"substitution : {table.subst}{origin}")
    click.echo(
        f"constants    : alpha={k.alpha} beta={k.beta} c={k.c} K={k.K} R={k.R} R0={k.R0}"
    )
    click.echo("base table   : " + "  ".join(f"{l}:{v}" for l, v in sorted(table.base.items())))
    support = {l: v for l, v in values.items() if v}
    click.echo(f"start-pair densities up to {config.lmax} (zero lengths omitted):")
    for l, v in support.items():
        click.echo(f"  {l:4d}  {v}  (~{float(v):.3e})")
    return 0


def run_convergence(config: RunConfig) -> int:
    sub = config.substitution()
    h, eps_note = config.resolve_threshold()
    if config.quantity not in QUANTITIES:
        raise DomainError(f"quantity must be one of {QUANTITIES}, got {config.quantity}")
    scales = tuple(config.scales) or (256, 512, 1024, 2048, 4096)
    if any(n < 2 for n in scales):
        raise DomainError(f"every scale must be at least 2, got {scales}")
    limit = asymptotic_quantifiers(sub, config.m, config.lmin, Fraction(1, 2**h))
    target = getattr(limit.to_report(), config.quantity)
    rows = []
    for n in sorted(scales):
        report, _ = _empirical_report(sub, n, config.m, config.lmin, h)
        value = getattr(report, config.quantity)
        gap = _value_gap(value, target)
        rows.append((n, value, gap))

    def show(v):
        if v is None:
            return ""
        return repr(float(v)) if not (isinstance(v, float) and math.isinf(v)) else "inf"

    if config.fmt == "json":
        payload = {
            "quantity": config.quantity,
            "asymptotic": None
            if target is None
            else (_frac_json(target) if isinstance(target, Fraction) else show(target)),
            "rows": [
                {"n": n, "empirical": show(v), "gap": show(g)} for n, v, g in rows
            ],
        }
        if eps_note:
            payload["note"] = eps_note
        click.echo(json.dumps(payload, indent=2))
        return 0
    table_rows = [(str(n), show(v), show(target), show(g)) for n, v, g in rows]
    click.echo(
        _csv_out(table_rows, ("n", "empirical", "asymptotic", "gap")), nl=False
    )
    return 0


def run_render(config: RunConfig) -> int:
    sub = config.substitution()
    h, _ = config.resolve_threshold()
    if config.n is None:
        raise DomainError("render needs --n")
    norm, _ = sub.normalize()
    x = norm.fixed_point_prefix(config.n + h + config.m)
    if config.render_format == "pgm":
        data = render_pgm(x, config.n, h, m=config.m)
        if config.output:
            Path(config.output).write_bytes(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        return 0
    text = render_ascii(x, config.n, h, m=config.m)
    if config.output:
        Path(config.output).write_text(text)
    else:
        click.echo(text, nl=False)
    return 0


# -- the golden verification suite -------------------------------------------


@dataclass(frozen=True)
class _Golden:
    name: str
    spec: str
    constants: tuple[int, int, Fraction, int, int, int]  # alpha beta c K R R0
    base: dict[int, Fraction]
    anchors: dict[tuple[int, int, int], dict[str, Fraction]]  # (m, lmin, h) -> fields
    ent_log2: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)


_GOLDENS = (
    _Golden(
        name="thue-morse",
        spec="01,10",
        constants=(0, 0, Fraction(0), 3, 4, 2),
        base={1: Fraction(1, 9), 2: Fraction(1, 18), 3: Fraction(1, 36)},
        anchors={
            (1, 1, 1): {
                "RR": Fraction(1, 2),
                "C": Fraction(1, 2),
                "Lavg": Fraction(9, 4),
                "DET": Fraction(1),
                "tail_density": Fraction(2, 9),
            },
            (1, 2, 1): {
                "RR": Fraction(7, 18),
                "C": Fraction(5, 18),
                "DET": Fraction(7, 9),
            },
        },
        ent_log2={(1, 1, 1): Fraction(2)},
    ),
    _Golden(
        name="period-doubling",
        spec="01,00",
        constants=(1, 0, Fraction(1), 2, 3, 1),
        base={1: Fraction(1, 9), 2: Fraction(1, 18)},
        anchors={
            (1, 1, 1): {"RR": Fraction(5, 9), "C": Fraction(5, 9)},
        },
        ent_log2={(1, 1, 1): Fraction(2)},
    ),
    _Golden(
        name="q5",
        spec="01110,01010",
        constants=(2, 2, Fraction(1), 3, 5, 1),
        base={
            1: Fraction(7, 50),
            2: Fraction(3, 50),
            3: Fraction(1, 50),
            4: Fraction(13, 1250),
        },
        anchors={
            (1, 1, 1): {"RR": Fraction(1, 2), "tail_density": Fraction(6, 25)},
        },
    ),
)

_EXAMPLE_TEXT = "010111010"


def _verify_example() -> list[tuple[str, bool, str]]:
    from .substitution import BitSequence

    x = BitSequence.from_text(_EXAMPLE_TEXT)
    checks = []
    report = measures_from_histogram(histogram(x, 6, 1), 2)
    expected = {
        "RR": Fraction(8, 30),
        "RR1": Fraction(14, 30),
        "DET": Fraction(4, 7),
        "Lavg": Fraction(2),
    }
    for name, want in expected.items():
        got = getattr(report, name)
        checks.append((f"example/{name}", got == want, f"{got} vs {want}"))
    checks.append(("example/ENT", report.ENT == 0.0, f"{report.ENT} vs 0.0"))
    c2 = correlation_sum(x, 6, 2, 1)
    c3 = correlation_sum(x, 6, 3, 1)
    checks.append(("example/C2", c2 == Fraction(12, 36), f"{c2} vs 12/36"))
    checks.append(("example/C3", c3 == Fraction(8, 36), f"{c3} vs 8/36"))
    return checks


def _verify_golden(golden: _Golden, config: RunConfig) -> list[tuple[str, bool, str]]:
    checks: list[tuple[str, bool, str]] = []
    sub = Substitution.parse(golden.spec)
    cls = sub.classify()
    name = golden.name

    constants = recognizability_constants(cls.normalized)
    got = (
        constants.alpha,
        constants.beta,
        constants.c,
        constants.K,
        constants.R,
        constants.R0,
    )
    checks.append((f"{name}/constants", got == golden.constants, f"{got} vs {golden.constants}"))

    table = _load_table(cls.normalized, config)
    ok = table.base == golden.base
    detail = "all base densities match"
    if not ok:
        bad = {
            l: (table.base.get(l), golden.base.get(l))
            for l in set(table.base) | set(golden.base)
            if table.base.get(l) != golden.base.get(l)
        }
        detail = f"mismatch at lengths {bad}"
    checks.append((f"{name}/base-densities", ok, detail))

    for (m, lmin, h), fields in golden.anchors.items():
        a = quantifiers_via_sums(table, m, lmin, h).to_report()
        for fname, want in fields.items():
            got_value = getattr(a, fname)
            checks.append(
                (
                    f"{name}/limit-{fname}(m={m},l={lmin},h={h})",
                    got_value == want,
                    f"{got_value} vs {want}",
                )
            )
    for (m, lmin, h), factor in golden.ent_log2.items():
        ent = quantifiers_via_sums(table, m, lmin, h).ENT
        want = float(factor) * math.log(2.0)
        checks.append(
            (
                f"{name}/limit-ENT(m={m},l={lmin},h={h})",
                abs(ent - want) < 1e-12,
                f"{ent} vs {factor}*log 2",
            )
        )

    grid_ok, grid_detail = True, "closed form == tail sums on the grid"
    try:
        for lmin in range(1, 7):
            for m in (1, 2):
                for h in (1, 2, 4):
                    closed_form(table, m, lmin, h)
    except SubstRQAError as exc:
        grid_ok, grid_detail = False, str(exc)
    checks.append((f"{name}/closed-form-grid", grid_ok, grid_detail))

    rng = random.Random(config.seed)
    norm = cls.normalized
    bad_cases = []
    for _ in range(10):
        n = rng.randrange(64, 513)
        lmin = rng.randrange(1, 5)
        h = rng.randrange(1, 4)
        x = norm.fixed_point_prefix(n + lmin + h + 2)
        if not residuals(x, n, lmin, h).satisfied():
            bad_cases.append((n, lmin, h))
    checks.append(
        (
            f"{name}/residual-bounds",
            not bad_cases,
            "10 random instances within bounds" if not bad_cases else f"violated at {bad_cases}",
        )
    )
    return checks


def run_verify(config: RunConfig) -> int:
    checks: list[tuple[str, bool, str]] = []
    if config.filter is None:
        checks.extend(_verify_example())
    for golden in _GOLDENS:
        if config.filter and config.filter not in golden.name:
            continue
        checks.extend(_verify_golden(golden, config))
    if not checks:
        raise DomainError(f"filter {config.filter!r} matched no golden case")
    failures = [c for c in checks if not c[1]]
    if config.fmt == "json":
        payload = {
            "checks": [
                {"name": name, "status": "pass" if ok else "fail", "detail": detail}
                for name, ok, detail in checks
            ],
            "failures": len(failures),
        }
        click.echo(json.dumps(payload, indent=2))
        return 1 if failures else 0
    for name, ok, detail in checks:
        mark = "PASS" if ok else "FAIL"
        suffix = "" if ok else f": {detail}"
        click.echo(f"{mark} {name}{suffix}")
    click.echo(
        f"{len(checks) - len(failures)}/{len(checks)} checks passed"
        + (f", {len(failures)} FAILED" if failures else "")
    )
    return 1 if failures else 0


# -- click wiring ------------------------------------------------------------


def _scales_callback(ctx, param, value):
    if not value:
        return ()
    try:
        return tuple(int(part) for part in value.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from exc


def _common_cache(fn):
    fn = click.option("--no-cache", is_flag=True, help="Skip the on-disk density cache.")(fn)
    fn = click.option(
        "--cache-dir",
        default=None,
        help="Density cache directory (default: $SUBSTRQA_CACHE_DIR or ~/.cache/substrqa).",
    )(fn)
    return fn


@click.group(context_settings=HELP_SETTINGS)
def main():
    """Recurrence quantification of binary constant-length substitutions."""


@main.command()
@click.argument("spec")
@click.option("--format", "fmt", type=FORMATS, default="text", help="Output format.")
def classify(spec, fmt):
    """Classify SPEC and print its combinatorial constants."""
    _dispatch(run_classify, spec=spec, subcommand="classify", fmt=fmt)


@main.command()
@click.argument("spec")
@click.option("-m", "m", type=int, default=1, help="Embedding window length.")
@click.option("-l", "--lmin", "lmin", type=int, default=1, help="Minimum line length.")
@click.option("-h", "h", type=int, default=None, help="Dyadic threshold exponent (eps = 2^-h).")
@click.option("--eps", type=float, default=None, help="Raw threshold; quantized to a power of two.")
@click.option("--n", "n", type=int, default=None, help="Finite plot size for the empirical report.")
@click.option("--asymptotic", is_flag=True, help="Also (or only) compute the exact limit.")
@click.option("--format", "fmt", type=FORMATS, default="text", help="Output format.")
@click.option("--log-base", type=click.Choice(["e", "2"]), default="e", help="Entropy display base.")
@_common_cache
def analyze(spec, m, lmin, h, eps, n, asymptotic, fmt, log_base, no_cache, cache_dir):
    """Compute recurrence quantifiers of SPEC, finite-size and/or limiting."""
    _dispatch(
        run_analyze,
        spec=spec,
        subcommand="analyze",
        m=m,
        lmin=lmin,
        h=h,
        eps=eps,
        n=n,
        asymptotic=asymptotic,
        fmt=fmt,
        log_base=log_base,
        use_cache=not no_cache,
        cache_dir=cache_dir,
    )


@main.command()
@click.argument("spec")
@click.option("--lmax", type=int, default=64, help="Largest length to tabulate.")
@click.option("--format", "fmt", type=FORMATS, default="text", help="Output format.")
@_common_cache
def densities(spec, lmax, fmt, no_cache, cache_dir):
    """Exact start-pair densities of SPEC up to a length bound."""
    _dispatch(
        run_densities,
        spec=spec,
        subcommand="densities",
        lmax=lmax,
        fmt=fmt,
        use_cache=not no_cache,
        cache_dir=cache_dir,
    )


@main.command()
@click.argument("spec")
@click.option("--quantity", type=click.Choice(QUANTITIES), default="RR", help="Tracked quantifier.")
@click.option("--scales", callback=_scales_callback, default="", help="Comma-separated plot sizes.")
@click.option("-m", "m", type=int, default=1, help="Embedding window length.")
@click.option("-l", "--lmin", "lmin", type=int, default=1, help="Minimum line length.")
@click.option("-h", "h", type=int, default=None, help="Dyadic threshold exponent.")
@click.option("--eps", type=float, default=None, help="Raw threshold; quantized.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@_common_cache
def convergence(spec, quantity, scales, m, lmin, h, eps, fmt, no_cache, cache_dir):
    """Sweep plot sizes and chart the gap to the exact limit."""
    _dispatch(
        run_convergence,
        spec=spec,
        subcommand="convergence",
        quantity=quantity,
        scales=scales,
        m=m,
        lmin=lmin,
        h=h,
        eps=eps,
        fmt=fmt,
        use_cache=not no_cache,
        cache_dir=cache_dir,
    )


@main.command()
@click.argument("spec")
@click.option("--n", "n", type=int, required=True, help="Plot size.")
@click.option("-m", "m", type=int, default=1, help="Embedding window length.")
@click.option("-h", "h", type=int, default=None, help="Dyadic threshold exponent.")
@click.option("--eps", type=float, default=None, help="Raw threshold; quantized.")
@click.option("--format", "render_format", type=click.Choice(["ascii", "pgm"]), default="ascii")
@click.option("-o", "--output", default=None, help="Write to a file instead of stdout.")
def render(spec, n, m, h, eps, render_format, output):
    """Render the recurrence plot of SPEC."""
    _dispatch(
        run_render,
        spec=spec,
        subcommand="render",
        n=n,
        m=m,
        h=h,
        eps=eps,
        render_format=render_format,
        output=output,
    )


@main.command()
@click.option("--filter", "filter_", default=None, help="Only goldens whose name contains this.")
@click.option("--format", "fmt", type=FORMATS, default="text", help="Output format.")
@click.option("--seed", type=int, default=0, help="Seed for the randomized spot checks.")
@_common_cache
def verify(filter_, fmt, seed, no_cache, cache_dir):
    """Check every pinned golden value; exit 1 on any failure."""
    _dispatch(
        run_verify,
        spec="",
        subcommand="verify",
        filter=filter_,
        fmt=fmt,
        seed=seed,
        use_cache=not no_cache,
        cache_dir=cache_dir,
    )


if __name__ == "__main__":
    main()
