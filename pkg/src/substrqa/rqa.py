"""Recurrence statistics: line-based quantifiers and correlation sums.

Two independent routes to the same structure:

* the line route aggregates a LineHistogram into length densities, the
  recurrence rate (fraction of recurrent off-diagonal cells), determinism
  (mass of lines at least lmin long relative to all), average line length
  and the entropy of the line-length distribution;
* the window route counts pairs of positions whose windows agree and sums
  squared window-class sizes, giving the correlation sum directly in
  O(n log n) without touching individual lines.

Finite plots tie the two routes together only up to edge effects, and the
conversion helpers return both the main term and the residual it leaves;
residuals() packages the exact residuals of one instance so property tests
can assert every bound.  All quantities except the entropy are exact
rationals; a zero denominator makes a quantity absent (None), never zero.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .recplot import LineHistogram, histogram
from .substitution import BitSequence, window_codes

__all__ = [
    "AsymptoticEstimate",
    "CorsumDecomposition",
    "CorsumInterval",
    "Estimate",
    "LinedensEstimate",
    "Provenance",
    "RQAReport",
    "ResidualBounds",
    "asymptotic_from_corsum",
    "correlation_sum",
    "corsum_from_histogram",
    "corsum_from_rqa",
    "linedens_from_corsum",
    "measures_from_histogram",
    "residuals",
    "rqa_from_corsum",
]


class Provenance(str, enum.Enum):
    EMPIRICAL = "empirical"
    ASYMPTOTIC = "asymptotic"


def _log_fraction(f: Fraction) -> float:
    # Splitting the log keeps huge numerators/denominators in integer land.
    return math.log(f.numerator) - math.log(f.denominator)


def _frac_json(f: Fraction) -> dict:
    return {"num": f.numerator, "den": f.denominator, "approx": float(f)}


def _optional_json(value):
    if value is None:
        return None
    if isinstance(value, Fraction):
        return _frac_json(value)
    if isinstance(value, float) and math.isinf(value):
        return {"infinite": True}
    return value


def _optional_from_json(value):
    if value is None:
        return None
    if isinstance(value, dict):
        if value.get("infinite"):
            return math.inf
        return Fraction(value["num"], value["den"])
    return float(value)


@dataclass(frozen=True)
class RQAReport:
    """Quantifiers of one plot (or one asymptotic limit, n=None).

    linedens maps each line length >= lmin to its density; tail_density is
    their sum; RR1 is the recurrence rate at minimum length 1, kept so DET
    can be reconstructed after serialization.  Absent quantities are None;
    an infinite average line length is math.inf.
    """

    n: int | None
    m: int
    h: int
    lmin: int
    linedens: dict[int, Fraction]
    tail_density: Fraction
    RR: Fraction
    RR1: Fraction | None
    DET: Fraction | None
    Lavg: Fraction | float | None
    ENT: float | None
    C: Fraction | None
    provenance: Provenance

    def with_corsum(self, corsum: Fraction) -> "RQAReport":
        return replace(self, C=corsum)

    def to_json_dict(self) -> dict:
        return {
            "provenance": self.provenance.value,
            "n": self.n,
            "m": self.m,
            "h": self.h,
            "lmin": self.lmin,
            "linedens": {str(l): _frac_json(d) for l, d in sorted(self.linedens.items())},
            "tail_density": _frac_json(self.tail_density),
            "RR": _frac_json(self.RR),
            "RR1": _optional_json(self.RR1),
            "DET": _optional_json(self.DET),
            "Lavg": _optional_json(self.Lavg),
            "ENT": self.ENT,
            "C": _optional_json(self.C),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "RQAReport":
        return cls(
            n=data["n"],
            m=data["m"],
            h=data["h"],
            lmin=data["lmin"],
            linedens={
                int(l): Fraction(d["num"], d["den"]) for l, d in data["linedens"].items()
            },
            tail_density=Fraction(data["tail_density"]["num"], data["tail_density"]["den"]),
            RR=Fraction(data["RR"]["num"], data["RR"]["den"]),
            RR1=_optional_from_json(data["RR1"]),
            DET=_optional_from_json(data["DET"]),
            Lavg=_optional_from_json(data["Lavg"]),
            ENT=data["ENT"],
            C=_optional_from_json(data["C"]),
            provenance=Provenance(data["provenance"]),
        )

    CSV_HEADER = ("provenance", "n", "m", "h", "lmin", "RR", "DET", "Lavg", "ENT", "C")

    def to_csv_row(self) -> tuple[str, ...]:
        def show(value) -> str:
            if value is None:
                return ""
            if isinstance(value, Fraction):
                return repr(float(value))
            if isinstance(value, float):
                return "inf" if math.isinf(value) else repr(value)
            return str(value)

        return (
            self.provenance.value,
            "" if self.n is None else str(self.n),
            str(self.m),
            str(self.h),
            str(self.lmin),
            show(self.RR),
            show(self.DET),
            show(self.Lavg),
            show(self.ENT),
            show(self.C),
        )


class Estimate(NamedTuple):
    """A conversion main term plus the absolute bound its residual obeys."""

    value: Fraction
    bound: Fraction


class LinedensEstimate(NamedTuple):
    value: Fraction
    bound: Fraction
    lavg: Fraction | None


class CorsumDecomposition(NamedTuple):
    """Correlation sum split into the line-histogram term and the remainder
    contributed by pairs whose windows overhang the far plot edge."""

    main_term: Fraction
    triangle: Fraction | None


class CorsumInterval(NamedTuple):
    """Main term plus the half-open interval its residual must lie in."""

    value: Fraction
    low: Fraction
    high: Fraction


class AsymptoticEstimate(NamedTuple):
    RR: Fraction
    DET: Fraction | None
    Lavg: Fraction | float
    C: Fraction


@dataclass(frozen=True)
class ResidualBounds:
    """Exact conversion residuals of one finite plot at one minimum length."""

    n: int
    lmin: int
    triangle: Fraction
    delta_rr: Fraction
    delta_N: Fraction
    delta_C: Fraction

    def satisfied(self) -> bool:
        n, l = self.n, self.lmin
        return (
            0 <= self.triangle <= 2 * (l - 1) * (n - 1)
            and abs(self.delta_rr) <= Fraction(2 * l * (l - 1), n)
            and abs(self.delta_N) <= Fraction(2 * l, n)
            and Fraction(1, n) <= self.delta_C < Fraction(2 * l, n)
        )


def measures_from_histogram(hist: LineHistogram, lmin: int) -> RQAReport:
    """Line-based quantifiers at minimum line length lmin.

    Uses total line counts, boundary lines included; pass
    hist.excluding_n_boundary() for the clipped-lines-dropped convention.
    """
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    n = hist.n
    if n < 2:
        raise DomainError(f"plot size must be at least 2, got {n}")
    cells = n * n - n
    all_dens = {length: Fraction(hist.total(length), cells) for length in hist.lengths()}
    rr1 = sum((l * d for l, d in all_dens.items()), Fraction(0))
    dens = {l: d for l, d in all_dens.items() if l >= lmin}
    tail = sum(dens.values(), Fraction(0))
    rr = sum((l * d for l, d in dens.items()), Fraction(0))
    det = rr / rr1 if rr1 else None
    lavg = rr / tail if tail else None
    if not tail:
        ent = None
    elif len(dens) == 1:
        ent = 0.0
    else:
        weighted = sum(float(d) * _log_fraction(d) for d in dens.values())
        ent = _log_fraction(tail) - weighted / float(tail)
    return RQAReport(
        n=n,
        m=hist.m,
        h=hist.h,
        lmin=lmin,
        linedens=dens,
        tail_density=tail,
        RR=rr,
        RR1=rr1,
        DET=det,
        Lavg=lavg,
        ENT=ent,
        C=None,
        provenance=Provenance.EMPIRICAL,
    )


def correlation_sum(x: BitSequence, n: int, lmin: int, h: int, *, m: int = 1) -> Fraction:
    """Fraction of position pairs (diagonal included) whose shifted copies
    stay within 2^-h of each other for lmin consecutive steps.

    Pairs agree exactly when their windows of width lmin+h+m-2 agree, so the
    sum is the normalised sum of squared window-class sizes.  Windows near
    position n read on into the prefix rather than being truncated.
    """
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    if n < 1:
        raise DomainError(f"plot size must be positive, got {n}")
    if h < 1 or m < 1:
        raise DomainError(f"need h >= 1 and m >= 1, got ({h}, {m})")
    width = lmin + (h + m - 1) - 1
    need = n + width - 1
    if len(x) < need:
        raise DomainError(
            f"correlation sum at n={n}, window {width} needs {need} letters, got {len(x)}"
        )
    if width <= 64:
        codes = window_codes(x.bits[:need], width)
        _, counts = np.unique(codes, return_counts=True)
        total = int((counts * counts).sum())
    else:
        text = x.to01()
        classes = Counter(text[i : i + width] for i in range(n))
        total = sum(c * c for c in classes.values())
    return Fraction(total, n * n)


def corsum_from_histogram(
    hist: LineHistogram, lmin: int, corsum: Fraction | None = None
) -> CorsumDecomposition:
    """Reassemble the correlation sum from line counts.

    main_term collects every recurrent pair that lies on a line of length
    at least lmin plus the n diagonal pairs; the open remainder (pairs on
    shorter clipped stretches at the far edge) is returned as `triangle`
    when the true correlation sum is supplied.
    """
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    n = hist.n
    mass = sum(
        (l - lmin + 1) * count
        for l, counts in hist.counts.items()
        if (count := sum(counts)) and l >= lmin
    )
    main = Fraction(mass + n, n * n)
    triangle = None if corsum is None else n * n * corsum - n * n * main
    return CorsumDecomposition(main_term=main, triangle=triangle)


def rqa_from_corsum(c_l: Fraction, c_next: Fraction, n: int, lmin: int) -> Estimate:
    """Recurrence rate reconstructed from two adjacent correlation sums."""
    if n < 2:
        raise DomainError(f"plot size must be at least 2, got {n}")
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    value = Fraction(n, n - 1) * (lmin * c_l - (lmin - 1) * c_next) - Fraction(1, n - 1)
    return Estimate(value=value, bound=Fraction(2 * lmin * (lmin - 1), n))


def linedens_from_corsum(
    c_l: Fraction, c_next: Fraction, n: int, lmin: int
) -> LinedensEstimate:
    """Cumulative line density (and the induced average-length quotient)
    reconstructed from two adjacent correlation sums."""
    if n < 2:
        raise DomainError(f"plot size must be at least 2, got {n}")
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    value = Fraction(n, n - 1) * (c_l - c_next)
    rr = rqa_from_corsum(c_l, c_next, n, lmin).value
    lavg = rr / value if value > 0 else None
    return LinedensEstimate(value=value, bound=Fraction(2 * lmin, n), lavg=lavg)


def corsum_from_rqa(rr: Fraction, tail: Fraction, n: int, lmin: int) -> CorsumInterval:
    """Correlation sum reconstructed from line statistics; the residual is
    positive (diagonal plus edge pairs) and lies in [1/n, 2*lmin/n)."""
    if n < 2:
        raise DomainError(f"plot size must be at least 2, got {n}")
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    value = Fraction(n - 1, n) * (rr - (lmin - 1) * tail)
    return CorsumInterval(value=value, low=Fraction(1, n), high=Fraction(2 * lmin, n))


def asymptotic_from_corsum(
    c_1: Fraction, c_l: Fraction, c_next: Fraction, lmin: int
) -> AsymptoticEstimate:
    """Limit quantifiers from limit correlation sums (edge terms gone).

    The average line length is infinite exactly when the two adjacent
    correlation sums coincide (no line ever ends).
    """
    if lmin < 1:
        raise DomainError(f"minimum line length must be positive, got {lmin}")
    if not 0 <= c_next <= c_l <= c_1 <= 1:
        raise DomainError(
            f"correlation sums must satisfy 0 <= C_(l+1) <= C_l <= C_1 <= 1, "
            f"got {c_next}, {c_l}, {c_1}"
        )
    rr = lmin * c_l - (lmin - 1) * c_next
    det = rr / c_1 if c_1 else None
    gap = c_l - c_next
    lavg = lmin + c_next / gap if gap else math.inf
    return AsymptoticEstimate(RR=rr, DET=det, Lavg=lavg, C=rr - (lmin - 1) * gap)


def residuals(x: BitSequence, n: int, lmin: int, h: int = 1) -> ResidualBounds:
    """Exact conversion residuals of one plot instance (boundary lines in).

    Needs a prefix of at least n + lmin + h - 1 letters, enough for the
    correlation sum one length above lmin.
    """
    hist = histogram(x, n, h)
    report = measures_from_histogram(hist, lmin)
    c_l = correlation_sum(x, n, lmin, h)
    c_next = correlation_sum(x, n, lmin + 1, h)
    main, triangle = corsum_from_histogram(hist, lmin, c_l)
    assert triangle is not None
    return ResidualBounds(
        n=n,
        lmin=lmin,
        triangle=triangle,
        delta_rr=report.RR - rqa_from_corsum(c_l, c_next, n, lmin).value,
        delta_N=report.tail_density - linedens_from_corsum(c_l, c_next, n, lmin).value,
        delta_C=c_l - corsum_from_rqa(report.RR, report.tail_density, n, lmin).value,
    )
