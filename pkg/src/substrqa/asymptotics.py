"""Limiting recurrence quantifiers, exact in the plot-size limit.

On the support of the start-pair densities the lengths form finitely many
geometric families (one per base length) plus finitely many lone lengths,
so every tail sum over line lengths collapses to geometric and
arithmetico-geometric series with ratio 1/q^2.  Two independent routes are
implemented: term-grouped tail summation (the reference), and closed
forms driven by cumulative tables over the base lengths; the closed-form
route recomputes the reference on every call and refuses to answer if the
two disagree.

Degenerate substitutions short-circuit: when some image is constant the
limit plot is dominated by an unbounded solid block, and when the fixed
point is periodic every diagonal line is infinite.  Both give recurrence
rate, determinism and correlation sum 1 with infinite average line length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .densities import DensityTable, closed_form_indices, dens_K, reconstruct_base
from .errors import DiscrepancyError, DomainError
from .recplot import quantize_eps
from .rqa import Provenance, RQAReport, _frac_json, _log_fraction, _optional_json
from .substitution import Classification, SubshiftKind, Substitution

__all__ = [
    "AsymptoticQuantifiers",
    "NuTables",
    "asymptotic_quantifiers",
    "closed_form",
    "determinism_limit_scan",
    "fixed_point_period",
    "nonprimitive_quantifiers",
    "nu_tables",
    "periodic_quantifiers",
    "quantifiers_via_sums",
]


@dataclass(frozen=True)
class AsymptoticQuantifiers:
    """Limit values of the recurrence quantifiers for one (m, h, lmin).

    lprime = lmin + m + h - 2 is the window length whose start-pair
    densities drive everything.  Lavg is math.inf when lines grow without
    bound; ENT is None when the line-length distribution degenerates.
    """

    m: int
    h: int
    lmin: int
    lprime: int
    linedens: Fraction
    lineDens: Fraction
    RR: Fraction
    RR1: Fraction
    DET: Fraction
    Lavg: Fraction | float
    C: Fraction
    ENT: float | None
    note: str | None = None

    def to_report(self) -> RQAReport:
        """Shared-emitter form: an RQAReport with no plot size, carrying the
        single exact-length density this query resolved."""
        return RQAReport(
            n=None,
            m=self.m,
            h=self.h,
            lmin=self.lmin,
            linedens={self.lmin: self.linedens},
            tail_density=self.lineDens,
            RR=self.RR,
            RR1=self.RR1,
            DET=self.DET,
            Lavg=self.Lavg,
            ENT=self.ENT,
            C=self.C,
            provenance=Provenance.ASYMPTOTIC,
        )

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "h": self.h,
            "lmin": self.lmin,
            "lprime": self.lprime,
            "linedens": _frac_json(self.linedens),
            "lineDens": _frac_json(self.lineDens),
            "RR": _frac_json(self.RR),
            "RR1": _frac_json(self.RR1),
            "DET": _frac_json(self.DET),
            "Lavg": _optional_json(self.Lavg),
            "C": _frac_json(self.C),
            "ENT": self.ENT,
            "note": self.note,
        }

    def to_csv_row(self) -> tuple[str, ...]:
        return self.to_report().to_csv_row()


def _validate_inputs(m: int, lmin: int, h: int) -> None:
    if m < 1 or lmin < 1 or h < 1:
        raise DomainError(f"m, lmin, h must all be >= 1, got ({m}, {lmin}, {h})")


# -- reference route: grouped tail sums --------------------------------------


def _family_first_step(base: int, c: Fraction, q: int, lprime: int) -> int:
    k = 0
    while q**k * (base + c) - c < lprime:
        k += 1
    return k


def _tail_sums(table: DensityTable, lprime: int) -> tuple[Fraction, Fraction, float]:
    """(sum of dens, sum of length*dens, -sum of dens*log dens) over all
    lengths >= lprime with positive start-pair density."""
    constants = table.constants
    q = constants.q
    c = constants.c
    x = Fraction(1, q * q)
    s0 = Fraction(0)
    s1 = Fraction(0)
    neg_slog = 0.0
    for lone in range(lprime, constants.R0):
        d = table.base[lone]
        if d:
            s0 += d
            s1 += lone * d
            neg_slog -= float(d) * _log_fraction(d)
    for base in range(constants.R0, constants.R):
        d = table.base[base]
        if not d:
            continue
        k0 = _family_first_step(base, c, q, lprime)
        tail = x**k0 / (1 - x)
        tail_weighted = (k0 * x**k0 - (k0 - 1) * x ** (k0 + 1)) / (1 - x) ** 2
        s0 += d * tail
        s1 += d * ((base + c) * Fraction(1, q) ** k0 * Fraction(q, q - 1) - c * tail)
        neg_slog -= float(d) * (
            _log_fraction(d) * float(tail) - 2.0 * math.log(q) * float(tail_weighted)
        )
    return s0, s1, neg_slog


def _assemble(
    table: DensityTable,
    m: int,
    lmin: int,
    h: int,
    tails,
    linedens: Fraction,
    note: str | None = None,
) -> AsymptoticQuantifiers:
    offset = m + h - 2
    lprime = lmin + offset
    s0, s1, neg_slog = tails(lprime)
    s0_first, s1_first, _ = tails(1 + offset)
    rr = s1 - offset * s0
    rr1 = s1_first - offset * s0_first
    if s0 <= 0 or rr1 <= 0:
        raise DiscrepancyError(
            f"tail sums must be positive for a primitive aperiodic table, got "
            f"lineDens={s0}, RR1={rr1}"
        )
    return AsymptoticQuantifiers(
        m=m,
        h=h,
        lmin=lmin,
        lprime=lprime,
        linedens=linedens,
        lineDens=s0,
        RR=rr,
        RR1=rr1,
        DET=rr / rr1,
        Lavg=rr / s0,
        C=rr - (lmin - 1) * s0,
        ENT=_log_fraction(s0) + neg_slog / float(s0),
        note=note,
    )


def quantifiers_via_sums(
    table: DensityTable, m: int = 1, lmin: int = 1, h: int = 1
) -> AsymptoticQuantifiers:
    """Reference evaluation by exact tail summation.

    The exact-length density is taken as a difference of adjacent tails, so
    this route never consults the scaling decomposition directly.
    """
    _validate_inputs(m, lmin, h)
    lprime = lmin + m + h - 2
    linedens = _tail_sums(table, lprime)[0] - _tail_sums(table, lprime + 1)[0]
    return _assemble(table, m, lmin, h, lambda lp: _tail_sums(table, lp), linedens)


# -- second route: cumulative base tables ------------------------------------


@dataclass(frozen=True)
class NuTables:
    """Cumulative sums over base lengths, indexed l in [R0, R]: everything
    strictly below l, so the R0 entries are zero and the R entries are the
    full totals; tilde_* hold total minus entry."""

    R0: int
    R: int
    nu_N: dict[int, Fraction]
    nu_RR: dict[int, Fraction]
    nu_ENT: dict[int, float]
    tilde_N: dict[int, Fraction]
    tilde_RR: dict[int, Fraction]
    tilde_ENT: dict[int, float]


def nu_tables(table: DensityTable) -> NuTables:
    constants = table.constants
    nu_n: dict[int, Fraction] = {}
    nu_rr: dict[int, Fraction] = {}
    nu_ent: dict[int, float] = {}
    acc_n, acc_rr, acc_ent = Fraction(0), Fraction(0), 0.0
    for l in range(constants.R0, constants.R + 1):
        nu_n[l], nu_rr[l], nu_ent[l] = acc_n, acc_rr, acc_ent
        if l < constants.R:
            d = table.base[l]
            acc_n += d
            acc_rr += l * d
            if d:
                acc_ent -= float(d) * _log_fraction(d)
    total_n, total_rr, total_ent = nu_n[constants.R], nu_rr[constants.R], nu_ent[constants.R]
    return NuTables(
        R0=constants.R0,
        R=constants.R,
        nu_N=nu_n,
        nu_RR=nu_rr,
        nu_ENT=nu_ent,
        tilde_N={l: total_n - v for l, v in nu_n.items()},
        tilde_RR={l: total_rr - v for l, v in nu_rr.items()},
        tilde_ENT={l: total_ent - v for l, v in nu_ent.items()},
    )


def _closed_tail(
    table: DensityTable, nut: NuTables, lprime: int
) -> tuple[Fraction, Fraction, float]:
    constants = table.constants
    q = constants.q
    c = constants.c
    if lprime < constants.R0:
        # Peel lone lengths one at a time below the closed-form floor.
        s0, s1, neg_slog = _closed_tail(table, nut, constants.R0)
        for lone in range(lprime, constants.R0):
            d = table.base[lone]
            if d:
                s0 += d
                s1 += lone * d
                neg_slog -= float(d) * _log_fraction(d)
        return s0, s1, neg_slog
    j, l0 = closed_form_indices(constants, lprime)
    qq = q * q
    scale2 = q ** (2 * j) * (qq - 1)
    nu_n, tilde_n = nut.nu_N[l0], nut.tilde_N[l0]
    s0 = (nu_n + qq * tilde_n) / scale2
    s1 = (
        (nut.nu_RR[l0] + c * nu_n) + q * (nut.tilde_RR[l0] + c * tilde_n)
    ) / (q**j * (q - 1)) - c * s0
    neg_slog = (
        2.0
        * math.log(q)
        / float(q ** (2 * j) * (qq - 1) ** 2)
        * float(((j + 1) * qq - j) * nu_n + qq * (j * qq - j + 1) * tilde_n)
        + (nut.nu_ENT[l0] + qq * nut.tilde_ENT[l0]) / scale2
    )
    return s0, s1, neg_slog


def closed_form(
    table: DensityTable, m: int = 1, lmin: int = 1, h: int = 1
) -> AsymptoticQuantifiers:
    """Closed-form evaluation via the cumulative tables, cross-checked.

    Every call recomputes the reference tail sums and demands exact
    rational agreement (1e-9 for the entropy); disagreement raises
    DiscrepancyError rather than returning either value.
    """
    _validate_inputs(m, lmin, h)
    nut = nu_tables(table)
    lprime = lmin + m + h - 2
    result = _assemble(
        table,
        m,
        lmin,
        h,
        lambda lp: _closed_tail(table, nut, lp),
        dens_K(table, lprime),
    )
    reference = quantifiers_via_sums(table, m, lmin, h)
    for field in ("linedens", "lineDens", "RR", "RR1", "DET", "Lavg", "C"):
        mine, ref = getattr(result, field), getattr(reference, field)
        if mine != ref:
            raise DiscrepancyError(
                f"closed form and tail sums disagree on {field} at "
                f"(m={m}, lmin={lmin}, h={h}): {mine} vs {ref}"
            )
    if abs(result.ENT - reference.ENT) > 1e-9:
        raise DiscrepancyError(
            f"closed form and tail sums disagree on ENT at (m={m}, lmin={lmin}, "
            f"h={h}): {result.ENT} vs {reference.ENT}"
        )
    return result


# -- degenerate substitutions ------------------------------------------------


def _degenerate(
    cls: Classification, m: int, lmin: int, eps, note: str
) -> AsymptoticQuantifiers:
    _validate_inputs(m, lmin, 1)
    h = quantize_eps(eps)
    one = Fraction(1)
    zero = Fraction(0)
    return AsymptoticQuantifiers(
        m=m,
        h=h,
        lmin=lmin,
        lprime=lmin + m + h - 2,
        linedens=zero,
        lineDens=zero,
        RR=one,
        RR1=one,
        DET=one,
        Lavg=math.inf,
        C=one,
        ENT=None,
        note=note,
    )


def nonprimitive_quantifiers(
    cls: Classification, m: int = 1, lmin: int = 1, eps=Fraction(1, 2)
) -> AsymptoticQuantifiers:
    """Limit values when an image is constant: the plot is dominated by one
    unbounded solid block, so all rates are 1 and lines have no finite
    average; whether the line-length entropy is finite is left open, so it
    is reported absent."""
    if cls.kind not in (
        SubshiftKind.NONPRIMITIVE_PROXIMAL,
        SubshiftKind.NONPRIMITIVE_TRIVIAL,
    ):
        raise DomainError(
            f"nonprimitive_quantifiers needs a constant-image substitution, got {cls.kind.value}"
        )
    return _degenerate(
        cls, m, lmin, eps, "constant-image substitution: line lengths are unbounded"
    )


def fixed_point_period(sub: Substitution) -> int:
    """Smallest period of the fixed point, read off a generated prefix."""
    n = max(64, 4 * sub.q * sub.q)
    bits = sub.fixed_point_prefix(n).bits
    for p in range(1, n // 2 + 1):
        if (bits[: n - p] == bits[p:]).all():
            return p
    raise DiscrepancyError(f"no period up to {n // 2} in a supposedly periodic fixed point")


def periodic_quantifiers(
    cls: Classification, m: int = 1, lmin: int = 1, eps=Fraction(1, 2)
) -> AsymptoticQuantifiers:
    """Limit values for a periodic fixed point: every diagonal line of the
    infinite plot is infinite, at every threshold."""
    if cls.kind is not SubshiftKind.PRIMITIVE_PERIODIC:
        raise DomainError(
            f"periodic_quantifiers needs a periodic fixed point, got {cls.kind.value}"
        )
    period = fixed_point_period(cls.normalized)
    return _degenerate(
        cls,
        m,
        lmin,
        eps,
        f"periodic fixed point (period {period}): every diagonal line is infinite",
    )


# -- dispatch ----------------------------------------------------------------


def asymptotic_quantifiers(
    sub: Substitution, m: int = 1, lmin: int = 1, eps=Fraction(1, 2)
) -> AsymptoticQuantifiers:
    """Classify and route to the matching limit evaluation.

    Primitive aperiodic substitutions go through the cross-checked closed
    form on the normalized form (normalization only relabels letters or
    regroups blocks, which recurrence statistics cannot see).
    """
    cls = sub.classify()
    if cls.kind is SubshiftKind.PRIMITIVE_PERIODIC:
        return periodic_quantifiers(cls, m, lmin, eps)
    if cls.kind is not SubshiftKind.PRIMITIVE_APERIODIC:
        return nonprimitive_quantifiers(cls, m, lmin, eps)
    table = reconstruct_base(cls.normalized)
    return closed_form(table, m, lmin, quantize_eps(eps))


def determinism_limit_scan(
    sub: Substitution, m: int = 1, lmin: int = 1, h_range=range(1, 25)
) -> list[tuple[int, Fraction]]:
    """Exact determinism at thresholds 2^-h for each h in h_range.

    Degenerate substitutions scan constantly at 1; primitive aperiodic ones
    approach 1 with dips wherever the density support has gaps.
    """
    cls = sub.classify()
    rows: list[tuple[int, Fraction]] = []
    if cls.kind is SubshiftKind.PRIMITIVE_APERIODIC:
        table = reconstruct_base(cls.normalized)
        for h in h_range:
            rows.append((h, quantifiers_via_sums(table, m, lmin, h).DET))
    else:
        for h in h_range:
            if h < 1:
                raise DomainError(f"thresholds need h >= 1, got {h}")
            rows.append((h, Fraction(1)))
    return rows
