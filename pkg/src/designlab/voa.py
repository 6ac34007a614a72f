"""Conformal design strength via exact trace series.

No vertex-algebra internals live here: every question about homogeneous
spaces reduces to coefficient vanishing in explicit q-series (eta powers,
Eisenstein series, weighted thetas divided by eta^rank), so the whole layer
is series bookkeeping plus dimension counts of level-one modular forms.

Indexing convention: a trace displayed as q^{-c/24} * sum_{i>=base} t(i) q^i
is stored reduced; ``index_base`` records the display index of the stored
leading coefficient, and ``coeff(i)`` looks up display indices directly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import PrecisionError
from .lattices import (HarmonicPolynomial, Lattice, determinant,
                       harmonic_theta, is_even, to_modular_q,
                       zonal_harmonic_coords)
from .modforms import (eisenstein, eta_quotient, factorize, fit_in_space,
                       mf_basis, mf_dim, ramanujan_tau, vanishing_indices)
from .qseries import QSeries

__all__ = [
    "TraceSeries", "a_series", "b_series", "c_series", "d_series",
    "graded_trace", "ord_criterion", "ConformalTSet", "conformal_T_set",
    "ObstructionResult", "modular_obstruction", "StrengthReport",
    "strength_at", "LehmerScan", "lehmer_scan", "Remark4Report",
    "remark4_series", "certified_zonal_trace", "ProportionalityCertificate",
]


# ---------------------------------------------------------------------------
# trace series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceSeries:
    """An exact graded trace q^{-c/24}(sum over display indices >= base).

    The stored series is offset-reduced, so the literal -c/24 prefactor is
    recovered through ``index_base``: stored index 0 holds the coefficient
    of display index ``index_base``.  ``prefactor24`` records an explicit
    extra q^{1/24}-power carried by closed-form displays.
    """
    central_charge: int
    series: QSeries
    source: str
    index_base: int = 1
    prefactor24: int = 0

    def __post_init__(self):
        if self.central_charge <= 0:
            raise ValueError("central charge must be positive")
        off = (self.series.offset24 - self.prefactor24 + self.central_charge
               - 24 * self.index_base)
        if off % 24 != 0:
            raise ValueError("offset inconsistent with charge and index base")

    def coeff(self, i: int) -> Fraction:
        """Coefficient at display index i (meaningful for i >= index_base)."""
        j = i - self.index_base
        if j < 0:
            return Fraction(0)
        return self.series[j]

    def max_index(self) -> int:
        return self.index_base + self.series.prec

    def zero_indices_up_to(self, bound: int) -> tuple[int, ...]:
        if bound > self.max_index():
            raise PrecisionError(f"series known only to index "
                                 f"{self.max_index()}, asked {bound}")
        return tuple(i for i in range(self.index_base, bound + 1)
                     if self.coeff(i) == 0)


@functools.lru_cache(maxsize=32)
def a_series(prec: int) -> TraceSeries:
    """eta^16, displayed q^{-1/3} sum_{i>=1} a(i) q^i (central charge 8)."""
    return TraceSeries(8, eta_quotient([(1, 16)], prec), "eta^16")


@functools.lru_cache(maxsize=32)
def b_series(prec: int) -> TraceSeries:
    """eta^8, displayed q^{-2/3} sum_{i>=1} b(i) q^i (central charge 16)."""
    return TraceSeries(16, eta_quotient([(1, 8)], prec), "eta^8")


@functools.lru_cache(maxsize=32)
def c_series(prec: int) -> TraceSeries:
    """E4, displayed q^{-1} sum_{i>=1} c(i) q^i (central charge 24)."""
    return TraceSeries(24, eisenstein(4, prec), "E4")


@functools.lru_cache(maxsize=32)
def d_series(prec: int) -> TraceSeries:
    """E4 * eta^8: the degree-8 witness for central charge 16."""
    ser = eisenstein(4, prec + 1) * eta_quotient([(1, 8)], prec + 1)
    return TraceSeries(16, ser.truncate(prec), "E4*eta^8")


def graded_trace(lat: Lattice, p: HarmonicPolynomial, prec_norm: int,
                 cap: int = 1_000_000, workers: int = 1) -> TraceSeries:
    """Weighted theta over eta^rank, the lattice-VOA graded trace."""
    if not is_even(lat) or determinant(lat) != 1:
        raise ValueError("graded traces need an even unimodular lattice")
    theta = to_modular_q(harmonic_theta(lat, p, prec_norm, cap, workers))
    rank = lat.rank
    eta_c = eta_quotient([(1, rank)], theta.prec + rank // 24 + 2)
    trace = theta.div(eta_c)
    base, rem = divmod(trace.offset24 + rank, 24)
    assert rem == 0, "trace offset must sit on the -c/24 grid"
    return TraceSeries(rank, trace, f"theta/eta^{rank}", index_base=base)


# ---------------------------------------------------------------------------
# coefficient criteria
# ---------------------------------------------------------------------------

def ord_criterion(ell: int) -> bool:
    """True iff some prime p = 2 (mod 3) divides 3*ell - 2 to an odd power."""
    if ell < 1:
        raise ValueError("index must be positive")
    return any(p % 3 == 2 and e % 2 == 1
               for p, e in factorize(3 * ell - 2))


@dataclass(frozen=True)
class ObstructionResult:
    forced: bool
    reason: str
    weight: int
    space_dim: int
    constraints: int
    witness_leads: tuple[int, ...]


def modular_obstruction(c: int, s: int, min_weight_mu: int = 1) -> ObstructionResult:
    """Can a trace q^{-c/24} * F, F of weight c/2 + s with ord_q F >= mu,
    be nonzero?

    Odd weight kills everything outright; otherwise the mu leading echelon
    coefficients are independent linear conditions, so the candidate space
    survives exactly when dim exceeds mu.
    """
    if s < 1 or min_weight_mu < 1 or c <= 0 or c % 8:
        raise ValueError("need c a positive multiple of 8, s >= 1, mu >= 1")
    weight = c // 2 + s
    if weight % 2:
        return ObstructionResult(True, "odd weight", weight, 0,
                                 min_weight_mu, ())
    dim = mf_dim(weight)
    if dim <= min_weight_mu:
        return ObstructionResult(
            True, "leading-coefficient constraints exhaust the space",
            weight, dim, min_weight_mu, ())
    leads = tuple(range(min_weight_mu, dim))
    return ObstructionResult(False, "witness space survives", weight, dim,
                             min_weight_mu, leads)


@dataclass(frozen=True)
class ConformalTSet:
    central_charge: int
    explicit: frozenset[int]
    includes_all_odd: bool = True

    def __contains__(self, degree: int) -> bool:
        return (degree in self.explicit
                or (self.includes_all_odd and degree % 2 == 1))


_EXPECTED_T = {
    8: frozenset({1, 2, 3, 4, 5, 6, 7, 9, 10, 11}),
    16: frozenset({1, 2, 3, 5, 6, 7}),
    24: frozenset({1, 2, 3}),
}


@functools.lru_cache(maxsize=None)
def conformal_T_set(c: int) -> ConformalTSet:
    """Guaranteed design degrees for the three supported charges.

    The hardcoded expectation is re-derived: every even degree <= 12 must
    be classified identically by the modular obstruction count (mu = 1),
    and odd degrees come from the odd-weight rule.
    """
    if c not in _EXPECTED_T:
        raise ValueError(f"unsupported central charge {c}")
    expected = _EXPECTED_T[c]
    derived_even = {s for s in range(2, 13, 2)
                    if modular_obstruction(c, s, 1).forced}
    if derived_even != {s for s in expected if s % 2 == 0}:
        raise AssertionError(
            f"derived even degrees {sorted(derived_even)} disagree with "
            f"the expected T-set for c={c}")
    return ConformalTSet(c, expected)


# ---------------------------------------------------------------------------
# strength reports
# ---------------------------------------------------------------------------

_CONTESTED = {8: 8, 16: 4, 24: 4}


@dataclass(frozen=True)
class StrengthReport:
    central_charge: int
    ell: int
    base_T: frozenset[int]
    contested_degree: int
    contested_coefficient: Fraction
    is_design_at_contested: bool
    extra: dict[int, tuple[bool, Fraction]] = field(default_factory=dict)
    strength: int | str = 0


@functools.lru_cache(maxsize=8)
def _witness_trace(c: int, prec: int) -> TraceSeries:
    """The single surviving trace candidate at the contested degree."""
    if c == 8:
        return a_series(prec)
    if c == 16:
        return b_series(prec)
    if c == 24:
        return c_series(prec)
    raise ValueError(f"unsupported central charge {c}")


def strength_at(c: int, ell: int, prec: int | None = None) -> StrengthReport:
    """Design strength of the degree-ell homogeneous space.

    The guaranteed degrees come from the T-set; the first even degree
    outside it is decided by one coefficient of the witness trace
    (eta^16 / eta^8 / E4 for c = 8 / 16 / 24).  For c = 16 a vanishing
    witness upgrades the strength through degree 7, with the degree-8
    verdict read off E4*eta^8.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    prec = prec if prec is not None else max(ell + 2, 16)
    if ell > prec:
        raise PrecisionError("requested index beyond the computed range")
    tset = conformal_T_set(c)
    contested = _CONTESTED[c]
    coeff = _witness_trace(c, prec).coeff(ell)
    passes = coeff == 0
    extra: dict[int, tuple[bool, Fraction]] = {}
    if c == 8:
        strength: int | str = "≥ 11 (bounded scan)" if passes else 7
    elif c == 16:
        if not passes:
            strength = 3
        else:
            dcoef = d_series(prec).coeff(ell)
            extra[8] = (dcoef == 0, dcoef)
            strength = "≥ 9 (bounded scan)" if dcoef == 0 else 7
    else:
        strength = "≥ 5 (bounded scan)" if passes else 3
    return StrengthReport(c, ell, tset.explicit, contested, coeff, passes,
                          extra, strength)


# ---------------------------------------------------------------------------
# scans and closed forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LehmerScan:
    bound: int
    tau_zeros: tuple[int, ...]
    shell_degree8_failures: dict[int, bool]
    a_values: dict[int, Fraction]


def lehmer_scan(bound: int, shells_to: int = 2) -> LehmerScan:
    """Scan tau for zeros and tie the small cases to the shell picture.

    For ell <= shells_to the rank-8 norm-2ell shell is enumerated and its
    degree-8 verdict recorded: the shell fails degree 8 exactly when
    tau(ell) is nonzero.
    """
    from .lattices import gegenbauer_component_sums, lattice_e8, shell_enum
    zeros = tuple(ell for ell in range(1, bound + 1)
                  if ramanujan_tau(ell) == 0)
    failures: dict[int, bool] = {}
    e8 = lattice_e8()
    for ell in range(1, shells_to + 1):
        sh = shell_enum(e8, 2 * ell)
        s8 = gegenbauer_component_sums(sh, [8])[8]
        failures[ell] = s8 != 0
        if (ramanujan_tau(ell) != 0) != failures[ell]:
            raise AssertionError(
                f"tau({ell}) and the degree-8 shell verdict disagree")
    aa = a_series(max(bound, 2))
    a_vals = {ell: aa.coeff(ell) for ell in range(1, min(bound, 10) + 1)}
    return LehmerScan(bound, zeros, failures, a_vals)


@dataclass(frozen=True)
class Remark4Report:
    prec: int
    trace: TraceSeries
    zero_indices: tuple[int, ...]

    @property
    def all_nonzero(self) -> bool:
        return not self.zero_indices


def remark4_series(prec: int) -> Remark4Report:
    """q^{1/24} * eta(2z)^15 / eta(z)^7, scanned for vanishing coefficients.

    The closed form carries an explicit extra q^{1/24}; offsets work out to
    a series starting at q^1, so display indices match stored ones shifted
    by the base.
    """
    if prec < 1:
        raise ValueError("prec must be positive")
    ser = eta_quotient([(2, 15), (1, -7)], prec).shift24(1)
    assert ser.offset24 == 24, "closed form must start exactly at q^1"
    trace = TraceSeries(1, ser, "q^{1/24} eta(2z)^15/eta(z)^7",
                        index_base=1, prefactor24=1)
    zeros = tuple(i for i in vanishing_indices(ser, prec))
    return Remark4Report(prec, trace, zeros)


# ---------------------------------------------------------------------------
# certified proportionality between traces and reference series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProportionalityCertificate:
    ratio: Fraction
    coefficients_checked: int
    direction: tuple[int, ...]
    fit_coords: tuple[Fraction, ...]


def certified_zonal_trace(lat: Lattice, degree: int, reference: TraceSeries,
                          prec: int = 60, prec_norm: int = 8,
                          directions=None, cap: int = 1_000_000,
                          workers: int = 1) -> ProportionalityCertificate:
    """Certify graded_trace(lat, zonal) = ratio * reference to >= 50 terms.

    The enumerated theta coefficients overdetermine its coordinates in the
    predicted weight-(rank/2 + degree) space (membership is guaranteed for
    even unimodular lattices, and every extra coefficient cross-checks the
    fit); the predicted form is
    then extended symbolically to full precision and divided by eta^rank,
    so the proportionality is certified far beyond enumeration range.
    Directions yielding the zero series are skipped.
    """
    rank = lat.rank
    weight = rank // 2 + degree
    dim = mf_dim(weight)
    if prec_norm // 2 < dim:
        raise PrecisionError(
            f"enumeration to norm {prec_norm} underdetermines a "
            f"{dim}-dimensional weight-{weight} fit")
    space = mf_basis(weight, prec)
    cands = list(directions) if directions is not None else \
        [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)] \
        + [tuple(1 for _ in range(rank)), tuple((i % 3) - 1 for i in range(rank))]
    last_error = None
    for w in cands:
        p = zonal_harmonic_coords(lat, degree, w)
        theta = to_modular_q(harmonic_theta(lat, p, prec_norm, cap, workers))
        if theta.is_zero():
            continue
        ltop = theta.offset24 // 24 + theta.prec
        small = mf_basis(weight, ltop)
        fit = fit_in_space(theta, small, margin=ltop + 1 - small.dim)
        if not fit.ok:
            raise AssertionError("theta escaped its predicted space: "
                                 f"mismatch at {fit.mismatch_exponent}")
        predicted = QSeries.zero(prec)
        for x, g in zip(fit.coords, space.basis):
            if x:
                predicted = predicted + g.scale(x)
        eta_c = eta_quotient([(1, rank)], prec + rank // 24 + 2)
        trace = predicted.div(eta_c)
        if trace.offset24 != reference.series.offset24:
            raise AssertionError("trace sits on a different exponent grid "
                                 f"than {reference.source}")
        through = min(trace.prec, reference.series.prec)
        if through < 50:
            raise PrecisionError("need at least 50 comparable coefficients")
        ratio = trace.proportional_to(reference.series, through)
        if ratio is None:
            last_error = AssertionError(
                f"trace not proportional to {reference.source}")
            continue
        return ProportionalityCertificate(ratio, through + 1, tuple(w),
                                          tuple(fit.coords))
    if last_error:
        raise last_error
    raise ValueError("every candidate direction gave the zero theta")
