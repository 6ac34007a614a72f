"""Level-one modular form machinery on exact q-series.

Everything here is a finite exact computation: eta quotients expand through
Euler's pentagonal number theorem, Eisenstein series through sieved divisor
sums, and the weight-k space is handled via the echelonized monomial basis in
E4 and E6 (leading exponents 0, 1, ..., dim-1).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import OffsetError, PrecisionError
from .qseries import QSeries

__all__ = [
    "eta", "eta_quotient", "eisenstein", "delta", "delta_eta", "delta_eisenstein",
    "mf_dim", "mf_basis", "echelon_rows", "fit_in_space", "ModFormSpace",
    "FitResult",
    "factorize", "sigma", "ord_p", "ramanujan_tau", "vanishing_indices",
]


# ---------------------------------------------------------------------------
# eta and friends
# ---------------------------------------------------------------------------

def _euler_ints(prec: int) -> list[int]:
    """Coefficients of prod (1 - q^i), pentagonal-number sparse."""
    out = [0] * (prec + 1)
    out[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > prec:
            break
        s = -1 if k % 2 else 1
        out[g1] += s
        if g2 <= prec:
            out[g2] += s
        k += 1
    return out


def eta(prec: int) -> QSeries:
    """Dedekind eta: q^(1/24) * prod (1 - q^i), exact through q^prec."""
    return QSeries.from_int_list(1, _euler_ints(prec))


def eta_quotient(factors: list[tuple[int, int]], prec: int) -> QSeries:
    """Product of eta(m z)^r for (m, r) in ``factors``; r may be negative.

    The leading exponent is sum(m * r) / 24 by construction.
    """
    merged: dict[int, int] = {}
    for m, r in factors:
        if m < 1:
            raise ValueError(f"eta argument multiplier must be >= 1, got {m}")
        merged[m] = merged.get(m, 0) + r
    num = QSeries.one(prec)
    den = QSeries.one(prec)
    for m, r in sorted(merged.items()):
        if r == 0:
            continue
        base = [0] * (prec + 1)
        for i, c in enumerate(_euler_ints(prec // m)):
            base[m * i] = c
        factor = QSeries.from_int_list(m, base).pow(abs(r))
        if r > 0:
            num = num * factor
        else:
            den = den * factor
    return num if den == QSeries.one(prec) else num.div(den)


def _sigma_sieve(power: int, bound: int) -> list[int]:
    """sigma_power(n) for n = 0..bound (index 0 unused)."""
    out = [0] * (bound + 1)
    for d in range(1, bound + 1):
        dk = d ** power
        for m in range(d, bound + 1, d):
            out[m] += dk
    return out


def eisenstein(k: int, prec: int) -> QSeries:
    """Normalized Eisenstein series E4 or E6."""
    if k == 4:
        mult, power = 240, 3
    elif k == 6:
        mult, power = -504, 5
    else:
        raise ValueError(f"only weights 4 and 6 are generators, got {k}")
    sig = _sigma_sieve(power, prec)
    ints = [1] + [mult * sig[n] for n in range(1, prec + 1)]
    return QSeries.from_int_list(0, ints)


def delta_eta(prec: int) -> QSeries:
    """The discriminant cusp form as the 24th power of eta."""
    return eta_quotient([(1, 24)], prec)


def delta(prec: int) -> QSeries:
    """The discriminant cusp form; the Eisenstein-formula route."""
    return delta_eisenstein(prec)


def delta_eisenstein(prec: int) -> QSeries:
    """The discriminant cusp form as (E4^3 - E6^2)/1728.

    Computed at prec+1 internally: the constant terms cancel, so one
    leading index is consumed by normalisation.
    """
    e4 = eisenstein(4, prec + 1)
    e6 = eisenstein(6, prec + 1)
    return (e4.pow(3) - e6.pow(2)).scale(Fraction(1, 1728))


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, smallest prime first."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def sigma(n: int, k: int) -> int:
    """Sum of k-th powers of the divisors of n."""
    total = 1
    for p, e in factorize(n):
        if k == 0:
            total *= e + 1
        else:
            total *= (p ** (k * (e + 1)) - 1) // (p ** k - 1)
    return total


def ord_p(n: int, p: int) -> int:
    """Exponent of the prime p in n (n != 0)."""
    if n == 0:
        raise ValueError("ord_p of zero is infinite")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


_tau_lock = threading.Lock()
_tau_cache: list[int] = []


def ramanujan_tau(n: int) -> int:
    """tau(n) read off the eta-power expansion of the discriminant.

    The underlying expansion is cached and grown geometrically; safe to call
    from worker threads.
    """
    if n < 1:
        raise ValueError("tau is indexed from 1")
    global _tau_cache
    with _tau_lock:
        if n > len(_tau_cache):
            bound = max(1000, 2 * n)
            # delta = q * prod(1-q^i)^24: tau(m) sits at product index m-1
            _tau_cache = delta_eta(bound).int_list(bound)
        return _tau_cache[n - 1]


# ---------------------------------------------------------------------------
# weight-k spaces
# ---------------------------------------------------------------------------

def mf_dim(k: int) -> int:
    """Dimension of the full level-one space of weight k (0 if empty)."""
    if k < 0 or k % 2:
        return 0
    return sum(1 for b in range(k // 6 + 1) if (k - 6 * b) % 4 == 0)


@dataclass(frozen=True)
class ModFormSpace:
    """Echelonized basis of the weight-k space, exact through q^prec."""
    weight: int
    dim: int
    prec: int
    basis: list[QSeries]

    def __post_init__(self):
        assert len(self.basis) == self.dim
        for i, f in enumerate(self.basis):
            lead = min(f.coeffs) if f.coeffs else None
            assert f.offset24 % 24 == 0
            assert lead is not None and lead + f.offset24 // 24 == i, \
                "echelon basis must lead at exponents 0..dim-1"


def echelon_rows(rows: list[QSeries], prec: int) -> list[QSeries]:
    """Fully reduced row echelon form of the spanned series space.

    Rows must all live on the integer exponent grid.  Pivot columns are
    the leading exponents of the result, normalized to coefficient 1 and
    cleared from every other row.
    """
    def dense(f: QSeries) -> list[Fraction]:
        e0 = f.offset24 // 24
        return [f[i - e0] if i - e0 >= 0 else Fraction(0)
                for i in range(prec + 1)]

    mats = [dense(f) for f in rows]
    basis_rows: list[list[Fraction]] = []
    col = 0
    while len(basis_rows) < len(rows) and col <= prec:
        pivot = next((r for r in mats if r[col] != 0), None)
        if pivot is None:
            col += 1
            continue
        mats.remove(pivot)
        pivot = [c / pivot[col] for c in pivot]
        for r in mats:
            if r[col] != 0:
                f = r[col]
                for j in range(col, prec + 1):
                    r[j] -= f * pivot[j]
        for r in basis_rows:
            if r[col] != 0:
                f = r[col]
                for j in range(col, prec + 1):
                    r[j] -= f * pivot[j]
        basis_rows.append(pivot)
        col += 1
    return [QSeries(0, prec, {i: c for i, c in enumerate(row) if c})
            for row in basis_rows]


def mf_basis(k: int, prec: int) -> ModFormSpace:
    """Monomials E4^a E6^b of weight k, Gauss-reduced to echelon form."""
    dim = mf_dim(k)
    if dim == 0:
        return ModFormSpace(k, 0, prec, [])
    if prec < dim - 1:
        raise PrecisionError(
            f"prec {prec} cannot hold {dim} echelon leading exponents")
    e4 = eisenstein(4, prec)
    e6 = eisenstein(6, prec)
    rows = []
    for b in range(k // 6 + 1):
        if (k - 6 * b) % 4 == 0:
            a = (k - 6 * b) // 4
            rows.append(e4.pow(a) * e6.pow(b))
    # pivots of the reduced echelon form land at exponents 0..dim-1
    basis = echelon_rows(rows, prec)
    assert len(basis) == dim, "monomial basis failed to reach echelon"
    return ModFormSpace(k, dim, prec, basis)


@dataclass(frozen=True)
class FitResult:
    """Outcome of expressing a series in a ModFormSpace."""
    ok: bool
    coords: tuple[Fraction, ...] | None
    mismatch_exponent: int | None

    def __bool__(self) -> bool:
        return self.ok


def fit_in_space(f: QSeries, space: ModFormSpace, margin: int = 10) -> FitResult:
    """Exact coordinates of f in the space, or the first failing exponent.

    Insufficient precision raises; non-membership is an ordinary result.
    The margin demands that many checkable coefficients beyond the ones that
    merely determine the coordinates.
    """
    if f.offset24 % 24 != 0:
        raise OffsetError("candidate lives on a fractional exponent grid")
    e0 = f.offset24 // 24
    if f.coeffs and e0 < 0:
        return FitResult(False, None, e0)
    top = e0 + f.prec          # exponents 0..top are all known
    if top + 1 < space.dim + margin:
        raise PrecisionError(
            f"need {space.dim + margin} known coefficients, have {top + 1}")

    def coeff_at(g: QSeries, e: int) -> Fraction:
        i = e - g.offset24 // 24
        return g[i] if i >= 0 else Fraction(0)

    coords = tuple(coeff_at(f, i) for i in range(space.dim))
    for e in range(min(top, space.prec) + 1):
        expect = sum((c * coeff_at(g, e) for c, g in zip(coords, space.basis)),
                     Fraction(0))
        if coeff_at(f, e) != expect:
            return FitResult(False, None, e)
    return FitResult(True, coords, None)


def vanishing_indices(f: QSeries, bound: int) -> list[int]:
    """Indices i <= bound with zero coefficient, in f's own indexing.

    The index of a stored coefficient is its q-exponent rounded up to the
    integer grid, which matches the usual display q^(frac) * sum a(i) q^i
    with frac in (-1, 0].
    """
    base = -((-f.offset24) // 24)       # ceil(offset24 / 24)
    if base + f.prec < bound:
        raise PrecisionError(
            f"series known through index {base + f.prec}, need {bound}")
    out = []
    for i in range(f.prec + 1):
        label = base + i
        if label > bound:
            break
        if f[i] == 0:
            out.append(label)
    return out
