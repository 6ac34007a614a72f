"""Exact lattices, shell enumeration, harmonic polynomials, theta series.

A lattice is its Gram matrix: symmetric, positive definite, entries in
(1/2)*Z, all exact rationals.  Vectors are integer coordinate rows v with
norm v*G*v^T.  Nothing irrational is ever stored; construction A absorbs
its 1/sqrt(2) scaling into the Gram matrix.

Shell search prunes with floats (bounds inflated by a fixed slack) but
accepts exclusively by exact integer arithmetic, so the enumerated shells
are exact.  Design tests run off the histogram of pairwise inner products:
raw power moments give the cumulative strength-t criterion, and sums of the
orthogonal (Gegenbauer-type) polynomial kernel give per-degree verdicts.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._fixtures import fixture_path
from ._parallel import parallel_map
from .codes import BinaryCode, is_doubly_even, is_self_dual
from .errors import CapExceededError
from .modforms import (ModFormSpace, echelon_rows, eisenstein, fit_in_space,
                       mf_basis, mf_dim)
from .qseries import QSeries

__all__ = [
    "Lattice", "Shell", "HarmonicPolynomial", "ZonalData",
    "gram_from_text", "lattice_zn", "lattice_a2", "lattice_e8",
    "construction_a", "determinant", "is_even",
    "shell_enum", "shell_sizes_up_to", "SHELL_CAP",
    "sphere_moment", "MomentReport", "moment_design_test",
    "gegenbauer_component_sums", "spherical_T_design_report", "TDesignReport",
    "laplacian", "is_harmonic", "zonal_coeffs", "zonal_harmonic",
    "zonal_harmonic_coords", "zonal_shell_sum", "constant_poly",
    "harmonic_theta", "to_modular_q", "theta_membership_check",
    "MembershipReport",
]

SHELL_CAP = 1_000_000       # refuse to enumerate larger shells
_SLACK = 1 + 2.0 ** -20     # float pruning radius inflation


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Positive definite lattice given by an exact rational Gram matrix."""
    gram: tuple[tuple[Fraction, ...], ...]
    label: str = ""

    def __post_init__(self):
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise ValueError("gram matrix must be square")
        for i in range(n):
            for j in range(n):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram matrix must be symmetric")
                if (2 * self.gram[i][j]).denominator != 1:
                    raise ValueError("gram entries must lie in (1/2)Z")
        _ldl(self.gram)     # raises unless positive definite

    @property
    def rank(self) -> int:
        return len(self.gram)


@functools.lru_cache(maxsize=None)
def _ldl(gram) -> tuple[tuple[Fraction, ...], tuple[tuple[Fraction, ...], ...]]:
    """Exact decomposition G = U^T D U with U unit upper triangular.

    Returns (diag of D, rows of U).  Positive pivots certify positive
    definiteness; a nonpositive pivot raises.
    """
    n = len(gram)
    work = [[Fraction(x) for x in row] for row in gram]
    diag = []
    upper = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d = work[i][i]
        if d <= 0:
            raise ValueError("gram matrix is not positive definite")
        diag.append(d)
        upper[i][i] = Fraction(1)
        for j in range(i + 1, n):
            upper[i][j] = work[i][j] / d
        for r in range(i + 1, n):
            f = work[r][i] / d
            for c in range(i + 1, n):
                work[r][c] -= f * work[i][c]
    return tuple(diag), tuple(tuple(row) for row in upper)


def determinant(lat: Lattice) -> Fraction:
    diag, _ = _ldl(lat.gram)
    return math.prod(diag, start=Fraction(1))


def is_even(lat: Lattice) -> bool:
    """Diagonal even integers, off-diagonal integers: all norms even."""
    g = lat.gram
    n = lat.rank
    if any(g[i][i].denominator != 1 or g[i][i] % 2 for i in range(n)):
        return False
    return all(g[i][j].denominator == 1
               for i in range(n) for j in range(i + 1, n))


def gram_from_text(text: str, label: str = "") -> Lattice:
    """Parse a Gram matrix: one row per line, entries int or num/den."""
    rows = []
    for ln in text.splitlines():
        if ln.strip():
            rows.append(tuple(Fraction(tok) for tok in ln.split()))
    return Lattice(tuple(rows), label)


def lattice_zn(n: int) -> Lattice:
    one, zero = Fraction(1), Fraction(0)
    gram = tuple(tuple(one if i == j else zero for j in range(n))
                 for i in range(n))
    return Lattice(gram, f"Z{n}")


@functools.lru_cache(maxsize=None)
def lattice_a2() -> Lattice:
    return gram_from_text(fixture_path("lattices", "a2.txt").read_text(), "A2")


@functools.lru_cache(maxsize=None)
def lattice_e8() -> Lattice:
    return gram_from_text(fixture_path("lattices", "e8.txt").read_text(), "E8")


def construction_a(code: BinaryCode, label: str = "") -> Lattice:
    """Even unimodular lattice from a doubly even self-dual binary code.

    Basis rows over Z: the lifted generator rows plus 2*e_j for each
    non-pivot coordinate j; the 1/sqrt(2) scaling becomes a factor 1/2 on
    the Gram matrix, keeping every entry rational.
    """
    if not is_doubly_even(code):
        raise ValueError("construction A needs a doubly even code")
    if not is_self_dual(code):
        raise ValueError("construction A fixture requires self-duality")
    n = code.n
    pivots = {g.bit_length() - 1 for g in code.gens}
    rows = [[(g >> j) & 1 for j in range(n)] for g in code.gens]
    for j in range(n):
        if j not in pivots:
            rows.append([2 if i == j else 0 for i in range(n)])
    gram = tuple(tuple(Fraction(sum(a * b for a, b in zip(r1, r2)), 2)
                       for r2 in rows) for r1 in rows)
    return Lattice(gram, label or f"A({code.name or 'code'})")


# ---------------------------------------------------------------------------
# shell enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shell:
    """All lattice vectors of one exact norm, in sorted coordinate order."""
    lattice: Lattice
    norm: Fraction
    vectors: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.vectors)


def _gram2_int(lat: Lattice) -> np.ndarray:
    return np.array([[int(2 * x) for x in row] for row in lat.gram],
                    dtype=np.int64)


def _doubled_norms(lat: Lattice, arr: np.ndarray) -> np.ndarray:
    g2 = _gram2_int(lat)
    return (arr @ g2 * arr).sum(axis=1)


def _search_candidates(gram, bound2: int, outer: range | list,
                       cap: int) -> list[tuple[int, ...]]:
    """Float-pruned depth-first search for all v with 2*Q(v) <= bound2.

    ``outer`` restricts the outermost coordinate (worker partitioning).
    Bounds use the exact LDL data rounded to float and inflated by a slack
    factor, so the candidate set is a superset of the true ball; callers
    filter exactly afterward.
    """
    diag, upper = _ldl(gram)
    n = len(diag)
    df = [float(2 * d) for d in diag]
    uf = [[float(x) for x in row] for row in upper]
    budget_top = float(bound2) * _SLACK + 1e-9
    out: list[tuple[int, ...]] = []
    v = [0] * n

    def rec(i: int, budget: float) -> None:
        if i < 0:
            out.append(tuple(v))
            if len(out) > 4 * cap + 64:
                raise CapExceededError("shell search exceeded the cap")
            return
        c = 0.0
        row = uf[i]
        for j in range(i + 1, n):
            c += row[j] * v[j]
        rad = math.sqrt(max(budget, 0.0) / df[i]) * _SLACK + 1e-9
        lo = math.ceil(-c - rad)
        hi = math.floor(-c + rad)
        values = outer if i == n - 1 else range(lo, hi + 1)
        for vi in values:
            if not lo <= vi <= hi:
                continue
            t = vi + c
            rem = budget - df[i] * t * t
            if rem >= -1e-9:
                v[i] = vi
                rec(i - 1, rem)
        v[i] = 0

    rec(n - 1, budget_top)
    return out


def _enum_worker(args):
    gram, bound2, chunk, cap = args
    return _search_candidates(gram, bound2, chunk, cap)


@functools.lru_cache(maxsize=64)
def _vectors_by_doubled_norm(lat: Lattice, bound2: int, cap: int,
                             workers: int = 1) -> dict[int, tuple[tuple[int, ...], ...]]:
    """Bucket all vectors with 0 < 2*Q(v) <= bound2 by exact doubled norm."""
    if bound2 < 0:
        return {}
    diag, _ = _ldl(lat.gram)
    n = lat.rank
    rad = math.sqrt(float(bound2) / float(2 * diag[n - 1])) * _SLACK + 1e-9
    top_range = range(math.ceil(-rad), math.floor(rad) + 1)
    if workers > 1 and len(top_range) >= 2 * workers:
        chunks = [list(top_range)[i::workers] for i in range(workers)]
        parts = parallel_map(
            _enum_worker,
            [(lat.gram, bound2, c, cap) for c in chunks], workers)
        cands = [v for part in parts for v in part]
    else:
        cands = _search_candidates(lat.gram, bound2, top_range, cap)
    if not cands:
        return {}
    arr = np.array(cands, dtype=np.int64)
    norms2 = _doubled_norms(lat, arr)
    buckets: dict[int, list[tuple[int, ...]]] = {}
    for vec, w in zip(cands, norms2.tolist()):
        if 0 < w <= bound2:
            buckets.setdefault(w, []).append(vec)
    out = {}
    for w, vecs in buckets.items():
        if len(vecs) > cap:
            raise CapExceededError(
                f"shell at doubled norm {w} has {len(vecs)} > cap {cap}")
        out[w] = tuple(sorted(vecs))
    return out


def shell_enum(lat: Lattice, norm, cap: int = SHELL_CAP,
               workers: int = 1) -> Shell:
    """All vectors of the exact given norm, antipodal and sorted.

    Float pruning only widens the search box; acceptance is by exact
    integer arithmetic on the doubled Gram matrix.
    """
    norm = Fraction(norm)
    if norm < 0:
        raise ValueError("norm must be nonnegative")
    doubled = 2 * norm
    if norm == 0 or doubled.denominator != 1:
        vecs = ((tuple([0] * lat.rank),) if norm == 0 else ())
        return Shell(lat, norm, vecs)
    table = _vectors_by_doubled_norm(lat, int(doubled), cap, workers)
    vecs = table.get(int(doubled), ())
    vset = set(vecs)
    for v in vecs:
        assert tuple(-x for x in v) in vset, "shell not antipodal"
    return Shell(lat, norm, vecs)


def shell_sizes_up_to(lat: Lattice, max_norm, cap: int = SHELL_CAP,
                      workers: int = 1) -> dict[Fraction, int]:
    doubled = int(2 * Fraction(max_norm))
    table = _vectors_by_doubled_norm(lat, doubled, cap, workers)
    return {Fraction(w, 2): len(vs) for w, vs in sorted(table.items())}


# ---------------------------------------------------------------------------
# sphere moments and pairwise design tests
# ---------------------------------------------------------------------------

def sphere_moment(n: int, k: int) -> Fraction:
    """Average of (x.u)^k over the unit sphere in R^n, u any unit vector."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    if k % 2:
        return Fraction(0)
    num = math.prod(range(k - 1, 0, -2), start=1)      # (k-1)!!
    den = math.prod(range(n, n + k - 1, 2), start=1)   # n(n+2)...(n+k-2)
    return Fraction(num, den)


def _pair_histogram(shell: Shell) -> dict[int, int]:
    """Histogram of doubled pairwise inner products 2*(x.y) over X x X."""
    arr = np.array(shell.vectors, dtype=np.int64)
    g2 = _gram2_int(shell.lattice)
    half = arr @ g2
    hist: dict[int, int] = {}
    chunk = max(1, 4_000_000 // max(1, len(arr)))
    for lo in range(0, len(arr), chunk):
        prods = half[lo:lo + chunk] @ arr.T
        vals, counts = np.unique(prods, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hist[v] = hist.get(v, 0) + c
    return hist


@dataclass(frozen=True)
class MomentReport:
    norm: Fraction
    size: int
    per_k: dict[int, bool]
    strength: int
    failed_k: int | None


def moment_design_test(shell: Shell, t: int) -> MomentReport:
    """Cumulative strength test via exact power moments of inner products.

    For each k <= t compares sum over X x X of (x.y)^k with the spherical
    average |X|^2 r^{2k} m_k.  The shell is a spherical s-design exactly
    when the identity holds for all k <= s.
    """
    if not shell.vectors or shell.norm <= 0:
        raise ValueError("moment test needs a nonempty positive-norm shell")
    n = shell.lattice.rank
    hist = _pair_histogram(shell)
    size = len(shell.vectors)
    r2 = shell.norm
    per_k: dict[int, bool] = {}
    for k in range(1, t + 1):
        lhs = sum(cnt * w ** k for w, cnt in hist.items())   # sum (2 x.y)^k
        rhs = size * size * (2 * r2) ** k * sphere_moment(n, k)
        per_k[k] = lhs == rhs
    strength = 0
    while strength < t and per_k[strength + 1]:
        strength += 1
    failed = strength + 1 if strength < t else None
    return MomentReport(shell.norm, size, per_k, strength, failed)


@functools.lru_cache(maxsize=64)
def _orthogonal_kernel_polys(n: int, jmax: int) -> tuple[tuple[Fraction, ...], ...]:
    """Monic polynomials orthogonal under the sphere-moment bilinear form.

    Gram-Schmidt over 1, s, s^2, ... with <s^a, s^b> = m_{a+b}(n); the
    degree-j element is (up to positive scale) the n-dimensional Gegenbauer
    kernel polynomial, so its pairwise sum over a shell is a nonnegative
    quantity vanishing exactly when the degree-j harmonic sums vanish.
    """
    polys: list[list[Fraction]] = []
    for j in range(jmax + 1):
        cur = [Fraction(0)] * j + [Fraction(1)]
        for g in polys:
            num = _moment_inner(n, cur, list(g))
            den = _moment_inner(n, list(g), list(g))
            f = num / den
            for i, c in enumerate(g):
                cur[i] -= f * c
        polys.append(cur)
    return tuple(tuple(p) for p in polys)


def _moment_inner(n: int, p: list[Fraction], q: list[Fraction]) -> Fraction:
    acc = Fraction(0)
    for a, pa in enumerate(p):
        if pa:
            for b, qb in enumerate(q):
                if qb:
                    acc += pa * qb * sphere_moment(n, a + b)
    return acc


def gegenbauer_component_sums(shell: Shell, degrees) -> dict[int, Fraction]:
    """Exact per-degree kernel sums S_j over X x X; S_j = 0 iff the shell
    averages every degree-j harmonic polynomial to zero."""
    if not shell.vectors or shell.norm <= 0:
        raise ValueError("component sums need a nonempty positive-norm shell")
    n = shell.lattice.rank
    degrees = sorted(set(degrees))
    polys = _orthogonal_kernel_polys(n, max(degrees)) if degrees else ()
    hist = _pair_histogram(shell)
    r2 = shell.norm
    out: dict[int, Fraction] = {}
    for j in degrees:
        p = polys[j]
        acc = Fraction(0)
        for w, cnt in hist.items():
            s = Fraction(w, 1) / (2 * r2)       # cosine of the pair angle
            acc += cnt * sum(c * s ** i for i, c in enumerate(p) if c)
        out[j] = acc
    return out


@dataclass(frozen=True)
class TDesignReport:
    lattice_label: str
    norm: Fraction
    size: int
    verdicts: dict[int, bool]
    component_sums: dict[int, Fraction]

    def passes(self, degrees) -> bool:
        return all(self.verdicts[j] for j in degrees)


def spherical_T_design_report(lat: Lattice, norm, degrees,
                              cap: int = SHELL_CAP,
                              workers: int = 1) -> TDesignReport:
    """Per-degree design verdicts for one shell.

    Even degrees are decided by the exact kernel sums; odd degrees hold for
    every antipodal shell, and antipodality is asserted at enumeration, but
    the odd sums are computed anyway rather than assumed.
    """
    shell = shell_enum(lat, norm, cap, workers)
    if not shell.vectors:
        raise ValueError("empty shell")
    degrees = sorted(set(degrees))
    sums = gegenbauer_component_sums(shell, degrees)
    verdicts = {j: sums[j] == 0 for j in degrees}
    return TDesignReport(lat.label, shell.norm, len(shell.vectors),
                         verdicts, sums)


# ---------------------------------------------------------------------------
# harmonic polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZonalData:
    """Structured zonal form sum_j c_j (x.u)^{k-2j} (x.x)^j."""
    direction: tuple[Fraction, ...]
    coeffs: tuple[Fraction, ...]
    direction_norm2: Fraction
    in_lattice_coords: bool


@dataclass(frozen=True)
class HarmonicPolynomial:
    """Homogeneous polynomial with zero Laplacian.

    ``terms`` maps exponent vectors to coefficients (Euclidean variables);
    zonal polynomials additionally or instead carry ``zonal`` data for O(k)
    evaluation.  A zonal built from a lattice-coordinate direction has no
    terms expansion (its Euclidean coordinates would be irrational) and
    evaluates through the Gram matrix only.
    """
    n: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...] | None
    zonal: ZonalData | None = None

    def evaluate(self, point) -> Fraction:
        """Evaluate at a rational Euclidean point."""
        pt = [Fraction(x) for x in point]
        if self.zonal is not None and not self.zonal.in_lattice_coords:
            a = sum(u * x for u, x in zip(self.zonal.direction, pt))
            r = sum(x * x for x in pt)
            return _zonal_value(self.zonal.coeffs, self.degree, a, r)
        if self.terms is None:
            raise ValueError("no explicit terms to evaluate")
        acc = Fraction(0)
        for expo, c in self.terms:
            prod = c
            for x, e in zip(pt, expo):
                if e:
                    prod *= x ** e
            acc += prod
        return acc


def _zonal_value(coeffs, k, a: Fraction, r: Fraction) -> Fraction:
    acc = Fraction(0)
    for j, c in enumerate(coeffs):
        acc += c * a ** (k - 2 * j) * r ** j
    return acc


def constant_poly(n: int) -> HarmonicPolynomial:
    return HarmonicPolynomial(n, 0, (((0,) * n, Fraction(1)),))


def laplacian(p: HarmonicPolynomial) -> tuple[tuple[tuple[int, ...], Fraction], ...]:
    """Termwise second derivatives; returns collected terms of degree-2 less."""
    if p.terms is None:
        raise ValueError("laplacian needs an explicit terms expansion")
    acc: dict[tuple[int, ...], Fraction] = {}
    for expo, c in p.terms:
        for i, e in enumerate(expo):
            if e >= 2:
                new = list(expo)
                new[i] = e - 2
                key = tuple(new)
                acc[key] = acc.get(key, Fraction(0)) + c * e * (e - 1)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


def is_harmonic(p: HarmonicPolynomial) -> bool:
    if p.terms is not None:
        return laplacian(p) == ()
    # coordinate zonal: re-derive the coefficient ladder exactly
    z = p.zonal
    return z.coeffs == zonal_coeffs(p.n, p.degree, z.direction_norm2)


@functools.lru_cache(maxsize=256)
def zonal_coeffs(n: int, k: int, u_norm2: Fraction) -> tuple[Fraction, ...]:
    """Coefficients c_j making sum c_j (x.u)^{k-2j}(x.x)^j harmonic.

    Annihilating the Laplacian term by term forces
      c_{j+1} = -c_j (k-2j)(k-2j-1) |u|^2 / (2(j+1)(n + 2k - 2j - 4)).
    """
    cs = [Fraction(1)]
    for j in range(k // 2):
        num = -(k - 2 * j) * (k - 2 * j - 1) * u_norm2
        den = 2 * (j + 1) * (n + 2 * k - 2 * j - 4)
        cs.append(cs[-1] * num / den)
    return tuple(cs)


def _poly_dict_mul(p: dict, q: dict) -> dict:
    out: dict[tuple[int, ...], Fraction] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v != 0}


def _poly_dict_pow(p: dict, e: int, n: int) -> dict:
    out = {(0,) * n: Fraction(1)}
    for _ in range(e):
        out = _poly_dict_mul(out, p)
    return out


def zonal_harmonic(n: int, k: int, direction) -> HarmonicPolynomial:
    """Degree-k zonal harmonic with a rational Euclidean direction.

    Expanded to explicit terms and re-checked by the Laplacian (an internal
    bug guard: the construction cannot silently produce a non-harmonic).
    """
    u = tuple(Fraction(x) for x in direction)
    if len(u) != n or all(x == 0 for x in u):
        raise ValueError("direction must be a nonzero vector of length n")
    un2 = sum(x * x for x in u)
    cs = zonal_coeffs(n, k, un2)
    dot = {tuple(1 if i == j else 0 for i in range(n)): u[j]
           for j in range(n) if u[j]}
    rr = {}
    for j in range(n):
        key = tuple(2 if i == j else 0 for i in range(n))
        rr[key] = Fraction(1)
    total: dict[tuple[int, ...], Fraction] = {}
    for j, c in enumerate(cs):
        part = _poly_dict_mul(_poly_dict_pow(dot, k - 2 * j, n),
                              _poly_dict_pow(rr, j, n))
        for e, v in part.items():
            total[e] = total.get(e, Fraction(0)) + c * v
    terms = tuple(sorted((e, v) for e, v in total.items() if v != 0))
    p = HarmonicPolynomial(n, k, terms, ZonalData(u, cs, un2, False))
    assert is_harmonic(p), "zonal construction failed its own postcondition"
    return p


def zonal_harmonic_coords(lat: Lattice, k: int, direction) -> HarmonicPolynomial:
    """Zonal harmonic whose direction is a lattice coordinate row.

    All evaluations go through the Gram matrix, so values at lattice
    vectors are exact rationals even when the Euclidean embedding is
    irrational.
    """
    w = tuple(Fraction(x) for x in direction)
    if len(w) != lat.rank or all(x == 0 for x in w):
        raise ValueError("direction must be a nonzero coordinate row")
    un2 = _gram_dot(lat, w, w)
    cs = zonal_coeffs(lat.rank, k, un2)
    return HarmonicPolynomial(lat.rank, k, None, ZonalData(w, cs, un2, True))


def _gram_dot(lat: Lattice, a, b) -> Fraction:
    g = lat.gram
    n = lat.rank
    acc = Fraction(0)
    for i in range(n):
        if a[i]:
            acc += a[i] * sum(g[i][j] * b[j] for j in range(n) if b[j])
    return acc


def zonal_shell_sum(lat: Lattice, shell: Shell, k: int, direction) -> Fraction:
    """Exact sum over the shell of the degree-k zonal with the given
    lattice-coordinate direction (histogram of x.u values, then the ladder)."""
    if not shell.vectors:
        return Fraction(0)
    w = [Fraction(x) for x in direction]
    cs = zonal_coeffs(lat.rank, k, _gram_dot(lat, w, w))
    scale = math.lcm(*(x.denominator for x in w))
    w_int = np.array([int(x * scale) for x in w], dtype=np.int64)
    arr = np.array(shell.vectors, dtype=np.int64)
    dots2 = arr @ _gram2_int(lat) @ w_int      # 2 * scale * (x.u)
    vals, counts = np.unique(dots2, return_counts=True)
    r2 = shell.norm
    acc = Fraction(0)
    for v, cnt in zip(vals.tolist(), counts.tolist()):
        a = Fraction(int(v), 2 * scale)
        acc += cnt * _zonal_value(cs, k, a, r2)
    return acc


# ---------------------------------------------------------------------------
# theta series
# ---------------------------------------------------------------------------

def _poly_shell_sum(lat: Lattice, shell: Shell, p: HarmonicPolynomial) -> Fraction:
    if p.degree == 0:
        lead = p.terms[0][1] if p.terms else Fraction(1)
        return lead * len(shell.vectors)
    if p.zonal is not None and p.zonal.in_lattice_coords:
        return zonal_shell_sum(lat, shell, p.degree, p.zonal.direction)
    if _is_identity(lat):
        return sum(p.evaluate(v) for v in shell.vectors)
    raise ValueError("polynomial cannot be evaluated exactly on this "
                     "lattice; use a lattice-coordinate zonal")


def _is_identity(lat: Lattice) -> bool:
    return all(lat.gram[i][j] == (1 if i == j else 0)
               for i in range(lat.rank) for j in range(lat.rank))


def harmonic_theta(lat: Lattice, p: HarmonicPolynomial, prec_norm: int,
                   cap: int = SHELL_CAP, workers: int = 1) -> QSeries:
    """Sum of P(x) q^{(x,x)} over norms <= prec_norm, exponent = norm.

    Precondition: integral norms (all fixtures).  For an even lattice odd
    norms are provably empty and skipped.
    """
    if p.n != lat.rank:
        raise ValueError("polynomial dimension must match the lattice rank")
    even = is_even(lat)
    table = _vectors_by_doubled_norm(lat, 2 * prec_norm, cap, workers)
    coeffs: dict[int, Fraction] = {}
    if p.degree == 0:
        coeffs[0] = p.terms[0][1] if p.terms else Fraction(1)
    for w, vecs in table.items():
        if w % 2:
            raise ValueError("non-integral norm encountered")
        norm = w // 2
        if even and norm % 2:
            raise ValueError("odd norm on an even lattice: enumeration bug")
        val = _poly_shell_sum(lat, Shell(lat, Fraction(norm), vecs), p)
        if val:
            coeffs[norm] = val
    return QSeries(0, prec_norm, coeffs)


def to_modular_q(series: QSeries) -> QSeries:
    """Reindex a lattice-convention theta (exponent = norm) by halving
    exponents; only valid when odd-exponent coefficients vanish."""
    if series.offset24 % 24 != 0:
        raise ValueError("expected a whole-exponent lattice series")
    base = series.offset24 // 24          # normalization may have shifted
    coeffs: dict[int, Fraction] = {}
    for i in range(series.prec + 1):
        e = base + i
        c = series[i]
        if e % 2:
            if c != 0:
                raise ValueError(f"odd exponent {e} present; cannot halve")
        elif c:
            coeffs[e // 2] = c
    return QSeries(0, (base + series.prec) // 2, coeffs)


@dataclass(frozen=True)
class MembershipReport:
    weight: int
    with_e6_factor: bool
    fit_ok: bool
    coords: tuple[Fraction, ...] | None
    mismatch_exponent: int | None


def theta_membership_check(lat: Lattice, p: HarmonicPolynomial,
                           prec_norm: int = 8, cap: int = SHELL_CAP,
                           workers: int = 1) -> MembershipReport:
    """Fit the modular-q theta into its predicted level-one space.

    Weight n/2 + degree; an odd half-degree j = degree/2 routes through the
    E6-multiple subspace.  The fit is overdetermined by every enumerated
    coefficient beyond the space dimension.
    """
    if not is_even(lat) or determinant(lat) != 1:
        raise ValueError("membership prediction needs an even unimodular "
                         "lattice")
    if p.degree % 2:
        raise ValueError("harmonic degree must be even here")
    j = p.degree // 2
    weight = lat.rank // 2 + p.degree
    theta = to_modular_q(harmonic_theta(lat, p, prec_norm, cap, workers))
    ltop = theta.offset24 // 24 + theta.prec   # highest known exponent
    if j % 2 == 0:
        space = mf_basis(weight, ltop)
    else:
        # weight = 2 (mod 4): every monomial carries E6, so the space is
        # exactly E6 * M_{weight-6}; re-echelonize the products for the fit
        base = mf_basis(weight - 6, ltop)
        e6 = eisenstein(6, ltop)
        rows = echelon_rows([e6 * b for b in base.basis], ltop)
        space = ModFormSpace(weight, base.dim, ltop, rows)
        assert space.dim == mf_dim(weight)
    margin = ltop + 1 - space.dim
    if margin < 1:
        raise ValueError("not enough theta coefficients for a meaningful fit")
    fit = fit_in_space(theta, space, margin=margin)
    return MembershipReport(weight, j % 2 == 1, fit.ok,
                            fit.coords if fit.ok else None,
                            fit.mismatch_exponent)
