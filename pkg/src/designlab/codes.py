"""Binary codes, their shells as block families, and discrete harmonics.

Codewords and block supports are bitmasks (bit i = coordinate i).  The
discrete harmonic space Harm_k on k-subsets of an n-set is realized through
its difference-product basis: for disjoint pairs (a_1,b_1),...,(a_k,b_k) the
function

    f(z) = prod_i ( [b_i in z] - [a_i in z] )     (z a k-subset)

lies in the kernel of the boundary map gamma, and the pair systems read off
standard two-row Young tableaux give exactly dim = C(n,k) - C(n,k-1) of them,
a basis.  Sums of f-tilde over word supports then reduce to integer products,
which is what makes exact Delsarte-style checks cheap.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from ._fixtures import fixture_path
from .errors import CapExceededError

__all__ = [
    "BinaryCode", "BlockFamily", "DiscreteHarmonic",
    "code_from_rows", "code_from_text", "code_from_generator",
    "hamming_e8", "golay_g24", "d16_plus", "direct_sum",
    "is_doubly_even", "is_self_dual", "min_weight", "weight_distribution",
    "shell", "design_lambda", "LambdaResult",
    "harm_dim", "harm_basis", "harmonic_family_sums",
    "delsarte_design_check", "two_weight_design_check", "TwoWeightReport",
    "harmonic_weight_enumerator", "antisymmetry_check", "AntisymmetryReport",
    "divisibility_structure_check", "DivisibilityReport",
]

WORD_CAP_LOG2 = 24          # refuse to enumerate more than 2^24 codewords
TABLEAU_CAP = 100_000       # cap on C(n, k) when building harmonic bases
GAMMA_APPLY_LIMIT = 2_000_000   # ops budget for exhaustive gamma checks


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryCode:
    """A binary linear code given by a row-reduced generator matrix."""
    n: int
    gens: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if not 1 <= self.n <= 32:
            raise ValueError("code length must be between 1 and 32")

    @property
    def k(self) -> int:
        return len(self.gens)


def _rref(rows: list[int]) -> tuple[int, ...]:
    """GF(2) reduced row echelon form, one row per pivot bit."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            if h in piv:
                r ^= piv[h]
            else:
                piv[h] = r
                break
    for h in sorted(piv, reverse=True):
        for h2 in piv:
            if h2 != h and piv[h2] >> h & 1:
                piv[h2] ^= piv[h]
    return tuple(sorted(piv.values(), reverse=True))


def code_from_rows(n: int, rows: list[int], name: str = "") -> BinaryCode:
    """Build a code from generator bitmask rows (reduced internally)."""
    for r in rows:
        if r >> n:
            raise ValueError("generator row exceeds code length")
    return BinaryCode(n, _rref(rows), name)


def code_from_text(text: str, name: str = "") -> BinaryCode:
    """Parse a generator matrix written as lines of 0/1 characters."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n = len(lines[0])
    rows = []
    for ln in lines:
        if len(ln) != n or set(ln) - {"0", "1"}:
            raise ValueError(f"bad generator row: {ln!r}")
        rows.append(sum(1 << i for i, ch in enumerate(ln) if ch == "1"))
    return code_from_rows(n, rows, name)


def code_from_generator(rows: list[str], name: str = "") -> BinaryCode:
    """Build a code from generator rows given as 0/1 strings.

    Dependent rows reduce away silently; the resulting dimension is the
    rank of the matrix, not the number of rows supplied.
    """
    return code_from_text("\n".join(rows), name)


@functools.lru_cache(maxsize=None)
def _codewords(code: BinaryCode) -> tuple[int, ...]:
    if code.k > WORD_CAP_LOG2:
        raise CapExceededError(
            f"2^{code.k} codewords exceed the enumeration cap")
    words = [0] * (1 << code.k)
    w = 0
    for i in range(1, 1 << code.k):
        w ^= code.gens[(i & -i).bit_length() - 1]
        words[i] = w
    return tuple(words)


def codewords(code: BinaryCode) -> tuple[int, ...]:
    """All 2^k codewords as bitmasks (Gray-code order, cached)."""
    return _codewords(code)


# -- fixtures ----------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def hamming_e8() -> BinaryCode:
    """The [8,4,4] extended Hamming code (first-order Reed-Muller)."""
    return code_from_text(fixture_path("codes", "hamming8.txt").read_text(),
                          name="hamming8")


@functools.lru_cache(maxsize=None)
def golay_g24() -> BinaryCode:
    """The [24,12,8] extended binary Golay code."""
    return code_from_text(fixture_path("codes", "golay24.txt").read_text(),
                          name="golay24")


@functools.lru_cache(maxsize=None)
def d16_plus() -> BinaryCode:
    """The indecomposable [16,8,4] doubly even self-dual code."""
    return code_from_text(fixture_path("codes", "d16plus.txt").read_text(),
                          name="d16plus")


def direct_sum(a: BinaryCode, b: BinaryCode, name: str = "") -> BinaryCode:
    rows = list(a.gens) + [g << a.n for g in b.gens]
    return code_from_rows(a.n + b.n, rows,
                          name or f"{a.name}+{b.name}")


# -- predicates --------------------------------------------------------------

def is_doubly_even(code: BinaryCode) -> bool:
    """All codeword weights divisible by 4.

    Checked on generators: doubly even generators with pairwise even
    intersections generate a doubly even code (weights add mod 4 via
    wt(u+v) = wt(u) + wt(v) - 2|u&v|).
    """
    gens = code.gens
    if any(g.bit_count() % 4 for g in gens):
        return False
    return all((gens[i] & gens[j]).bit_count() % 2 == 0
               for i in range(len(gens)) for j in range(i + 1, len(gens)))


def is_self_dual(code: BinaryCode) -> bool:
    if 2 * code.k != code.n:
        return False
    gens = code.gens
    return all((gens[i] & gens[j]).bit_count() % 2 == 0
               for i in range(len(gens)) for j in range(i, len(gens)))


def weight_distribution(code: BinaryCode) -> list[int]:
    out = [0] * (code.n + 1)
    for w in codewords(code):
        out[w.bit_count()] += 1
    return out


def min_weight(code: BinaryCode) -> int:
    return min(w.bit_count() for w in codewords(code) if w)


# ---------------------------------------------------------------------------
# block families and brute-force design counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockFamily:
    """A family of distinct subsets of an n-set, stored as bitmasks."""
    n: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        assert len(set(self.blocks)) == len(self.blocks), "blocks repeat"

    @property
    def block_sizes(self) -> frozenset[int]:
        return frozenset(b.bit_count() for b in self.blocks)

    def union(self, other: "BlockFamily") -> "BlockFamily":
        assert self.n == other.n
        return BlockFamily(self.n, self.blocks + other.blocks)


def shell(code: BinaryCode, w: int) -> BlockFamily:
    """Supports of the weight-w codewords."""
    masks = tuple(c for c in codewords(code) if c.bit_count() == w)
    return BlockFamily(code.n, masks)


@dataclass(frozen=True)
class LambdaResult:
    is_design: bool
    lam: int | None
    witness: tuple[tuple[int, ...], int, tuple[int, ...], int] | None


def design_lambda(family: BlockFamily, t: int,
                  allow_mixed: bool = False) -> LambdaResult:
    """Brute-force t-design check: count blocks over every t-subset.

    Returns the common count lambda, or a witness pair of t-subsets with
    different counts.  Mixed block sizes must be requested explicitly.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    if not allow_mixed and len(family.block_sizes) > 1:
        raise ValueError("mixed block sizes; pass allow_mixed=True")
    if t == 0:
        return LambdaResult(True, len(family.blocks), None)
    counts: dict[tuple[int, ...], int] = {}
    for b in family.blocks:
        support = [i for i in range(family.n) if b >> i & 1]
        for sub in itertools.combinations(support, t):
            counts[sub] = counts.get(sub, 0) + 1
    total = comb(family.n, t)
    if not counts:
        return LambdaResult(True, 0, None)
    values = set(counts.values())
    if len(values) == 1 and len(counts) == total:
        return LambdaResult(True, values.pop(), None)
    # produce a concrete unequal pair
    lo = min(counts, key=counts.get)
    hi = max(counts, key=counts.get)
    if len(counts) < total:  # some t-subset is covered zero times
        covered = set(counts)
        for sub in itertools.combinations(range(family.n), t):
            if sub not in covered:
                return LambdaResult(False, None, (sub, 0, hi, counts[hi]))
    return LambdaResult(False, None, (lo, counts[lo], hi, counts[hi]))


# ---------------------------------------------------------------------------
# discrete harmonics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteHarmonic:
    """An element of Harm_k: a function on k-subsets killed by gamma.

    ``pairs`` is set for difference products and enables O(k) evaluation of
    the induced f-tilde; ``values`` is the explicit sparse table.
    """
    n: int
    degree: int
    values: tuple[tuple[int, Fraction], ...]
    pairs: tuple[tuple[int, int], ...] | None = None

    def tilde(self, mask: int) -> Fraction:
        """f-tilde(u) = sum of f over k-subsets of u."""
        if self.pairs is not None:
            prod = 1
            for a, b in self.pairs:
                prod *= (mask >> b & 1) - (mask >> a & 1)
                if not prod:
                    return Fraction(0)
            return Fraction(prod)
        acc = Fraction(0)
        for z, c in self.values:
            if z & mask == z:
                acc += c
        return acc

    def gamma_is_zero(self) -> bool:
        """Apply the boundary map exactly and test for the zero function."""
        acc: dict[int, Fraction] = {}
        for z, c in self.values:
            m = z
            while m:
                low = m & -m
                y = z ^ low
                acc[y] = acc.get(y, Fraction(0)) + c
                m ^= low
        return all(v == 0 for v in acc.values())


def harm_dim(n: int, k: int) -> int:
    """dim Harm_k = C(n,k) - C(n,k-1), zero once k exceeds n/2."""
    if k == 0:
        return 1
    return max(0, comb(n, k) - comb(n, k - 1))


@functools.lru_cache(maxsize=32)
def harm_basis(n: int, k: int, cap: int = TABLEAU_CAP) -> tuple[DiscreteHarmonic, ...]:
    """Difference-product basis of Harm_k from standard two-row tableaux.

    Pair systems are the columns of standard Young tableaux of shape
    (n-k, k): second rows c_0 < ... < c_{k-1} with c_i >= 2i+1, each paired
    with the matching order statistic of the complement.  Every element is
    certified in ker gamma: exhaustively when the basis is small, otherwise
    by the defining disjointness plus an exhaustive check of a random sample.
    """
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    if comb(n, k) > cap:
        raise CapExceededError(f"C({n},{k}) exceeds cap {cap}")
    if k == 0:
        return (DiscreteHarmonic(n, 0, ((0, Fraction(1)),)),)
    out = []
    for second in itertools.combinations(range(n), k):
        if any(c < 2 * i + 1 for i, c in enumerate(second)):
            continue
        in_second = set(second)
        complement = [x for x in range(n) if x not in in_second]
        pairs = tuple((complement[i], second[i]) for i in range(k))
        vals = []
        for bits in range(1 << k):
            mask = 0
            for i, (a, b) in enumerate(pairs):
                mask |= 1 << (a if bits >> i & 1 else b)
            sign = Fraction(-1 if bin(bits).count("1") % 2 else 1)
            vals.append((mask, sign))
        out.append(DiscreteHarmonic(n, k, tuple(vals), pairs))
    assert len(out) == harm_dim(n, k), "tableau count mismatch"
    # certification
    ops = len(out) * (1 << k) * k
    if ops <= GAMMA_APPLY_LIMIT:
        sample = out
    else:
        rng = random.Random(854123 + 31 * n + k)
        sample = rng.sample(out, min(len(out), 500))
        for f in out:
            flat = [x for ab in f.pairs for x in ab]
            assert len(set(flat)) == 2 * k, "pair system must be disjoint"
    for f in sample:
        assert f.gamma_is_zero(), "difference product escaped ker gamma"
    return tuple(out)


# ---------------------------------------------------------------------------
# batch evaluation of harmonic sums
# ---------------------------------------------------------------------------

def _incidence(masks: tuple[int, ...], n: int) -> np.ndarray:
    rows = len(masks)
    inb = np.zeros((rows, n), dtype=np.int8)
    for r, m in enumerate(masks):
        while m:
            low = m & -m
            inb[r, low.bit_length() - 1] = 1
            m ^= low
    return inb


def _pair_arrays(basis) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([[p[0] for p in f.pairs] for f in basis], dtype=np.int64)
    b = np.array([[p[1] for p in f.pairs] for f in basis], dtype=np.int64)
    return a, b


def harmonic_family_sums(basis, family: BlockFamily) -> list[int]:
    """Exact sums over the family of f-tilde, one per basis element.

    Difference products evaluate to small integers, so the whole computation
    runs on integer arrays; results are exact.
    """
    if not basis:
        return []
    if not family.blocks:
        return [0] * len(basis)
    if any(f.pairs is None for f in basis):
        return [sum(f.tilde(m) for m in family.blocks) for f in basis]
    inb = _incidence(family.blocks, family.n)
    a_all, b_all = _pair_arrays(basis)
    k = a_all.shape[1]
    sums: list[int] = []
    chunk = max(1, 4_000_000 // max(1, len(family.blocks)))
    for lo in range(0, len(basis), chunk):
        a, b = a_all[lo:lo + chunk], b_all[lo:lo + chunk]
        prod = np.ones((inb.shape[0], a.shape[0]), dtype=np.int64)
        for i in range(k):
            prod *= inb[:, b[:, i]].astype(np.int64) - inb[:, a[:, i]]
        sums.extend(int(s) for s in prod.sum(axis=0))
    return sums


def delsarte_design_check(family: BlockFamily, degrees) -> dict[int, tuple[bool, int | None]]:
    """Harmonic-sum criterion per degree: zero sums across a Harm_j basis.

    Returns {j: (passes, witness basis index or None)}.
    """
    out = {}
    for j in sorted(set(degrees)):
        if j == 0:
            out[j] = (True, None)
            continue
        basis = harm_basis(family.n, j)
        sums = harmonic_family_sums(basis, family)
        bad = next((i for i, s in enumerate(sums) if s != 0), None)
        out[j] = (bad is None, bad)
    return out


@dataclass(frozen=True)
class TwoWeightReport:
    n: int
    weights: tuple[int, int]
    family_size: int
    verdicts: dict[int, tuple[bool, int | None]]

    def passes(self, degrees) -> bool:
        return all(self.verdicts[j][0] for j in degrees)


def two_weight_design_check(code: BinaryCode, ell: int, degrees) -> TwoWeightReport:
    """Design test for the union of the weight-ell and weight-(n-ell) shells.

    The degree-1 verdict is exactly the statement that all points are
    covered equally often by the union family.
    """
    fam = shell(code, ell)
    if 2 * ell != code.n:       # the middle shell is its own complement
        fam = fam.union(shell(code, code.n - ell))
    verdicts = delsarte_design_check(fam, degrees)
    return TwoWeightReport(code.n, (ell, code.n - ell), len(fam.blocks),
                           verdicts)


# ---------------------------------------------------------------------------
# harmonic weight enumerators
# ---------------------------------------------------------------------------

def harmonic_weight_enumerator(code: BinaryCode, f: DiscreteHarmonic) -> tuple[Fraction, ...]:
    """Coefficients c_0..c_n with c_w = sum of f-tilde over weight-w words."""
    words = codewords(code)
    out = [Fraction(0)] * (code.n + 1)
    if f.pairs is not None:
        inb = _incidence(words, code.n)
        vec = np.ones(len(words), dtype=np.int64)
        for a, b in f.pairs:
            vec *= inb[:, b].astype(np.int64) - inb[:, a]
        weights = inb.sum(axis=1)
        for w in range(code.n + 1):
            sel = weights == w
            if sel.any():
                out[w] = Fraction(int(vec[sel].sum()))
    else:
        for c in words:
            out[c.bit_count()] += f.tilde(c)
    return tuple(out)


def _hwe_batch(code: BinaryCode, basis) -> np.ndarray:
    """Stacked harmonic weight enumerators, one row per basis element."""
    words = codewords(code)
    inb = _incidence(words, code.n)
    weights = inb.sum(axis=1)
    a_all, b_all = _pair_arrays(basis)
    k = a_all.shape[1]
    out = np.zeros((len(basis), code.n + 1), dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, len(words)))
    for lo in range(0, len(basis), chunk):
        a, b = a_all[lo:lo + chunk], b_all[lo:lo + chunk]
        prod = np.ones((len(words), a.shape[0]), dtype=np.int64)
        for i in range(k):
            prod *= inb[:, b[:, i]].astype(np.int64) - inb[:, a[:, i]]
        for w in range(code.n + 1):
            sel = weights == w
            if sel.any():
                out[lo:lo + chunk, w] = prod[sel].sum(axis=0)
    return out


@dataclass(frozen=True)
class AntisymmetryReport:
    mode: str                 # "full basis" or "sampled combinations"
    tested: int
    ok: bool
    witness: tuple[int, int] | None   # (function index, weight index)


def antisymmetry_check(code: BinaryCode, k: int, *, basis_cap: int = 4096,
                       samples: int = 20, seed: int = 20240817) -> AntisymmetryReport:
    """Verify c(i) + c(n-i) = 0 for harmonic weight enumerators of odd degree.

    Runs over the full Harm_k basis when it is small enough, otherwise over
    seeded random integer combinations of basis elements (antisymmetry is
    linear, so combinations are a fair randomized certificate).
    """
    if k % 2 == 0:
        raise ValueError("antisymmetry concerns odd degrees")
    basis = harm_basis(code.n, k)
    n = code.n
    if len(basis) <= basis_cap:
        table = _hwe_batch(code, basis)
        for idx in range(table.shape[0]):
            for i in range(n + 1):
                if table[idx, i] + table[idx, n - i] != 0:
                    return AntisymmetryReport("full basis", len(basis), False,
                                              (idx, i))
        return AntisymmetryReport("full basis", len(basis), True, None)
    rng = random.Random(seed)
    for s in range(samples):
        picks = rng.sample(range(len(basis)), 40)
        coeffs = [rng.randint(-9, 9) or 1 for _ in picks]
        sub = [basis[p] for p in picks]
        table = _hwe_batch(code, sub)
        combo = (np.array(coeffs, dtype=np.int64)[:, None] * table).sum(axis=0)
        for i in range(n + 1):
            if combo[i] + combo[n - i] != 0:
                return AntisymmetryReport("sampled combinations", samples,
                                          False, (s, i))
    return AntisymmetryReport("sampled combinations", samples, True, None)


# ---------------------------------------------------------------------------
# invariant-ring divisibility structure
# ---------------------------------------------------------------------------

def _conv(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def _bachoc_polynomials() -> dict[int, list[int]]:
    """Generators of the relevant invariant ring, as y-coefficient lists."""
    x8y8 = [1, 0, 0, 0, 0, 0, 0, 0, -1]            # x^8 - y^8
    x8_34 = [1, 0, 0, 0, -34, 0, 0, 0, 1]          # x^8 - 34 x^4 y^4 + y^8
    x4y4 = [1, 0, 0, 0, -1]                        # x^4 - y^4
    p8 = [1, 0, 0, 0, 14, 0, 0, 0, 1]
    p12 = _conv([0, 0, 1], _conv(x4y4, x4y4))       # x^2 y^2 (x^4-y^4)^2
    p18 = _conv([0, 1], _conv(x8y8, x8_34))         # x y (...)(...)
    p24 = _conv([0, 0, 0, 0, 1],
                _conv(_conv(x4y4, x4y4), _conv(x4y4, x4y4)))
    p30 = _conv(p12, p18)
    return {8: p8, 12: p12, 18: p18, 24: p24, 30: p30}


def _poly_divides(divisor: list[int], divisor_degree: int,
                  target: list[Fraction]) -> bool:
    """Exact divisibility of homogeneous bivariate forms.

    Both forms are given as y-power coefficient lists; the target's
    homogeneous degree is len(target) - 1.  Division runs on the y-lists,
    and the quotient's y-degree is checked against the degree budget so the
    quotient really is a form (no negative x powers).
    """
    if all(c == 0 for c in target):
        return True
    lo = next(i for i, c in enumerate(divisor) if c)
    tlo = next(i for i, c in enumerate(target) if c)
    if tlo < lo or len(target) < len(divisor):
        return False
    quotient_budget = len(target) - 1 - divisor_degree
    work = [Fraction(c) for c in target]
    qlen = len(target) - len(divisor) + 1
    for m in range(qlen):
        q = work[m + lo] / divisor[lo]
        if q:
            if m > quotient_budget:
                return False
            for j in range(lo, len(divisor)):
                work[m + j] -= q * divisor[j]
    return all(c == 0 for c in work)


@dataclass(frozen=True)
class DivisibilityReport:
    degree: int
    zero_range_ok: bool
    factor_degree: int | None
    factor_divides: bool | None
    enumerator_is_zero: bool


def divisibility_structure_check(code: BinaryCode, f: DiscreteHarmonic) -> DivisibilityReport:
    """Structural constraints on a harmonic weight enumerator.

    Checks the forced zero coefficient ranges i < k and i > n-k, and the
    extra polynomial factor demanded by k mod 4 (degree 30 / 12 / 18 for
    k = 1, 2, 3 mod 4; none for k = 0 mod 4).
    """
    k = f.degree
    coeffs = harmonic_weight_enumerator(code, f)
    n = code.n
    zero_ok = all(coeffs[i] == 0 for i in range(n + 1)
                  if (i < k or i > n - k) and k >= 1)
    table = {1: 30, 2: 12, 3: 18, 0: None}
    fdeg = table[k % 4]
    divides = None
    if fdeg is not None:
        divides = _poly_divides(_bachoc_polynomials()[fdeg], fdeg,
                                list(coeffs))
    return DivisibilityReport(k, zero_ok, fdeg, divides,
                              all(c == 0 for c in coeffs))
