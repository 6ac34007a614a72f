"""Codes, block designs, discrete harmonics, harmonic weight enumerators."""

import itertools
import random
from math import comb

import pytest

from designlab.codes import (BlockFamily, antisymmetry_check,
                             code_from_generator, code_from_rows,
                             codewords, d16_plus, delsarte_design_check,
                             design_lambda, direct_sum,
                             divisibility_structure_check, golay_g24,
                             hamming_e8, harm_basis, harm_dim,
                             harmonic_family_sums, harmonic_weight_enumerator,
                             is_doubly_even, is_self_dual, min_weight, shell,
                             two_weight_design_check, weight_distribution)


# -- oracles -----------------------------------------------------------------

def brute_codewords(gens):
    """Span by direct subset sums, no Gray-code shortcut."""
    words = {0}
    for g in gens:
        words |= {w ^ g for w in words}
    return words


def brute_gamma(n, k, values):
    """Boundary map as an explicit dict of (k-1)-subset sums."""
    acc = {}
    for z, c in values:
        support = [i for i in range(n) if z >> i & 1]
        for drop in support:
            y = z ^ (1 << drop)
            acc[y] = acc.get(y, 0) + c
    return acc


# -- code basics --------------------------------------------------------------

def test_row_reduction_preserves_span():
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randint(3, 12)
        rows = [rng.getrandbits(n) for _ in range(rng.randint(1, 6))]
        code = code_from_rows(n, rows)
        assert brute_codewords(rows) == set(codewords(code))


def test_fixture_shapes():
    h, g, d = hamming_e8(), golay_g24(), d16_plus()
    assert (h.n, h.k) == (8, 4)
    assert (g.n, g.k) == (24, 12)
    assert (d.n, d.k) == (16, 8)


def test_code_from_generator_strings():
    code = code_from_generator(["1100", "0110", "1010"])
    # third row is the sum of the first two, so it reduces away
    assert code.k == 2
    assert set(codewords(code)) == brute_codewords([0b0011, 0b0110])
    with pytest.raises(ValueError):
        code_from_generator(["110", "0a1"])


def test_fixtures_doubly_even_self_dual():
    for code in (hamming_e8(), golay_g24(), d16_plus(),
                 direct_sum(hamming_e8(), hamming_e8())):
        assert is_self_dual(code)
        assert is_doubly_even(code)
        # enumeration cross-check of the generator-level predicate
        assert all(w.bit_count() % 4 == 0 for w in codewords(code))


def test_weight_distributions():
    assert weight_distribution(hamming_e8()) == [1, 0, 0, 0, 14, 0, 0, 0, 1]
    wd = weight_distribution(golay_g24())
    assert wd[0] == 1 and wd[8] == 759 and wd[12] == 2576
    assert wd[16] == 759 and wd[24] == 1
    assert sum(wd) == 4096
    wd16 = weight_distribution(d16_plus())
    assert wd16 == weight_distribution(direct_sum(hamming_e8(), hamming_e8()))
    assert wd16[4] == 28


def test_min_weights():
    assert min_weight(hamming_e8()) == 4
    assert min_weight(golay_g24()) == 8
    assert min_weight(d16_plus()) == 4


def test_not_self_dual_examples():
    rep = code_from_rows(4, [0b1111])
    assert not is_self_dual(rep)
    even6 = code_from_rows(6, [0b000011, 0b001100, 0b110000])
    assert is_self_dual(even6)          # k = n/2 and even intersections
    assert not is_doubly_even(even6)


# -- brute-force design counting ----------------------------------------------

def test_golay_weight8_is_steiner_system():
    fam = shell(golay_g24(), 8)
    assert len(fam.blocks) == 759
    res = design_lambda(fam, 5)
    assert res.is_design and res.lam == 1


def test_golay_lambda_chain():
    # 5-(24,8,1) forces lambda_t = C(24-t,5-t)/C(8-t,5-t) for t <= 5
    fam = shell(golay_g24(), 8)
    for t in range(6):
        res = design_lambda(fam, t)
        assert res.is_design
        assert res.lam == comb(24 - t, 5 - t) // comb(8 - t, 5 - t)


def test_hamming_weight4_is_3_design():
    fam = shell(hamming_e8(), 4)
    assert len(fam.blocks) == 14
    for t, lam in {1: 7, 2: 3, 3: 1}.items():
        res = design_lambda(fam, t)
        assert res.is_design and res.lam == lam


def test_design_lambda_witness_on_failure():
    fam = shell(d16_plus(), 4)
    res = design_lambda(fam, 2)
    assert not res.is_design
    t1, c1, t2, c2 = res.witness
    assert c1 != c2
    # recount the witness subsets directly
    for sub, cnt in ((t1, c1), (t2, c2)):
        m = sum(1 << i for i in sub)
        assert sum(1 for b in fam.blocks if b & m == m) == cnt


def test_design_lambda_rejects_mixed_sizes_unless_asked():
    fam = shell(golay_g24(), 8).union(shell(golay_g24(), 16))
    with pytest.raises(ValueError):
        design_lambda(fam, 1)
    # 759 * 8 + 759 * 16 incidences spread over 24 points
    res = design_lambda(fam, 1, allow_mixed=True)
    assert res.is_design and res.lam == 759


# -- discrete harmonics --------------------------------------------------------

def test_harm_dim_formula():
    assert harm_dim(4, 1) == 3
    assert harm_dim(8, 3) == 28
    assert harm_dim(24, 5) == comb(24, 5) - comb(24, 4) == 31878
    assert harm_dim(6, 0) == 1
    assert harm_dim(6, 4) == 0          # above the equator


def test_harm_basis_small_explicit():
    basis = harm_basis(4, 1)
    assert len(basis) == 3
    # degree-1 point differences rooted at the smallest point
    seen = {f.pairs for f in basis}
    assert seen == {((0, 1),), ((0, 2),), ((0, 3),)}


def test_harm_basis_gamma_via_oracle():
    for n, k in [(6, 2), (8, 3), (7, 3), (9, 1)]:
        basis = harm_basis(n, k)
        assert len(basis) == harm_dim(n, k)
        for f in basis:
            acc = brute_gamma(n, k, f.values)
            assert all(v == 0 for v in acc.values())


def test_harm_basis_is_independent_mod_p():
    # mod-p independence certifies independence over Q
    p = 1_000_003
    for n, k in [(6, 2), (8, 3), (8, 4)]:
        basis = harm_basis(n, k)
        cols = {z: j for j, z in enumerate(
            sum(1 << i for i in sub)
            for sub in itertools.combinations(range(n), k))}
        rows = []
        for f in basis:
            r = [0] * len(cols)
            for z, c in f.values:
                r[cols[z]] = int(c) % p
            rows.append(r)
        rank = 0
        pivots = {}
        for r in rows:
            r = list(r)
            for col, pr in pivots.items():
                if r[col]:
                    f = r[col] * pow(pr[col], -1, p) % p
                    r = [(a - f * b) % p for a, b in zip(r, pr)]
            lead = next((i for i, a in enumerate(r) if a), None)
            assert lead is not None, "dependent basis element"
            pivots[lead] = r
            rank += 1
        assert rank == len(basis)


def test_tilde_pairs_path_matches_subset_sum():
    rng = random.Random(11)
    basis = harm_basis(8, 3)
    for f in rng.sample(basis, 10):
        g = type(f)(f.n, f.degree, f.values, None)   # strip the fast path
        for _ in range(20):
            mask = rng.getrandbits(8)
            assert f.tilde(mask) == g.tilde(mask)


def test_harmonic_family_sums_matches_per_element():
    fam = shell(hamming_e8(), 4)
    basis = harm_basis(8, 3)
    sums = harmonic_family_sums(basis, fam)
    for f, s in zip(basis, sums):
        assert s == sum(f.tilde(b) for b in fam.blocks)


def test_delsarte_agrees_with_brute_force_on_random_families():
    rng = random.Random(20240818)
    for trial in range(12):
        n = rng.randint(6, 9)
        w = rng.randint(3, n - 2)
        nblocks = rng.randint(4, 14)
        pool = list(itertools.combinations(range(n), w))
        picks = rng.sample(pool, min(nblocks, len(pool)))
        fam = BlockFamily(n, tuple(sum(1 << i for i in sub) for sub in picks))
        for t in range(1, min(w, 4) + 1):
            brute = design_lambda(fam, t).is_design
            harmonic = all(v[0] for j, v in
                           delsarte_design_check(fam, range(1, t + 1)).items())
            assert brute == harmonic, (trial, n, w, t)


def test_complete_uniform_family_is_design_of_every_degree():
    n, w = 7, 3
    fam = BlockFamily(n, tuple(sum(1 << i for i in sub)
                               for sub in itertools.combinations(range(n), w)))
    checks = delsarte_design_check(fam, [1, 2, 3])
    assert all(ok for ok, _ in checks.values())


# -- two-weight checks ---------------------------------------------------------

def test_golay_two_weight_odd_degrees():
    rep = two_weight_design_check(golay_g24(), 8, [1, 2, 3, 4, 5])
    assert rep.family_size == 1518
    assert rep.passes([1, 2, 3, 4, 5])   # both shells are 5-designs


def test_d16plus_two_weight_T_design():
    # odd degrees pass by antisymmetry; even degrees genuinely fail here
    rep = two_weight_design_check(d16_plus(), 4, [1, 2, 3, 4, 5])
    assert rep.passes([1, 3, 5])
    assert not rep.verdicts[2][0]
    assert not rep.verdicts[4][0]
    # brute-force cross-check of the degree-2 failure
    fam = shell(d16_plus(), 4).union(shell(d16_plus(), 12))
    res = design_lambda(fam, 2, allow_mixed=True)
    assert not res.is_design
    # ... and the weight-4 shell alone is not a 2-design either
    assert not design_lambda(shell(d16_plus(), 4), 2).is_design


def test_self_complementary_shell_is_not_doubled():
    rep = two_weight_design_check(golay_g24(), 12, [1, 3, 5])
    assert rep.family_size == 2576
    assert rep.passes([1, 3, 5])


# -- harmonic weight enumerators ------------------------------------------------

def test_hwe_of_golay_low_degrees_vanish():
    # every shell of the Golay code is a 5-design, so degrees 1..5 die
    g = golay_g24()
    for k in (1, 2, 3):
        for f in random.Random(5).sample(harm_basis(24, k), 6):
            assert all(c == 0 for c in harmonic_weight_enumerator(g, f))


def test_hwe_zero_ranges_and_antisymmetry_small():
    d = d16_plus()
    for f in harm_basis(16, 3)[:40]:
        w = harmonic_weight_enumerator(d, f)
        assert all(w[i] == 0 for i in range(3))
        assert all(w[16 - i] == 0 for i in range(3))
        assert all(w[i] + w[16 - i] == 0 for i in range(17))


def test_antisymmetry_full_basis_modes():
    rep1 = antisymmetry_check(hamming_e8(), 1)
    assert rep1.mode == "full basis" and rep1.ok
    rep3 = antisymmetry_check(hamming_e8(), 3)
    assert rep3.ok
    with pytest.raises(ValueError):
        antisymmetry_check(hamming_e8(), 2)


def test_antisymmetry_sampled_mode_for_large_basis():
    rep = antisymmetry_check(golay_g24(), 5, basis_cap=1000, samples=5)
    assert rep.mode == "sampled combinations"
    assert rep.ok


def test_hwe_numpy_path_matches_dict_path():
    d = d16_plus()
    basis = harm_basis(16, 2)
    for f in random.Random(3).sample(basis, 8):
        slow = type(f)(f.n, f.degree, f.values, None)
        assert harmonic_weight_enumerator(d, f) == \
            harmonic_weight_enumerator(d, slow)


# -- divisibility structure ------------------------------------------------------

def test_hamming_degree1_enumerator_is_zero():
    h = hamming_e8()
    for f in harm_basis(8, 1):
        rep = divisibility_structure_check(h, f)
        assert rep.enumerator_is_zero
        assert rep.zero_range_ok
        assert rep.factor_degree == 30 and rep.factor_divides


def test_d16plus_degree2_divisible_by_degree12_invariant():
    d = d16_plus()
    saw_nonzero = False
    for f in harm_basis(16, 2):
        rep = divisibility_structure_check(d, f)
        assert rep.zero_range_ok
        assert rep.factor_degree == 12
        assert rep.factor_divides
        saw_nonzero |= not rep.enumerator_is_zero
    assert saw_nonzero, "expected a nonzero degree-2 enumerator somewhere"


def test_golay_degree3_divisible_by_degree18_invariant():
    g = golay_g24()
    for f in random.Random(9).sample(harm_basis(24, 3), 5):
        rep = divisibility_structure_check(g, f)
        assert rep.zero_range_ok
        assert rep.factor_degree == 18
        assert rep.factor_divides
