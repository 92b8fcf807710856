import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.fft import dct

from sbacc import dct_code as dc


def codeword(code, rng):
    return dc.encode(code, rng.normal(size=code.k1))


def test_small_code_is_rejected():
    with pytest.raises(ValueError):
        dc.build_code(2, 1)


def test_first_dct_row_n4():
    code = dc.build_code(4, 2)
    np.testing.assert_allclose(code.theta[0], [0.5] * 4, atol=1e-15)


@pytest.mark.parametrize("n", [4, 9, 16, 53])
def test_dct_matrix_matches_scipy(n):
    # scipy's orthonormal DCT-II applied to the identity gives the matrix columnwise
    ref = dct(np.eye(n), type=2, norm="ortho", axis=0)
    np.testing.assert_allclose(dc.dct_matrix(n), ref, atol=1e-13)


@pytest.mark.parametrize("n, k1", [(4, 2), (8, 4), (12, 5), (53, 43)])
def test_generator_orthogonal_to_parity(n, k1):
    code = dc.build_code(n, k1)
    assert np.abs(code.generator @ code.parity.T).max() < 1e-12


def test_encode_linearity_and_unit_message():
    code = dc.build_code(4, 2)
    np.testing.assert_array_equal(dc.encode(code, [0.0, 0.0]), np.zeros(4))
    np.testing.assert_allclose(dc.encode(code, [1.0, 0.0]), [0.5] * 4, atol=1e-15)
    with pytest.raises(ValueError):
        dc.encode(code, [1.0])


def test_chebyshev_triangles_against_recurrence():
    T = dc.chebyshev_t_triangle(5)
    np.testing.assert_array_equal(T[4], [1, 0, -8, 0, 8])
    U = dc.chebyshev_u_triangle(5)
    np.testing.assert_array_equal(U[4], [1, 0, -12, 0, 16])


@pytest.mark.parametrize("n, k1", [(10, 4), (16, 6), (53, 43)])
def test_codeword_syndrome_vanishes(n, k1):
    code = dc.build_code(n, k1)
    c = codeword(code, np.random.default_rng(0))
    word = dc.ReceivedWord.full(code, c)
    assert np.abs(dc.syndrome(code, word)).max() < 1e-10
    assert np.abs(dc.syndrome(code, word, dc.CHEBYSHEV)).max() < 1e-10


def test_unit_error_gives_parity_column():
    code = dc.build_code(12, 4)
    c = codeword(code, np.random.default_rng(1))
    c[5] += 1.0
    synd = dc.syndrome(code, dc.ReceivedWord.full(code, c))
    np.testing.assert_allclose(synd, code.mod_parity[:, 5], atol=1e-10)


@given(st.integers(6, 30), st.data())
def test_punctured_syndrome_vanishes(n, data):
    k1 = data.draw(st.integers(2, n - 3))
    drop = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    code = dc.build_code(n, k1)
    c = codeword(code, np.random.default_rng(n))
    pos = np.setdiff1d(np.arange(n), drop)
    word = dc.ReceivedWord(c[pos], pos, code)
    assert np.abs(dc.syndrome(code, word, dc.CHEBYSHEV)).max() < 1e-9 * max(1, np.abs(c).max())


def test_punctured_weights_full_length_match_W():
    code = dc.build_code(9, 4)
    np.testing.assert_allclose(dc.punctured_weights(code, np.arange(9)), np.diag(code.W))


def test_received_word_validation():
    code = dc.build_code(6, 2)
    with pytest.raises(ValueError):
        dc.ReceivedWord(np.zeros(2), np.array([3, 1]), code)
    with pytest.raises(ValueError):
        dc.ReceivedWord(np.zeros(1), np.array([0]), code)
    with pytest.raises(ValueError):
        dc.ReceivedWord(np.zeros(2), np.array([0, 6]), code)


def test_modified_parity_needs_parity_positions():
    code = dc.build_code(8, 4)
    with pytest.raises(dc.NotDecodableError):
        dc.modified_parity(code, np.arange(4))
    with pytest.raises(ValueError):
        dc.modified_parity(code, np.arange(8), "fourier")


@pytest.mark.parametrize("basis", [dc.MONOMIAL, dc.CHEBYSHEV])
def test_zero_syndrome_zero_errors(basis):
    code = dc.build_code(12, 4)
    assert dc.estimate_num_errors(code, np.zeros(8), basis=basis) == 0


def test_single_error_count_and_location():
    code = dc.build_code(12, 4)
    c = codeword(code, np.random.default_rng(2))
    c[7] += 100.0
    synd = dc.syndrome(code, dc.ReceivedWord.full(code, c))
    assert dc.estimate_num_errors(code, synd) == 1
    np.testing.assert_array_equal(dc.locate_errors(code, synd, 1, np.arange(12)), [7])


@pytest.mark.parametrize("n, k1", [(12, 4), (16, 6), (20, 8)])
def test_capacity_errors_counted(n, k1):
    code = dc.build_code(n, k1)
    rng = np.random.default_rng(n)
    cap = code.capacity()
    c = codeword(code, rng)
    pos = rng.choice(n, cap, replace=False)
    c[pos] += rng.normal(0, 10, cap)
    synd = dc.syndrome(code, dc.ReceivedWord.full(code, c), dc.CHEBYSHEV)
    assert dc.estimate_num_errors(code, synd, basis=dc.CHEBYSHEV) == cap


def brute_force_pair(code, word):
    # oracle: the pair of columns of the orthonormal parity that best explains the syndrome
    Q = dc.orthonormal_parity(code, word.positions)
    s = Q @ word.values
    best = None
    for pair in itertools.combinations(range(word.m), 2):
        A = Q[:, pair]
        e, *_ = np.linalg.lstsq(A, s, rcond=None)
        r = np.linalg.norm(A @ e - s)
        if best is None or r < best[0]:
            best = (r, pair)
    return word.positions[list(best[1])]


@pytest.mark.parametrize("seed", range(5))
def test_two_errors_match_brute_force(seed):
    code = dc.build_code(16, 6)
    rng = np.random.default_rng(seed)
    c = codeword(code, rng)
    truth = np.sort(rng.choice(16, 2, replace=False))
    c[truth] += rng.normal(0, 5, 2)
    word = dc.ReceivedWord.full(code, c)
    synd = dc.syndrome(code, word, dc.CHEBYSHEV)
    located = dc.locate_errors(code, synd, 2, word.positions, dc.CHEBYSHEV)
    np.testing.assert_array_equal(located, brute_force_pair(code, word))
    np.testing.assert_array_equal(located, truth)


def test_locate_rejects_bad_nu():
    code = dc.build_code(12, 4)
    with pytest.raises(ValueError):
        dc.locate_errors(code, np.ones(8), 0, np.arange(12))
    with pytest.raises(ValueError):
        dc.locate_errors(code, np.ones(8), 5, np.arange(12))


def test_magnitudes_single_and_pair():
    code = dc.build_code(12, 4)
    c = codeword(code, np.random.default_rng(3))
    r = c.copy()
    r[2] += 5.0
    word = dc.ReceivedWord.full(code, r)
    assert dc.estimate_magnitudes(code, word, [2])[0] == pytest.approx(5.0, abs=1e-8)
    r = c.copy()
    r[[1, 9]] += [3.0, -7.0]
    word = dc.ReceivedWord.full(code, r)
    np.testing.assert_allclose(dc.estimate_magnitudes(code, word, [1, 9]), [3.0, -7.0], atol=1e-8)
    assert dc.estimate_magnitudes(code, word, []).size == 0
    with pytest.raises(ValueError):
        dc.estimate_magnitudes(code, dc.ReceivedWord(r[:11], np.arange(11), code), [11])


def test_decode_clean_word_untouched():
    code = dc.build_code(12, 4)
    c = codeword(code, np.random.default_rng(4))
    rep = dc.decode(code, dc.ReceivedWord.full(code, c))
    assert rep.est_num_errors == 0
    np.testing.assert_array_equal(rep.corrected, c)


@given(st.integers(0, 10_000), st.sampled_from([(12, 4), (16, 6), (20, 8), (24, 10)]))
def test_decode_within_capacity_exact(seed, shape):
    n, k1 = shape
    code = dc.build_code(n, k1)
    rng = np.random.default_rng(seed)
    a = int(rng.integers(1, code.capacity() + 1))
    c = codeword(code, rng)
    r = c.copy()
    r[rng.choice(n, a, replace=False)] += rng.normal(0, 10, a)
    rep = dc.decode(code, dc.ReceivedWord.full(code, r))
    assert np.abs(rep.corrected - c).max() < 1e-6


@pytest.mark.parametrize("locs", [[35, 37, 47, 51, 52], [0, 1, 2, 3, 4], [0, 1, 50, 51, 52]])
@pytest.mark.parametrize("seed", range(3))
def test_decode_clustered_end_errors(locs, seed):
    rng = np.random.default_rng(seed)
    code = dc.build_code(53, 43)
    c = dc.encode(code, rng.normal(size=43))
    r = c.copy()
    r[locs] += rng.normal(0, 100, len(locs))
    rep = dc.decode(code, dc.ReceivedWord(r, np.arange(53), code))
    assert np.abs(rep.corrected - c).max() < 1e-6


def test_decode_beyond_capacity_does_not_crash():
    code = dc.build_code(12, 4)
    rng = np.random.default_rng(5)
    r = codeword(code, rng)
    r[:5] += rng.normal(0, 10, 5)
    rep = dc.decode(code, dc.ReceivedWord.full(code, r))
    assert rep.corrected.shape == (12,)


def test_decode_too_short_word():
    code = dc.build_code(8, 4)
    with pytest.raises(dc.NotDecodableError):
        dc.decode(code, dc.ReceivedWord(np.zeros(4), np.arange(4), code))


# --------------------------------------------------------------------------- interleaved


def interleaved_case(n, k1, locs, words=6, seed=0, scale=10.0):
    code = dc.build_code(n, k1)
    rng = np.random.default_rng(seed)
    clean = np.stack([codeword(code, rng) for _ in range(words)], axis=1)
    noisy = clean.copy()
    noisy[list(locs)] += rng.normal(0, scale, (len(locs), words))
    return code, clean, noisy


def test_stacked_matrix_shape_and_single_word():
    synds = np.arange(10.0).reshape(5, 2)
    S = dc.stacked_syndrome_matrix(synds, 2, dc.MONOMIAL)
    assert S.shape == (2 * 3, 3)
    np.testing.assert_array_equal(S[:3], [[0, 2, 4], [2, 4, 6], [4, 6, 8]])
    with pytest.raises(ValueError):
        dc.stacked_syndrome_matrix(synds, 5)


def test_profile_clean_is_zero():
    code, clean, _ = interleaved_case(20, 8, [])
    synds = dc.modified_parity(code, np.arange(20), dc.CHEBYSHEV) @ clean
    assert np.abs(dc.singular_profile(synds)).max() < 1e-10


@pytest.mark.parametrize("profile, expected", [
    ([1.0, 0.5, 0.3, 0.2], 0),
    ([1.0, 1e-3, 5e-4, 4e-4], 1),
    ([1.0, 0.9, 1e-6, 1e-7], 2),
    ([1.0, 0.5, 0.01, 0.0], 3),
])
def test_error_count_from_profile(profile, expected):
    assert dc.estimate_num_errors_interleaved(np.array(profile)) == expected


def test_noise_gap_applies_only_below_noise_floor():
    profile = np.array([1.0, 0.08, 0.07])
    assert dc.estimate_num_errors_interleaved(profile) == 0
    assert dc.estimate_num_errors_interleaved(profile, noise_floor=0.09) == 1
    with pytest.raises(ValueError):
        dc.estimate_num_errors_interleaved(profile, noise_floor=-1)


@pytest.mark.parametrize("locs", [[3], [0, 19], [4, 5, 6], [1, 7, 12, 18], [18, 19]])
def test_interleaved_exact_beyond_single_word_capacity(locs):
    code, clean, noisy = interleaved_case(20, 12, locs)
    rep = dc.decode_interleaved(code, noisy, np.arange(20))
    np.testing.assert_array_equal(rep.est_locations, sorted(locs))
    assert np.abs(rep.corrected - clean).max() < 1e-6
    assert rep.capacity == 20 - 12 - 1


def test_interleaved_punctured_positions():
    code, clean, noisy = interleaved_case(24, 10, [2, 15])
    pos = np.setdiff1d(np.arange(24), [0, 9, 20])
    rep = dc.decode_interleaved(code, noisy[pos], pos)
    np.testing.assert_array_equal(rep.est_locations, [2, 15])
    assert np.abs(rep.corrected - clean[pos]).max() < 1e-6


@given(st.integers(0, 10_000))
def test_interleaved_random_errors(seed):
    rng = np.random.default_rng(seed)
    a = int(rng.integers(1, 6))
    locs = np.sort(rng.choice(30, a, replace=False))
    code, clean, noisy = interleaved_case(30, 18, locs, words=8, seed=seed)
    rep = dc.decode_interleaved(code, noisy, np.arange(30))
    np.testing.assert_array_equal(rep.est_locations, locs)
    assert np.abs(rep.corrected - clean).max() < 1e-6


def test_interleaved_vector_input_and_errors():
    code, clean, _ = interleaved_case(12, 4, [], words=1)
    rep = dc.decode_interleaved(code, clean[:, 0], np.arange(12))
    assert rep.est_num_errors == 0 and rep.corrected.shape == (12, 1)
    with pytest.raises(ValueError):
        dc.decode_interleaved(code, clean[:5], np.arange(12))
    with pytest.raises(dc.NotDecodableError):
        dc.decode_interleaved(code, clean[:4], np.arange(4))


def test_solve_magnitudes_contracts():
    code, clean, noisy = interleaved_case(14, 6, [4, 9])
    e, r = dc.solve_magnitudes(code, np.arange(14), noisy, [4, 9], return_residual=True)
    np.testing.assert_allclose(e, (noisy - clean)[[4, 9]], atol=1e-8)
    assert r < 1e-12
    with pytest.raises(dc.NotDecodableError):
        dc.solve_magnitudes(code, np.arange(14), noisy, list(range(8)))


def test_noise_floor_scaling():
    code = dc.build_code(53, 43)
    pos = np.arange(53)
    assert dc.noise_floor_for(code, pos, 0.0) == 0.0
    single = dc.noise_floor_for(code, pos, 1e-4)
    assert single == pytest.approx(4 * 1e-4 * (math.sqrt(5) + math.sqrt(6)))
    stacked = dc.noise_floor_for(code, pos, 1e-4, words=25)
    assert stacked == pytest.approx(4 * 1e-4 * (math.sqrt(25 * 9) + math.sqrt(2)))


@pytest.mark.parametrize("n, k1", [(8, 3), (16, 6), (53, 43)])
def test_decomposition_witnesses(n, k1):
    g_err, h_err = dc.decomposition_errors(dc.build_code(n, k1), dps=40)
    assert g_err <= 1e-9 and h_err <= 1e-9


@pytest.mark.parametrize("n, k1", [(8, 3), (12, 5)])
def test_double_precision_witness_products(n, k1):
    code = dc.build_code(n, k1)
    np.testing.assert_allclose(code.B @ code.vandermonde @ code.Z, code.generator, atol=1e-12)
    np.testing.assert_allclose(code.a_coef @ code.T @ code.W, code.parity, atol=1e-11)
