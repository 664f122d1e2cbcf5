import numpy as np
import pytest

from quasiperfect.errors import BudgetExceeded
from quasiperfect.field import build_field, field_of_size
from quasiperfect.geometry import AffineSpace
from quasiperfect.grm import (
    LinearCode,
    build_grm,
    build_target_code,
    dual_order,
    evaluation_matrix,
    grm_dimension,
    grm_min_distance,
    is_target_code,
    reduced_monomials,
    target_order,
    target_parity,
)
from quasiperfect.linalg import all_vectors, matmul, min_weight_from_parity, rank, row_space_equal

PARAMS = [(3, 1), (3, 2), (4, 2), (5, 2), (3, 3)]
FAST_WORDS = 2**22


def space(q, m):
    return AffineSpace(field_of_size(q), m)


def min_weight_enumerated(code: LinearCode, chunk: int = 1 << 16) -> int:
    """Least nonzero weight over every codeword, in message chunks."""
    q, k = code.field.q, code.dim
    best = code.n + 1
    for lo in range(1, q**k, chunk):
        msgs = all_vectors(q, k, lo, min(lo + chunk, q**k), code.field.dtype)
        w = np.count_nonzero(code.encode(msgs), axis=1)
        best = min(best, int(w.min()))
    return best


def min_weight_split(code: LinearCode) -> int:
    """Least nonzero weight, using wt(a + b) = d(a, -b) over two half spans."""
    F, q, k, n = code.field, code.field.q, code.dim, code.n
    h = k // 2
    A = code.encode(np.hstack([all_vectors(q, h, dtype=F.dtype), np.zeros((q**h, k - h), F.dtype)]))
    B = code.encode(np.hstack([np.zeros((q ** (k - h), h), F.dtype), all_vectors(q, k - h, dtype=F.dtype)]))
    B = F.neg(B)
    eye = np.eye(q, dtype=np.float32)
    XA = eye[A].reshape(A.shape[0], n * q)
    XB = eye[B].reshape(B.shape[0], n * q)
    dist = n - (XA @ XB.T)
    dist[0, 0] = n + 1  # the zero codeword
    return int(dist.min())


def test_dimension_examples():
    assert grm_dimension(3, 2, 2) == 6
    assert grm_dimension(3, 2, 0) == 1
    assert grm_dimension(7, 3, 0) == 1
    assert grm_dimension(3, 2, 4) == 9


def test_min_distance_examples():
    assert grm_min_distance(3, 2, 2) == 3
    assert grm_min_distance(5, 2, 6) == 3
    assert grm_min_distance(3, 2, 0) == 9


def test_dual_order_examples():
    assert dual_order(3, 2, 2) == 1
    assert dual_order(5, 2, 0) == 7
    with pytest.raises(ValueError):
        dual_order(3, 2, 4)


@pytest.mark.parametrize("r", [-1, 5])
def test_order_out_of_range(r):
    with pytest.raises(ValueError):
        grm_dimension(3, 2, r)
    with pytest.raises(ValueError):
        grm_min_distance(3, 2, r)


@pytest.mark.parametrize("q, m", PARAMS)
def test_dimension_formula_matches_rank_and_monomial_count(q, m):
    s = space(q, m)
    for r in range((q - 1) * m + 1):
        expected = grm_dimension(q, m, r)
        assert len(reduced_monomials(q, m, r)) == expected
        assert rank(s.field, evaluation_matrix(s, r)) == expected


@pytest.mark.parametrize("q, m", PARAMS)
def test_dual_dimensions_sum_to_length(q, m):
    for r in range((q - 1) * m):
        assert grm_dimension(q, m, r) + grm_dimension(q, m, dual_order(q, m, r)) == q**m


@pytest.mark.parametrize("q, m", PARAMS)
def test_target_order_parameters(q, m):
    r = target_order(q, m)
    assert grm_dimension(q, m, r) == q**m - m - 1
    assert grm_min_distance(q, m, r) == 3


@pytest.mark.parametrize("q, m", PARAMS)
def test_min_distance_formula_exhaustive(q, m):
    s = space(q, m)
    checked = 0
    for r in range((q - 1) * m + 1):
        k = grm_dimension(q, m, r)
        if q**k > FAST_WORDS:
            continue
        code = build_grm(s, r)
        assert min_weight_enumerated(code) == grm_min_distance(q, m, r), r
        checked += 1
    assert checked >= 2


def test_min_distance_exhaustive_rm_4_2_target():
    code = build_target_code(space(4, 2))
    assert code.size == 4**13
    assert min_weight_split(code) == 3


def test_split_enumeration_matches_direct():
    s = space(3, 2)
    for r in range(1, 4):
        code = build_grm(s, r)
        assert min_weight_split(code) == min_weight_enumerated(code)


@pytest.mark.parametrize("q, m", PARAMS)
def test_target_code(q, m):
    s = space(q, m)
    code = build_target_code(s)
    H = target_parity(s)
    assert code.dim == s.n - m - 1
    assert H.shape == (m + 1, s.n)
    assert np.all(H[0] == 1)
    assert not np.any(matmul(s.field, code.generator, H.T))
    assert rank(s.field, code.parity) == m + 1
    # no zero columns and no two dependent columns: d >= 3, and a triple gives d = 3
    assert min_weight_from_parity(s.field, code.parity) == 3
    assert is_target_code(code, s)


def test_target_code_examples():
    c32 = build_target_code(space(3, 2))
    assert (c32.n, c32.size) == (9, 3**6)
    c42 = build_target_code(space(4, 2))
    assert c42.dim == 13 and c42.parity.shape == (3, 16)
    assert build_target_code(space(3, 1)).dim == 1


def test_target_code_needs_q_at_least_3():
    with pytest.raises(ValueError):
        build_target_code(space(2, 3))


@pytest.mark.parametrize("q, m", PARAMS)
def test_first_order_code_is_dual(q, m):
    s = space(q, m)
    assert row_space_equal(s.field, build_grm(s, 1).generator, target_parity(s))


@pytest.mark.parametrize("q, m", PARAMS)
def test_all_ones_is_a_codeword(q, m):
    s = space(q, m)
    ones = np.ones(s.n, dtype=s.field.dtype)
    for r in range((q - 1) * m + 1):
        assert build_grm(s, r).contains(ones)


def test_full_space_and_reed_solomon():
    full = build_grm(space(3, 2), 4)
    assert full.dim == 9
    assert np.array_equal(full.generator, np.eye(9, dtype=np.uint8))
    rs = build_grm(space(5, 1), 2)
    assert rs.dim == 3
    # extended Reed-Solomon codes are MDS
    assert min_weight_enumerated(rs) == rs.n - rs.dim + 1


def test_weights_of_rm_3_2_2():
    code = build_grm(space(3, 2), 2)
    w = np.count_nonzero(code.codewords(), axis=1)
    assert set(w.tolist()) - {0} <= set(range(3, 10))
    assert (w == 0).sum() == 1


def test_linear_code_helpers():
    F = build_field(3)
    code = LinearCode.from_generator(F, [[1, 1, 0], [2, 2, 0], [0, 0, 1]])
    assert code.dim == 2 and code.n == 3 and code.size == 9
    assert code.contains([1, 1, 2]) and not code.contains([1, 0, 0])
    assert code == LinearCode.from_generator(F, [[2, 2, 1], [0, 0, 2]])
    assert code != LinearCode.from_generator(F, [[1, 2, 0], [0, 0, 1]])
    assert code.encode([[1, 1]]).tolist() == [[1, 1, 1]]
    with pytest.raises(BudgetExceeded):
        code.codewords(cap=5)


def test_is_target_code_rejects_other_codes():
    s = space(3, 2)
    assert not is_target_code(build_grm(s, 1), s)
