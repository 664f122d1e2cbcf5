import numpy as np
import pytest
from conftest import setup_for
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiperfect.errors import BudgetExceeded, ConsistencyError
from quasiperfect.field import field_of_size
from quasiperfect.geometry import AffineSpace, q_analog
from quasiperfect.grm import build_target_code
from quasiperfect.linalg import matmul, rank, span_contains, syndromes
from quasiperfect.switching import (
    CosetIndex,
    RiSubspace,
    SwitchedCode,
    apply_switch,
    build_ri,
    coset_partition,
    lambda_digits_to_str,
    lambda_str_to_digits,
    lambdas_from_index,
    member,
    recover_lambdas,
    ri_triples,
    single_switch,
    triple_on_line,
)


def word_keys(W):
    W = np.asarray(W, dtype=np.int64)
    return set((W @ (3 ** np.arange(W.shape[1]))).tolist())


def onehot(W, q=3):
    eye = np.eye(q, dtype=np.float32)
    return eye[np.asarray(W)].reshape(len(W), -1)


# -- triples -----------------------------------------------------------------------


def test_triple_on_first_axis_has_equal_coefficients(s32):
    line = s32.space.line_through(0, 1)
    tr = triple_on_line(s32.code, s32.space, line, 0, 1, 2)
    assert tr.support == (0, 1, 2)
    assert tr.vector[[0, 1, 2]].tolist() == [1, 1, 1]
    assert np.count_nonzero(tr.vector) == 3


def test_triple_rejects_noncollinear_or_repeated_points(s32):
    line = s32.space.line_through(0, 1)
    with pytest.raises(ValueError):
        triple_on_line(s32.code, s32.space, line, 0, 1, 3)
    with pytest.raises(ValueError):
        triple_on_line(s32.code, s32.space, line, 0, 1, 1)


def test_q4_triples_on_a_line():
    s = setup_for(4, 2)
    line = s.space.line_through(0, 5)
    pts = list(line.points)
    for drop in range(4):
        a, b, c = [p for j, p in enumerate(pts) if j != drop]
        tr = triple_on_line(s.code, s.space, line, a, b, c)
        assert np.count_nonzero(tr.vector) == 3
        assert not np.any(matmul(s.field, s.code.parity, tr.vector[:, None]))
        assert tr.vector[min(a, b, c)] == 1


def test_ri_triples_normalized_at_i(s32):
    for i in range(9):
        trs = ri_triples(s32.code, s32.space, i)
        assert len(trs) == q_analog(2, 3) * (3 - 2)
        for tr in trs:
            assert tr.vector[i] == 1 and i in tr.support


# -- R_i -----------------------------------------------------------------------------


@pytest.mark.parametrize("q, m, expected", [(3, 2, 4), (4, 2, 10), (5, 2, 18), (3, 3, 13)])
def test_ri_dimension_every_coordinate(q, m, expected):
    s = setup_for(q, m)
    assert expected == s.n - q_analog(m, q) - 1
    for i in range(s.n):
        ri = build_ri(s.code, s.space, i)
        assert ri.dim == expected
        assert ri.parity.shape == (q_analog(m, q) + 1, s.n)
        assert not np.any(matmul(s.field, ri.basis, s.code.parity.T))


@pytest.mark.parametrize("q", [3, 5, 7])
def test_ri_is_whole_code_for_m1(q):
    s = setup_for(q, 1)
    for i in range(q):
        ri = build_ri(s.code, s.space, i)
        assert ri.dim == q - 2 == s.code.dim
    assert s.T == 1


def test_build_ri_rejects_bad_coordinate(s32):
    with pytest.raises(IndexError):
        build_ri(s32.code, s32.space, 9)


def test_weight3_elements_of_ri_lie_on_lines_through_pi(s32):
    for i in range(9):
        ri = build_ri(s32.code, s32.space, i)
        E = ri.elements()
        assert E.shape[0] == 81
        for v in E[np.count_nonzero(E, axis=1) == 3]:
            a, b, c = np.flatnonzero(v)
            assert i in (a, b, c)
            assert s32.space.collinear(a, b, c)


def test_ri_min_weight(s32):
    assert s32.ri.min_weight == 3


# -- coset partition -----------------------------------------------------------------


@pytest.mark.parametrize("q, m, T", [(3, 2, 9), (4, 2, 64), (3, 1, 1), (5, 1, 1)])
def test_coset_count(q, m, T):
    s = setup_for(q, m)
    assert s.T == T == q ** (q_analog(m, q) - m)
    assert not np.any(s.reps[0])
    syn = s.ri.syndromes(s.reps)
    assert len(set(syn.tolist())) == T


def test_reps_encode_extension_combinations(s32):
    F = s32.field
    ext = s32.reps[[1, 3]]
    assert np.array_equal(s32.reps[5], F.add(F.mul(2, ext[0]), ext[1]))


def test_partition_by_enumeration(s32):
    words = s32.code.codewords()
    t, lam = s32.index.locate(words)
    assert np.all(lam == 0)
    assert np.array_equal(np.bincount(t, minlength=9), np.full(9, 81))
    R = s32.ri.elements()
    cosets = [word_keys(s32.field.add(R, x[None, :])) for x in s32.reps]
    assert sum(len(c) for c in cosets) == 729
    assert set().union(*cosets) == word_keys(words)


def test_coset_partition_requires_containment(s32):
    other = build_ri(s32.code, s32.space, 1)
    bogus = RiSubspace(s32.field, 0, np.eye(9, dtype=np.uint8)[:4])
    with pytest.raises(ValueError):
        coset_partition(s32.code, bogus)
    assert coset_partition(s32.code, other).shape == (9, 9)


# -- switched codes ------------------------------------------------------------------


def test_identity_switch_is_base_code(s32):
    sw = apply_switch(s32.code, s32.space, s32.ri, s32.reps, np.zeros(9, dtype=int))
    assert sw.is_identity()
    assert word_keys(sw.words()) == word_keys(s32.code.codewords())
    assert sw.size == 729


def test_all_equal_switch_is_translate(s32):
    F = s32.field
    e0 = np.zeros(9, dtype=np.uint8)
    e0[0] = 2
    sw = apply_switch(s32.code, s32.space, s32.ri, s32.reps, np.full(9, 2))
    expected = F.add(s32.code.codewords(), e0[None, :])
    assert word_keys(sw.words()) == word_keys(expected)


def test_length_mismatch(s32):
    with pytest.raises(ValueError):
        apply_switch(s32.code, s32.space, s32.ri, s32.reps, np.zeros(8, dtype=int))
    with pytest.raises(ValueError):
        apply_switch(s32.code, s32.space, s32.ri, s32.reps, np.full(9, 3))


def test_member_examples(s32):
    F = s32.field
    lambdas = single_switch(9, 4, 1)
    sw = apply_switch(s32.code, s32.space, s32.ri, s32.reps, lambdas, s32.index)
    for t in range(9):
        for lam in range(3):
            y = s32.reps[t].copy()
            y[0] = F.add(int(y[0]), lam)
            assert member(sw, y) == (lam == lambdas[t])
    with pytest.raises(ValueError):
        member(sw, np.zeros(8, dtype=np.uint8))


def test_membership_count_over_ambient(s32, all_f3_9):
    rng = np.random.default_rng(11)
    for _ in range(20):
        lambdas = rng.integers(0, 3, size=9)
        sw = SwitchedCode(s32.space, s32.code, s32.ri, s32.reps, lambdas, s32.index)
        inside = sw.members(all_f3_9)
        assert inside.sum() == 729
        assert word_keys(all_f3_9[inside]) == word_keys(sw.words())


@pytest.mark.parametrize("i", [0, 4, 8])
def test_membership_matches_coset_definition(i, all_f3_9):
    s = setup_for(3, 2, i)
    F = s.field
    lambdas = np.random.default_rng(i).integers(0, 3, size=9)
    sw = SwitchedCode(s.space, s.code, s.ri, s.reps, lambdas, s.index)
    R = s.ri.elements()
    words = []
    for t in range(9):
        x = s.reps[t].copy()
        x[i] = F.add(int(x[i]), int(lambdas[t]))
        words.append(F.add(R, x[None, :]))
    assert word_keys(np.vstack(words)) == word_keys(all_f3_9[sw.members(all_f3_9)])


def test_recover_lambdas_roundtrip(s32):
    rng = np.random.default_rng(5)
    for _ in range(100):
        lambdas = rng.integers(0, 3, size=9)
        sw = SwitchedCode(s32.space, s32.code, s32.ri, s32.reps, lambdas, s32.index)
        words = rng.permutation(sw.words())
        assert np.array_equal(recover_lambdas(words, s32.ri, s32.reps, s32.index), lambdas)


def test_recover_lambdas_from_base_code(s32):
    assert not np.any(recover_lambdas(s32.code.codewords(), s32.ri, s32.reps))


def test_recover_lambdas_rejects_inconsistent_sets(s32):
    words = s32.code.codewords()
    with pytest.raises(ValueError):
        recover_lambdas(words[:-1], s32.ri, s32.reps)
    stray = words.copy()
    stray[5, 0] = (stray[5, 0] + 1) % 3
    with pytest.raises(ValueError):
        recover_lambdas(stray, s32.ri, s32.reps)
    outside = np.vstack([words, np.eye(9, dtype=np.uint8)[:1]])
    with pytest.raises(ValueError):
        recover_lambdas(outside, s32.ri, s32.reps)


def test_distinct_lambdas_give_distinct_sets(s32):
    a = SwitchedCode(s32.space, s32.code, s32.ri, s32.reps, single_switch(9, 2, 1), s32.index)
    b = SwitchedCode(s32.space, s32.code, s32.ri, s32.reps, single_switch(9, 2, 2), s32.index)
    assert a != b
    assert word_keys(a.words()) != word_keys(b.words())


def test_words_budget():
    s = setup_for(4, 2)
    sw = SwitchedCode(s.space, s.code, s.ri, s.reps, np.zeros(64, dtype=int), s.index)
    assert sw.size == 4**13
    with pytest.raises(BudgetExceeded):
        sw.words(cap=2**20)


def test_coset_index_is_injective(s32):
    keys = s32.index.shifted.reshape(27, 5).astype(int) @ 3 ** np.arange(5)
    assert len(set(keys.tolist())) == 27


# -- lambda strings ---------------------------------------------------------------------


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 36).flatmap(lambda q: st.tuples(st.just(q), st.lists(st.integers(0, q - 1), max_size=40))))
def test_lambda_string_roundtrip(args):
    q, digits = args
    text = lambda_digits_to_str(digits)
    assert lambda_str_to_digits(text, q).tolist() == digits


def test_lambda_string_errors():
    with pytest.raises(ValueError):
        lambda_str_to_digits("013", 3)
    with pytest.raises(ValueError):
        lambda_str_to_digits("0?", 3)
    with pytest.raises(ValueError):
        lambda_str_to_digits("01", 3, length=3)


def test_lambdas_from_index():
    assert lambdas_from_index(0, 3, 9).tolist() == [0] * 9
    assert lambdas_from_index(5, 3, 4).tolist() == [2, 1, 0, 0]
    assert single_switch(4, 1, 2).tolist() == [0, 2, 0, 0]
    with pytest.raises(ValueError):
        single_switch(4, 4, 1)


# -- properties behind the constructions -------------------------------------------------


def test_weight_two_vectors_reach_a_triple(s32):
    """A weight-2 vector at distance 2 is at distance 2 from a triple through any third collinear point."""
    F, space, code = s32.field, s32.space, s32.code
    lw = code.leader_table().leader_weight
    for j in range(9):
        for k in range(j + 1, 9):
            for a in range(1, 3):
                for b in range(1, 3):
                    x = np.zeros(9, dtype=np.uint8)
                    x[j], x[k] = a, b
                    if lw[syndromes(F, code.parity, x[None])[0]] != 2:
                        continue
                    line = space.line_through(j, k)
                    for i in line.points:
                        if i in (j, k):
                            continue
                        tr = triple_on_line(code, space, line, i, j, k)
                        dists = [
                            np.count_nonzero(F.mul(alpha, tr.vector) != x) for alpha in range(1, 3)
                        ]
                        assert 2 in dists


def test_switched_coset_keeps_distance_three():
    """Shifting one coset by lambda*e_i keeps distance >= 3 to every other codeword."""
    for i in range(9):
        s = setup_for(3, 2, i)
        F = s.field
        words = s.code.codewords()
        t, _ = s.index.locate(words)
        for coset in range(9):
            inside, outside = words[t == coset], words[t != coset]
            X_out = onehot(outside)
            for lam in (1, 2):
                y = inside.copy()
                y[:, i] = F.add(y[:, i], lam)
                agree = onehot(y) @ X_out.T
                assert 9 - agree.max() >= 3


def test_coset_index_rejects_bad_reps(s32):
    dup = s32.reps.copy()
    dup[1] = dup[0]
    with pytest.raises(ConsistencyError):
        CosetIndex(s32.ri, dup)


def test_rank_of_single_switch(s32):
    F = s32.field
    sw = SwitchedCode(s32.space, s32.code, s32.ri, s32.reps, single_switch(9, 1, 1), s32.index)
    W = sw.words()
    assert rank(F, W) == 7
    assert not span_contains(F, s32.code.generator, W[np.argmax(sw.locate(W)[0] == 1)])


def test_target_code_for_other_field():
    code = build_target_code(AffineSpace(field_of_size(5), 2))
    ri = build_ri(code, AffineSpace(field_of_size(5), 2), 3)
    assert ri.dim == 18
