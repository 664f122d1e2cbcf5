"""Parameter checks for linear and switched codes.

Two independent routes are provided for the expensive parameters:

* exhaustive oracles that work on a materialized set of words and use
  nothing but Hamming distances, and
* structured routes that exploit the coset structure (syndromes of the
  parity check of R_i, or of the linear code itself).

Exhaustive scans refuse to start when their work estimate exceeds the
configured budget instead of silently truncating.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import BudgetExceeded
from .field import FieldSpec
from .geometry import q_analog
from .grm import LinearCode
from .linalg import (
    DEFAULT_TABLE_CAP,
    all_vectors,
    decode_digits,
    encode_digits,
    matmul,
    min_weight_from_parity,
    rank,
    syndrome_distances,
)
from .switching import SwitchedCode

DEFAULT_PAIR_BUDGET = 10**7
DEFAULT_AMBIENT_BUDGET = 10**9
_ROWS_PER_CHUNK = 4096


# -- exhaustive oracles ---------------------------------------------------------


def _unique_words(field: FieldSpec, words) -> np.ndarray:
    W = np.asarray(words)
    if W.ndim != 2:
        raise ValueError("words must be a 2-D array, one word per row")
    if W.size and (W.min() < 0 or W.max() >= field.q):
        raise ValueError(f"entries outside GF({field.q})")
    return np.unique(W.astype(field.dtype), axis=0)


def _onehot(q: int, W: np.ndarray) -> np.ndarray:
    """Row-wise indicator encoding; ``onehot(x) . onehot(y)`` counts agreements."""
    N, n = W.shape
    out = np.zeros((N, n * q), dtype=np.float32)
    out[np.arange(N)[:, None], np.arange(n)[None, :] * q + W.astype(np.int64)] = 1.0
    return out


def _map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def min_distance_exhaustive(
    field: FieldSpec, words, budget_pairs: int = DEFAULT_PAIR_BUDGET, workers: int = 1
) -> int:
    """Smallest Hamming distance between two different words."""
    W = _unique_words(field, words)
    M, n = W.shape
    if M < 2:
        raise ValueError("minimum distance needs at least two distinct words")
    pairs = M * (M - 1) // 2
    if pairs > budget_pairs:
        raise BudgetExceeded(f"{pairs} word pairs exceed the pair budget {budget_pairs}")
    X = _onehot(field.q, W)

    def chunk_min(lo: int) -> int:
        agree = X[lo : lo + _ROWS_PER_CHUNK] @ X.T
        rows = np.arange(agree.shape[0])
        agree[rows, lo + rows] = -1.0
        return n - int(agree.max())

    return min(_map(chunk_min, list(range(0, M, _ROWS_PER_CHUNK)), workers))


def covering_radius_exhaustive(
    field: FieldSpec, words, budget_ambient: int = DEFAULT_AMBIENT_BUDGET, workers: int = 1
) -> int:
    """``max_x min_c d(x, c)`` over every x in F_q^n."""
    W = _unique_words(field, words)
    M, n = W.shape
    q = field.q
    work = q**n * M
    if work > budget_ambient:
        raise BudgetExceeded(f"{q}^{n} x {M} distance evaluations exceed the ambient budget {budget_ambient}")
    C = _onehot(q, W).T.copy()
    step = max(1, min(1 << 14, (1 << 24) // max(M, 1)))

    def chunk_max(lo: int) -> int:
        X = all_vectors(q, n, lo, min(lo + step, q**n))
        return n - int((_onehot(q, X) @ C).max(axis=1).min())

    return max(_map(chunk_max, list(range(0, q**n, step)), workers))


def weight_distribution(words, n: int | None = None) -> tuple[int, ...]:
    W = np.asarray(words)
    n = W.shape[1] if n is None else n
    return tuple(int(c) for c in np.bincount(np.count_nonzero(W, axis=1), minlength=n + 1))


def distance_distribution(
    field: FieldSpec, words, budget_pairs: int = DEFAULT_PAIR_BUDGET
) -> tuple[int, ...]:
    """Counts of ordered word pairs (diagonal included) at each distance.

    Equals the sum over all codewords c of the weight distribution of
    ``C - c``, so it is invariant under translations and monomial maps.
    """
    W = _unique_words(field, words)
    M, n = W.shape
    if M * M > 2 * budget_pairs:
        raise BudgetExceeded(f"{M * M} ordered pairs exceed the pair budget")
    X = _onehot(field.q, W)
    counts = np.zeros(n + 1, dtype=np.int64)
    for lo in range(0, M, _ROWS_PER_CHUNK):
        agree = (X[lo : lo + _ROWS_PER_CHUNK] @ X.T).astype(np.int64)
        counts += np.bincount((n - agree).ravel(), minlength=n + 1)
    return tuple(int(c) for c in counts)


def coset_weight_table(
    field: FieldSpec, parity: np.ndarray, budget_ambient: int = DEFAULT_AMBIENT_BUDGET
) -> np.ndarray:
    """``table[s, w]`` = number of weight-w vectors with syndrome s (full ambient scan)."""
    q, (s_rows, n) = field.q, parity.shape
    if q**n * n > budget_ambient:
        raise BudgetExceeded(f"coset weight table needs a scan of {q}^{n} vectors")
    table = np.zeros((q**s_rows, n + 1), dtype=np.int64)
    step = 1 << 16
    for lo in range(0, q**n, step):
        X = all_vectors(q, n, lo, min(lo + step, q**n), field.dtype)
        syn = encode_digits(q, matmul(field, X, parity.T))
        np.add.at(table, (syn, np.count_nonzero(X, axis=1)), 1)
    return table


def distance_distribution_structured(sw: SwitchedCode, table: np.ndarray) -> tuple[int, ...]:
    """Distance distribution from the coset weight table of R_i's parity check.

    Pairs drawn from cosets a and b have distances distributed like the
    weights of the R_i-coset of ``u_a - u_b``, each realized ``|R_i|`` times.
    """
    F = sw.field
    S = sw.coset_digits
    keys = encode_digits(F.q, F.sub(S[:, None, :], S[None, :, :])).ravel()
    counts = np.bincount(keys, minlength=table.shape[0]) @ table
    return tuple(int(c) * F.q**sw.ri.dim for c in counts)


def lexicographic_min(words) -> np.ndarray:
    W = np.asarray(words)
    order = np.lexsort(W.T[::-1])
    return W[order[0]]


def rank_about_min(field: FieldSpec, words) -> int:
    """``dim span{c - c0}`` with ``c0`` the lexicographically smallest word."""
    W = _unique_words(field, words)
    return rank(field, field.sub(W, lexicographic_min(W)[None, :]))


def is_linear(field: FieldSpec, words) -> bool:
    """True iff the set is an F_q-subspace."""
    W = _unique_words(field, words)
    if not np.any(np.all(W == 0, axis=1)):
        return False
    return W.shape[0] == field.q ** rank(field, W)


def is_translate_linear(field: FieldSpec, words) -> bool:
    """True iff ``C - c0`` is a subspace for some (equivalently every) ``c0`` in C."""
    W = _unique_words(field, words)
    c0 = lexicographic_min(W)
    return is_linear(field, field.sub(W, c0[None, :]))


def _encode_words(field: FieldSpec, W: np.ndarray) -> np.ndarray:
    n = W.shape[1]
    if n * math.log2(field.q) >= 63:
        raise BudgetExceeded(f"words of length {n} over GF({field.q}) do not fit a 64-bit key")
    return encode_digits(field.q, W)


def kernel_exhaustive(field: FieldSpec, words, budget_pairs: int = DEFAULT_PAIR_BUDGET) -> np.ndarray:
    """The F_q-linear kernel ``{v : a*v + C = C for every a in F_q}``."""
    W = _unique_words(field, words)
    M = W.shape[0]
    if M * M * (field.q - 1) > 2 * budget_pairs * field.q:
        raise BudgetExceeded(f"kernel scan over {M} words exceeds the pair budget")
    keys = np.sort(_encode_words(field, W))
    cands = field.sub(W, lexicographic_min(W)[None, :])
    scalars = range(1, field.q)
    kept = []
    for v in cands:
        ok = True
        for a in scalars:
            shifted = _encode_words(field, field.add(W, field.mul(a, v)[None, :]))
            pos = np.minimum(np.searchsorted(keys, shifted), M - 1)
            if not np.array_equal(keys[pos], shifted):
                ok = False
                break
        if ok:
            kept.append(v)
    return np.array(kept, dtype=field.dtype).reshape(len(kept), W.shape[1])


def _log_q_exact(q: int, size: int) -> int:
    k = 0
    while q**k < size:
        k += 1
    if q**k != size:
        raise ValueError(f"{size} is not a power of {q}")
    return k


def kernel_dim_exhaustive(field: FieldSpec, words, budget_pairs: int = DEFAULT_PAIR_BUDGET) -> int:
    return _log_q_exact(field.q, kernel_exhaustive(field, words, budget_pairs).shape[0])


# -- structured routes ------------------------------------------------------------


def min_distance_linear(code: LinearCode) -> int:
    d = min_weight_from_parity(code.field, code.parity)
    if d is None:
        raise ValueError("code has no nonzero codewords")
    return d


def covering_radius_linear(code: LinearCode, cap: int = DEFAULT_TABLE_CAP) -> int:
    return code.leader_table(cap).covering_radius


def _syndrome_sum_keys(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Encoded ``A[j] + B[k]`` for all j, k (digit arrays)."""
    return encode_digits(field.q, field.add(A[:, None, :], B[None, :, :]))


def min_distance_structured(
    sw: SwitchedCode, budget_pairs: int = DEFAULT_PAIR_BUDGET, cap: int = DEFAULT_TABLE_CAP
) -> int:
    """Minimum distance from the R_i coset structure.

    Within one coset the distances are the weights of R_i.  Between cosets
    ``t1 != t2`` the least distance is the coset-leader weight of the
    difference of their shifted syndromes.  For up to ``budget_pairs``
    coset pairs these differences are enumerated directly; beyond that the
    search runs over candidate differences in order of leader weight.
    """
    F = sw.field
    within = sw.ri.min_weight
    within = math.inf if within is None else within
    T = sw.T
    if T == 1:
        return int(within)
    table = sw.ri.leader_table if cap >= sw.ri.table_cap else _leader(sw, cap)
    lw = table.leader_weight
    S = sw.coset_digits
    if T * (T - 1) // 2 <= budget_pairs:
        negS = F.neg(S)
        best = math.inf
        for lo in range(0, T, 256):
            keys = _syndrome_sum_keys(F, S[lo : lo + 256], negS)
            w = lw[keys].astype(np.int64)
            rows = np.arange(keys.shape[0])
            w[rows, lo + rows] = np.iinfo(np.int64).max
            best = min(best, int(w.min()))
        return int(min(within, best))
    in_S = np.zeros(lw.size, dtype=bool)
    in_S[sw.coset_syndromes] = True
    for w in range(1, int(lw.max()) + 1):
        if w >= within:
            break
        deltas = decode_digits(F.q, np.flatnonzero(lw == w), S.shape[1], F.dtype)
        step = max(1, (1 << 20) // T)
        for lo in range(0, deltas.shape[0], step):
            if in_S[_syndrome_sum_keys(F, deltas[lo : lo + step], S)].any():
                return w
    return int(within)


def _leader(sw: SwitchedCode, cap: int):
    from .linalg import build_coset_leader_table

    return build_coset_leader_table(sw.field, sw.ri.parity, cap)


def covering_radius_structured(sw: SwitchedCode, cap: int = DEFAULT_TABLE_CAP) -> int:
    """Covering radius by ball growth from the coset syndromes.

    The distance from x to the code only depends on the R_i-syndrome of x,
    and equals ``min_t leader_weight[s(x) - s(x_t + lambda_t e_i)]``.
    """
    dist = syndrome_distances(sw.field, sw.ri.parity, sw.coset_syndromes, cap)
    if np.any(dist < 0):
        raise ValueError("parity check of R_i is rank deficient")
    return int(dist.max())


def rank_structured(sw: SwitchedCode) -> int:
    F = sw.field
    U = sw.shifted_reps()
    return rank(F, np.vstack([sw.ri.basis, F.sub(U, U[0][None, :])]))


def kernel_dim_structured(sw: SwitchedCode, budget_pairs: int = DEFAULT_PAIR_BUDGET) -> int:
    """F_q-linear kernel dimension from the coset syndromes.

    Every kernel contains R_i, and ``v`` lies in the kernel iff shifting the
    set of coset syndromes by ``a * s(v)`` permutes it for every scalar a.
    """
    F, q, T = sw.field, sw.field.q, sw.T
    if T * T * (q - 1) > 2 * budget_pairs * q:
        raise BudgetExceeded(f"kernel scan over {T} cosets exceeds the pair budget")
    S = sw.coset_digits
    keys = np.sort(sw.coset_syndromes)
    cands = F.sub(S, S[0][None, :])
    count = 0
    for delta in cands:
        ok = True
        for a in range(1, q):
            shifted = encode_digits(q, F.add(S, F.mul(a, delta)[None, :]))
            pos = np.minimum(np.searchsorted(keys, shifted), T - 1)
            if not np.array_equal(keys[pos], shifted):
                ok = False
                break
        count += ok
    return sw.ri.dim + _log_q_exact(q, count)


def linearity_structured(sw: SwitchedCode, rank_value: int | None = None) -> tuple[bool, bool]:
    """``(is_linear, is_translate_linear)`` without materializing the code."""
    r = rank_structured(sw) if rank_value is None else rank_value
    translate = sw.size == sw.field.q**r
    zero = np.zeros((1, sw.n), dtype=sw.field.dtype)
    return translate and bool(sw.members(zero)[0]), translate


# -- reports ------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeReport:
    q: int
    n: int
    size: int
    d: int
    rho: int
    is_linear: bool
    is_translate_linear: bool
    rank: int
    kernel_dim: int | None
    weight_distribution: tuple[int, ...] | None
    method: str

    @property
    def e(self) -> int:
        return (self.d - 1) // 2

    @property
    def packing_radius(self) -> int:
        return self.e

    @property
    def is_quasi_perfect(self) -> bool:
        return self.rho == self.e + 1

    @property
    def is_perfect(self) -> bool:
        return self.rho == self.e

    def parameters(self) -> tuple[int, int, int, int]:
        return (self.n, self.size, self.d, self.rho)

    def to_text(self) -> str:
        def fmt(v) -> str:
            if v is None:
                return "none"
            if isinstance(v, bool):
                return "true" if v else "false"
            if isinstance(v, tuple):
                return ",".join(str(x) for x in v)
            return str(v)

        lines = [
            ("q", self.q),
            ("n", self.n),
            ("size", self.size),
            ("d", self.d),
            ("e", self.e),
            ("rho", self.rho),
            ("linear", self.is_linear),
            ("translate_linear", self.is_translate_linear),
            ("quasi_perfect", self.is_quasi_perfect),
            ("perfect", self.is_perfect),
            ("rank", self.rank),
            ("kernel_dim", self.kernel_dim),
            ("weight_distribution", self.weight_distribution),
            ("method", self.method),
        ]
        return "".join(f"{k}={fmt(v)}\n" for k, v in lines)

    @classmethod
    def from_text(cls, text: str) -> CodeReport:
        kv = {}
        for line in text.splitlines():
            if line.strip():
                k, _, v = line.partition("=")
                kv[k.strip()] = v.strip()

        def opt_int(v: str) -> int | None:
            return None if v == "none" else int(v)

        wd = kv["weight_distribution"]
        return cls(
            q=int(kv["q"]),
            n=int(kv["n"]),
            size=int(kv["size"]),
            d=int(kv["d"]),
            rho=int(kv["rho"]),
            is_linear=kv["linear"] == "true",
            is_translate_linear=kv["translate_linear"] == "true",
            rank=int(kv["rank"]),
            kernel_dim=opt_int(kv["kernel_dim"]),
            weight_distribution=None if wd == "none" else tuple(int(x) for x in wd.split(",")),
            method=kv["method"],
        )


def report_exhaustive(
    field: FieldSpec,
    words,
    budget_pairs: int = DEFAULT_PAIR_BUDGET,
    budget_ambient: int = DEFAULT_AMBIENT_BUDGET,
    workers: int = 1,
) -> CodeReport:
    W = _unique_words(field, words)
    d = min_distance_exhaustive(field, W, budget_pairs, workers)
    rho = covering_radius_exhaustive(field, W, budget_ambient, workers)
    try:
        kdim = kernel_dim_exhaustive(field, W, budget_pairs)
    except BudgetExceeded:
        kdim = None
    return CodeReport(
        q=field.q,
        n=W.shape[1],
        size=W.shape[0],
        d=d,
        rho=rho,
        is_linear=is_linear(field, W),
        is_translate_linear=is_translate_linear(field, W),
        rank=rank_about_min(field, W),
        kernel_dim=kdim,
        weight_distribution=weight_distribution(W),
        method="exhaustive",
    )


def report_linear(code: LinearCode, word_cap: int = 2**20, cap: int = DEFAULT_TABLE_CAP) -> CodeReport:
    wd = weight_distribution(code.codewords(word_cap)) if code.size <= word_cap else None
    return CodeReport(
        q=code.field.q,
        n=code.n,
        size=code.size,
        d=min_distance_linear(code),
        rho=covering_radius_linear(code, cap),
        is_linear=True,
        is_translate_linear=True,
        rank=code.dim,
        kernel_dim=code.dim,
        weight_distribution=wd,
        method="structured",
    )


def report_structured(
    sw: SwitchedCode,
    budget_pairs: int = DEFAULT_PAIR_BUDGET,
    word_cap: int = 2**20,
    cap: int = DEFAULT_TABLE_CAP,
) -> CodeReport:
    r = rank_structured(sw)
    linear, translate = linearity_structured(sw, r)
    try:
        kdim = kernel_dim_structured(sw, budget_pairs)
    except BudgetExceeded:
        kdim = None
    wd = weight_distribution(sw.words(word_cap)) if sw.size <= word_cap else None
    return CodeReport(
        q=sw.field.q,
        n=sw.n,
        size=sw.size,
        d=min_distance_structured(sw, budget_pairs, cap),
        rho=covering_radius_structured(sw, cap),
        is_linear=linear,
        is_translate_linear=translate,
        rank=r,
        kernel_dim=kdim,
        weight_distribution=wd,
        method="structured",
    )


# -- equivalence invariants ------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    """Invariants under translation composed with monomial maps.

    Different fingerprints certify that two codes are not equivalent; equal
    fingerprints prove nothing.
    """

    size: int
    d: int
    rho: int
    rank: int
    kernel_dim: int | None
    distance_distribution: tuple[int, ...] | None

    def digest(self) -> str:
        return hashlib.sha256(repr(astuple_ordered(self)).encode()).hexdigest()[:16]

    def certifies_nonequivalent(self, other: Fingerprint) -> bool:
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if a is not None and b is not None and a != b:
                return True
        return False


def astuple_ordered(fp: Fingerprint) -> tuple:
    d = asdict(fp)
    return tuple((f.name, d[f.name]) for f in fields(fp))


def invariant_fingerprint(
    field: FieldSpec,
    words,
    budget_pairs: int = DEFAULT_PAIR_BUDGET,
    budget_ambient: int = DEFAULT_AMBIENT_BUDGET,
    workers: int = 1,
) -> Fingerprint:
    W = _unique_words(field, words)
    return Fingerprint(
        size=W.shape[0],
        d=min_distance_exhaustive(field, W, budget_pairs, workers),
        rho=covering_radius_exhaustive(field, W, budget_ambient, workers),
        rank=rank_about_min(field, W),
        kernel_dim=kernel_dim_exhaustive(field, W, budget_pairs),
        distance_distribution=distance_distribution(field, W, budget_pairs),
    )


def structured_fingerprint(
    sw: SwitchedCode,
    budget_pairs: int = DEFAULT_PAIR_BUDGET,
    word_cap: int = 2**14,
    weight_table: np.ndarray | None = None,
) -> Fingerprint:
    """Fingerprint from the coset structure.

    The distance distribution comes from ``weight_table`` (see
    :func:`coset_weight_table`) when given, else from the materialized words
    if there are at most ``word_cap`` of them, else it is left out.
    """
    try:
        kdim = kernel_dim_structured(sw, budget_pairs)
    except BudgetExceeded:
        kdim = None
    if weight_table is not None:
        dd = distance_distribution_structured(sw, weight_table)
    elif sw.size <= word_cap:
        dd = distance_distribution(sw.field, sw.words(word_cap), budget_pairs)
    else:
        dd = None
    return Fingerprint(
        size=sw.size,
        d=min_distance_structured(sw, budget_pairs),
        rho=covering_radius_structured(sw),
        rank=rank_structured(sw),
        kernel_dim=kdim,
        distance_distribution=dd,
    )


# -- counting bound -----------------------------------------------------------------------


@dataclass(frozen=True)
class CountingBound:
    """Exact exponents of the lower bound on nonequivalent switched codes.

    ``T_exponent`` is ``[m]_q - m``; there are ``T = q^T_exponent`` cosets and
    ``q^T`` distinct codes, so ``codes_total_exponent == T``.  An equivalence
    class holds at most ``class_cap = (q-1)^n n! q^n`` of them.
    """

    q: int
    m: int
    n: int
    q_analog: int
    T_exponent: int
    codes_total_exponent: int
    bound_exponent: int
    class_cap: int

    @property
    def cap_within_exponent(self) -> bool:
        """``class_cap <= q^(n(m+2))``, the step that turns the count into the bound."""
        return self.class_cap <= self.q ** (self.n * (self.m + 2))

    def to_text(self) -> str:
        return (
            f"q={self.q}\nm={self.m}\nn={self.n}\n[m]_q={self.q_analog}\n"
            f"T_exponent={self.T_exponent}\n"
            f"codes_total=q^{self.codes_total_exponent}\n"
            f"class_cap={self.class_cap}\n"
            f"cap_within_q^(n(m+2))={'true' if self.cap_within_exponent else 'false'}\n"
            f"bound_exponent={self.bound_exponent}\n"
            f"nonequivalent_codes_exceed=q^{self.bound_exponent}\n"
        )


def counting_bound(q: int, m: int) -> CountingBound:
    if q < 3 or m < 2:
        raise ValueError("the counting bound needs q >= 3 and m >= 2")
    n = q**m
    qm = q_analog(m, q)
    t_exp = qm - m
    total = q**t_exp
    return CountingBound(
        q=q,
        m=m,
        n=n,
        q_analog=qm,
        T_exponent=t_exp,
        codes_total_exponent=total,
        bound_exponent=total - n * (m + 2),
        class_cap=(q - 1) ** n * math.factorial(n) * q**n,
    )


def corollary_threshold(q: int, eps: float, m_max: int = 10) -> int | None:
    """Smallest ``m`` in ``[2, m_max]`` with ``bound_exponent > q^(c n)``, ``c = 1/q - eps``.

    This only evaluates the exponent arithmetic at finite m; it does not
    verify any asymptotic statement.
    """
    c = 1.0 / q - eps
    for m in range(2, m_max + 1):
        n = q**m
        b = q ** (q_analog(m, q) - m) - n * (m + 2)
        if b > 0 and math.log(b, q) > c * q**m:
            return m
    return None
