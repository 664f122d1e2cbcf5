"""Dense linear algebra over GF(q).

Vectors and matrices are numpy integer arrays of element indices paired
with the :class:`~quasiperfect.field.FieldSpec` they live in.  Syndromes are
encoded as integers in base ``q`` with row 0 of the parity-check matrix as
the least significant digit.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .field import FieldSpec

log = logging.getLogger(__name__)

DEFAULT_TABLE_CAP = 2**26
_CHUNK = 1 << 16


def as_matrix(field: FieldSpec, M, cols: int | None = None) -> np.ndarray:
    A = np.asarray(M)
    if A.ndim == 1:
        A = A.reshape(-1, cols) if cols is not None else A.reshape(1, -1)
    if A.size and (A.min() < 0 or A.max() >= field.q):
        raise ValueError(f"entries outside GF({field.q})")
    return A.astype(field.dtype)


def weight(v) -> int | np.ndarray:
    """Hamming weight of a vector, or of each row of a matrix."""
    return np.count_nonzero(np.asarray(v), axis=-1)


def matmul(field: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if field.k == 1 and field.p < 2**20:
        return ((A.astype(np.int64) @ B.astype(np.int64)) % field.p).astype(field.dtype)
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=field.dtype)
    for j in range(A.shape[-1]):
        out = field.add(out, field.mul(A[..., j, None], B[j]))
    return out


def rref(field: FieldSpec, M) -> tuple[np.ndarray, list[int], int]:
    """Reduced row-echelon form.

    Pivots are chosen in the leftmost available column, using the topmost
    nonzero row at or below the current pivot row.  The returned matrix has
    the same shape as ``M`` with zero rows at the bottom.
    """
    R = np.array(M, dtype=field.dtype, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = field.mul(field.inv(lead), R[r])
        factors = R[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            R[hit] = field.sub(R[hit], field.mul(factors[hit, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots, r


def rank(field: FieldSpec, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return rref(field, M)[2]


def row_basis(field: FieldSpec, M) -> np.ndarray:
    """RREF rows spanning the row space of ``M`` (zero rows dropped)."""
    R, _, r = rref(field, M)
    return R[:r]


def nullspace(field: FieldSpec, M) -> np.ndarray:
    """Basis of ``{x : M x^T = 0}``, one row per free column in ascending order."""
    M = np.asarray(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=field.dtype)
    R, pivots, r = rref(field, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((len(free), cols), dtype=field.dtype)
    if free:
        N[np.arange(len(free)), free] = 1
        if pivots:
            N[:, pivots] = field.neg(R[:r][:, free].T)
    return N


def span_contains(field: FieldSpec, basis, v) -> bool:
    basis = np.asarray(basis)
    v = np.asarray(v).reshape(1, -1)
    if basis.ndim != 2 or basis.shape[1] != v.shape[1]:
        if basis.size == 0:
            return not np.any(v)
        raise ValueError(f"length mismatch: basis rows {basis.shape}, vector {v.shape[1]}")
    if not np.any(v):
        return True
    return rank(field, np.vstack([basis, v])) == rank(field, basis)


def row_space_equal(field: FieldSpec, A, B) -> bool:
    A, B = np.asarray(A), np.asarray(B)
    ra, rb = rank(field, A), rank(field, B)
    return ra == rb and rank(field, np.vstack([A, B])) == ra


# -- syndromes ----------------------------------------------------------------


def encode_digits(q: int, digits: np.ndarray) -> np.ndarray:
    """Base-q integer of a digit array, trailing axis least-significant first."""
    digits = np.asarray(digits, dtype=np.int64)
    return digits @ (q ** np.arange(digits.shape[-1], dtype=np.int64))


def decode_digits(q: int, values, length: int, dtype=np.uint8) -> np.ndarray:
    values = np.asarray(values, dtype=np.int64)
    return ((values[..., None] // q ** np.arange(length, dtype=np.int64)) % q).astype(dtype)


def syndrome_digits(field: FieldSpec, parity: np.ndarray, V) -> np.ndarray:
    V = np.asarray(V)
    if V.shape[-1] != parity.shape[1]:
        raise ValueError(f"length mismatch: parity has {parity.shape[1]} columns, vector {V.shape[-1]}")
    return matmul(field, V, parity.T)


def syndromes(field: FieldSpec, parity: np.ndarray, V) -> np.ndarray:
    """Encoded syndromes of each row of ``V``."""
    return encode_digits(field.q, syndrome_digits(field, parity, V))


def syndrome(field: FieldSpec, parity: np.ndarray, v) -> int:
    return int(syndromes(field, parity, np.asarray(v).reshape(1, -1))[0])


def all_vectors(q: int, n: int, start: int = 0, stop: int | None = None, dtype=np.uint8) -> np.ndarray:
    """Vectors of F_q^n with index in ``[start, stop)``, coordinate 0 least significant."""
    stop = q**n if stop is None else stop
    return decode_digits(q, np.arange(start, stop, dtype=np.int64), n, dtype)


# -- coset leaders ------------------------------------------------------------


@dataclass(frozen=True)
class CosetLeaderTable:
    """Minimal coset-leader weight for every syndrome of ``parity``.

    ``leader_weight[s] == -1`` marks syndromes outside the column space,
    which only occurs when ``parity`` lacks full row rank.
    """

    q: int
    parity: np.ndarray
    leader_weight: np.ndarray
    full_rank: bool

    @property
    def covering_radius(self) -> int:
        return int(self.leader_weight.max())

    def weight_of(self, s) -> int | np.ndarray:
        w = self.leader_weight[s]
        return int(w) if np.ndim(w) == 0 else w


def _generator_digits(field: FieldSpec, parity: np.ndarray) -> np.ndarray:
    """Distinct nonzero syndromes of the single-coordinate vectors a*e_j."""
    cols = parity.T
    scalars = np.arange(1, field.q)
    gens = field.mul(scalars[:, None, None].astype(field.dtype), cols[None, :, :])
    gens = gens.reshape(-1, parity.shape[0])
    codes = encode_digits(field.q, gens)
    _, first = np.unique(codes, return_index=True)
    first = np.sort(first)
    gens = gens[first]
    return gens[np.any(gens != 0, axis=1)]


def syndrome_distances(
    field: FieldSpec, parity: np.ndarray, sources, cap: int = DEFAULT_TABLE_CAP
) -> np.ndarray:
    """Breadth-first ball growth in syndrome space.

    Returns, for each syndrome ``s``, the least weight of a vector ``e`` with
    ``s - syndrome(e)`` in ``sources`` (``-1`` if unreachable).  With
    ``sources == [0]`` this is the coset-leader weight table.
    """
    q, s = field.q, parity.shape[0]
    size = q**s
    if size > cap:
        raise BudgetExceeded(f"syndrome table of {q}^{s} = {size} entries exceeds cap {cap}")
    gens = _generator_digits(field, parity)
    dist = np.full(size, -1, dtype=np.int16)
    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    w = 0
    step = max(1, _CHUNK * 16 // max(1, len(gens) * max(s, 1)))
    while frontier.size:
        w += 1
        found = []
        for lo in range(0, frontier.size, step):
            fd = decode_digits(q, frontier[lo : lo + step], s, field.dtype)
            sums = field.add(fd[:, None, :], gens[None, :, :])
            enc = encode_digits(q, sums).ravel()
            enc = enc[dist[enc] < 0]
            if enc.size:
                enc = np.unique(enc)
                dist[enc] = w
                found.append(enc)
        frontier = np.concatenate(found) if found else np.empty(0, dtype=np.int64)
    return dist


def build_coset_leader_table(
    field: FieldSpec, parity, cap: int = DEFAULT_TABLE_CAP
) -> CosetLeaderTable:
    parity = as_matrix(field, parity)
    full = rank(field, parity) == parity.shape[0]
    if not full:
        log.warning(
            "parity check with %d rows has rank %d; table covers only its column space",
            parity.shape[0],
            rank(field, parity),
        )
    dist = syndrome_distances(field, parity, [0], cap)
    return CosetLeaderTable(field.q, parity, dist, full)


def min_weight_from_parity(field: FieldSpec, parity: np.ndarray, max_weight: int | None = None) -> int | None:
    """Minimum weight of a nonzero vector in the kernel of ``parity``.

    Scans supports of increasing size for linearly dependent column sets.
    Returns None when the kernel is trivial or no dependency exists up to
    ``max_weight``.
    """
    parity = np.asarray(parity)
    n = parity.shape[1]
    limit = n if max_weight is None else min(n, max_weight)
    if parity.shape[0] == 0:
        return 1 if n else None
    if n - rank(field, parity) == 0:
        return None
    zero_cols = np.flatnonzero(~np.any(parity != 0, axis=0))
    if zero_cols.size:
        return 1
    for w in range(2, limit + 1):
        for support in itertools.combinations(range(n), w):
            if rank(field, parity[:, support]) < w:
                return w
    return None
