"""Triples, the subspaces R_i, and switched codes.

A triple is a weight-3 codeword of RM_q((q-1)m - 2, m); its support is
collinear in AG(m, q).  R_i is spanned by the triples through coordinate i.
The target code splits into ``T = q^([m]_q - m)`` cosets of R_i, and a
switched code shifts coset ``t`` by ``lambda_t * e_i``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded, ConsistencyError
from .field import FieldSpec
from .geometry import AffineSpace, Line, q_analog
from .grm import LinearCode
from .linalg import (
    DEFAULT_TABLE_CAP,
    CosetLeaderTable,
    all_vectors,
    build_coset_leader_table,
    decode_digits,
    encode_digits,
    matmul,
    min_weight_from_parity,
    nullspace,
    rank,
    rref,
    syndrome_digits,
)

DEFAULT_WORD_CAP = 2**22


@dataclass(frozen=True, eq=False)
class Triple:
    vector: np.ndarray
    support: tuple[int, int, int]
    line: Line


def triple_on_line(
    code: LinearCode,
    space: AffineSpace,
    line: Line,
    a: int,
    b: int,
    c: int,
    normalize_at: int | None = None,
) -> Triple:
    """The unique triple of ``code`` supported on ``{a, b, c}``.

    The coefficient at ``normalize_at`` (default: the smallest of the three
    indices) is 1.
    """
    if len({a, b, c}) != 3:
        raise ValueError(f"triple support needs three distinct points, got {(a, b, c)}")
    if not all(x in line for x in (a, b, c)):
        raise ValueError(f"points {(a, b, c)} do not all lie on line {line}")
    if not space.collinear(a, b, c):
        raise ValueError(f"points {(a, b, c)} are not collinear")
    F = code.field
    support = tuple(sorted((a, b, c)))
    pivot = support[0] if normalize_at is None else normalize_at
    if pivot not in support:
        raise ValueError(f"normalization coordinate {pivot} not in support {support}")
    sol = nullspace(F, code.parity[:, list(support)])
    if sol.shape[0] != 1 or np.count_nonzero(sol[0]) != 3:
        raise ConsistencyError(f"no unique full-support triple on {support}")
    coeffs = sol[0]
    at = support.index(pivot)
    coeffs = F.mul(F.inv(int(coeffs[at])), coeffs)
    v = np.zeros(code.n, dtype=F.dtype)
    v[list(support)] = coeffs
    if not code.contains(v):
        raise ConsistencyError(f"vector on {support} is not a codeword")
    return Triple(v, support, line)  # type: ignore[arg-type]


class RiSubspace:
    """The span of all triples with coordinate ``i`` in their support."""

    def __init__(self, field: FieldSpec, i: int, basis: np.ndarray, table_cap: int = DEFAULT_TABLE_CAP):
        self.field = field
        self.i = i
        self.basis = basis
        self.parity = nullspace(field, basis)
        self.table_cap = table_cap

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @functools.cached_property
    def leader_table(self) -> CosetLeaderTable:
        return build_coset_leader_table(self.field, self.parity, self.table_cap)

    @functools.cached_property
    def min_weight(self) -> int | None:
        """Least nonzero weight in R_i (None if R_i is zero)."""
        return min_weight_from_parity(self.field, self.parity, max_weight=self.n)

    def syndrome_digits(self, V) -> np.ndarray:
        return syndrome_digits(self.field, self.parity, V)

    def syndromes(self, V) -> np.ndarray:
        return encode_digits(self.field.q, self.syndrome_digits(V))

    def elements(self, cap: int = DEFAULT_WORD_CAP) -> np.ndarray:
        size = self.field.q**self.dim
        if size > cap:
            raise BudgetExceeded(f"R_{self.i} has {size} elements, cap is {cap}")
        msgs = all_vectors(self.field.q, self.dim, dtype=self.field.dtype)
        return matmul(self.field, msgs, self.basis)


def ri_triples(code: LinearCode, space: AffineSpace, i: int) -> list[Triple]:
    """``q - 2`` triples per line through P_i, each with coefficient 1 at ``i``."""
    out = []
    for line in space.lines_through_point(i):
        others = sorted(p for p in line.points if p != i)
        first = others[0]
        for other in others[1:]:
            out.append(triple_on_line(code, space, line, i, first, other, normalize_at=i))
    return out


def build_ri(code: LinearCode, space: AffineSpace, i: int, table_cap: int = DEFAULT_TABLE_CAP) -> RiSubspace:
    q, m, n = space.q, space.m, space.n
    if q < 3:
        raise ValueError("triples need q >= 3")
    if not 0 <= i < n:
        raise IndexError(f"coordinate {i} outside [0, {n})")
    triples = ri_triples(code, space, i)
    M = np.array([t.vector for t in triples], dtype=code.field.dtype)
    R, _, r = rref(code.field, M)
    expected = n - q_analog(m, q) - 1
    if r != expected:
        raise ConsistencyError(f"R_{i} has rank {r}, expected n - [m]_q - 1 = {expected}")
    return RiSubspace(code.field, i, R[:r], table_cap)


def extension_basis(code: LinearCode, ri: RiSubspace) -> np.ndarray:
    """Rows of the code's RREF generator that extend R_i's basis to the code."""
    F = code.field
    if np.any(matmul(F, ri.basis, code.parity.T)):
        raise ValueError(f"R_{ri.i} is not contained in the code")
    chosen: list[np.ndarray] = []
    current = ri.basis
    r = ri.dim
    for row in code.generator:
        trial = np.vstack([current, row])
        rt = rank(F, trial)
        if rt > r:
            chosen.append(row)
            current, r = trial, rt
    if r != code.dim:
        raise ConsistencyError("extension did not reach the full code")
    return np.array(chosen, dtype=F.dtype).reshape(len(chosen), code.n)


def coset_partition(code: LinearCode, ri: RiSubspace) -> np.ndarray:
    """Representatives ``x_t`` of the cosets of R_i in the code.

    ``x_t`` is the combination of the extension vectors whose coefficients
    are the base-q digits of ``t`` (first vector least significant), so
    ``x_0 = 0`` and ``x_{q^j}`` is the j-th extension vector.
    """
    ext = extension_basis(code, ri)
    return reps_from_extension(code.field, ext)


def reps_from_extension(field: FieldSpec, ext: np.ndarray) -> np.ndarray:
    E = ext.shape[0]
    coeffs = all_vectors(field.q, E, dtype=field.dtype)
    if E == 0:
        return np.zeros((1, ext.shape[1]), dtype=field.dtype)
    return matmul(field, coeffs, ext)


class CosetIndex:
    """Syndrome lookup for the shifted cosets ``R_i + x_t + lambda e_i``.

    Every pair ``(t, lambda)`` gets a distinct R_i-syndrome; construction
    fails otherwise.  One index serves every switch vector over the same
    ``(ri, reps)``.
    """

    def __init__(self, ri: RiSubspace, reps: np.ndarray):
        F = ri.field
        q = F.q
        self.ri = ri
        self.reps = reps
        self.rep_digits = ri.syndrome_digits(reps)
        e_i = np.zeros((1, ri.n), dtype=F.dtype)
        e_i[0, ri.i] = 1
        self.ei_digits = ri.syndrome_digits(e_i)[0]
        lam = np.arange(q, dtype=F.dtype)
        # shifted[t, lam] = syndrome digits of x_t + lam e_i
        self.shifted = F.add(
            self.rep_digits[:, None, :], F.mul(lam[None, :, None], self.ei_digits[None, None, :])
        )
        keys = encode_digits(q, self.shifted).ravel()
        order = np.argsort(keys, kind="stable")
        if np.any(np.diff(keys[order]) == 0):
            raise ConsistencyError("coset syndromes x_t + lambda e_i are not pairwise distinct")
        self._keys = keys[order]
        self._vals = order  # t * q + lambda

    @property
    def T(self) -> int:
        return self.reps.shape[0]

    def locate(self, V) -> tuple[np.ndarray, np.ndarray]:
        """For each row, the ``(t, lambda)`` with row in ``R_i + x_t + lambda e_i``; ``-1`` if none."""
        s = self.ri.syndromes(np.atleast_2d(V))
        pos = np.minimum(np.searchsorted(self._keys, s), self._keys.size - 1)
        hit = self._keys[pos] == s
        code = np.where(hit, self._vals[pos], -1)
        q = self.ri.field.q
        return np.where(hit, code // q, -1), np.where(hit, code % q, -1)

    def coset_digits(self, lambdas) -> np.ndarray:
        return self.shifted[np.arange(self.T), np.asarray(lambdas, dtype=np.int64)]


class SwitchedCode:
    """The union over t of ``R_i + x_t + lambda_t e_i``, held structurally."""

    def __init__(
        self,
        space: AffineSpace,
        base_code: LinearCode,
        ri: RiSubspace,
        reps: np.ndarray,
        lambdas,
        index: CosetIndex | None = None,
    ):
        F = space.field
        lambdas = np.asarray(lambdas, dtype=np.int64).ravel()
        if lambdas.shape[0] != reps.shape[0]:
            raise ValueError(f"{reps.shape[0]} coset representatives but {lambdas.shape[0]} lambdas")
        if lambdas.size and (lambdas.min() < 0 or lambdas.max() >= F.q):
            raise ValueError(f"lambdas must lie in [0, {F.q})")
        self.space = space
        self.field = F
        self.base_code = base_code
        self.ri = ri
        self.reps = reps
        self.lambdas = lambdas.astype(F.dtype)
        self.index = index if index is not None else CosetIndex(ri, reps)
        self.coset_digits = self.index.coset_digits(self.lambdas)
        self.coset_syndromes = encode_digits(F.q, self.coset_digits)

    @property
    def i(self) -> int:
        return self.ri.i

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def T(self) -> int:
        return self.reps.shape[0]

    @property
    def size(self) -> int:
        return self.T * self.field.q**self.ri.dim

    @property
    def extension(self) -> np.ndarray:
        q = self.field.q
        E = 0
        while q**E < self.T:
            E += 1
        return self.reps[[q**j for j in range(E)]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SwitchedCode):
            return NotImplemented
        return (
            self.space == other.space
            and self.i == other.i
            and np.array_equal(self.ri.basis, other.ri.basis)
            and np.array_equal(self.reps, other.reps)
            and np.array_equal(self.lambdas, other.lambdas)
        )

    __hash__ = None  # type: ignore[assignment]

    def locate(self, V) -> tuple[np.ndarray, np.ndarray]:
        return self.index.locate(V)

    def members(self, V) -> np.ndarray:
        t, lam = self.locate(V)
        ok = t >= 0
        out = np.zeros(t.shape, dtype=bool)
        out[ok] = self.lambdas[t[ok]] == lam[ok]
        return out

    def shifted_reps(self) -> np.ndarray:
        """``x_t + lambda_t e_i`` for every t."""
        U = self.reps.copy()
        U[:, self.i] = self.field.add(U[:, self.i], self.lambdas)
        return U

    def words(self, cap: int = DEFAULT_WORD_CAP) -> np.ndarray:
        if self.size > cap:
            raise BudgetExceeded(f"switched code has {self.size} words, cap is {cap}")
        R = self.ri.elements(cap)
        U = self.shifted_reps()
        W = self.field.add(U[:, None, :], R[None, :, :])
        return W.reshape(-1, self.n)

    def is_identity(self) -> bool:
        return not np.any(self.lambdas)

    def lambda_string(self) -> str:
        return lambda_digits_to_str(self.lambdas)


def apply_switch(
    code: LinearCode,
    space: AffineSpace,
    ri: RiSubspace,
    reps: np.ndarray,
    lambdas,
    index: CosetIndex | None = None,
) -> SwitchedCode:
    return SwitchedCode(space, code, ri, reps, lambdas, index)


def member(sw: SwitchedCode, y) -> bool:
    y = np.asarray(y)
    if y.shape[-1] != sw.n:
        raise ValueError(f"vector length {y.shape[-1]} != code length {sw.n}")
    return bool(sw.members(y.reshape(1, -1))[0])


def recover_lambdas(words, ri: RiSubspace, reps: np.ndarray, index: CosetIndex | None = None) -> np.ndarray:
    """Recover the switch vector that produced ``words``.

    Checks that ``words`` is exactly a union of full shifted cosets, one per
    representative; raises ValueError otherwise.
    """
    F = ri.field
    index = index if index is not None else CosetIndex(ri, reps)
    W = np.unique(np.asarray(words, dtype=F.dtype), axis=0)
    T = reps.shape[0]
    t, lam = index.locate(W)
    if np.any(t < 0):
        raise ValueError("set contains words outside every shifted coset")
    lambdas = np.full(T, -1, dtype=np.int64)
    lambdas[t] = lam
    if np.any(lambdas < 0):
        raise ValueError("some coset is not represented")
    if np.any(lambdas[t] != lam):
        raise ValueError("a coset appears with two different shifts")
    if W.shape[0] != T * F.q**ri.dim:
        raise ValueError(f"set has {W.shape[0]} distinct words, expected {T * F.q**ri.dim}")
    return lambdas.astype(F.dtype)


# -- lambda vectors -------------------------------------------------------------

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def lambda_digits_to_str(lambdas) -> str:
    return "".join(_DIGITS[int(x)] for x in lambdas)


def lambda_str_to_digits(text: str, q: int, length: int | None = None) -> np.ndarray:
    if q > len(_DIGITS):
        raise ValueError(f"lambda strings support q <= {len(_DIGITS)}")
    try:
        vals = [_DIGITS.index(ch) for ch in text.strip().lower()]
    except ValueError as exc:
        raise ValueError(f"malformed lambda digits {text!r}") from exc
    if any(v >= q for v in vals):
        raise ValueError(f"lambda digit outside [0, {q})")
    if length is not None and len(vals) != length:
        raise ValueError(f"expected {length} lambda digits, got {len(vals)}")
    return np.array(vals, dtype=np.int64)


def single_switch(T: int, t: int, lam: int) -> np.ndarray:
    """Switch vector shifting only coset ``t``."""
    if not 0 <= t < T:
        raise ValueError(f"coset index {t} outside [0, {T})")
    out = np.zeros(T, dtype=np.int64)
    out[t] = lam
    return out


def lambdas_from_index(index: int, q: int, T: int) -> np.ndarray:
    """The switch vector whose base-q digits (t ascending) encode ``index``."""
    return decode_digits(q, index, T, np.int64)
