"""Generalized Reed-Muller codes RM_q(r, m) and the covering-radius-2 code.

The code of interest is RM_q((q-1)m - 2, m).  Its parity-check matrix has an
all-ones first row followed by the m coordinate rows of the points of
AG(m, q).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from math import comb

import numpy as np

from .errors import BudgetExceeded, ConsistencyError
from .field import FieldSpec
from .geometry import AffineSpace
from .linalg import (
    DEFAULT_TABLE_CAP,
    CosetLeaderTable,
    all_vectors,
    build_coset_leader_table,
    matmul,
    nullspace,
    rank,
    row_basis,
    syndromes,
)


def _binom(a: int, b: int) -> int:
    if b < 0 or a < b:
        return 0
    return comb(a, b)


def _check_order(q: int, m: int, r: int) -> None:
    if not 0 <= r <= (q - 1) * m:
        raise ValueError(f"order r={r} outside [0, {(q - 1) * m}] for q={q}, m={m}")


def grm_dimension(q: int, m: int, r: int) -> int:
    _check_order(q, m, r)
    return sum(
        (-1) ** k * comb(m, k) * _binom(m + r - k * q, r - k * q) for k in range(m + 1)
    )


def grm_min_distance(q: int, m: int, r: int) -> int:
    _check_order(q, m, r)
    a, b = divmod(r, q - 1)
    if a == m:
        # r = (q-1)m: the whole space.
        return 1
    return (q - b) * q ** (m - a - 1)


def dual_order(q: int, m: int, r: int) -> int:
    if not 0 <= r < (q - 1) * m:
        raise ValueError(f"dual order needs 0 <= r < {(q - 1) * m}, got {r}")
    return (q - 1) * m - 1 - r


def target_order(q: int, m: int) -> int:
    return (q - 1) * m - 2


def reduced_monomials(q: int, m: int, r: int) -> list[tuple[int, ...]]:
    """Exponent vectors with entries in [0, q-1] and total degree at most r."""
    return [a for a in itertools.product(range(q), repeat=m) if sum(a) <= r]


@dataclass(eq=False)
class LinearCode:
    """A linear code given by an RREF generator matrix and a parity-check matrix.

    ``order`` and ``m`` are set when the code was built as RM_q(order, m).
    Two codes compare equal when they share the field and row space.
    """

    field: FieldSpec
    generator: np.ndarray
    parity: np.ndarray
    order: int | None = None
    m: int | None = None
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @classmethod
    def from_generator(cls, field: FieldSpec, G, **meta) -> LinearCode:
        G = row_basis(field, np.asarray(G, dtype=field.dtype))
        return cls(field, G, nullspace(field, G), **meta)

    @property
    def n(self) -> int:
        return self.generator.shape[1]

    @property
    def dim(self) -> int:
        return self.generator.shape[0]

    @property
    def size(self) -> int:
        return self.field.q**self.dim

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearCode):
            return NotImplemented
        return (
            self.field == other.field
            and self.generator.shape == other.generator.shape
            and np.array_equal(self.generator, other.generator)
        )

    __hash__ = None  # type: ignore[assignment]

    def contains(self, v) -> bool:
        return not np.any(matmul(self.field, np.asarray(v).reshape(1, -1), self.parity.T))

    def encode(self, messages) -> np.ndarray:
        return matmul(self.field, np.asarray(messages, dtype=self.field.dtype), self.generator)

    def codewords(self, cap: int = 2**22) -> np.ndarray:
        if self.size > cap:
            raise BudgetExceeded(f"code has {self.size} words, cap is {cap}")
        return self.encode(all_vectors(self.field.q, self.dim, dtype=self.field.dtype))

    def leader_table(self, cap: int = DEFAULT_TABLE_CAP) -> CosetLeaderTable:
        if "leader" not in self._cache:
            self._cache["leader"] = build_coset_leader_table(self.field, self.parity, cap)
        return self._cache["leader"]


def evaluation_matrix(space: AffineSpace, r: int) -> np.ndarray:
    """Rows are the reduced monomials of degree <= r evaluated at every point."""
    F = space.field
    rows = []
    for exps in reduced_monomials(space.q, space.m, r):
        vals = np.ones(space.n, dtype=F.dtype)
        for j, e in enumerate(exps):
            if e:
                vals = F.mul(vals, F.pow(space.points[:, j], e))
        rows.append(vals)
    return np.array(rows, dtype=F.dtype)


def build_grm(space: AffineSpace, r: int) -> LinearCode:
    q, m = space.q, space.m
    expected = grm_dimension(q, m, r)
    code = LinearCode.from_generator(space.field, evaluation_matrix(space, r), order=r, m=m)
    if code.dim != expected:
        raise ConsistencyError(
            f"RM_{q}({r},{m}) evaluation rank {code.dim} differs from dimension formula {expected}"
        )
    return code


def target_parity(space: AffineSpace) -> np.ndarray:
    """The (m+1) x q^m parity check: all-ones row, then the point coordinates."""
    F = space.field
    H = np.empty((space.m + 1, space.n), dtype=F.dtype)
    H[0] = 1
    H[1:] = space.points.T
    return H


@functools.lru_cache(maxsize=32)
def _target_code_cached(field: FieldSpec, m: int) -> LinearCode:
    space = AffineSpace(field, m)
    q = space.q
    r = target_order(q, m)
    code = build_grm(space, r)
    H = target_parity(space)
    if rank(field, H) != m + 1:
        raise ConsistencyError("parity check of the target code is rank deficient")
    if np.any(matmul(field, code.generator, H.T)):
        raise ConsistencyError("generator is not orthogonal to the explicit parity check")
    if code.dim != space.n - m - 1:
        raise ConsistencyError(f"dimension {code.dim} != n - m - 1 = {space.n - m - 1}")
    return LinearCode(field, code.generator, H, order=r, m=m)


def build_target_code(space: AffineSpace) -> LinearCode:
    """RM_q((q-1)m - 2, m) with the explicit (m+1)-row parity check."""
    if space.q < 3:
        raise ValueError("the covering-radius-2 construction needs q >= 3")
    code = _target_code_cached(space.field, space.m)
    # Fresh wrapper so per-code caches are not shared across callers.
    return LinearCode(code.field, code.generator, code.parity, order=code.order, m=code.m)


def is_target_code(code: LinearCode, space: AffineSpace) -> bool:
    if space.q < 3 or code.field != space.field or code.n != space.n:
        return False
    return code == _target_code_cached(space.field, space.m)


def code_syndromes(code: LinearCode, V) -> np.ndarray:
    return syndromes(code.field, code.parity, V)
