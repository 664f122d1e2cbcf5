"""Arithmetic in small finite fields GF(p^k).

Elements are plain integers in ``[0, q)``.  Writing an index in base ``p``
gives the coefficients of the element's polynomial representation with the
constant term first, so index 0 is zero, index 1 is one and (for ``k > 1``)
index ``p`` is the class of ``x``.

Extension fields are built modulo the lexicographically smallest monic
irreducible polynomial, comparing coefficient lists from the constant term
upward.  Fields with ``q <= 256`` use full lookup tables; larger ones fall
back to formula-based arithmetic.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator

import numpy as np

MAX_FIELD_SIZE = 2**16
TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q`` into ``(p, k)`` with ``q == p**k``; raise if impossible."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


# -- polynomials over GF(p), coefficient lists with constant term first ------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by monic-or-not ``b`` over GF(p)."""
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = pow(b[-1], p - 2, p) if p > 2 else 1
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coef = (a[-1] * lead_inv) % p
        shift = len(a) - 1 - db
        for j, bj in enumerate(b):
            a[shift + j] = (a[shift + j] - coef * bj) % p
        _trim(a)
    return a


def monic_polynomials(p: int, degree: int) -> Iterator[list[int]]:
    """Monic polynomials of the given degree in lexicographic order (constant term first)."""
    for coeffs in itertools.product(range(p), repeat=degree):
        yield list(coeffs) + [1]


def is_irreducible(f: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    f = _trim(list(f))
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in monic_polynomials(p, d):
            if not poly_mod(f, g, p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for f in monic_polynomials(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


# -- the field ---------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A concrete finite field GF(p^k).

    Construct through :func:`build_field`, which caches instances.  All
    arithmetic methods accept Python ints or numpy integer arrays (with
    broadcasting) and return the same kind.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] | None = None
    _tables: dict = dc_field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise ValueError(f"extension degree must be >= 1, got {self.k}")
        if self.p**self.k > MAX_FIELD_SIZE:
            raise ValueError(f"field size {self.p}^{self.k} exceeds {MAX_FIELD_SIZE}")
        if self.k == 1:
            if self.modulus is not None:
                raise ValueError("prime fields carry no modulus")
        else:
            expected = smallest_irreducible(self.p, self.k)
            if self.modulus is None:
                object.__setattr__(self, "modulus", expected)
            elif tuple(self.modulus) != expected:
                mod = tuple(int(c) for c in self.modulus)
                if len(mod) != self.k + 1 or mod[-1] != 1 or not is_irreducible(list(mod), self.p):
                    raise ValueError(f"modulus {mod} is not monic irreducible of degree {self.k}")
                raise ValueError(
                    f"modulus {mod} is not the canonical (smallest) irreducible {expected}"
                )
        self._build()

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def dtype(self) -> type:
        return np.uint8 if self.q <= 256 else np.uint16

    def __repr__(self) -> str:
        return f"GF({self.spec_string()})"

    # -- construction ---------------------------------------------------

    def _build(self) -> None:
        q, p, k = self.q, self.p, self.k
        t = self._tables
        idx = np.arange(q, dtype=np.int64)
        t["digits"] = (idx[:, None] // p ** np.arange(k)) % p  # (q, k)
        if q > TABLE_LIMIT:
            return
        d = t["digits"]
        add_d = (d[:, None, :] + d[None, :, :]) % p
        t["add"] = self._from_digits(add_d).astype(self.dtype)
        t["neg"] = self._from_digits((-d) % p).astype(self.dtype)
        t["sub"] = t["add"][:, t["neg"]]
        t["mul"] = self._mul_digits(d[:, None, :], d[None, :, :]).astype(self.dtype)
        inv = np.zeros(q, dtype=self.dtype)
        nz_rows, nz_cols = np.nonzero(t["mul"][1:, 1:] == 1)
        inv[nz_rows + 1] = nz_cols + 1
        t["inv"] = inv

    def _from_digits(self, digits: np.ndarray) -> np.ndarray:
        return (np.asarray(digits, dtype=np.int64) * self.p ** np.arange(self.k)).sum(axis=-1)

    def _to_digits(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self.p ** np.arange(self.k)) % self.p

    def _mul_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Multiply digit arrays (trailing axis = coefficients) modulo the field polynomial."""
        p, k = self.p, self.k
        if k == 1:
            return self._from_digits((a * b) % p)
        a, b = np.broadcast_arrays(a, b)
        prod = np.zeros(a.shape[:-1] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= p
        mod = self.modulus
        for top in range(2 * k - 2, k - 1, -1):
            coef = prod[..., top].copy()
            for j in range(k + 1):
                prod[..., top - k + j] -= coef * mod[j]
            prod %= p
        return self._from_digits(prod[..., :k])

    # -- identity and elements -----------------------------------------

    def spec_string(self) -> str:
        s = f"{self.p}^{self.k}"
        if self.k > 1:
            s += ";mod=" + ",".join(str(c) for c in self.modulus)
        return s

    def element(self, idx: int) -> FieldElement:
        return FieldElement(self, idx)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, i) for i in range(self.q)]

    # -- arithmetic -----------------------------------------------------

    def _out(self, value, *args):
        if all(np.ndim(a) == 0 and not isinstance(a, np.ndarray) for a in args):
            return int(value)
        return np.asarray(value).astype(self.dtype, copy=False)

    def add(self, a, b):
        t = self._tables
        if "add" in t:
            return self._out(t["add"][a, b], a, b)
        if self.k == 1:
            return self._out((np.asarray(a, np.int64) + np.asarray(b, np.int64)) % self.p, a, b)
        s = (self._to_digits(a) + self._to_digits(b)) % self.p
        return self._out(self._from_digits(s), a, b)

    def neg(self, a):
        t = self._tables
        if "neg" in t:
            return self._out(t["neg"][a], a)
        return self._out(self._from_digits((-self._to_digits(a)) % self.p), a)

    def sub(self, a, b):
        t = self._tables
        if "sub" in t:
            return self._out(t["sub"][a, b], a, b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        t = self._tables
        if "mul" in t:
            return self._out(t["mul"][a, b], a, b)
        if self.k == 1:
            return self._out((np.asarray(a, np.int64) * np.asarray(b, np.int64)) % self.p, a, b)
        return self._out(self._mul_digits(self._to_digits(a), self._to_digits(b)), a, b)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        t = self._tables
        if "inv" in t:
            return self._out(t["inv"][a], a)
        return self.pow(a, self.q - 2)

    def pow(self, a, e: int):
        """``a**e`` with the convention ``0**0 == 1``."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self._out(np.ones_like(np.asarray(a, dtype=np.int64)), a)
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


@dataclass(frozen=True)
class FieldElement:
    """A field element as an index into its field's canonical enumeration."""

    field: FieldSpec
    idx: int

    def __post_init__(self) -> None:
        if not 0 <= self.idx < self.field.q:
            raise ValueError(f"element index {self.idx} outside GF({self.field.q})")

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"mixed-field operands: {self.field!r} and {other.field!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.add(self.idx, other.idx))

    def __sub__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.sub(self.idx, other.idx))

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._check(other)
        return FieldElement(self.field, self.field.mul(self.idx, other.idx))

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return self * other.inverse()

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.neg(self.idx))

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field, self.field.pow(self.idx, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.idx))

    def __int__(self) -> int:
        return self.idx

    def __repr__(self) -> str:
        return f"{self.idx}@GF({self.field.q})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def neg(a: FieldElement) -> FieldElement:
    return -a


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


@functools.lru_cache(maxsize=None)
def build_field(p: int, k: int = 1) -> FieldSpec:
    """Return the canonical field GF(p^k).

    >>> build_field(2, 2).modulus
    (1, 1, 1)
    """
    if not isinstance(p, int) or not isinstance(k, int):
        raise TypeError("p and k must be integers")
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    if p**k > MAX_FIELD_SIZE:
        raise ValueError(f"field size {p}^{k} exceeds {MAX_FIELD_SIZE}")
    return FieldSpec(p, k)


def field_of_size(q: int) -> FieldSpec:
    p, k = prime_power(q)
    return build_field(p, k)


def parse_field(text: str) -> FieldSpec:
    """Inverse of :meth:`FieldSpec.spec_string`, e.g. ``"2^2;mod=1,1,1"``."""
    head, _, rest = text.strip().partition(";")
    try:
        p_str, k_str = head.split("^")
        p, k = int(p_str), int(k_str)
    except ValueError as exc:
        raise ValueError(f"malformed field spec {text!r}") from exc
    f = build_field(p, k)
    if rest:
        if not rest.startswith("mod="):
            raise ValueError(f"malformed field spec {text!r}")
        mod = tuple(int(c) for c in rest[4:].split(","))
        if k == 1 or mod != f.modulus:
            raise ValueError(f"modulus {mod} does not match canonical {f.modulus}")
    elif k > 1:
        raise ValueError(f"field spec {text!r} lacks the modulus of an extension field")
    return f
