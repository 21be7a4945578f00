"""Arithmetic over the binary extension fields GF(2^n), n = 1..8.

The simulator performs Gaussian elimination on coefficient vectors whose
entries live in GF(2^n).  Addition is XOR; multiplication and inversion go
through log/antilog tables built once per field.  The theory layer never
imports this module: it treats the field order q as a plain number.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# One fixed, conventional reduction polynomial per extension degree, so that
# simulations are bit-for-bit reproducible across machines and releases.
# n=8 uses the AES polynomial x^8 + x^4 + x^3 + x + 1.
DEFAULT_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011011,
}

MAX_ORDER = 256


def _polymul_mod(a: int, b: int, poly: int, n: int) -> int:
    """Carry-less product of a and b reduced modulo poly (degree n)."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> n & 1:
            a ^= poly
    return r


def _polydivmod(a: int, b: int) -> tuple[int, int]:
    """Quotient and remainder of carry-less division of a by b."""
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = b.bit_length() - 1
    quo = 0
    while a.bit_length() - 1 >= db and a:
        shift = a.bit_length() - 1 - db
        quo ^= 1 << shift
        a ^= b << shift
    return quo, a


def is_irreducible(poly: int, n: int | None = None) -> bool:
    """Exhaustive divisor check: no factor of degree 1..n//2 divides poly."""
    if n is None:
        n = poly.bit_length() - 1
    if n < 1 or poly.bit_length() - 1 != n:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in range(1 << d):
            cand = (1 << d) | low
            if _polydivmod(poly, cand)[1] == 0:
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A binary extension field GF(q) = GF(2^n) with its lookup tables.

    Parameters
    ----------
    q : int
        Field order; must be a power of two with 2 <= q <= 256.
    reduction_polynomial : int, optional
        Bitmask of the irreducible degree-n polynomial used to reduce
        products.  Defaults to the conventional polynomial for the degree.

    Raises
    ------
    ValueError
        If q is not a supported power of two, or the polynomial has the
        wrong degree or is reducible.
    """

    q: int
    n: int = field(init=False)
    reduction_polynomial: int | None = None
    exp: np.ndarray = field(init=False, repr=False, compare=False)
    log: np.ndarray = field(init=False, repr=False, compare=False)
    mul_table: np.ndarray = field(init=False, repr=False, compare=False)
    inv_table: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        q = self.q
        if not isinstance(q, (int, np.integer)) or q < 2 or q > MAX_ORDER:
            raise ValueError(f"field order must be an integer in [2, {MAX_ORDER}], got {q!r}")
        n = int(q).bit_length() - 1
        if 1 << n != q:
            raise ValueError(f"field order must be a power of 2, got {q}")
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "n", n)
        poly = self.reduction_polynomial
        if poly is None:
            poly = DEFAULT_POLYNOMIALS[n]
        if not is_irreducible(poly, n):
            raise ValueError(
                f"0b{poly:b} is not an irreducible polynomial of degree {n}"
            )
        object.__setattr__(self, "reduction_polynomial", poly)
        self._build_tables()

    def _build_tables(self):
        q, n, poly = self.q, self.n, self.reduction_polynomial
        if n == 1:
            mul = np.array([[0, 0], [0, 1]], dtype=np.uint8)
            inv = np.array([0, 1], dtype=np.uint8)
            exp = np.array([1], dtype=np.uint8)
            log = np.array([0, 0], dtype=np.uint8)
        else:
            # Find a generator of the multiplicative group.  x itself is not
            # primitive for every irreducible polynomial (e.g. the AES one),
            # so search upward from 2.
            gen = None
            for g in range(2, q):
                seen = set()
                e = 1
                for _ in range(q - 1):
                    seen.add(e)
                    e = _polymul_mod(e, g, poly, n)
                if len(seen) == q - 1:
                    gen = g
                    break
            if gen is None:  # impossible for an irreducible polynomial
                raise ValueError(f"no generator found for 0b{poly:b}")
            exp = np.zeros(q - 1, dtype=np.uint8)
            log = np.zeros(q, dtype=np.uint8)
            e = 1
            for i in range(q - 1):
                exp[i] = e
                log[e] = i
                e = _polymul_mod(e, gen, poly, n)
            li = log[1:].astype(np.int64)
            mul = np.zeros((q, q), dtype=np.uint8)
            mul[1:, 1:] = exp[(li[:, None] + li[None, :]) % (q - 1)]
            inv = np.zeros(q, dtype=np.uint8)
            inv[1:] = exp[(q - 1 - li) % (q - 1)]
        object.__setattr__(self, "exp", exp)
        object.__setattr__(self, "log", log)
        object.__setattr__(self, "mul_table", mul)
        object.__setattr__(self, "inv_table", inv)

    def _check(self, *elems: int):
        for a in elems:
            if not 0 <= a < self.q:
                raise ValueError(f"{a} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return int(self.inv_table[a])


def gf_add(field: FieldSpec, a: int, b: int) -> int:
    """Sum a + b in GF(q): bitwise XOR (characteristic 2)."""
    return field.add(a, b)


def gf_mul(field: FieldSpec, a: int, b: int) -> int:
    """Product a * b in GF(q): polynomial product modulo the reduction polynomial."""
    return field.mul(a, b)


def gf_inv(field: FieldSpec, a: int) -> int:
    """Multiplicative inverse of a != 0 in GF(q)."""
    return field.inv(a)


def sample_uniform_vector(field: FieldSpec, length: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a length-`length` vector with i.i.d. uniform entries over GF(q).

    Every field element, including zero, has probability 1/q per coordinate,
    so the all-zero vector occurs with probability q**(-length).
    """
    if length < 1:
        raise ValueError(f"vector length must be >= 1, got {length}")
    return rng.integers(0, field.q, size=length, dtype=np.uint8)
