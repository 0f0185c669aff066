"""Finite field arithmetic for the polynomial cover-free construction.

Elements of GF(p^n) are encoded as integers ``0..q-1`` whose base-p digits
are the coefficients of a polynomial in the field generator, lowest degree
first. Prime fields are plain modular arithmetic; the prime-power orders in
``IRREDUCIBLE`` use tabulated reduction polynomials.
"""
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

from app.core.errors import PreconditionError

# q -> (p, coefficients c_0..c_{n-1} of the monic modulus x^n + ... + c_0)
IRREDUCIBLE: Dict[int, Tuple[int, Tuple[int, ...]]] = {
    4: (2, (1, 1)),  # x^2 + x + 1
    8: (2, (1, 1, 0)),  # x^3 + x + 1
    16: (2, (1, 1, 0, 0)),  # x^4 + x + 1
    32: (2, (1, 0, 1, 0, 0)),  # x^5 + x^2 + 1
    9: (3, (1, 0)),  # x^2 + 1
    27: (3, (1, 2, 0)),  # x^3 + 2x + 1
    25: (5, (2, 0)),  # x^2 + 2
}


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


def supported_order(q: int) -> bool:
    return is_prime(q) or q in IRREDUCIBLE


def field_orders(start: int = 2):
    """Supported field orders in ascending order, without end."""
    q = start
    while True:
        if supported_order(q):
            yield q
        q += 1


class GaloisField:
    def __init__(self, q: int):
        if not supported_order(q):
            raise PreconditionError(f"no field of order {q} available (primes and {sorted(IRREDUCIBLE)})")
        self.q = q
        if is_prime(q):
            self.p, self.degree, self.modulus = q, 1, ()
        else:
            self.p, self.modulus = IRREDUCIBLE[q]
            self.degree = len(self.modulus)
            self._mul_table = [[self._slow_mul(a, b) for b in range(q)] for a in range(q)]

    def __repr__(self):
        return f"GF({self.q})"

    def elements(self) -> range:
        return range(self.q)

    def _digits(self, a: int) -> List[int]:
        digits = []
        for _ in range(self.degree):
            a, r = divmod(a, self.p)
            digits.append(r)
        return digits

    def _number(self, digits: Sequence[int]) -> int:
        value = 0
        for c in reversed(digits):
            value = value * self.p + c
        return value

    def _slow_mul(self, a: int, b: int) -> int:
        p, n = self.p, self.degree
        x, y = self._digits(a), self._digits(b)
        product = [0] * (2 * n - 1)
        for i, xi in enumerate(x):
            for j, yj in enumerate(y):
                product[i + j] = (product[i + j] + xi * yj) % p
        # x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
        for top in range(len(product) - 1, n - 1, -1):
            lead = product[top]
            if lead:
                product[top] = 0
                for i, c in enumerate(self.modulus):
                    product[top - n + i] = (product[top - n + i] - lead * c) % p
        return self._number(product[:n])

    def add(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a + b) % self.q
        return self._number([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return (a * b) % self.q
        return self._mul_table[a][b]

    def evaluate(self, coefficients: Sequence[int], x: int) -> int:
        """Horner evaluation; coefficients are listed from the highest degree down."""
        value = 0
        for c in coefficients:
            value = self.add(self.mul(value, x), c)
        return value


@lru_cache(maxsize=None)
def get_field(q: int) -> GaloisField:
    return GaloisField(q)
