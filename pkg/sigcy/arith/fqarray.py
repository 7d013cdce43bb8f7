"""
Vectorized arithmetic tables for F_q, q = p^k.

Elements are encoded by their index sum c_i p^i over the polynomial basis of
ExtensionField(p, k). All operations are numpy fancy-indexing lookups, which
is what the counting kernels and the node enumeration run on.
"""
from functools import lru_cache
import logging

import numpy as np

from ..algebra.exactfield import ExtensionField, require_odd_prime, to_residue
from ..errors import FieldError

logger = logging.getLogger("sigcy.fqarray")

# Tables are dense q x q int32 arrays (q = 2500 is about 25 MB each)
MAX_TABLE_ORDER = 2500
_table_order_limit = MAX_TABLE_ORDER


def set_max_table_order(order: int) -> None:
    """Raise or lower the largest q for which tables are built ([counting] max_table_order)"""
    global _table_order_limit
    if not 3 <= order <= 10 ** 5:
        raise FieldError(f"max_table_order must lie in [3, 100000], got {order}")
    _table_order_limit = order


def max_table_order() -> int:
    return _table_order_limit


class FqTables:
    """
    Addition, subtraction and multiplication tables plus unary maps
    (negation, inverse, quadratic character, square root, Frobenius).

    Index 0 is zero and index 1 is one; integers n embed as n mod p.

    Construction refuses q above max_table_order(), 2500 unless configured.
    """

    def __init__(self, p: int, k: int = 1):
        require_odd_prime(p)
        q = p ** k
        if q > _table_order_limit:
            raise FieldError(f"table arithmetic limited to q <= {_table_order_limit}, got {q}; "
                             "raise [counting] max_table_order")
        self.p = p
        self.k = k
        self.q = q
        self.field = ExtensionField(p, k)

        idx = np.arange(q, dtype=np.int64)
        # digits[i, j] = j-th base-p digit of element i
        self.digits = np.stack([(idx // p ** j) % p for j in range(k)], axis=1)
        weights = np.array([p ** j for j in range(k)], dtype=np.int64)

        add = np.zeros((q, q), dtype=np.int64)
        for j in range(k):
            d = self.digits[:, j]
            add += ((d[:, None] + d[None, :]) % p) * p ** j
        self.add = add.astype(np.int32)
        negated = (-self.digits) % p
        self.neg = (negated @ weights).astype(np.int32)
        self.sub = self.add[:, self.neg]

        self.exp, self.log = self._log_tables()
        order = q - 1
        logs = self.log[1:]
        self.mul = np.zeros((q, q), dtype=np.int32)
        self.mul[1:, 1:] = self.exp[(logs[:, None] + logs[None, :]) % order]

        self.inv = np.zeros(q, dtype=np.int32)
        self.inv[1:] = self.exp[(-logs) % order]

        self.chi = np.zeros(q, dtype=np.int8)
        self.chi[1:] = np.where(logs % 2 == 0, 1, -1)

        self.sqrt = np.full(q, -1, dtype=np.int32)
        self.sqrt[0] = 0
        even = logs % 2 == 0
        self.sqrt[1:][even] = self.exp[logs[even] // 2]

        self.frobenius = np.zeros(q, dtype=np.int32)
        self.frobenius[1:] = self.exp[(logs * p) % order]

        self.half = self.mul[:, self.inv[self.embed(2)]]

        for table in (self.add, self.sub, self.mul, self.neg, self.inv, self.chi, self.sqrt,
                      self.frobenius, self.half, self.exp, self.log):
            table.setflags(write=False)
        logger.debug(f"Built F_{q} tables (p={p}, k={k}, modulus={self.field.modulus})")

    def _log_tables(self):
        """exp[i] = g^i for a primitive g; log is its inverse (log[0] unused)"""
        q, p = self.q, self.p
        g = self.field.primitive_element()
        exp = np.zeros(q - 1, dtype=np.int32)
        log = np.zeros(q, dtype=np.int64)
        if self.k == 1:
            g_int = g.coeffs[0]
            value = 1
            for i in range(q - 1):
                exp[i] = value
                value = value * g_int % p
        else:
            value = self.field.one
            for i in range(q - 1):
                exp[i] = value.index
                value = value * g
        log[exp] = np.arange(q - 1)
        return exp, log

    def embed(self, n: int) -> int:
        """Index of the integer n"""
        return int(n) % self.p

    def embed_array(self, values) -> np.ndarray:
        return np.asarray(values, dtype=np.int64) % self.p

    def power(self, a: np.ndarray, n: int) -> np.ndarray:
        """Elementwise a^n (0^0 = 1)"""
        a = np.asarray(a)
        if n == 0:
            return np.ones_like(a)
        order = self.q - 1
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = self.exp[(self.log[a[nz]] * n) % order]
        return out

    def scale(self, c: int, a: np.ndarray) -> np.ndarray:
        """Multiply by the embedded integer c"""
        return self.mul[self.embed(c), a]

    def lincomb(self, coeffs, arrays) -> np.ndarray:
        """sum_j c_j * a_j for integer coefficients c_j and index arrays a_j"""
        out = None
        for c, a in zip(coeffs, arrays):
            if c % self.p == 0:
                continue
            term = self.scale(c, a)
            out = term if out is None else self.add[out, term]
        if out is None:
            return np.zeros_like(np.asarray(arrays[0]))
        return out

    def evaluate_poly(self, poly, columns) -> np.ndarray:
        """
        Evaluate a MultiPoly with rational coefficients at index arrays.

        Args:
            poly: polynomial whose ring has one variable per column
            columns: broadcastable index arrays

        Returns:
            index array of the broadcast shape
        """
        columns = [np.asarray(c) for c in columns]
        shape = np.broadcast_shapes(*(c.shape for c in columns))
        total = np.zeros(shape, dtype=np.int32)
        powers = {}
        for e, c in poly.terms.items():
            term = np.full(shape, to_residue(c, self.p), dtype=np.int32)
            for i, n in enumerate(e):
                if n:
                    if (i, n) not in powers:
                        powers[(i, n)] = self.power(columns[i], n)
                    term = self.mul[term, powers[(i, n)]]
            total = self.add[total, term]
        return total

    def rank(self, matrix) -> int:
        """Rank of a small matrix of element indices (row reduction by table lookups)"""
        m = np.array(matrix, dtype=np.int64)
        if m.ndim != 2 or m.size == 0:
            return 0
        rows, cols = m.shape
        r = 0
        for c in range(cols):
            nonzero = np.nonzero(m[r:, c])[0]
            if nonzero.size == 0:
                continue
            pivot = r + int(nonzero[0])
            if pivot != r:
                m[[r, pivot]] = m[[pivot, r]]
            m[r] = self.mul[self.inv[m[r, c]], m[r]]
            for i in range(rows):
                if i != r and m[i, c]:
                    m[i] = self.sub[m[i], self.mul[m[i, c], m[r]]]
            r += 1
            if r == rows:
                break
        return r

    def square_roots(self, a: int) -> list:
        """All square roots of a (empty for non-squares)"""
        r = int(self.sqrt[a])
        if r < 0:
            return []
        if r == 0:
            return [0]
        return [r, int(self.neg[r])]

    def element(self, index: int):
        return self.field.from_index(int(index))

    def nth_root_of_unity(self, n: int) -> int:
        """A primitive n-th root of unity; requires n | q - 1"""
        if (self.q - 1) % n:
            raise FieldError(f"F_{self.q} has no primitive {n}-th root of unity")
        return int(self.exp[(self.q - 1) // n])

    def __repr__(self):
        return f"FqTables(p={self.p}, k={self.k})"


@lru_cache(maxsize=16)
def fq_tables(p: int, k: int = 1) -> FqTables:
    """Shared, read-only tables per (p, k)"""
    return FqTables(p, k)
