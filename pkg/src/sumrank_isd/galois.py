"""Finite fields F_p -> F_q -> F_{q^m} and dense linear algebra over them.

Elements are plain Python ints.  An element of an extension of degree d over
a base field of order Q is the integer sum(c_i * Q**i), where c_i are the
base-field coefficients of its polynomial representative.  Expanding an
element over the base field therefore just reads off its base-Q digits.

Every field exposes the same small arithmetic surface (add, sub, neg, mul,
inv, order, char), so the matrix routines below work at any tower level.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

Matrix = List[List[int]]

# extension fields up to this order get exp/log tables
TABLE_LIMIT = 1 << 16


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> Tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"q={q} is not a prime power")
    return p, e


class PrimeField:
    """F_p with table-free modular arithmetic."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1
        self.base = None
        self.modulus: Tuple[int, ...] = ()
        self._inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def expand(self, a: int) -> List[int]:
        return [a]

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.p))


class ExtensionField:
    """Degree-d extension of `base` modulo a monic irreducible polynomial.

    `modulus` lists the low-order coefficients c_0..c_{d-1} of
    x^d + c_{d-1} x^{d-1} + ... + c_0.
    """

    def __init__(self, base, degree: int, modulus: Optional[Sequence[int]] = None):
        if degree < 1:
            raise ValueError("degree must be >= 1")
        self.base = base
        self.degree = degree
        self.char = base.char
        self.order = base.order ** degree
        if modulus is None:
            modulus = smallest_irreducible(base, degree)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != degree or not is_irreducible(base, list(modulus) + [1]):
            raise ValueError("modulus is not a monic irreducible polynomial of the right degree")
        self.modulus = modulus
        self._q = base.order
        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None
        if self.order <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"GF({self.base.order}^{self.degree})"

    # digits <-> ints
    def expand(self, a: int) -> List[int]:
        """Coefficient vector of `a` over the base field (polynomial basis)."""
        q = self._q
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, q)
            out.append(r)
        return out

    def from_coeffs(self, coeffs: Sequence[int]) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self._q + c
        return acc

    def random(self, rng: np.random.Generator) -> int:
        if self.order < (1 << 62):
            return int(rng.integers(0, self.order))
        return self.from_coeffs([self.base.random(rng) for _ in range(self.degree)])

    # arithmetic
    def add(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        B = self.base
        return self.from_coeffs([B.add(x, y) for x, y in zip(self.expand(a), self.expand(b))])

    def sub(self, a: int, b: int) -> int:
        if self.char == 2:
            return a ^ b
        B = self.base
        return self.from_coeffs([B.sub(x, y) for x, y in zip(self.expand(a), self.expand(b))])

    def neg(self, a: int) -> int:
        if self.char == 2:
            return a
        return self.from_coeffs([self.base.neg(x) for x in self.expand(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._polymul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self._log is not None:
            return self._exp[(self.order - 1) - self._log[a]]
        return self.pow(a, self.order - 2)

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def _polymul(self, a: int, b: int) -> int:
        B = self.base
        x, y = self.expand(a), self.expand(b)
        prod = [0] * (2 * self.degree - 1)
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj:
                    prod[i + j] = B.add(prod[i + j], B.mul(xi, yj))
        return self.from_coeffs(_reduce(B, prod, self.modulus))

    def _build_tables(self) -> None:
        n = self.order - 1
        if n == 1:
            self._exp, self._log = [1, 1], [0, 0]
            return
        for g in range(2, self.order):
            exp = [1] * (2 * n)
            seen_one_early = False
            x = 1
            for i in range(1, n):
                x = self._polymul(x, g)
                if x == 1:
                    seen_one_early = True
                    break
                exp[i] = x
            if seen_one_early:
                continue
            for i in range(n, 2 * n):
                exp[i] = exp[i - n]
            log = [0] * self.order
            for i in range(n):
                log[exp[i]] = i
            self._exp, self._log = exp, log
            return
        raise RuntimeError("no primitive element found")  # unreachable for a field


def _reduce(B, poly: List[int], modulus: Sequence[int]) -> List[int]:
    """Reduce a coefficient list modulo the monic polynomial x^d + modulus."""
    d = len(modulus)
    poly = list(poly)
    for top in range(len(poly) - 1, d - 1, -1):
        c = poly[top]
        if c:
            poly[top] = 0
            for i, mi in enumerate(modulus):
                if mi:
                    poly[top - d + i] = B.sub(poly[top - d + i], B.mul(c, mi))
    return (poly + [0] * d)[:d]


# polynomials over a field, coefficient lists low -> high, no trailing zeros

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(F, a: List[int], b: List[int]) -> List[int]:
    a = _trim(list(a))
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b):
        c = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
        _trim(a)
    return a


def _pmulmod(F, a: List[int], b: List[int], m: List[int]) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = F.add(prod[i + j], F.mul(x, y))
    return _pmod(F, prod, m)


def _ppowmod(F, a: List[int], e: int, m: List[int]) -> List[int]:
    r: List[int] = [1]
    while e:
        if e & 1:
            r = _pmulmod(F, r, a, m)
        a = _pmulmod(F, a, a, m)
        e >>= 1
    return r


def _pgcd(F, a: List[int], b: List[int]) -> List[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(F, a, b)
    return a


def is_irreducible(F, poly: Sequence[int]) -> bool:
    """Ben-Or test for a monic polynomial (coefficients low -> high)."""
    f = _trim(list(poly))
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    h = [0, 1]
    for _ in range(d // 2):
        h = _ppowmod(F, h, F.order, f)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = F.sub(diff[1], 1)
        if len(_pgcd(F, f, _trim(diff))) != 1:
            return False
    return True


def smallest_irreducible(F, degree: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of the given degree.

    Coefficient tuples (c_{d-1}, ..., c_0) are compared lexicographically,
    which is integer order of sum(c_i Q^i).
    """
    Q = F.order
    for code in range(Q ** degree):
        coeffs = []
        c = code
        for _ in range(degree):
            c, r = divmod(c, Q)
            coeffs.append(r)
        if coeffs[0] == 0 and degree > 1:
            continue
        if is_irreducible(F, coeffs + [1]):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found")


@lru_cache(maxsize=None)
def gf(q: int):
    """The field F_q, built over its prime subfield."""
    p, e = prime_power(q)
    P = PrimeField(p)
    return P if e == 1 else ExtensionField(P, e)


@lru_cache(maxsize=None)
def extension(q: int, m: int):
    """F_{q^m} as a degree-m extension of gf(q) (m=1 gives a trivial wrapper)."""
    return ExtensionField(gf(q), m)


def field_tables(F) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(add, mul, inv) lookup tables as numpy arrays for a small field."""
    n = F.order
    if n > 4096:
        raise ValueError("field too large for dense tables")
    add = np.array([[F.add(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    mul = np.array([[F.mul(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    inv = np.array([0] + [F.inv(a) for a in range(1, n)], dtype=np.int64)
    return add, mul, inv


_TABLES: dict = {}


def _tables(F):
    key = (F.order, F.modulus, getattr(F.base, "modulus", None))
    if key not in _TABLES:
        add, mul, inv = field_tables(F)
        neg = np.array([F.neg(a) for a in range(F.order)], dtype=np.int64)
        sub = add[:, neg]
        _TABLES[key] = (add, sub, mul, inv)
    return _TABLES[key]


# dense linear algebra

def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(F, A: Matrix, B: Matrix) -> Matrix:
    if A and len(A[0]) != len(B):
        raise ValueError("dimension mismatch")
    cols = len(B[0]) if B else 0
    out = []
    add, mul = F.add, F.mul
    for row in A:
        acc = [0] * cols
        for a, brow in zip(row, B):
            if a:
                for j, b in enumerate(brow):
                    if b:
                        acc[j] = add(acc[j], mul(a, b))
        out.append(acc)
    return out


def vecmat(F, x: Sequence[int], A: Matrix) -> List[int]:
    """Row vector times matrix."""
    return matmul(F, [list(x)], A)[0] if A else []


def rref(F, M: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (R, pivot_columns); R keeps all rows, zero rows at the bottom.
    """
    R = [list(r) for r in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots: List[int] = []
    sub, mul, inv = F.sub, F.mul, F.inv
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if R[i][c]), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        pr = R[r]
        s = inv(pr[c])
        if s != 1:
            pr = R[r] = [mul(s, x) for x in pr]
        for i in range(rows):
            if i != r:
                f = R[i][c]
                if f:
                    ri = R[i]
                    R[i] = [sub(x, mul(f, y)) if y else x for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F, M: Matrix) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(F, M)[1])


def row_basis(F, M: Matrix) -> Matrix:
    """Nonzero rows of the RREF; a canonical basis of the row space."""
    if not M:
        return []
    R, piv = rref(F, M)
    return R[: len(piv)]


def kernel(F, A: Matrix, ncols: Optional[int] = None) -> Matrix:
    """Basis of {x : A x = 0} as a list of vectors."""
    cols = len(A[0]) if A else (ncols or 0)
    if not A:
        return identity(cols)
    R, piv = rref(F, A)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = []
    for f in free:
        x = [0] * cols
        x[f] = 1
        for i, pc in enumerate(piv):
            x[pc] = F.neg(R[i][f])
        basis.append(x)
    return basis


def solve(F, A: Matrix, b: Sequence[int]) -> Optional[Tuple[List[int], Matrix]]:
    """Solve A x = b.  Returns (particular solution, kernel basis) or None."""
    rows = len(A)
    if len(b) != rows:
        raise ValueError("dimension mismatch")
    cols = len(A[0]) if A else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv = rref(F, aug) if rows else ([], [])
    if cols in piv:
        return None
    x = [0] * cols
    for i, pc in enumerate(piv):
        x[pc] = R[i][cols]
    return x, kernel(F, [r[:cols] for r in A], cols)


def inverse(F, A: Matrix) -> Optional[Matrix]:
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        return None
    return [r[n:] for r in R]


def random_matrix(F, r: int, c: int, rng: np.random.Generator) -> Matrix:
    return [[F.random(rng) for _ in range(c)] for _ in range(r)]


def random_full_rank(F, r: int, c: int, rng: np.random.Generator) -> Matrix:
    """Uniform r x c matrix of rank r (rejection sampling), r <= c."""
    if r > c:
        raise ValueError("cannot have full row rank")
    while True:
        M = random_matrix(F, r, c, rng)
        if rank(F, M) == r:
            return M


# batched rank over small fields (vectorised across a leading axis)

def batch_rank(F, mats: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices with shape (T, rows, cols)."""
    _, sub, mul, inv = _tables(F)
    M = np.array(mats, dtype=np.int64, copy=True)
    T, rows, cols = M.shape
    rk = np.zeros(T, dtype=np.int64)
    row_ids = np.arange(rows)
    for c in range(cols):
        cand = (M[:, :, c] != 0) & (row_ids[None, :] >= rk[:, None])
        idx = np.nonzero(cand.any(axis=1))[0]
        if idx.size == 0:
            continue
        piv = np.argmax(cand[idx], axis=1)
        r = rk[idx]
        top = M[idx, r].copy()
        M[idx, r] = M[idx, piv]
        M[idx, piv] = top
        prow = M[idx, r]
        prow = mul[inv[prow[:, c]][:, None], prow]
        M[idx, r] = prow
        f = M[idx, :, c].copy()
        f[np.arange(idx.size), r] = 0
        M[idx] = sub[M[idx], mul[f[:, :, None], prow[:, None, :]]]
        rk[idx] += 1
    return rk
