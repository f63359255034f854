"""Sum-rank weights, rank profiles, supports and the uniform error channel."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import galois as gf
from .counting import error_set_size, nm_q

ROW = "row"  # block supports live in F_q^eta (row spaces of the expanded blocks)
COL = "col"  # block supports live in F_q^m (column spaces)


@dataclass
class Code:
    """A linear code over F_{q^m} of length n = ell*eta, given by its parity checks."""

    q: int
    m: int
    ell: int
    eta: int
    k: int
    H: gf.Matrix
    G: Optional[gf.Matrix] = None
    field: object = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ValueError("need 0 <= k <= n")
        self.field = gf.extension(self.q, self.m)
        if len(self.H) != self.n - self.k or any(len(r) != self.n for r in self.H):
            raise ValueError("H must be (n-k) x n")

    @property
    def n(self) -> int:
        return self.ell * self.eta

    @property
    def mu(self) -> int:
        return min(self.m, self.eta)

    def syndrome(self, y: Sequence[int]) -> List[int]:
        return gf.vecmat(self.field, y, gf.transpose(self.H)) if self.H else []

    def is_codeword(self, y: Sequence[int]) -> bool:
        return not any(self.syndrome(y))


def random_code(q: int, m: int, eta: int, ell: int, k: int, rng: np.random.Generator) -> Code:
    """Uniform random parity-check matrix of full rank n-k, plus a generator matrix."""
    F = gf.extension(q, m)
    n = ell * eta
    H = gf.random_full_rank(F, n - k, n, rng) if n - k else []
    G = gf.kernel(F, H, n) if H else gf.identity(n)
    return Code(q, m, ell, eta, k, H, G)


def blocks(x: Sequence[int], eta: int) -> List[Sequence[int]]:
    return [x[i : i + eta] for i in range(0, len(x), eta)]


def expand_block(F, xb: Sequence[int]) -> gf.Matrix:
    """m x len(xb) matrix over F_q whose columns expand the block entries."""
    cols = [F.expand(a) for a in xb]
    return gf.transpose(cols) if cols else []


def sum_rank_weight(F, x: Sequence[int], lengths: Sequence[int]) -> int:
    if sum(lengths) != len(x):
        raise ValueError("block lengths must add up to len(x)")
    base = F.base
    total, pos = 0, 0
    for L in lengths:
        total += gf.rank(base, expand_block(F, x[pos : pos + L]))
        pos += L
    return total


def rank_profile(F, x: Sequence[int], eta: int) -> Tuple[int, ...]:
    base = F.base
    return tuple(gf.rank(base, expand_block(F, b)) for b in blocks(x, eta))


@dataclass(frozen=True)
class Support:
    """Blockwise subspaces of F_q^dim, each stored as its RREF basis."""

    q: int
    dim: int
    side: str
    bases: Tuple[Tuple[Tuple[int, ...], ...], ...]

    @classmethod
    def from_bases(cls, q: int, dim: int, side: str, bases: Sequence[gf.Matrix]) -> "Support":
        F = gf.gf(q)
        canon = []
        for B in bases:
            if B and any(len(r) != dim for r in B):
                raise ValueError("basis vectors must have the ambient dimension")
            canon.append(tuple(tuple(r) for r in gf.row_basis(F, [list(r) for r in B])))
        return cls(q, dim, side, tuple(canon))

    @property
    def profile(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    @property
    def ell(self) -> int:
        return len(self.bases)


def sum_dim(S: Support) -> int:
    return sum(S.profile)


def _check_compatible(S1: Support, S2: Support) -> None:
    if (S1.q, S1.dim, S1.side, S1.ell) != (S2.q, S2.dim, S2.side, S2.ell):
        raise ValueError("supports live in different spaces")


def intersect(S1: Support, S2: Support) -> Support:
    """Blockwise intersection via the kernel of the stacked bases."""
    _check_compatible(S1, S2)
    F = gf.gf(S1.q)
    out = []
    for A, B in zip(S1.bases, S2.bases):
        if not A or not B:
            out.append([])
            continue
        # x A = y B  <=>  (x, y) [A; -B] = 0 ; the left kernel gives the intersection
        stacked = [list(r) for r in A] + [[F.neg(c) for c in r] for r in B]
        left = gf.kernel(F, gf.transpose(stacked))
        vecs = [gf.vecmat(F, z[: len(A)], [list(r) for r in A]) for z in left]
        out.append(vecs)
    return Support.from_bases(S1.q, S1.dim, S1.side, out)


def contains(big: Support, small: Support) -> bool:
    """True iff every block of `small` lies in the matching block of `big`."""
    _check_compatible(big, small)
    F = gf.gf(big.q)
    for A, B in zip(big.bases, small.bases):
        if B and gf.rank(F, [list(r) for r in A] + [list(r) for r in B]) != len(A):
            return False
    return True


def support_of(F, e: Sequence[int], eta: int, side: str) -> Support:
    """Row support (in F_q^eta) or column support (in F_q^m) of e."""
    base = F.base
    m = F.degree
    out = []
    for b in blocks(e, eta):
        M = expand_block(F, b)
        out.append(M if side == ROW else gf.transpose(M))
    dim = eta if side == ROW else m
    return Support.from_bases(base.order, dim, side, out)


def guess_side(m: int, eta: int) -> str:
    """Which support the decoders guess: the side of dimension min(m, eta)."""
    return ROW if eta < m else COL


def random_subspace(F, d: int, dim: int, rng: np.random.Generator) -> gf.Matrix:
    """RREF basis of a uniformly random d-dimensional subspace of F^dim."""
    if d == 0:
        return []
    return gf.row_basis(F, gf.random_full_rank(F, d, dim, rng))


def random_support(q: int, dim: int, side: str, profile: Sequence[int], rng) -> Support:
    F = gf.gf(q)
    return Support.from_bases(q, dim, side, [random_subspace(F, d, dim, rng) for d in profile])


# the uniform error channel

def draw_profile(q: int, m: int, eta: int, ell: int, w: int, rng: np.random.Generator) -> Tuple[int, ...]:
    """Rank profile of a uniform weight-w error, blockwise from the exact counts."""
    mu = min(m, eta)
    if not 0 <= w <= ell * mu:
        raise ValueError(f"weight {w} out of range [0, {ell * mu}]")
    out = []
    left = w
    for i in range(ell, 0, -1):
        total = error_set_size(q, m, eta, i, left)
        r = _big_below(total, rng)
        for wi in range(min(mu, left), -1, -1):
            c = nm_q(q, m, eta, wi) * error_set_size(q, m, eta, i - 1, left - wi)
            if r < c:
                break
            r -= c
        out.append(wi)
        left -= wi
    return tuple(out)


def _big_below(n: int, rng: np.random.Generator) -> int:
    """Uniform integer in [0, n) for arbitrary-size n (rejection on bit chunks)."""
    bits = n.bit_length()
    while True:
        r = 0
        for _ in range(0, bits, 62):
            r = (r << 62) | int(rng.integers(0, 1 << 62))
        r >>= (-bits) % 62
        if r < n:
            return r


def random_rank_block(F, eta: int, r: int, rng: np.random.Generator) -> List[int]:
    """Uniform vector in F_{q^m}^eta whose expanded m x eta matrix has rank r."""
    base = F.base
    m = F.degree
    if r == 0:
        return [0] * eta
    B = gf.random_full_rank(base, r, eta, rng)
    A = gf.random_full_rank(base, r, m, rng)  # rows are expansions of a_1..a_r
    coeffs = [F.from_coeffs(row) for row in A]
    out = []
    for j in range(eta):
        acc = 0
        for a, brow in zip(coeffs, B):
            if brow[j]:
                acc = F.add(acc, F.mul(a, brow[j]))
        out.append(acc)
    return out


def sample_error(q: int, m: int, eta: int, ell: int, w: int, rng: np.random.Generator) -> List[int]:
    """Uniform vector of sum-rank weight exactly w in F_{q^m}^{ell*eta}."""
    F = gf.extension(q, m)
    prof = draw_profile(q, m, eta, ell, w, rng)
    out: List[int] = []
    for r in prof:
        out.extend(random_rank_block(F, eta, r, rng))
    return out


# line-based hex fixtures

def dump_vectors(q: int, m: int, ell: int, eta: int, vectors: Sequence[Sequence[int]]) -> str:
    lines = [f"# q={q} m={m} ell={ell} eta={eta}"]
    lines += [" ".join(format(a, "x") for a in v) for v in vectors]
    return "\n".join(lines) + "\n"


def load_vectors(text: str) -> Tuple[dict, List[List[int]]]:
    header: dict = {}
    vecs = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                key, _, val = tok.partition("=")
                header[key] = int(val)
            continue
        vecs.append([int(tok, 16) for tok in line.split()])
    return header, vecs


def dump_support(S: Support) -> str:
    lines = [f"# q={S.q} dim={S.dim} side={S.side} ell={S.ell}"]
    for B in S.bases:
        lines.append(";".join(" ".join(format(c, "x") for c in row) for row in B) or "-")
    return "\n".join(lines) + "\n"


def load_support(text: str) -> Support:
    rows = [l.strip() for l in text.splitlines() if l.strip()]
    hdr = dict(tok.split("=") for tok in rows[0][1:].split())
    bases = []
    for line in rows[1:]:
        bases.append([] if line == "-" else [[int(c, 16) for c in r.split()] for r in line.split(";")])
    return Support.from_bases(int(hdr["q"]), int(hdr["dim"]), hdr["side"], bases)
