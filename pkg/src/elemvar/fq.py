"""Exact linear algebra over small finite fields F_{p^k}.

Field elements are integer codes in ``range(p**k)``: the base-p digits of a
code are the coefficients, lowest degree first, of a residue polynomial
modulo the context's irreducible modulus.  For k = 1 a code is simply an
element of Z/p and all array arithmetic stays in plain ``% p`` numpy ops.

Everything here is immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionMismatchError

_DT = np.int64

MAX_P = 13
MAX_K = 4


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_eval(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _poly_divmod(num: Sequence[int], den: Sequence[int], p: int):
    """Quotient and remainder of polynomials over F_p (coeff lists, low first)."""
    num = list(num)
    dn = len(den) - 1
    lead_inv = pow(den[-1], p - 2, p)
    quot = [0] * max(len(num) - dn, 0)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] % p
        if c == 0:
            continue
        f = (c * lead_inv) % p
        quot[i - dn] = f
        for j, d in enumerate(den):
            num[i - dn + j] = (num[i - dn + j] - f * d) % p
    while len(num) > 1 and num[-1] % p == 0:
        num.pop()
    return quot, [c % p for c in num]


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p for degree ≤ 4, by root and quadratic-factor search."""
    k = len(coeffs) - 1
    if k == 1:
        return True
    for x in range(p):
        if _poly_eval(coeffs, x, p) == 0:
            return False
    if k == 4:
        for b, c in itertools.product(range(p), repeat=2):
            _, rem = _poly_divmod(coeffs, [c, b, 1], p)
            if all(v == 0 for v in rem):
                return False
    return True


def _default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k (low coeffs first)."""
    for tail in itertools.product(range(p), repeat=k):
        coeffs = tuple(tail) + (1,)
        if _is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FqContext:
    """The field F_{p^k} presented as F_p[x] / (modulus).

    Arithmetic is exposed as vectorized operations on int64 code arrays so
    matrix routines work uniformly for any k; k = 1 takes plain mod-p paths.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not _is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if not (p <= MAX_P and 1 <= k <= MAX_K):
            raise ValueError(f"only p <= {MAX_P}, k <= {MAX_K} supported")
        self.p = p
        self.k = k
        self.q = p**k
        if modulus is None:
            modulus = _default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(modulus, p):
            raise ValueError("modulus is reducible over F_p")
        self.modulus = modulus
        # Rows t = 0..k-2 give the coefficients of x^(k+t) mod modulus.
        red = np.zeros((max(k - 1, 0), k), dtype=_DT)
        cur = [(-c) % p for c in modulus[:-1]]  # x^k
        for t in range(k - 1):
            red[t] = cur
            cur = [0] + cur
            hi = cur.pop()
            for s in range(k):
                cur[s] = (cur[s] + hi * red[0][s]) % p
        self._red = red
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        if k > 1:
            self._build_log_tables()

    # -- scalar polynomial arithmetic used to bootstrap the tables ----------

    def _mul_scalar(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        if k == 1:
            return (a * b) % p
        da = [(a // p**t) % p for t in range(k)]
        db = [(b // p**t) % p for t in range(k)]
        conv = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    conv[i + j] += x * y
        out = [c % p for c in conv[:k]]
        for t in range(k - 1):
            hi = conv[k + t] % p
            if hi:
                for s in range(k):
                    out[s] = (out[s] + hi * self._red[t, s]) % p
        return sum(c * p**t for t, c in enumerate(out))

    def _build_log_tables(self) -> None:
        q = self.q
        for g in range(2, q):
            seen = 1
            x = g
            while x != 1:
                x = self._mul_scalar(x, g)
                seen += 1
                if seen > q:  # pragma: no cover - defensive
                    raise AssertionError("non-invertible unit candidate")
            if seen == q - 1:
                exp = np.zeros(q - 1, dtype=_DT)
                log = np.zeros(q, dtype=_DT)
                x = 1
                for t in range(q - 1):
                    exp[t] = x
                    log[x] = t
                    x = self._mul_scalar(x, g)
                self._exp, self._log = exp, log
                return
        raise AssertionError("no multiplicative generator found")  # unreachable

    # -- vectorized code arithmetic -----------------------------------------

    def digits(self, codes: np.ndarray) -> np.ndarray:
        """Base-p digits, shape (k,) + codes.shape."""
        p = self.p
        return np.stack([(codes // p**t) % p for t in range(self.k)])

    def from_digits(self, digits: np.ndarray) -> np.ndarray:
        p = self.p
        return sum(digits[t] * p**t for t in range(self.k))

    def add(self, a, b):
        a, b = np.asarray(a, _DT), np.asarray(b, _DT)
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits((self.digits(a) + self.digits(b)) % self.p)

    def neg(self, a):
        a = np.asarray(a, _DT)
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits((-self.digits(a)) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = np.asarray(a, _DT), np.asarray(b, _DT)
        if self.k == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        nz = (a != 0) & (b != 0)
        out = np.zeros(a.shape, dtype=_DT)
        if np.any(nz):
            t = (self._log[a[nz]] + self._log[b[nz]]) % (self.q - 1)
            out[nz] = self._exp[t]
        return out

    def inv(self, a):
        a = np.asarray(a, _DT)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0")
        if self.k == 1:
            flat = np.array([pow(int(v), self.p - 2, self.p) for v in a.ravel()], dtype=_DT)
            return flat.reshape(a.shape)
        t = (-self._log[a]) % (self.q - 1)
        return self._exp[t]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = int(self.inv(np.asarray(a))), -e
        acc, base = 1, int(a)
        while e:
            if e & 1:
                acc = self._mul_scalar(acc, base)
            base = self._mul_scalar(base, base)
            e >>= 1
        return acc

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.k == 1:
            return (a @ b) % self.p
        da, db = self.digits(a), self.digits(b)
        k = self.k
        conv = [sum(da[i] @ db[t - i] for i in range(max(0, t - k + 1), min(k, t + 1)))
                for t in range(2 * k - 1)]
        out = [c % self.p for c in conv[:k]]
        for t in range(k - 1):
            hi = conv[k + t] % self.p
            for s in range(k):
                out[s] = (out[s] + hi * int(self._red[t, s])) % self.p
        return self.from_digits(np.stack(out))

    def validate_codes(self, arr: np.ndarray) -> None:
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"entry out of range for F_{self.q}")

    def __eq__(self, other):
        return (isinstance(other, FqContext)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"FqContext(p={self.p}, k={self.k})"


def primitive_element(ctx: FqContext) -> int:
    """Smallest code generating the multiplicative group."""
    if ctx.q == 2:
        return 1
    if ctx.k > 1:
        return int(ctx._exp[1])
    for g in range(2, ctx.q):
        x, order = g, 1
        while x != 1:
            x = (x * g) % ctx.p
            order += 1
        if order == ctx.q - 1:
            return g
    raise AssertionError("no primitive element")  # unreachable


class FqMatrix:
    """Immutable matrix of field-element codes over a shared FqContext."""

    __slots__ = ("ctx", "a")

    def __init__(self, ctx: FqContext, rows: int, cols: int, entries: Iterable[int]):
        arr = np.array(list(entries), dtype=_DT)
        if arr.size != rows * cols:
            raise DimensionMismatchError(
                f"expected {rows * cols} entries, got {arr.size}")
        ctx.validate_codes(arr)
        arr = arr.reshape(rows, cols)
        arr.flags.writeable = False
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("FqMatrix is immutable")

    @classmethod
    def from_array(cls, ctx: FqContext, arr: np.ndarray, validate: bool = True) -> "FqMatrix":
        m = object.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=_DT)
        if validate:
            ctx.validate_codes(arr)
        if arr.ndim != 2:
            raise DimensionMismatchError("need a 2-d array")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(m, "ctx", ctx)
        object.__setattr__(m, "a", arr)
        return m

    @classmethod
    def zeros(cls, ctx: FqContext, rows: int, cols: int) -> "FqMatrix":
        return cls.from_array(ctx, np.zeros((rows, cols), dtype=_DT), validate=False)

    @classmethod
    def identity(cls, ctx: FqContext, n: int) -> "FqMatrix":
        return cls.from_array(ctx, np.eye(n, dtype=_DT), validate=False)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.a.ravel())

    def _check_ctx(self, other: "FqMatrix") -> None:
        if self.ctx != other.ctx:
            raise DimensionMismatchError("mixed field contexts")

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        self._check_ctx(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatchError("shape mismatch in +")
        return FqMatrix.from_array(self.ctx, self.ctx.add(self.a, other.a), validate=False)

    def __sub__(self, other: "FqMatrix") -> "FqMatrix":
        self._check_ctx(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatchError("shape mismatch in -")
        return FqMatrix.from_array(self.ctx, self.ctx.sub(self.a, other.a), validate=False)

    def __neg__(self) -> "FqMatrix":
        return FqMatrix.from_array(self.ctx, self.ctx.neg(self.a), validate=False)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        self._check_ctx(other)
        if self.cols != other.rows:
            raise DimensionMismatchError("shape mismatch in @")
        return FqMatrix.from_array(self.ctx, self.ctx.matmul(self.a, other.a), validate=False)

    def scale(self, c: int) -> "FqMatrix":
        return FqMatrix.from_array(self.ctx, self.ctx.mul(self.a, c), validate=False)

    def __pow__(self, e: int) -> "FqMatrix":
        if self.rows != self.cols:
            raise DimensionMismatchError("power of a non-square matrix")
        acc = FqMatrix.identity(self.ctx, self.rows)
        base = self
        while e:
            if e & 1:
                acc = acc @ base
            base = base @ base
            e >>= 1
        return acc

    def transpose(self) -> "FqMatrix":
        return FqMatrix.from_array(self.ctx, self.a.T, validate=False)

    def is_zero(self) -> bool:
        return not self.a.any()

    def __getitem__(self, ij) -> int:
        return int(self.a[ij])

    def __eq__(self, other):
        return (isinstance(other, FqMatrix) and self.ctx == other.ctx
                and self.a.shape == other.a.shape and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.ctx, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FqMatrix({self.rows}x{self.cols} over F_{self.ctx.q})\n{self.a}"


def hstack(mats: Sequence[FqMatrix]) -> FqMatrix:
    ctx = mats[0].ctx
    return FqMatrix.from_array(ctx, np.hstack([m.a for m in mats]), validate=False)


def vstack(mats: Sequence[FqMatrix]) -> FqMatrix:
    ctx = mats[0].ctx
    return FqMatrix.from_array(ctx, np.vstack([m.a for m in mats]), validate=False)


def _row_reduce(ctx: FqContext, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a code array; returns (rref, pivot columns)."""
    A = arr.copy()
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        pv = int(A[r, c])
        if pv != 1:
            A[r] = ctx.mul(A[r], int(ctx.inv(np.asarray(pv))))
        factors = A[:, c].copy()
        factors[r] = 0
        if factors.any():
            A = ctx.sub(A, ctx.mul(factors[:, None], A[r][None, :]))
        pivots.append(c)
        r += 1
    return A, pivots


def rank(m: FqMatrix) -> int:
    """Row rank by Gaussian elimination (equals column rank)."""
    _, pivots = _row_reduce(m.ctx, m.a)
    return len(pivots)


def determinant(m: FqMatrix) -> int:
    if m.rows != m.cols:
        raise DimensionMismatchError("determinant of a non-square matrix")
    ctx = m.ctx
    A = m.a.copy()
    n = m.rows
    det = 1
    for c in range(n):
        nz = np.nonzero(A[c:, c])[0]
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            A[[c, i]] = A[[i, c]]
            det = int(ctx.neg(np.asarray(det)))
        pv = int(A[c, c])
        det = ctx._mul_scalar(det, pv) if ctx.k > 1 else (det * pv) % ctx.p
        inv = int(ctx.inv(np.asarray(pv)))
        below = A[c + 1:, c].copy()
        if below.any():
            f = ctx.mul(below, inv)
            A[c + 1:] = ctx.sub(A[c + 1:], ctx.mul(f[:, None], A[c][None, :]))
    return det


def inverse(m: FqMatrix) -> FqMatrix:
    if m.rows != m.cols:
        raise DimensionMismatchError("inverse of a non-square matrix")
    n = m.rows
    aug = np.hstack([m.a, np.eye(n, dtype=_DT)])
    R, pivots = _row_reduce(m.ctx, aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return FqMatrix.from_array(m.ctx, R[:, n:], validate=False)


class SubspaceBasis:
    """A subspace of F_q^n as its unique reduced column echelon basis.

    Pivot entries are 1, pivot rows strictly increase by column, and every
    pivot row is zero in the other columns, so equal spans are byte-equal.
    """

    __slots__ = ("ctx", "ambient_dim", "rank", "basis", "pivot_rows")

    def __init__(self, ctx: FqContext, ambient_dim: int, basis: FqMatrix,
                 pivot_rows: tuple[int, ...], _canonical: bool = False):
        if not _canonical:
            raise ValueError("use SubspaceBasis.span / zero / full")
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "rank", basis.cols)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivot_rows", pivot_rows)

    def __setattr__(self, name, value):
        raise AttributeError("SubspaceBasis is immutable")

    @classmethod
    def span(cls, ctx: FqContext, columns: FqMatrix | np.ndarray) -> "SubspaceBasis":
        """Canonical basis of the column span of an n×m matrix."""
        arr = columns.a if isinstance(columns, FqMatrix) else np.asarray(columns, _DT)
        if arr.ndim != 2:
            raise DimensionMismatchError("need an n×m column matrix")
        n = arr.shape[0]
        R, pivots = _row_reduce(ctx, arr.T)
        basis = FqMatrix.from_array(ctx, R[: len(pivots)].T, validate=False)
        return cls(ctx, n, basis, tuple(pivots), _canonical=True)

    @classmethod
    def zero(cls, ctx: FqContext, n: int) -> "SubspaceBasis":
        return cls(ctx, n, FqMatrix.zeros(ctx, n, 0), (), _canonical=True)

    @classmethod
    def full(cls, ctx: FqContext, n: int) -> "SubspaceBasis":
        return cls(ctx, n, FqMatrix.identity(ctx, n), tuple(range(n)), _canonical=True)

    def is_zero(self) -> bool:
        return self.rank == 0

    def contains_vector(self, v: np.ndarray | Sequence[int]) -> bool:
        v = np.asarray(v, _DT).reshape(-1)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatchError("vector length != ambient dim")
        if not v.any():
            return True
        stacked = np.hstack([self.basis.a, v[:, None]])
        _, pivots = _row_reduce(self.ctx, stacked)
        return len(pivots) == self.rank

    def contains(self, other: "SubspaceBasis") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError("ambient dimension mismatch")
        if other.rank == 0:
            return True
        stacked = np.hstack([self.basis.a, other.basis.a])
        _, pivots = _row_reduce(self.ctx, stacked)
        return len(pivots) == self.rank

    def __eq__(self, other):
        return (isinstance(other, SubspaceBasis) and self.ctx == other.ctx
                and self.ambient_dim == other.ambient_dim and self.basis == other.basis)

    def __hash__(self):
        return hash((self.ctx, self.ambient_dim, self.basis))

    def __repr__(self):
        return (f"SubspaceBasis(dim {self.rank} in F_{self.ctx.q}^{self.ambient_dim},"
                f" pivots {self.pivot_rows})\n{self.basis.a}")


def kernel_basis(m: FqMatrix) -> SubspaceBasis:
    """Canonical basis of the right null space of m."""
    ctx = m.ctx
    R, pivots = _row_reduce(ctx, m.a)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    if not free:
        return SubspaceBasis.zero(ctx, m.cols)
    vecs = np.zeros((m.cols, len(free)), dtype=_DT)
    for t, f in enumerate(free):
        vecs[f, t] = 1
        for i, pc in enumerate(pivots):
            vecs[pc, t] = ctx.neg(R[i, f])
    return SubspaceBasis.span(ctx, vecs)


def image_basis(m: FqMatrix) -> SubspaceBasis:
    """Canonical basis of the column span of m."""
    return SubspaceBasis.span(m.ctx, m.a)


def sum_subspaces(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient_dim != b.ambient_dim or a.ctx != b.ctx:
        raise DimensionMismatchError("subspaces of different ambient spaces")
    return SubspaceBasis.span(a.ctx, np.hstack([a.basis.a, b.basis.a]))


def intersect_subspaces(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    if a.ambient_dim != b.ambient_dim or a.ctx != b.ctx:
        raise DimensionMismatchError("subspaces of different ambient spaces")
    ctx = a.ctx
    if a.rank == 0 or b.rank == 0:
        return SubspaceBasis.zero(ctx, a.ambient_dim)
    stacked = np.hstack([a.basis.a, ctx.neg(b.basis.a)])
    ker = kernel_basis(FqMatrix.from_array(ctx, stacked, validate=False))
    if ker.rank == 0:
        return SubspaceBasis.zero(ctx, a.ambient_dim)
    coeffs_a = ker.basis.a[: a.rank, :]
    return SubspaceBasis.span(ctx, ctx.matmul(a.basis.a, coeffs_a))


def gaussian_binomial(n: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^n, as an exact integer."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    num = 1
    den = 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (r - i) - 1
    assert num % den == 0
    return num // den


def echelon_pattern_count(n: int, r: int, q: int, pivots: Sequence[int]) -> int:
    """Number of canonical bases with the given pivot rows."""
    free = _free_positions(n, r, pivots)
    return q ** len(free)


def _free_positions(n: int, r: int, pivots: Sequence[int]) -> list[tuple[int, int]]:
    pivot_set = set(pivots)
    pos = []
    for j in range(r):
        for i in range(pivots[j] + 1, n):
            if i not in pivot_set:
                pos.append((i, j))
    return pos


def iter_echelon_batches(ctx: FqContext, n: int, r: int,
                         max_batch: int = 65536) -> Iterator[np.ndarray]:
    """Yield all reduced column echelon n×r bases as (m, n, r) code batches.

    Deterministic order: pivot sets lexicographic, then free entries counting
    up in mixed radix with the last free position fastest.
    """
    q = ctx.q
    if r == 0:
        yield np.zeros((1, n, 0), dtype=_DT)
        return
    if r > n:
        return
    for pivots in itertools.combinations(range(n), r):
        free = _free_positions(n, r, pivots)
        total = q ** len(free)
        base = np.zeros((n, r), dtype=_DT)
        for j, pr in enumerate(pivots):
            base[pr, j] = 1
        for start in range(0, total, max_batch):
            stop = min(start + max_batch, total)
            count = stop - start
            batch = np.repeat(base[None, :, :], count, axis=0)
            if free:
                codes = np.arange(start, stop, dtype=np.int64)
                for t in range(len(free) - 1, -1, -1):
                    i, j = free[t]
                    batch[:, i, j] = codes % q
                    codes //= q
            yield batch


def iter_echelon_bases(ctx: FqContext, n: int, r: int) -> Iterator[SubspaceBasis]:
    """All r-planes of F_q^n by canonical basis, in deterministic order."""
    for batch in iter_echelon_batches(ctx, n, r):
        for t in range(batch.shape[0]):
            arr = batch[t]
            piv = tuple(int(np.nonzero(arr[:, j])[0][0]) for j in range(r))
            yield SubspaceBasis(ctx, n, FqMatrix.from_array(ctx, arr, validate=False),
                                piv, _canonical=True)
