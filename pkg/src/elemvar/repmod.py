"""Restricted representations and their radical/socle invariants.

A representation assigns a matrix to each basis element of a restricted
matrix Lie algebra, satisfying the bracket law and compatibility with the
p-operation.  Restricting to an elementary plane produces commuting
p-nilpotent operators u_1..u_r; the degree-j radical is the sum of images of
all monomials u_1^{j_1}..u_r^{j_r} with j_1+..+j_r = j, and the degree-j
socle is the intersection of the corresponding kernels.  Exponents are
capped at p-1 since higher ones give the zero operator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    StructureError,
    UnsupportedCharacteristicError,
)
from .evariety import ElementarySubalgebra, is_elementary
from .fq import (
    FqContext,
    FqMatrix,
    SubspaceBasis,
    _row_reduce,
    image_basis,
    iter_echelon_batches,
    kernel_basis,
)
from .liealg import MatrixLieAlgebra, make_abelian

_DT = np.int64


def _mat_pow(ctx: FqContext, m: np.ndarray, e: int) -> np.ndarray:
    out = np.eye(m.shape[0], dtype=_DT)
    for _ in range(e):
        out = ctx.matmul(out, m)
    return out


def _kron(ctx: FqContext, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with field multiplication of entries."""
    da0, da1 = a.shape
    db0, db1 = b.shape
    prod = ctx.mul(a[:, None, :, None], b[None, :, None, :])
    return prod.reshape(da0 * db0, da1 * db1)


@dataclass(frozen=True, eq=False)
class Representation:
    """Matrices for the basis of g, checked against structure constants."""

    algebra: MatrixLieAlgebra
    dim: int
    action: tuple[FqMatrix, ...]
    label: str = ""

    def __post_init__(self):
        g, d = self.algebra, self.dim
        if len(self.action) != g.dim:
            raise DimensionMismatchError("one operator per basis element required")
        for m in self.action:
            if m.rows != d or m.cols != d:
                raise DimensionMismatchError(f"operators must be {d}x{d}")
        ctx = g.ctx
        ops = self.ops_array
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = ctx.sub(ctx.matmul(ops[i], ops[j]), ctx.matmul(ops[j], ops[i]))
                rhs = self._combo(g.structure[i, :, j])
                if lhs.tolist() != rhs.tolist():
                    raise StructureError(
                        f"bracket law fails at basis pair ({i}, {j})")
        for i in range(g.dim):
            if _mat_pow(ctx, ops[i], ctx.p).tolist() \
                    != self._combo(g.ppow_coords[i]).tolist():
                raise StructureError(f"p-power law fails at basis element {i}")

    @property
    def ops_array(self) -> np.ndarray:
        return np.stack([m.a for m in self.action])

    def _combo(self, coords: np.ndarray) -> np.ndarray:
        ctx = self.algebra.ctx
        out = np.zeros((self.dim, self.dim), dtype=_DT)
        for t, c in enumerate(coords):
            if c:
                out = ctx.add(out, ctx.mul(self.action[t].a, int(c)))
        return out

    def operator(self, coords: np.ndarray) -> FqMatrix:
        """The action matrix of the element with the given coordinates."""
        return FqMatrix.from_array(self.algebra.ctx, self._combo(coords),
                                   validate=False)


def std(g: MatrixLieAlgebra) -> Representation:
    mats = tuple(g.basis)
    return Representation(g, g.ambient_size, mats, label=f"std({g.name})")


def adjoint(g: MatrixLieAlgebra) -> Representation:
    ctx = g.ctx
    mats = tuple(FqMatrix.from_array(ctx, g.structure[i].copy(), validate=False)
                 for i in range(g.dim))
    return Representation(g, g.dim, mats, label=f"ad({g.name})")


def dual(M: Representation) -> Representation:
    ctx = M.algebra.ctx
    mats = tuple(FqMatrix.from_array(ctx, ctx.neg(m.a.T), validate=False)
                 for m in M.action)
    return Representation(M.algebra, M.dim, mats, label=f"dual({M.label})")


def tensor(M: Representation, N: Representation) -> Representation:
    if M.algebra is not N.algebra:
        raise StructureError("tensor factors must share the algebra")
    ctx = M.algebra.ctx
    iM = np.eye(M.dim, dtype=_DT)
    iN = np.eye(N.dim, dtype=_DT)
    mats = tuple(
        FqMatrix.from_array(
            ctx,
            ctx.add(_kron(ctx, a.a, iN), _kron(ctx, iM, b.a)),
            validate=False)
        for a, b in zip(M.action, N.action))
    return Representation(M.algebra, M.dim * N.dim, mats,
                          label=f"tensor({M.label},{N.label})")


def sym_power(M: Representation, m: int) -> Representation:
    """Symmetric power on the sorted-monomial basis (derivation action).

    Valid in every characteristic: no division by m! occurs, slots mapping
    to the same monomial simply add.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    ctx = M.algebra.ctx
    basis = list(itertools.combinations_with_replacement(range(M.dim), m))
    index = {b: t for t, b in enumerate(basis)}
    D = len(basis)
    mats = []
    for op in M.action:
        out = np.zeros((D, D), dtype=_DT)
        for col, mono in enumerate(basis):
            for s in range(m):
                src = mono[s]
                rest = mono[:s] + mono[s + 1:]
                for dst in range(M.dim):
                    c = int(op.a[dst, src])
                    if c:
                        row = index[tuple(sorted(rest + (dst,)))]
                        out[row, col] = ctx.add(out[row, col], c)
        mats.append(FqMatrix.from_array(ctx, out, validate=False))
    return Representation(M.algebra, D, tuple(mats), label=f"sym{m}({M.label})")


def ext_power(M: Representation, m: int) -> Representation:
    """Exterior power on the increasing-tuple basis (derivation action)."""
    if not 1 <= m <= M.dim:
        raise ValueError("need 1 <= m <= dim")
    ctx = M.algebra.ctx
    basis = list(itertools.combinations(range(M.dim), m))
    index = {b: t for t, b in enumerate(basis)}
    D = len(basis)
    mats = []
    for op in M.action:
        out = np.zeros((D, D), dtype=_DT)
        for col, mono in enumerate(basis):
            for s in range(m):
                src = mono[s]
                rest = mono[:s] + mono[s + 1:]
                for dst in range(M.dim):
                    c = int(op.a[dst, src])
                    if not c or dst in rest:
                        continue
                    resorted = tuple(sorted(rest + (dst,)))
                    # adjacent swaps moving dst from slot s to its sorted slot
                    if abs(s - resorted.index(dst)) % 2:
                        c = int(ctx.neg(c))
                    row = index[resorted]
                    out[row, col] = ctx.add(out[row, col], c)
        mats.append(FqMatrix.from_array(ctx, out, validate=False))
    return Representation(M.algebra, D, tuple(mats), label=f"ext{m}({M.label})")


def _bounded_monomials(n: int, total: int, cap: int):
    """Exponent tuples of length n, entries <= cap, summing to total."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for e in range(min(cap, total), -1, -1):
        for rest in _bounded_monomials(n - 1, total - e, cap):
            yield (e,) + rest


def truncated_modules(n: int, ctx: FqContext, kind: str) -> Representation:
    """Multiplication modules over the n-dim abelian algebra with zero p-power.

    kind "N:j": polynomials of degree <= j (j <= p-1), x_i acting by
    multiplication, degree-(j+1) products truncated to zero.
    kind "M:r": wedge degrees r and r+1 of the exterior algebra.
    kind "R:r": degrees r(p-1) and r(p-1)+1 of k[x_1..x_n]/(x_i^p).
    """
    g = make_abelian(n, ctx)
    tag, _, arg = kind.partition(":")
    if not arg:
        raise ValueError(f"malformed module kind {kind!r}")
    val = int(arg)
    if tag == "N":
        if not 1 <= val <= ctx.p - 1:
            raise ValueError("N needs 1 <= j <= p-1")
        basis = [e for d in range(val + 1)
                 for e in _bounded_monomials(n, d, val)]
        top = val
        cap = val
    elif tag == "R":
        if val < 1:
            raise ValueError("R needs r >= 1")
        lo = val * (ctx.p - 1)
        basis = [e for d in (lo, lo + 1)
                 for e in _bounded_monomials(n, d, ctx.p - 1)]
        if not basis:
            raise ValueError("empty graded pieces")
        top = lo + 1
        cap = ctx.p - 1
    elif tag == "M":
        if not 1 <= val < n:
            raise ValueError("M needs 1 <= r < n")
        sets = [s for d in (val, val + 1)
                for s in itertools.combinations(range(n), d)]
        index = {s: t for t, s in enumerate(sets)}
        D = len(sets)
        mats = []
        for i in range(n):
            out = np.zeros((D, D), dtype=_DT)
            for col, s in enumerate(sets):
                if len(s) != val or i in s:
                    continue
                merged = tuple(sorted(s + (i,)))
                sign = (-1) ** merged.index(i) % ctx.p
                out[index[merged], col] = sign
            mats.append(FqMatrix.from_array(ctx, out, validate=False))
        return Representation(g, D, tuple(mats), label=f"M:{val}[n={n}]")
    else:
        raise ValueError(f"unknown module kind {kind!r}")
    index = {e: t for t, e in enumerate(basis)}
    D = len(basis)
    mats = []
    for i in range(n):
        out = np.zeros((D, D), dtype=_DT)
        for col, e in enumerate(basis):
            if sum(e) == top or e[i] == cap:
                continue
            lifted = e[:i] + (e[i] + 1,) + e[i + 1:]
            if lifted in index:
                out[index[lifted], col] = 1
        mats.append(FqMatrix.from_array(ctx, out, validate=False))
    return Representation(g, D, tuple(mats), label=f"{tag}:{val}[n={n}]")


@dataclass(frozen=True, eq=False)
class Restriction:
    """Operators of an elementary plane's basis columns acting on a module."""

    rep: Representation
    plane: SubspaceBasis
    operators: tuple[FqMatrix, ...]
    powers: tuple[tuple[np.ndarray, ...], ...] = field(repr=False, default=())

    @property
    def r(self) -> int:
        return self.plane.rank

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def top_degree(self) -> int:
        return (self.rep.algebra.ctx.p - 1) * self.r


def restrict(M: Representation, eps) -> Restriction:
    """Certify the plane and assemble u_s = rho(s-th basis column)."""
    if isinstance(eps, ElementarySubalgebra):
        if eps.algebra is not M.algebra:
            raise StructureError("plane certified for a different algebra")
        plane = eps.plane
    else:
        plane = eps
        if not is_elementary(M.algebra, plane):
            raise StructureError("plane is not elementary in the algebra")
    if plane.rank < 1:
        raise StructureError("restriction needs a plane of rank >= 1")
    ctx = M.algebra.ctx
    ops = tuple(M.operator(plane.basis.a[:, s]) for s in range(plane.rank))
    for s in range(len(ops)):
        for t in range(s + 1, len(ops)):
            diff = ctx.sub(ctx.matmul(ops[s].a, ops[t].a),
                           ctx.matmul(ops[t].a, ops[s].a))
            if diff.any():
                raise StructureError("restricted operators fail to commute")
    pows = []
    for op in ops:
        chain = [np.eye(M.dim, dtype=_DT)]
        for _ in range(ctx.p - 1):
            chain.append(ctx.matmul(chain[-1], op.a))
        if ctx.matmul(chain[-1], op.a).any():
            raise StructureError("restricted operator has nonzero p-th power")
        pows.append(tuple(chain))
    return Restriction(M, plane, ops, tuple(pows))


def _compositions(total: int, parts: int, cap: int):
    if parts == 1:
        if 0 <= total <= cap:
            yield (total,)
        return
    for e in range(min(cap, total), -1, -1):
        for rest in _compositions(total - e, parts - 1, cap):
            yield (e,) + rest


def _monomial_ops(res: Restriction, j: int) -> list[np.ndarray]:
    ctx = res.rep.algebra.ctx
    out = []
    for comp in _compositions(j, res.r, ctx.p - 1):
        m = res.powers[0][comp[0]]
        for s in range(1, res.r):
            if comp[s]:
                m = ctx.matmul(m, res.powers[s][comp[s]])
        out.append(m)
    return out


def rad_j(res: Restriction, j: int) -> tuple[int, SubspaceBasis]:
    """Sum of images of all degree-j monomials in the plane operators."""
    if not 1 <= j <= res.top_degree:
        raise ValueError(f"need 1 <= j <= {res.top_degree}")
    ctx = res.rep.algebra.ctx
    stacked = np.hstack(_monomial_ops(res, j))
    basis = image_basis(FqMatrix.from_array(ctx, stacked, validate=False))
    return basis.rank, basis


def soc_j(res: Restriction, j: int) -> tuple[int, SubspaceBasis]:
    """Intersection of kernels of all degree-j monomials."""
    if not 1 <= j <= res.top_degree:
        raise ValueError(f"need 1 <= j <= {res.top_degree}")
    ctx = res.rep.algebra.ctx
    stacked = np.vstack(_monomial_ops(res, j))
    basis = kernel_basis(FqMatrix.from_array(ctx, stacked, validate=False))
    return basis.rank, basis


@dataclass(frozen=True)
class RankProfile:
    """rad/soc dimension sequences of a restriction, j = 1..(p-1)r."""

    plane: SubspaceBasis
    dim: int
    rad: tuple[int, ...]
    soc: tuple[int, ...]

    def __post_init__(self):
        if any(a < b for a, b in zip(self.rad, self.rad[1:])):
            raise StructureError("radical dims must be non-increasing")
        if any(a > b for a, b in zip(self.soc, self.soc[1:])):
            raise StructureError("socle dims must be non-decreasing")
        if any(not 0 <= x <= self.dim for x in self.rad + self.soc):
            raise StructureError("dims out of range")


def profile(M: Representation, eps) -> RankProfile:
    res = restrict(M, eps)
    rads, socs = [], []
    for j in range(1, res.top_degree + 1):
        rads.append(rad_j(res, j)[0])
        socs.append(soc_j(res, j)[0])
    return RankProfile(res.plane, res.dim, tuple(rads), tuple(socs))


def is_free(res: Restriction) -> bool:
    """Free over u(eps) iff dim = p^r * (head dimension)."""
    p = res.rep.algebra.ctx.p
    head = res.dim - rad_j(res, 1)[0]
    return res.dim == p ** res.r * head


def support_membership(M: Representation, eps) -> bool:
    """True when some rational line of the plane acts non-freely.

    A single p-nilpotent operator u acts freely iff rank(u^{p-1}) = d/p, so
    p not dividing d means no line acts freely at all.  This scans rational
    lines only: a lower bound for the geometric support locus.
    """
    res = restrict(M, eps)
    ctx = M.algebra.ctx
    p = ctx.p
    if res.dim % p:
        return True
    target = res.dim // p
    for batch in iter_echelon_batches(ctx, res.r, 1):
        for t in range(batch.shape[0]):
            coords = ctx.matmul(res.plane.basis.a, batch[t, :, 0])
            u = M.operator(coords)
            upow = _mat_pow(ctx, u.a, p - 1)
            if FqMatrix.from_array(ctx, upow, validate=False).is_zero():
                rank_val = 0
            else:
                _, piv = _row_reduce(ctx, upow)
                rank_val = len(piv)
            if rank_val < target:
                return True
    return False


@dataclass(frozen=True)
class SupportLocus:
    """Per-point rad/soc dims at one j, with deficiency loci and non-free set."""

    j: int
    rad_dims: tuple[int, ...]
    soc_dims: tuple[int, ...]
    rad_max: int
    soc_min: int
    rad_locus: tuple[SubspaceBasis, ...]
    soc_locus: tuple[SubspaceBasis, ...]
    nonfree: tuple[SubspaceBasis, ...]


def rank_loci(M: Representation, pts, j: int) -> SupportLocus:
    """Deficiency loci over a point set: rad below max, soc above min."""
    planes = list(pts)
    rads, socs, nonfree = [], [], []
    for pl in planes:
        res = restrict(M, pl)
        rads.append(rad_j(res, j)[0])
        socs.append(soc_j(res, j)[0])
        if not is_free(res):
            nonfree.append(pl)
    rad_max, soc_min = max(rads), min(socs)
    return SupportLocus(
        j, tuple(rads), tuple(socs), rad_max, soc_min,
        tuple(pl for pl, v in zip(planes, rads) if v < rad_max),
        tuple(pl for pl, v in zip(planes, socs) if v > soc_min),
        tuple(nonfree))


@dataclass(frozen=True)
class ConstancyRow:
    j: int
    rad_constant: bool
    rad_range: tuple[int, int]
    soc_constant: bool
    soc_range: tuple[int, int]


@dataclass(frozen=True)
class ConstancyReport:
    module_label: str
    npoints: int
    rows: tuple[ConstancyRow, ...]

    @property
    def all_constant(self) -> bool:
        return all(r.rad_constant and r.soc_constant for r in self.rows)


def constancy_report(M: Representation, pts) -> ConstancyReport:
    """Per-degree constancy of rad/soc dims, cross-checked against the loci."""
    planes = list(pts)
    if not planes:
        raise ValueError("empty point set")
    profs = [profile(M, pl) for pl in planes]
    rows = []
    for idx in range(len(profs[0].rad)):
        j = idx + 1
        rvals = [pr.rad[idx] for pr in profs]
        svals = [pr.soc[idx] for pr in profs]
        row = ConstancyRow(j, min(rvals) == max(rvals),
                           (min(rvals), max(rvals)),
                           min(svals) == max(svals),
                           (min(svals), max(svals)))
        locus = rank_loci(M, planes, j)
        assert row.rad_constant == (not locus.rad_locus)
        assert row.soc_constant == (not locus.soc_locus)
        rows.append(row)
    return ConstancyReport(M.label, len(planes), tuple(rows))


def perp_check(M: Representation, eps, j: int) -> bool:
    """dim Soc^j of the dual restriction complements dim Rad^j."""
    rdim = rad_j(restrict(M, eps), j)[0]
    sdim = soc_j(restrict(dual(M), eps), j)[0]
    return sdim == M.dim - rdim


@dataclass(frozen=True, eq=False)
class HellerModule:
    """Syzygy of the trivial module over k[t_1..t_r]/(t_i^p)."""

    r: int
    p: int
    shift: int
    dim: int
    action: tuple[FqMatrix, ...]

    @property
    def representation(self) -> Representation:
        ctx = self.action[0].ctx
        return Representation(make_abelian(self.r, ctx), self.dim, self.action,
                              label=f"heller(r={self.r},p={self.p},s={self.shift})")


def _regular_truncated(ctx: FqContext, r: int) -> list[np.ndarray]:
    """Multiplication by t_i on the monomial basis of k[t_1..t_r]/(t_i^p)."""
    p = ctx.p
    monos = list(itertools.product(range(p), repeat=r))
    index = {m: t for t, m in enumerate(monos)}
    D = p ** r
    mats = []
    for i in range(r):
        out = np.zeros((D, D), dtype=_DT)
        for col, m in enumerate(monos):
            if m[i] < p - 1:
                out[index[m[:i] + (m[i] + 1,) + m[i + 1:]], col] = 1
        mats.append(out)
    return mats


def heller(r: int, p: int, s: int, dim_budget: int = 4096) -> HellerModule:
    """s-th kernel of the minimal free resolution of the trivial module."""
    if r < 1 or s < 0:
        raise ValueError("need r >= 1 and s >= 0")
    ctx = FqContext(p)
    ops = [np.zeros((1, 1), dtype=_DT) for _ in range(r)]
    dim = 1
    reg = _regular_truncated(ctx, r)
    for _ in range(s):
        stacked = np.hstack(ops)
        rad = image_basis(FqMatrix.from_array(ctx, stacked, validate=False))
        head = dim - rad.rank
        pr = p ** r
        if head * pr > dim_budget:
            raise BudgetExceededError(
                f"cover dimension {head * pr} exceeds budget {dim_budget}",
                count=head * pr)
        lift_rows = [m for m in range(dim) if m not in set(rad.pivot_rows)]
        # power chains of the current operators, for t^a applied to lifts
        pows = []
        for op in ops:
            chain = [np.eye(dim, dtype=_DT)]
            for _ in range(p - 1):
                chain.append(ctx.matmul(chain[-1], op))
            pows.append(chain)
        monos = list(itertools.product(range(p), repeat=r))
        cover = np.zeros((dim, head * pr), dtype=_DT)
        for t, row in enumerate(lift_rows):
            h = np.zeros(dim, dtype=_DT)
            h[row] = 1
            for a_idx, a in enumerate(monos):
                v = h
                for i in range(r):
                    if a[i]:
                        v = ctx.matmul(pows[i][a[i]], v)
                cover[:, t * pr + a_idx] = v
        big_ops = [_kron(ctx, np.eye(head, dtype=_DT), reg[i]) for i in range(r)]
        K = kernel_basis(FqMatrix.from_array(ctx, cover, validate=False))
        new_dim = K.rank
        assert new_dim == head * pr - dim  # cover map is onto (lifts span the head)
        piv = list(K.pivot_rows)
        new_ops = []
        for i in range(r):
            moved = ctx.matmul(big_ops[i], K.basis.a)
            T = moved[piv, :]
            assert not ctx.sub(ctx.matmul(K.basis.a, T), moved).any()
            new_ops.append(T)
        ops, dim = new_ops, new_dim
    mats = tuple(FqMatrix.from_array(ctx, m, validate=False) for m in ops)
    return HellerModule(r, p, s, dim, mats)


def _vandermonde_solve(i: int, u: int, p: int) -> list[int]:
    """c_0..c_i with sum_j c_j j^t = delta_{t,u} / C(i,u)  (mod p), t = 0..i."""
    ctx = FqContext(p)
    aug = np.zeros((i + 1, i + 2), dtype=_DT)
    for t in range(i + 1):
        for j in range(i + 1):
            aug[t, j] = pow(j, t, p) if t else 1
        if t == u:
            aug[t, i + 1] = ctx.inv(math.comb(i, u) % p)
    R, pivots = _row_reduce(ctx, aug)
    sol = [0] * (i + 1)
    for row, c in enumerate(pivots):
        sol[c] = int(R[row, i + 1])
    return sol


def lincomb_powers(exponents: Sequence[int], p: int) -> list[tuple[int, tuple[int, ...]]]:
    """Write a monomial of degree i < p as a combination of i-th powers.

    Returns (coefficient, linear form) pairs: the monomial
    prod x_t^{e_t} equals sum a_j * (form_j)^i.  Recursive two-variable
    Vandermonde solve over the nodes 0..i; requires i < p.
    """
    exps = list(exponents)
    if any(e < 0 for e in exps):
        raise ValueError("negative exponent")
    i = sum(exps)
    if i >= p:
        raise UnsupportedCharacteristicError(f"degree {i} needs p > {i}")
    n = len(exps)
    nz = [t for t, e in enumerate(exps) if e > 0]
    if not nz:
        return [(1, (0,) * n)]
    if len(nz) == 1:
        lam = [0] * n
        lam[nz[0]] = 1
        return [(1, tuple(lam))]
    head = nz[0]
    u = exps[head]
    tail = list(exps)
    tail[head] = 0
    tail_terms = lincomb_powers(tail, p)
    coeffs = _vandermonde_solve(i, u, p)
    out: dict[tuple[int, ...], int] = {}
    for b, mu in tail_terms:
        for j, cj in enumerate(coeffs):
            if not cj:
                continue
            lam = list(mu)
            lam[head] = j  # mu has no head component
            key = tuple(lam)
            out[key] = (out.get(key, 0) + b * cj) % p
    return [(a, lam) for lam, a in sorted(out.items()) if a]


def _power_expansion(lam: Sequence[int], i: int, p: int) -> dict:
    """Multinomial expansion of (sum lam_t x_t)^i over F_p, as exps -> coeff."""
    n = len(lam)
    out: dict[tuple[int, ...], int] = {}
    for comp in _compositions(i, n, i) if n else [()]:
        c = math.factorial(i)
        for e in comp:
            c //= math.factorial(e)
        for t, e in enumerate(comp):
            c *= pow(int(lam[t]), e, p)
        c %= p
        if c:
            out[tuple(comp)] = c
    return out


def verify_lincomb(exponents: Sequence[int], p: int) -> bool:
    """Expand the claimed combination symbolically and compare monomials."""
    terms = lincomb_powers(exponents, p)
    i = sum(exponents)
    total: dict[tuple[int, ...], int] = {}
    for a, lam in terms:
        for mono, c in _power_expansion(lam, i, p).items():
            total[mono] = (total.get(mono, 0) + a * c) % p
    total = {m: c for m, c in total.items() if c}
    return total == {tuple(exponents): 1}
