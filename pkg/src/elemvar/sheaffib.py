"""Chart operators and fiber-dimension tables for families of planes.

The s-th chart operator of a plane at a chart is the module action of the
s-th column of its section matrix there.  Images and kernels of degree-j
monomials in these operators have chart-independent, GL_r-invariant
dimensions, so they define fiber-dimension functions on a whole family of
planes; tables of those dimensions are compared against closed-form rank
expectations for the familiar bundles on the family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StructureError
from .evariety import is_elementary
from .fq import FqContext, FqMatrix, SubspaceBasis, _row_reduce, rank
from .grassmann import Chart, section_matrix
from .liealg import make_abelian
from .repmod import Representation, _compositions, rad_j, restrict, soc_j

_DT = np.int64


@dataclass(frozen=True, eq=False)
class ThetaOperator:
    """One chart (or global-tuple) operator, commutation-certified."""

    rep: Representation
    scope: str
    s: int
    matrix: FqMatrix


def theta_at(M: Representation, chart: Chart, plane: SubspaceBasis,
             s: int) -> FqMatrix:
    """Action of the s-th section-matrix column of the plane at the chart."""
    sec = section_matrix(plane, chart)
    if not 0 <= s < plane.rank:
        raise ValueError(f"need 0 <= s < {plane.rank}")
    return M.operator(sec.matrix.a[:, s])


def theta_operators(M: Representation, chart: Chart,
                    plane: SubspaceBasis) -> tuple[ThetaOperator, ...]:
    """All r chart operators, checked to commute and be p-nilpotent."""
    ctx = M.algebra.ctx
    ops = [theta_at(M, chart, plane, s) for s in range(plane.rank)]
    for s in range(len(ops)):
        for t in range(s + 1, len(ops)):
            diff = ctx.sub(ctx.matmul(ops[s].a, ops[t].a),
                           ctx.matmul(ops[t].a, ops[s].a))
            if diff.any():
                raise StructureError("chart operators fail to commute")
    for op in ops:
        acc = op.a
        for _ in range(ctx.p - 1):
            acc = ctx.matmul(acc, op.a)
        if acc.any():
            raise StructureError("chart operator has nonzero p-th power")
    scope = f"chart{tuple(chart.rows)}"
    return tuple(ThetaOperator(M, scope, s, op) for s, op in enumerate(ops))


def _monomial_mats(ctx: FqContext, mats: list[np.ndarray], j: int):
    p = ctx.p
    pows = []
    for m in mats:
        chain = [np.eye(m.shape[0], dtype=_DT)]
        for _ in range(p - 1):
            chain.append(ctx.matmul(chain[-1], m))
        pows.append(chain)
    out = []
    for comp in _compositions(j, len(mats), p - 1):
        acc = pows[0][comp[0]]
        for s in range(1, len(mats)):
            if comp[s]:
                acc = ctx.matmul(acc, pows[s][comp[s]])
        out.append(acc)
    return out


def _im_dim(ctx, mats, j) -> int:
    stacked = np.hstack(_monomial_mats(ctx, mats, j))
    return rank(FqMatrix.from_array(ctx, stacked, validate=False))


def _ker_dim(ctx, mats, j) -> int:
    stacked = np.vstack(_monomial_mats(ctx, mats, j))
    return mats[0].shape[0] - rank(FqMatrix.from_array(ctx, stacked, validate=False))


def rad_via_theta(M: Representation, chart: Chart, plane: SubspaceBasis,
                  j: int) -> int:
    """Image dimension of degree-j chart-operator monomials.

    Always cross-checked against the section-free computation on the
    canonical plane basis: the two operator families differ by the
    invertible coordinate change between the two bases.
    """
    ops = theta_operators(M, chart, plane)
    ctx = M.algebra.ctx
    dim = _im_dim(ctx, [op.matrix.a for op in ops], j)
    assert dim == rad_j(restrict(M, plane), j)[0]
    return dim


def soc_via_theta(M: Representation, chart: Chart, plane: SubspaceBasis,
                  j: int) -> int:
    """Kernel analogue of rad_via_theta, same cross-check."""
    ops = theta_operators(M, chart, plane)
    ctx = M.algebra.ctx
    dim = _ker_dim(ctx, [op.matrix.a for op in ops], j)
    assert dim == soc_j(restrict(M, plane), j)[0]
    return dim


def chart_compat(M: Representation, plane: SubspaceBasis,
                 chart_a: Chart, chart_b: Chart, j: int) -> bool:
    """Image and kernel dims agree between two charts containing the plane."""
    ctx = M.algebra.ctx
    dims = []
    for chart in (chart_a, chart_b):
        ops = [theta_at(M, chart, plane, s).a for s in range(plane.rank)]
        dims.append((_im_dim(ctx, ops, j), _ker_dim(ctx, ops, j)))
    return dims[0] == dims[1]


def global_theta(M: Representation, cols: np.ndarray) -> tuple[FqMatrix, ...]:
    """Operators of an ordered independent commuting p-nilpotent tuple."""
    g = M.algebra
    cols = np.asarray(cols, dtype=_DT)
    if cols.ndim != 2 or cols.shape[0] != g.dim:
        raise StructureError("tuple must be a (dim g) x r coordinate array")
    span = SubspaceBasis.span(g.ctx, cols)
    if span.rank != cols.shape[1]:
        raise StructureError("tuple columns are linearly dependent")
    if not is_elementary(g, span):
        raise StructureError("tuple is not commuting p-nilpotent")
    return tuple(M.operator(cols[:, s]) for s in range(cols.shape[1]))


def glr_invariance(M: Representation, cols: np.ndarray, h: np.ndarray,
                   j: int) -> bool:
    """Monomial image/kernel dims are unchanged under a GL_r frame change."""
    ctx = M.algebra.ctx
    ops_a = [m.a for m in global_theta(M, cols)]
    moved = ctx.matmul(np.asarray(cols, dtype=_DT), np.asarray(h, dtype=_DT))
    ops_b = [m.a for m in global_theta(M, moved)]
    return (_im_dim(ctx, ops_a, j), _ker_dim(ctx, ops_a, j)) \
        == (_im_dim(ctx, ops_b, j), _ker_dim(ctx, ops_b, j))


@dataclass(frozen=True)
class FiberTable:
    """Per-point image/kernel dimensions over a point set."""

    module_label: str
    module_dim: int
    js: tuple[int, ...]
    planes: tuple[SubspaceBasis, ...]
    im: tuple[tuple[int, ...], ...]
    ker: tuple[tuple[int, ...], ...]

    def _col(self, data, j):
        t = self.js.index(j)
        return tuple(row[t] for row in data)

    def im_at(self, j):
        return self._col(self.im, j)

    def ker_at(self, j):
        return self._col(self.ker, j)

    def constant(self, j) -> tuple[bool, bool]:
        ims, kers = self.im_at(j), self.ker_at(j)
        return min(ims) == max(ims), min(kers) == max(kers)

    def im_deficient(self, j) -> tuple[SubspaceBasis, ...]:
        ims = self.im_at(j)
        top = max(ims)
        return tuple(pl for pl, v in zip(self.planes, ims) if v < top)

    def ker_excess(self, j) -> tuple[SubspaceBasis, ...]:
        kers = self.ker_at(j)
        low = min(kers)
        return tuple(pl for pl, v in zip(self.planes, kers) if v > low)


def _bottom_chart(plane: SubspaceBasis) -> Chart:
    """A valid chart chosen greedily from the bottom rows of the plane."""
    flipped = plane.basis.a[::-1, :].T
    _, pivots = _row_reduce(plane.ctx, flipped)
    n = plane.ambient_dim
    return Chart(tuple(sorted(n - 1 - p for p in pivots)))


def fiber_table(M: Representation, pts, js, revalidate: bool = True) -> FiberTable:
    """Tabulate image/kernel dims; optionally revalidate via a second chart.

    Revalidation recomputes the lowest requested degree at a chart chosen
    greedily from the bottom rows, exercising the section-matrix path.
    """
    js = tuple(js)
    planes = tuple(pts)
    im_rows, ker_rows = [], []
    for pl in planes:
        res = restrict(M, pl)
        im_rows.append(tuple(rad_j(res, j)[0] for j in js))
        ker_rows.append(tuple(soc_j(res, j)[0] for j in js))
        if revalidate:
            alt = _bottom_chart(pl)
            assert rad_via_theta(M, alt, pl, js[0]) == im_rows[-1][0]
            assert soc_via_theta(M, alt, pl, js[0]) == ker_rows[-1][0]
    return FiberTable(M.label, M.dim, js, planes,
                      tuple(im_rows), tuple(ker_rows))


@dataclass(frozen=True)
class BundleExpectation:
    """Closed-form fiber rank for a named bundle on the plane family."""

    name: str
    rank: int
    kind: str  # "im" | "ker" | "coker"
    j: int
    identification: str


def bundle_expectation(name: str, *, n: int = 0, r: int = 0, m: int = 0,
                       c: int = 0) -> BundleExpectation:
    """Registry of rank formulas, keyed by what the bundle does."""
    if name == "tautological":
        return BundleExpectation(name, r, "im", 1,
                                 "the universal plane itself")
    if name == "quotient":
        return BundleExpectation(name, n - r, "coker", 1,
                                 "ambient space modulo the universal plane")
    if name == "sym":
        return BundleExpectation(f"sym{m}", math.comb(r + m - 1, m), "im", m,
                                 "m-th symmetric power of the universal plane")
    if name == "ext":
        return BundleExpectation(f"ext{m}", math.comb(r, m), "im", m,
                                 "m-th exterior power of the universal plane")
    if name == "tensor-power":
        return BundleExpectation(f"tensor{m}", r ** m, "im", m,
                                 "m-th tensor power of the universal plane")
    if name == "tangent":
        return BundleExpectation(name, r * (n - r), "coker", 1,
                                 "tangent space of the plane family")
    if name == "cotangent":
        return BundleExpectation(name, r * (n - r), "im", 2,
                                 "cotangent space of the plane family")
    if name == "sym2-ambient":
        return BundleExpectation(name, math.comb(n + 1, 2), "im", 2,
                                 "symmetric square of the universal plane, "
                                 "isotropic maximal case")
    if name == "line-plus-trivial":
        return BundleExpectation(name, 1 + c, "ker", 1,
                                 "one twisting line plus a constant factor")
    if name == "socle-line-plus-radical":
        return BundleExpectation(name, 1 + c, "ker", 1,
                                 "one twisting line plus the radical as a "
                                 "constant factor")
    raise ValueError(f"unknown bundle expectation {name!r}")


@dataclass(frozen=True)
class ComparisonReport:
    expectation: BundleExpectation
    module_label: str
    checked: int
    mismatches: tuple[tuple[SubspaceBasis, int], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def compare_expected(table: FiberTable,
                     exp: BundleExpectation) -> ComparisonReport:
    """Flag every point whose fiber dim differs from the expected rank."""
    if exp.kind == "im":
        vals = table.im_at(exp.j)
    elif exp.kind == "ker":
        vals = table.ker_at(exp.j)
    elif exp.kind == "coker":
        vals = tuple(table.module_dim - v for v in table.im_at(exp.j))
    else:
        raise ValueError(f"unknown expectation kind {exp.kind!r}")
    bad = tuple((pl, v) for pl, v in zip(table.planes, vals) if v != exp.rank)
    return ComparisonReport(exp, table.module_label, len(vals), bad)


def kernel_jump_module(ctx: FqContext) -> Representation:
    """4-dim module over the 2-dim abelian algebra whose socle jumps.

    The first generator sends m_1 to m_4; the second sends m_1 to m_3 and
    m_2 to m_4.  On the line through the first generator the kernel is
    3-dimensional, on every other line it is 2-dimensional: the family of
    kernels over the projective line is locally free of rank 2 away from
    that single jump point, where the pointwise socle strictly exceeds the
    generic fiber.
    """
    g = make_abelian(2, ctx)
    u1 = np.zeros((4, 4), dtype=_DT)
    u1[3, 0] = 1
    u2 = np.zeros((4, 4), dtype=_DT)
    u2[2, 0] = 1
    u2[3, 1] = 1
    mats = (FqMatrix.from_array(ctx, u1), FqMatrix.from_array(ctx, u2))
    return Representation(g, 4, mats, label="kernel-jump")
