"""Planes in F_q^n: canonical enumeration, charts, sections, group orbits.

A plane is a SubspaceBasis.  A chart is a set of row indices (0-based) whose
minor is invertible; on a chart the plane has a unique section basis whose
chart rows form the identity, and chart changes act by invertible n×n
matrices on sections.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceededError, NotInChartError
from .fq import (
    FqContext,
    FqMatrix,
    SubspaceBasis,
    determinant,
    gaussian_binomial,
    inverse,
    iter_echelon_bases,
    primitive_element,
)
from .liealg import MatrixLieAlgebra

_DT = np.int64


@dataclass(frozen=True, order=True)
class Chart:
    """A sorted tuple of row indices with invertible minor."""

    rows: tuple[int, ...]

    def __post_init__(self):
        if list(self.rows) != sorted(set(self.rows)):
            raise ValueError("chart rows must be strictly increasing")

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class SectionMatrix:
    """The unique basis of a plane whose chart rows form the identity block."""

    chart: Chart
    matrix: FqMatrix


@dataclass(frozen=True)
class PluckerVector:
    """Minor coordinates over r-subsets in lexicographic order, first nonzero 1."""

    ambient_dim: int
    rank: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class GroupGenerators:
    """Invertible generators of a matrix group, with its order when known."""

    ctx: FqContext
    generators: tuple[FqMatrix, ...]
    known_order: int | None = None
    label: str = ""


def enumerate_planes(n: int, r: int, ctx: FqContext,
                     budget: int = 10**7) -> Iterator[SubspaceBasis]:
    """All r-planes of F_q^n in canonical form, refusing oversized runs."""
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    total = gaussian_binomial(n, r, ctx.q)
    if total > budget:
        raise BudgetExceededError(
            f"{total} planes exceed the budget of {budget}", count=total)
    return iter_echelon_bases(ctx, n, r)


def chart_of(plane: SubspaceBasis) -> Chart:
    """Lexicographically least valid chart: the canonical pivot rows."""
    return Chart(plane.pivot_rows)


def section_matrix(plane: SubspaceBasis, chart: Chart) -> SectionMatrix:
    if len(chart) != plane.rank:
        raise NotInChartError("chart size must equal the plane rank")
    ctx = plane.ctx
    rows = np.asarray(chart.rows, dtype=np.intp)
    if rows.size and rows.max() >= plane.ambient_dim:
        raise NotInChartError("chart row outside the ambient space")
    minor = FqMatrix.from_array(ctx, plane.basis.a[rows, :], validate=False)
    if determinant(minor) == 0:
        raise NotInChartError(f"plane has singular minor on chart {chart.rows}")
    sec = ctx.matmul(plane.basis.a, inverse(minor).a)
    return SectionMatrix(chart, FqMatrix.from_array(ctx, sec, validate=False))


def valid_charts(plane: SubspaceBasis) -> Iterator[Chart]:
    """All charts containing the plane, in lexicographic order."""
    ctx = plane.ctx
    for rows in itertools.combinations(range(plane.ambient_dim), plane.rank):
        minor = FqMatrix.from_array(
            ctx, plane.basis.a[np.asarray(rows, dtype=np.intp), :], validate=False)
        if determinant(minor) != 0:
            yield Chart(rows)


def plucker(plane: SubspaceBasis) -> PluckerVector:
    ctx = plane.ctx
    n, r = plane.ambient_dim, plane.rank
    coords = []
    for rows in itertools.combinations(range(n), r):
        minor = FqMatrix.from_array(
            ctx, plane.basis.a[np.asarray(rows, dtype=np.intp), :], validate=False)
        coords.append(determinant(minor))
    lead = next((c for c in coords if c), None)
    if lead is not None and lead != 1:
        inv = int(ctx.inv(np.asarray(lead)))
        coords = [int(ctx.mul(np.asarray(c), np.asarray(inv))) for c in coords]
    return PluckerVector(n, r, tuple(int(c) for c in coords))


def transition_matrix(chart_a: Chart, chart_b: Chart, plane: SubspaceBasis) -> FqMatrix:
    """Invertible A with A · section(plane, chart_a) = section(plane, chart_b).

    A restores the full-rank representative from the chart_a section and
    renormalizes by the inverse chart_b minor; it is the unique matrix that
    fixes every coordinate vector e_i with i outside chart_a and carries the
    chart_a section columns to the chart_b section columns.
    """
    ctx = plane.ctx
    b = section_matrix(plane, chart_a).matrix.a
    b2 = section_matrix(plane, chart_b).matrix.a
    n = plane.ambient_dim
    out = np.eye(n, dtype=_DT)
    diff = ctx.sub(b2, b)
    for s, row in enumerate(chart_a.rows):
        out[:, row] = ctx.add(out[:, row], diff[:, s])
    return FqMatrix.from_array(ctx, out, validate=False)


# -- group generators ---------------------------------------------------------


def _transvection(ctx: FqContext, n: int, i: int, j: int) -> FqMatrix:
    arr = np.eye(n, dtype=_DT)
    arr[i, j] = 1
    return FqMatrix.from_array(ctx, arr, validate=False)


def _spot_diag(ctx: FqContext, n: int, i: int, value: int) -> FqMatrix:
    arr = np.eye(n, dtype=_DT)
    arr[i, i] = value
    return FqMatrix.from_array(ctx, arr, validate=False)


def gl_order(n: int, q: int) -> int:
    order = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        order *= q**i - 1
    return order


def gl_generators(n: int, ctx: FqContext) -> GroupGenerators:
    """All transvections I + E_ij plus one primitive-scalar diagonal."""
    gens = [_transvection(ctx, n, i, j)
            for i in range(n) for j in range(n) if i != j]
    if ctx.q > 2:
        gens.append(_spot_diag(ctx, n, 0, primitive_element(ctx)))
    return GroupGenerators(ctx, tuple(gens), known_order=gl_order(n, ctx.q),
                           label=f"GL{n}")


def borel_generators(n: int, ctx: FqContext) -> GroupGenerators:
    """Upper transvections plus the n one-spot primitive diagonals."""
    gens = [_transvection(ctx, n, i, j)
            for i in range(n) for j in range(i + 1, n)]
    if ctx.q > 2:
        z = primitive_element(ctx)
        gens += [_spot_diag(ctx, n, i, z) for i in range(n)]
    order = (ctx.q - 1) ** n * ctx.q ** (n * (n - 1) // 2)
    return GroupGenerators(ctx, tuple(gens), known_order=order, label=f"B{n}")


def parabolic_generators(block_sizes: Sequence[int], ctx: FqContext) -> GroupGenerators:
    """Block upper triangular group for the given diagonal block sizes."""
    n = sum(block_sizes)
    starts = np.cumsum([0] + list(block_sizes))
    block_of = np.zeros(n, dtype=np.intp)
    for b in range(len(block_sizes)):
        block_of[starts[b]:starts[b + 1]] = b
    gens = [_transvection(ctx, n, i, j) for i in range(n) for j in range(n)
            if i != j and block_of[i] <= block_of[j]]
    if ctx.q > 2:
        z = primitive_element(ctx)
        gens += [_spot_diag(ctx, n, i, z) for i in range(n)]
    order = 1
    above = 0
    for bi, b in enumerate(block_sizes):
        order *= gl_order(b, ctx.q)
        above += b * sum(block_sizes[bi + 1:])
    order *= ctx.q**above
    return GroupGenerators(ctx, tuple(gens), known_order=order,
                           label="P" + "x".join(map(str, block_sizes)))


# -- orbits -------------------------------------------------------------------


def _adjoint_coordinate_maps(gens: GroupGenerators,
                             algebra: MatrixLieAlgebra) -> list[np.ndarray]:
    """Matrix of x -> g x g^{-1} on algebra coordinates, per generator."""
    ctx = algebra.ctx
    maps = []
    for g in gens.generators:
        ginv = inverse(g)
        cols = []
        for b in algebra.basis:
            c = algebra.coords_of(g @ b @ ginv)
            if c is None:
                raise ValueError(
                    f"generator does not normalize {algebra.name}")
            cols.append(c)
        maps.append(np.stack(cols, axis=1))
    return maps


def orbit(gens: GroupGenerators, seed: SubspaceBasis, action: str,
          algebra: MatrixLieAlgebra | None = None,
          budget: int = 10**6) -> set[SubspaceBasis]:
    """BFS orbit of a plane under the group, deduplicated by canonical form.

    action "adjoint-on-g": planes in algebra coordinates, generators act by
    conjugation on the algebra.  action "linear-on-V": planes in the natural
    column space of the generators.
    """
    ctx = seed.ctx
    if action == "adjoint-on-g":
        if algebra is None:
            raise ValueError("adjoint action needs the algebra")
        if seed.ambient_dim != algebra.dim:
            raise ValueError("seed must be in algebra coordinates")
        maps = _adjoint_coordinate_maps(gens, algebra)
    elif action == "linear-on-V":
        if seed.ambient_dim != gens.generators[0].rows:
            raise ValueError("seed ambient dim must match the generators")
        maps = [g.a for g in gens.generators]
    else:
        raise ValueError(f"unknown action {action!r}")
    seen = {seed}
    frontier = [seed]
    while frontier:
        nxt = []
        for plane in frontier:
            for m in maps:
                moved = SubspaceBasis.span(ctx, ctx.matmul(m, plane.basis.a))
                if moved not in seen:
                    if len(seen) >= budget:
                        raise BudgetExceededError(
                            f"orbit exceeded budget {budget}",
                            count=len(seen), partial=set(seen))
                    seen.add(moved)
                    nxt.append(moved)
        frontier = nxt
    return seen
