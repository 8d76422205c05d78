"""Singular foliations as finitely generated modules of polynomial vector fields.

A :class:`FoliationModule` is a chart plus generators; construction computes
the module Groebner basis and the full syzygy basis once, after which every
point query is pure.  Fibers and isotropy are computed for the presented
module (generators plus computed syzygies), which realizes the quotient
``F / I_q F`` concretely: the fiber dimension at ``q`` is the generator count
minus the rank of the evaluated syzygies, and the isotropy algebra is the
kernel of evaluation inside that quotient with the bracket induced by
cofactor-tracked division.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import AmbiguousQuotientError, ChartMismatchError, PreconditionError
from .geometry import VectorField, cotangent_lift, lie_bracket
from .groebner import (
    Certificate,
    ModuleElement,
    ModuleGroebnerBasis,
    module_groebner,
    module_membership,
    syzygy_basis,
)
from .linalg import EchelonSpan, nullspace, solve_coordinates
from .poly import BLOCK, Polynomial, VariableSet
from .sampling import candidate_points

Point = tuple[Fraction, ...]


def _as_point(chart: VariableSet, point: Sequence) -> Point:
    pt = tuple(Fraction(x) for x in point)
    if len(pt) != chart.dimension:
        raise PreconditionError(
            f"point has {len(pt)} coordinates, chart has {chart.dimension}"
        )
    return pt


@dataclass(frozen=True)
class PointReport:
    """Pointwise invariants of a foliation module.

    ``structure_constants[u][v][w]`` is the coefficient of basis element ``w``
    in the bracket of basis elements ``u`` and ``v``; antisymmetric in (u, v).
    ``isotropy_basis`` lists the generator-coefficient vectors representing
    the chosen basis of the isotropy algebra.
    """

    point: Point
    tangent_dim: int
    fiber_dim: int
    isotropy_dim: int
    structure_constants: tuple[tuple[tuple[Fraction, ...], ...], ...]
    isotropy_basis: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a pass/witness decision procedure."""

    passed: bool
    certificates: tuple = ()
    witness: object = None
    obstruction_point: Point | None = None

    def __bool__(self) -> bool:
        return self.passed


class FoliationModule:
    """Finitely many polynomial vector fields spanning a vector-field module."""

    def __init__(self, chart: VariableSet, generators: Sequence[VectorField]):
        generators = tuple(generators)
        for g in generators:
            if g.chart != chart:
                raise ChartMismatchError("generator on a different chart")
            if g.is_zero():
                raise PreconditionError("zero vector field among generators")
        self.chart = chart
        self.generators = generators
        self._elements = tuple(
            ModuleElement(chart, g.components) for g in generators
        )
        self.module_gb: ModuleGroebnerBasis = module_groebner(self._elements, BLOCK)
        self.syzygies: tuple[ModuleElement, ...] = tuple(syzygy_basis(self._elements, BLOCK))

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def elements(self) -> tuple[ModuleElement, ...]:
        return self._elements

    def contains(self, v: VectorField) -> Certificate:
        return module_membership(ModuleElement(self.chart, v.components), self.module_gb)

    @cached_property
    def lift_presentation(self):
        from .ipoisson import IdealPresentation

        cot = self.chart.cotangent()
        return IdealPresentation(
            cot, tuple(cotangent_lift(g, cot) for g in self.generators)
        )

    def __repr__(self):
        return f"FoliationModule({self.chart.base}, {self.n_generators} generators)"


def involutivity_check(fol: FoliationModule) -> CheckResult:
    """Pass iff every generator bracket re-expresses over the generators.

    On failure the witness is ``(pair, certificate)`` for the first offending
    bracket, with a point obstruction attached when one exists.
    """
    certs = []
    for a in range(fol.n_generators):
        for b in range(a + 1, fol.n_generators):
            bracket = lie_bracket(fol.generators[a], fol.generators[b])
            cert = module_membership(
                ModuleElement(fol.chart, bracket.components), fol.module_gb
            )
            if not cert.claim_holds:
                point = find_module_obstruction(fol.elements(), cert.remainder)
                return CheckResult(
                    False,
                    certificates=tuple(certs),
                    witness=((a, b), cert),
                    obstruction_point=point,
                )
            certs.append(((a, b), cert))
    return CheckResult(True, certificates=tuple(certs))


def tangent_dim(fol: FoliationModule, point: Sequence) -> int:
    """Rank over Q of the evaluated generators, i.e. dim of the leaf tangent."""
    pt = _as_point(fol.chart, point)
    rows = [list(g.evaluate_seq(pt)) for g in fol.generators]
    span = EchelonSpan(fol.chart.dimension)
    for r in rows:
        span.insert(r)
    return span.rank


def fiber_dim(fol: FoliationModule, point: Sequence) -> int:
    """dim F/I_q F = generator count minus the rank of the evaluated syzygies."""
    pt = _as_point(fol.chart, point)
    span = EchelonSpan(fol.n_generators)
    for s in fol.syzygies:
        span.insert(list(s.evaluate_seq(pt)))
    return fol.n_generators - span.rank


def isotropy_algebra(fol: FoliationModule, point: Sequence) -> PointReport:
    """Kernel of evaluation inside the fiber, with its induced Lie bracket."""
    pt = _as_point(fol.chart, point)
    n, big_n = fol.chart.dimension, fol.n_generators

    syz_span = EchelonSpan(big_n)
    for s in fol.syzygies:
        syz_span.insert(list(s.evaluate_seq(pt)))
    fdim = big_n - syz_span.rank

    # kernel of c |-> sum_a c_a X_a(q)
    matrix_rows = [
        [fol.generators[a].components[i].evaluate_seq(pt) for a in range(big_n)]
        for i in range(n)
    ]
    kernel = nullspace(matrix_rows, big_n)
    tdim = big_n - len(kernel)

    # basis of ker(ev_q) modulo the evaluated syzygies, preferring generator classes
    selection = EchelonSpan(big_n)
    for row in syz_span.rows:
        selection.insert(row)
    basis: list[tuple[Fraction, ...]] = []
    unit_candidates = []
    for a in range(big_n):
        if all(v == 0 for v in fol.generators[a].evaluate_seq(pt)):
            e = [Fraction(0)] * big_n
            e[a] = Fraction(1)
            unit_candidates.append(tuple(e))
    for cand in unit_candidates + kernel:
        if selection.insert(cand):
            basis.append(tuple(cand))
    idim = len(basis)
    if tdim + idim != fdim:
        raise AmbiguousQuotientError(
            f"exactness failed at {pt}: tangent {tdim} + isotropy {idim} != fiber {fdim}"
        )

    quotient_frame = [list(r) for r in syz_span.rows] + [list(b) for b in basis]
    consts = [[[Fraction(0)] * idim for _ in range(idim)] for _ in range(idim)]
    for u in range(idim):
        for v in range(u + 1, idim):
            yu = _combine(fol, basis[u])
            yv = _combine(fol, basis[v])
            bracket = lie_bracket(yu, yv)
            cert = module_membership(
                ModuleElement(fol.chart, bracket.components), fol.module_gb
            )
            if not cert.claim_holds:
                raise PreconditionError(
                    "bracket of isotropy representatives leaves the module; "
                    "the foliation is not involutive"
                )
            w = [c.evaluate_seq(pt) for c in cert.cofactors]
            coords = solve_coordinates(quotient_frame, w)
            if coords is None:
                raise AmbiguousQuotientError(
                    f"bracket class at {pt} not expressible in the computed presentation"
                )
            tail = coords[len(quotient_frame) - idim:]
            for w_idx in range(idim):
                consts[u][v][w_idx] = tail[w_idx]
                consts[v][u][w_idx] = -tail[w_idx]

    return PointReport(
        point=pt,
        tangent_dim=tdim,
        fiber_dim=fdim,
        isotropy_dim=idim,
        structure_constants=tuple(tuple(tuple(row) for row in plane) for plane in consts),
        isotropy_basis=tuple(basis),
    )


def _combine(fol: FoliationModule, coeffs: Sequence[Fraction]) -> VectorField:
    acc = VectorField.zero(fol.chart)
    for c, gen in zip(coeffs, fol.generators):
        if c:
            acc = acc + gen.scale_by(Polynomial.constant(fol.chart, c))
    return acc


def module_equal(f1: FoliationModule, f2: FoliationModule) -> CheckResult:
    """Mutual membership of generators; witness is the first failing certificate."""
    if f1.chart != f2.chart:
        raise ChartMismatchError("foliations on different charts")
    certs = []
    for side, (src, dst) in enumerate(((f1, f2), (f2, f1))):
        for idx, gen in enumerate(src.generators):
            cert = dst.contains(gen)
            if not cert.claim_holds:
                point = find_module_obstruction(dst.elements(), cert.remainder)
                return CheckResult(
                    False,
                    certificates=tuple(certs),
                    witness=(("left", "right")[side], idx, cert),
                    obstruction_point=point,
                )
            certs.append(((("left", "right")[side], idx), cert))
    return CheckResult(True, certificates=tuple(certs))


def lift_ideal(fol: FoliationModule):
    """The cotangent-lift ideal of the foliation, fiber-degree-1 homogeneous."""
    return fol.lift_presentation


def find_module_obstruction(
    gens: Sequence[ModuleElement], residue: ModuleElement
) -> Point | None:
    """Point where the residue leaves the evaluated span of the generators.

    Such a point refutes membership over smooth coefficients too, not just
    over polynomial ones.
    """
    if residue.is_zero():
        return None
    width = residue.rank
    for pt in candidate_points(residue.varset.n_vars):
        span = EchelonSpan(width)
        for g in gens:
            span.insert(list(g.evaluate_seq(pt)))
        value = list(residue.evaluate_seq(pt))
        if any(value) and not span.contains(value):
            return pt
    return None
