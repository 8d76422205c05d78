"""Differential-geometric operators on a polynomial chart.

Conventions fixed here and relied on everywhere else:

* canonical bracket ``{f, g} = sum_i df/dp_i dg/dq^i - df/dq^i dg/dp_i``,
  which makes the bracket of two lifted vector fields the lift of their Lie
  bracket with no sign;
* symmetric product ``a (.) b = a@b + b@a`` without a half, so the lift of a
  contravariant symmetric 2-tensor ``S`` is ``sum_ij S^ij p_i p_j`` and
  ``(V (.) W)-lift = 2 V-lift W-lift``;
* the metric Hamiltonian is half the lift of the cometric.

The cometric is the primary metric input; a covariant polynomial metric is
optional because polynomial cometrics rarely have polynomial inverses.  Where
covariant data is unavoidable it is derived exactly as adjugate/determinant
with rational-function entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import ChartMismatchError, MetricError, VariableSetError
from .linalg import poly_adjugate, poly_det, poly_mat_mul
from .poly import Polynomial, VariableSet
from .ratfunc import RationalFunction


@dataclass(frozen=True)
class VectorField:
    """X = sum X^i d/dq^i with polynomial components on a base chart."""

    chart: VariableSet
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.chart.has_fiber:
            raise VariableSetError("vector fields live on the base chart")
        if len(self.components) != self.chart.dimension:
            raise VariableSetError("component count must equal the chart dimension")
        for c in self.components:
            if c.varset != self.chart:
                raise ChartMismatchError("component polynomial on a different chart")

    @classmethod
    def zero(cls, chart: VariableSet) -> "VectorField":
        z = Polynomial.zero(chart)
        return cls(chart, (z,) * chart.dimension)

    @classmethod
    def coordinate(cls, chart: VariableSet, index: int) -> "VectorField":
        comps = [Polynomial.zero(chart) for _ in range(chart.dimension)]
        comps[index] = Polynomial.constant(chart, 1)
        return cls(chart, tuple(comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.chart, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "VectorField") -> "VectorField":
        self._check(other)
        return VectorField(self.chart, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, tuple(-a for a in self.components))

    def scale_by(self, f: Polynomial) -> "VectorField":
        return VectorField(self.chart, tuple(f * a for a in self.components))

    def _check(self, other: "VectorField"):
        if other.chart != self.chart:
            raise ChartMismatchError("vector fields on different charts")

    def apply(self, f: Polynomial) -> Polynomial:
        """Derivation on chart functions: X(f) = sum X^i df/dq^i."""
        acc = Polynomial.zero(self.chart)
        for name, comp in zip(self.chart.base, self.components):
            acc = acc + comp * f.diff(name)
        return acc

    def evaluate_seq(self, values) -> tuple[Fraction, ...]:
        return tuple(c.evaluate_seq(values) for c in self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class OneForm:
    """omega = sum omega_i dq^i with exact rational-function components."""

    chart: VariableSet
    components: tuple[RationalFunction, ...]

    def __post_init__(self):
        if len(self.components) != self.chart.dimension:
            raise VariableSetError("component count must equal the chart dimension")

    @classmethod
    def zero(cls, chart: VariableSet) -> "OneForm":
        return cls(chart, tuple(RationalFunction.zero(chart) for _ in range(chart.dimension)))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OneForm):
            return NotImplemented
        return self.chart == other.chart and all(
            a == b for a, b in zip(self.components, other.components)
        )

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


@dataclass(frozen=True)
class RationalVectorField:
    chart: VariableSet
    components: tuple[RationalFunction, ...]

    def as_vector_field(self) -> VectorField:
        comps = []
        for c in self.components:
            if not c.is_polynomial():
                raise MetricError("component has a genuine denominator")
            comps.append(c.num)
        return VectorField(self.chart, tuple(comps))

    def __eq__(self, other) -> bool:
        if isinstance(other, VectorField):
            other = RationalVectorField(
                other.chart, tuple(RationalFunction(c) for c in other.components)
            )
        if not isinstance(other, RationalVectorField):
            return NotImplemented
        return self.chart == other.chart and all(
            a == b for a, b in zip(self.components, other.components)
        )


@dataclass(frozen=True)
class SymTensor2:
    """Symmetric 2-tensor, covariant or contravariant, with polynomial entries."""

    chart: VariableSet
    kind: str
    entries: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        if self.kind not in ("covariant", "contravariant"):
            raise ValueError(f"unknown tensor kind {self.kind!r}")
        n = self.chart.dimension
        if len(self.entries) != n or any(len(row) != n for row in self.entries):
            raise VariableSetError("entry matrix must be n x n")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j].varset != self.chart:
                    raise ChartMismatchError("entry on a different chart")
                if self.entries[i][j] != self.entries[j][i]:
                    raise MetricError("entries must be symmetric")

    @classmethod
    def euclidean(cls, chart: VariableSet, kind: str = "contravariant") -> "SymTensor2":
        n = chart.dimension
        one = Polynomial.constant(chart, 1)
        zero = Polynomial.zero(chart)
        return cls(chart, kind, tuple(
            tuple(one if i == j else zero for j in range(n)) for i in range(n)
        ))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor2):
            return NotImplemented
        return (self.chart, self.kind, self.entries) == (other.chart, other.kind, other.entries)


def _fraction_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    acc = Fraction(0)
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = m[0][j] * _fraction_det(minor)
        acc += term if j % 2 == 0 else -term
    return acc


@dataclass(frozen=True)
class MetricData:
    """Cometric (required) plus optional covariant polynomial metric.

    Construction checks that metric*cometric is the identity when both are
    given, and that the cometric is positive-definite at every sample point
    (Sylvester minors over exact rationals).
    """

    cometric: SymTensor2
    metric: SymTensor2 | None = None
    sample_points: tuple[tuple[Fraction, ...], ...] = ()

    def __post_init__(self):
        if self.cometric.kind != "contravariant":
            raise MetricError("cometric must be contravariant")
        chart = self.cometric.chart
        if self.metric is not None:
            if self.metric.kind != "covariant":
                raise MetricError("metric must be covariant")
            if self.metric.chart != chart:
                raise ChartMismatchError("metric and cometric on different charts")
            prod = poly_mat_mul(self.metric.entries, self.cometric.entries)
            n = chart.dimension
            for i in range(n):
                for j in range(n):
                    expected = Fraction(1 if i == j else 0)
                    if prod[i][j] != Polynomial.constant(chart, expected):
                        raise MetricError("metric * cometric is not the identity")
        pts = self.sample_points
        if not pts:
            pts = ((Fraction(0),) * chart.dimension,)
            object.__setattr__(self, "sample_points", pts)
        for pt in pts:
            values = [[self.cometric.entries[i][j].evaluate_seq(pt)
                       for j in range(chart.dimension)] for i in range(chart.dimension)]
            for k in range(1, chart.dimension + 1):
                minor = [row[:k] for row in values[:k]]
                if _fraction_det(minor) <= 0:
                    raise MetricError(f"cometric not positive-definite at {pt}")

    @property
    def chart(self) -> VariableSet:
        return self.cometric.chart

    def rational_metric(self) -> list[list[RationalFunction]]:
        """Covariant metric, exactly: the polynomial one, else adjugate/det."""
        chart = self.chart
        if self.metric is not None:
            return [[RationalFunction(e) for e in row] for row in self.metric.entries]
        det = poly_det(self.cometric.entries)
        if det.is_zero():
            raise MetricError("cometric is degenerate: no covariant metric available")
        adj = poly_adjugate(self.cometric.entries)
        return [[RationalFunction(adj[i][j], det) for j in range(chart.dimension)]
                for i in range(chart.dimension)]


# ---------------------------------------------------------------------------
# lifts and brackets


def lie_bracket(x: VectorField, y: VectorField) -> VectorField:
    """[X, Y]^i = sum_j X^j dY^i/dq^j - Y^j dX^i/dq^j."""
    if x.chart != y.chart:
        raise ChartMismatchError("vector fields on different charts")
    comps = tuple(x.apply(yc) - y.apply(xc) for xc, yc in zip(x.components, y.components))
    return VectorField(x.chart, comps)


def cotangent_lift(x: VectorField, cot: VariableSet | None = None) -> Polynomial:
    """The fiber-linear function <p, X> on the cotangent chart."""
    cot = cot or x.chart.cotangent()
    acc = Polynomial.zero(cot)
    for comp, p_name in zip(x.components, cot.fiber):
        acc = acc + comp.rename(cot) * Polynomial.variable(cot, p_name)
    return acc


def sym_tensor_lift(s: SymTensor2, cot: VariableSet | None = None) -> Polynomial:
    """sum_ij S^ij p_i p_j for a contravariant symmetric tensor."""
    if s.kind != "contravariant":
        raise MetricError("only contravariant tensors lift to fiber polynomials")
    cot = cot or s.chart.cotangent()
    acc = Polynomial.zero(cot)
    n = s.chart.dimension
    for i in range(n):
        pi = Polynomial.variable(cot, cot.fiber[i])
        for j in range(n):
            if s.entries[i][j].is_zero():
                continue
            pj = Polynomial.variable(cot, cot.fiber[j])
            acc = acc + s.entries[i][j].rename(cot) * pi * pj
    return acc


def hamiltonian(m: MetricData, cot: VariableSet | None = None) -> Polynomial:
    """H_g = (1/2) <p, g_flat^{-1} p> = half the cometric lift."""
    return sym_tensor_lift(m.cometric, cot).scale(Fraction(1, 2))


def canonical_poisson(f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = sum_i df/dp_i dg/dq^i - df/dq^i dg/dp_i on a cotangent chart."""
    varset = f.varset
    if g.varset != varset:
        raise ChartMismatchError("bracket arguments on different charts")
    if not varset.has_fiber:
        raise VariableSetError("canonical bracket needs fiber variables")
    acc = Polynomial.zero(varset)
    for q_name, p_name in zip(varset.base, varset.fiber):
        acc = acc + f.diff(p_name) * g.diff(q_name) - f.diff(q_name) * g.diff(p_name)
    return acc


def lie_derivative(x: VectorField, t: SymTensor2) -> SymTensor2:
    """Lie derivative of a symmetric 2-tensor along a vector field.

    Contravariant case satisfies {X-lift, T-lift} = (L_X T)-lift exactly;
    covariant case is the dual Leibniz formula.
    """
    if x.chart != t.chart:
        raise ChartMismatchError("tensor and field on different charts")
    n = x.chart.dimension
    base = x.chart.base
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = x.apply(t.entries[i][j])
            for k in range(n):
                if t.kind == "contravariant":
                    acc = acc - t.entries[k][j] * x.components[i].diff(base[k])
                    acc = acc - t.entries[i][k] * x.components[j].diff(base[k])
                else:
                    acc = acc + t.entries[k][j] * x.components[k].diff(base[i])
                    acc = acc + t.entries[i][k] * x.components[k].diff(base[j])
            row.append(acc)
        entries.append(tuple(row))
    return SymTensor2(x.chart, t.kind, tuple(entries))


def musical_flat(v: VectorField, m: MetricData) -> OneForm:
    """(g_flat v)_i = sum_j g_ij v^j; needs the covariant polynomial metric."""
    if m.metric is None:
        raise MetricError("musical flat requires a covariant metric")
    if v.chart != m.chart:
        raise ChartMismatchError("field and metric on different charts")
    n = v.chart.dimension
    comps = []
    for i in range(n):
        acc = Polynomial.zero(v.chart)
        for j in range(n):
            acc = acc + m.metric.entries[i][j] * v.components[j]
        comps.append(RationalFunction(acc))
    return OneForm(v.chart, tuple(comps))


def musical_sharp(omega: OneForm, m: MetricData) -> RationalVectorField:
    """(g_sharp omega)^i = sum_j g^ij omega_j; rational components in general."""
    if omega.chart != m.chart:
        raise ChartMismatchError("form and metric on different charts")
    n = omega.chart.dimension
    comps = []
    for i in range(n):
        acc = RationalFunction.zero(omega.chart)
        for j in range(n):
            acc = acc + RationalFunction(m.cometric.entries[i][j]) * omega.components[j]
        comps.append(acc)
    return RationalVectorField(omega.chart, tuple(comps))
