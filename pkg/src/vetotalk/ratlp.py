"""Exact rational linear programming over half-space systems.

Polytopes are given as ``A x <= b`` with Fraction entries and free variables.
The solver is a two-phase tableau simplex with Bland's rule, so it never
cycles and identical inputs yield bit-identical outputs.  Optimal outcomes
carry a dual certificate (multipliers on the rows), infeasible outcomes a
Farkas certificate; both can be re-verified exactly with the helpers at the
bottom of the module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import DimensionMismatch

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value) -> Fraction:
    """Coerce an int or a string like '-110/3' into an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def vec(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(rat(v) for v in values)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


@dataclass(frozen=True)
class AffineFn:
    """coeffs . x + constant over the ambient decision space."""

    coeffs: tuple[Fraction, ...]
    constant: Fraction = ZERO

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        if len(x) != len(self.coeffs):
            raise DimensionMismatch(
                f"point of length {len(x)} for affine function of arity {len(self.coeffs)}"
            )
        return dot(self.coeffs, x) + self.constant

    def scaled(self, factor: Fraction) -> "AffineFn":
        f = rat(factor)
        return AffineFn(tuple(c * f for c in self.coeffs), self.constant * f)

    def minus(self, other: "AffineFn") -> "AffineFn":
        return AffineFn(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)),
            self.constant - other.constant,
        )


def affine(coeffs: Iterable, constant=0) -> AffineFn:
    return AffineFn(vec(coeffs), rat(constant))


def combine(weights: Sequence[Fraction], fns: Sequence[AffineFn]) -> AffineFn:
    """Weighted sum sum_k w_k f_k of affine functions."""
    if len(weights) != len(fns):
        raise DimensionMismatch("one weight per affine function required")
    n = len(fns[0].coeffs)
    coeffs = [ZERO] * n
    constant = ZERO
    for w, f in zip(weights, fns):
        if w == 0:
            continue
        for i, c in enumerate(f.coeffs):
            coeffs[i] += w * c
        constant += w * f.constant
    return AffineFn(tuple(coeffs), constant)


@dataclass(frozen=True)
class Polytope:
    """Half-space system {x : normal . x <= rhs for every row}."""

    dim: int
    rows: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        for normal, _ in self.rows:
            if len(normal) != self.dim:
                raise DimensionMismatch(
                    f"row of length {len(normal)} in polytope of dimension {self.dim}"
                )

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.dim:
            raise DimensionMismatch("point dimension does not match polytope")
        return all(dot(a, x) <= b for a, b in self.rows)

    def with_rows(self, extra) -> "Polytope":
        return Polytope(self.dim, self.rows + tuple((vec(a), rat(b)) for a, b in extra))

    def with_equality(self, fn: AffineFn, value) -> "Polytope":
        """Intersect with {x : fn(x) == value}, stored as two inequalities."""
        rhs = rat(value) - fn.constant
        neg = tuple(-c for c in fn.coeffs)
        return self.with_rows([(fn.coeffs, rhs), (neg, -rhs)])


def polytope(dim: int, rows: Iterable) -> Polytope:
    return Polytope(dim, tuple((vec(a), rat(b)) for a, b in rows))


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    point: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    certificate: Optional[tuple[Fraction, ...]] = None


# ---------------------------------------------------------------------------
# simplex core


def _pivot(rows, obj, basis, r, c):
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        inv = ONE / piv
        prow = [v * inv for v in prow]
        rows[r] = prow
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [a - f * b for a, b in zip(row, prow)]
    if obj[c] != 0:
        f = obj[c]
        obj[:] = [a - f * b for a, b in zip(obj, prow)]
    basis[r] = c


def _bland(rows, obj, basis, ncols):
    """Pivot to optimality over the first ncols columns (Bland's rule).

    Returns None at optimality, or the index of an entering column whose
    ratio test found no blocking row (an unbounded improving ray).
    """
    while True:
        enter = -1
        for j in range(ncols):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return None
        leave = -1
        best = None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return enter
        _pivot(rows, obj, basis, leave, enter)


def _solve_raw(P: Polytope, coeffs: Sequence[Fraction]):
    """Two-phase simplex for max coeffs.x over P.

    Returns (status, point, value-without-constant, duals).  Free variables
    are split as x = u - w; the slack reduced costs of the final tableau give
    the row multipliers directly.
    """
    n = P.dim
    m = len(P.rows)
    nu, nw = n, n
    nslack = m
    nstruct = nu + nw + nslack
    nart = m

    rows = []
    for i, (a, b) in enumerate(P.rows):
        d = ONE if b >= 0 else -ONE
        row = [d * v for v in a] + [-d * v for v in a] + [ZERO] * (nslack + nart) + [d * b]
        row[nu + nw + i] = d
        row[nu + nw + nslack + i] = ONE
        rows.append(row)
    basis = [nstruct + i for i in range(m)]

    # phase 1: maximise -(sum of artificials); reduced costs with the
    # all-artificial basis are the negated column sums.
    obj = [ZERO] * (nstruct + nart + 1)
    for j in range(nstruct):
        obj[j] = -sum((row[j] for row in rows), ZERO)
    obj[-1] = -sum((row[-1] for row in rows), ZERO)

    _bland(rows, obj, basis, nstruct)
    if obj[-1] != 0:
        duals = tuple(obj[nu + nw + i] for i in range(m))
        return LpStatus.INFEASIBLE, None, None, duals

    # drive leftover artificials out of the basis; rows that cannot release
    # one are linearly dependent and stay parked on their zero artificial.
    for r in range(m):
        if basis[r] >= nstruct:
            for c in range(nstruct):
                if rows[r][c] != 0:
                    _pivot(rows, obj, basis, r, c)
                    break

    # phase 2: reduced costs of the real objective under the current basis
    cost = [ZERO] * (nstruct + nart)
    for j in range(n):
        cost[j] = coeffs[j]
        cost[nu + j] = -coeffs[j]
    obj = [-cost[j] for j in range(nstruct + nart)] + [ZERO]
    for r in range(m):
        f = cost[basis[r]]
        if f != 0:
            obj = [o + f * v for o, v in zip(obj, rows[r])]

    ray = _bland(rows, obj, basis, nstruct)
    if ray is not None:
        return LpStatus.UNBOUNDED, None, None, None

    x = [ZERO] * n
    for r in range(m):
        j = basis[r]
        if j < nu:
            x[j] += rows[r][-1]
        elif j < nu + nw:
            x[j - nu] -= rows[r][-1]
    duals = tuple(obj[nu + nw + i] for i in range(m))
    return LpStatus.OPTIMAL, tuple(x), obj[-1], duals


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def solve_linear_system(mat, rhs) -> Optional[tuple[Fraction, ...]]:
    """Solve a square rational system exactly; None if singular."""
    n = len(mat)
    aug = [list(row) + [r] for row, r in zip(mat, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            return None
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [v / pv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(aug[i][-1] for i in range(n))


def _nullspace_vector(mat, n) -> Optional[tuple[Fraction, ...]]:
    """A nonzero kernel vector of the row system, or None if full rank."""
    rows = [list(r) for r in mat]
    pivots = []
    r = 0
    for c in range(n):
        if r == len(rows):
            break
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    pivot_cols = set(pivots)
    free = next((c for c in range(n) if c not in pivot_cols), None)
    if free is None:
        return None
    d = [ZERO] * n
    d[free] = ONE
    for ri, c in enumerate(pivots):
        d[c] = -rows[ri][free]
    return tuple(d)


def _purify(P: Polytope, x) -> tuple[Fraction, ...]:
    """Walk from x to a vertex of P without leaving it.

    Repeatedly moves along a kernel direction of the tight rows until the
    tight system has full rank.  If P contains a line the walk stops where
    no row blocks either direction.
    """
    x = list(x)
    while True:
        tight = [a for a, b in P.rows if dot(a, x) == b]
        d = _nullspace_vector(tight, P.dim)
        if d is None:
            return tuple(x)
        moved = False
        for direction in (d, tuple(-v for v in d)):
            step = None
            for a, b in P.rows:
                s = dot(a, direction)
                if s > 0:
                    t = (b - dot(a, x)) / s
                    if step is None or t < step:
                        step = t
            if step is not None:
                x = [xi + step * di for xi, di in zip(x, direction)]
                moved = True
                break
        if not moved:
            return tuple(x)


# ---------------------------------------------------------------------------
# public operations


def _check_objective(obj: AffineFn, P: Polytope):
    if len(obj.coeffs) != P.dim:
        raise DimensionMismatch(
            f"objective arity {len(obj.coeffs)} for polytope of dimension {P.dim}"
        )


def maximize(obj: AffineFn, P: Polytope) -> LpOutcome:
    """Exact maximum of obj over P; the reported point is a vertex when P is bounded."""
    _check_objective(obj, P)
    status, point, value, duals = _solve_raw(P, obj.coeffs)
    if status is LpStatus.INFEASIBLE:
        return LpOutcome(LpStatus.INFEASIBLE, certificate=duals)
    if status is LpStatus.UNBOUNDED:
        return LpOutcome(LpStatus.UNBOUNDED)
    face = P.with_equality(obj, value + obj.constant)
    vertex = _purify(face, point)
    return LpOutcome(LpStatus.OPTIMAL, vertex, value + obj.constant, duals)


def feasible(P: Polytope) -> LpOutcome:
    """Feasibility check: a vertex of P, or a Farkas certificate."""
    return maximize(AffineFn((ZERO,) * P.dim), P)


def lex_maximize(primary: AffineFn, secondary: AffineFn, P: Polytope) -> LpOutcome:
    """Maximise secondary over the primary-optimal face of P.

    The reported value and certificate are those of the primary stage, so the
    outcome satisfies the same exactness contract as maximize(primary, P).
    """
    _check_objective(primary, P)
    _check_objective(secondary, P)
    first = maximize(primary, P)
    if first.status is not LpStatus.OPTIMAL:
        return first
    face = P.with_equality(primary, first.value)
    second = maximize(secondary, face)
    if second.status is not LpStatus.OPTIMAL:
        raise AssertionError("optimal face of a solved LP cannot be empty or unbounded")
    return LpOutcome(LpStatus.OPTIMAL, second.point, first.value, first.certificate)


def is_bounded(P: Polytope) -> bool:
    """True iff every coordinate is bounded above and below on P (P may be empty)."""
    for i in range(P.dim):
        for sign in (ONE, -ONE):
            coeffs = [ZERO] * P.dim
            coeffs[i] = sign
            out = maximize(AffineFn(tuple(coeffs)), P)
            if out.status is LpStatus.UNBOUNDED:
                return False
            if out.status is LpStatus.INFEASIBLE:
                return True
    return True


# ---------------------------------------------------------------------------
# certificate verification (used by the test suite)


def check_optimal_certificate(P: Polytope, obj: AffineFn, out: LpOutcome) -> bool:
    """Exact optimality check: primal feasibility, dual feasibility,
    matching values and complementary slackness."""
    if out.status is not LpStatus.OPTIMAL or out.point is None or out.certificate is None:
        return False
    x, y = out.point, out.certificate
    if not P.contains(x):
        return False
    if obj(x) != out.value:
        return False
    if any(yi < 0 for yi in y):
        return False
    for j in range(P.dim):
        if sum((y[i] * P.rows[i][0][j] for i in range(len(P.rows))), ZERO) != obj.coeffs[j]:
            return False
    if sum((y[i] * P.rows[i][1] for i in range(len(P.rows))), ZERO) + obj.constant != out.value:
        return False
    for i, (a, b) in enumerate(P.rows):
        if y[i] > 0 and dot(a, x) != b:
            return False
    return True


def check_farkas_certificate(P: Polytope, cert: Sequence[Fraction]) -> bool:
    """The combination sum_i y_i row_i must be exactly 0 . x <= negative."""
    if cert is None or len(cert) != len(P.rows) or any(yi < 0 for yi in cert):
        return False
    for j in range(P.dim):
        if sum((cert[i] * P.rows[i][0][j] for i in range(len(P.rows))), ZERO) != 0:
            return False
    return sum((cert[i] * P.rows[i][1] for i in range(len(P.rows))), ZERO) < 0
