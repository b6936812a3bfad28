"""Exact feasibility of linear systems by Fourier-Motzkin elimination.

A constraint is coeffs . x + const REL 0 with REL one of ">=", ">",
"==".  Equalities are removed by substitution, inequalities by pairing
lower against upper bounds; strictness propagates through the pairing.
Systems here are tiny (a handful of variables), so the doubly
exponential worst case of the method never bites.
"""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from .scalar import S0, Scalar

Vec = tuple[Scalar, ...]

GE = ">="
GT = ">"
EQ = "=="


class Constraint(NamedTuple):
    coeffs: Vec
    const: Scalar
    rel: str


def con(coeffs: Sequence, const, rel: str = GE) -> Constraint:
    if rel not in (GE, GT, EQ):
        raise ValueError(f"unknown relation {rel!r}")
    return Constraint(tuple(Scalar.coerce(c) for c in coeffs), Scalar.coerce(const), rel)


def ge(coeffs, const=0) -> Constraint:
    return con(coeffs, const, GE)


def gt(coeffs, const=0) -> Constraint:
    return con(coeffs, const, GT)


def eq(coeffs, const=0) -> Constraint:
    return con(coeffs, const, EQ)


def evaluate(c: Constraint, x: Sequence[Scalar]) -> Scalar:
    acc = c.const
    for a, v in zip(c.coeffs, x):
        acc = acc + a * v
    return acc


def satisfies(c: Constraint, x: Sequence[Scalar]) -> bool:
    s = evaluate(c, x).sign()
    if c.rel == EQ:
        return s == 0
    if c.rel == GT:
        return s > 0
    return s >= 0


def _drop_var(c: Constraint, j: int) -> Vec:
    return c.coeffs[:j] + c.coeffs[j + 1 :]


def _substituted(c: Constraint, j: int, pivot: Constraint) -> Constraint:
    """Eliminate x_j from c using the equality pivot (pivot.coeffs[j] != 0).

    From the pivot, x_j = -(rest . x + const) / p; plugging in keeps c
    linear in the remaining variables.
    """
    f = c.coeffs[j] / pivot.coeffs[j]
    coeffs = tuple(a - f * b for a, b in zip(_drop_var(c, j), _drop_var(pivot, j)))
    return Constraint(coeffs, c.const - f * pivot.const, c.rel)


def _choose_value(lowers, uppers) -> Scalar:
    """A value of x_j given evaluated (bound, strict) pairs; assumes consistency."""
    lo = max((v for v, _ in lowers), default=None)
    up = min((v for v, _ in uppers), default=None)
    if lo is not None and up is not None:
        if lo == up:
            return lo  # both bounds non-strict here, or the caller's FM step lied
        return (lo + up) / Scalar(2)
    if lo is not None:
        return lo + Scalar(1)
    if up is not None:
        return up - Scalar(1)
    return S0


def _solve(cons: list[Constraint], nvars: int) -> Optional[list[Scalar]]:
    live = []
    for c in cons:
        if all(a.is_zero() for a in c.coeffs):
            if not satisfies(c, ()):
                return None
        else:
            live.append(c)
    if nvars == 0:
        return []
    j = nvars - 1
    zero = [c for c in live if c.coeffs[j].is_zero()]
    active = [c for c in live if not c.coeffs[j].is_zero()]
    pivot = next((c for c in active if c.rel == EQ), None)
    if pivot is not None:
        reduced = zero + [_substituted(c, j, pivot) for c in active if c is not pivot]
        sol = _solve(reduced, nvars - 1)
        if sol is None:
            return None
        # back out x_j from the pivot equality
        rest = evaluate(Constraint(_drop_var(pivot, j), pivot.const, EQ), sol)
        sol.append(-rest / pivot.coeffs[j])
        return sol
    lowers = [c for c in active if c.coeffs[j].sign() > 0]  # x_j >= -(rest)/a
    uppers = [c for c in active if c.coeffs[j].sign() < 0]
    combined = list(zero)
    for lo in lowers:
        for up in uppers:
            # scale so the x_j terms cancel; positive scaling keeps direction
            fl, fu = lo.coeffs[j].inv(), (-up.coeffs[j]).inv()
            coeffs = tuple(fl * a + fu * b for a, b in zip(_drop_var(lo, j), _drop_var(up, j)))
            const = fl * lo.const + fu * up.const
            rel = GT if GT in (lo.rel, up.rel) else GE
            combined.append(Constraint(coeffs, const, rel))
    sol = _solve(combined, nvars - 1)
    if sol is None:
        return None

    def bound(c: Constraint) -> tuple[Scalar, bool]:
        rest = evaluate(Constraint(_drop_var(c, j), c.const, c.rel), sol)
        return -rest / c.coeffs[j], c.rel == GT

    # the combined system already forced every lower bound below every
    # upper bound (strictly when either side is strict), so any value in
    # the gap works; _choose_value picks the midpoint
    sol.append(_choose_value([bound(c) for c in lowers], [bound(c) for c in uppers]))
    return sol


def find_point(cons: Sequence[Constraint], nvars: int) -> Optional[Vec]:
    """An exact point satisfying every constraint, or None if infeasible."""
    for c in cons:
        if len(c.coeffs) != nvars:
            raise ValueError(f"constraint arity {len(c.coeffs)} != {nvars}")
    sol = _solve(list(cons), nvars)
    if sol is None:
        return None
    return tuple(sol)


def feasible(cons: Sequence[Constraint], nvars: int) -> bool:
    return find_point(cons, nvars) is not None


def implied_equality(cons: Sequence[Constraint], which: int, nvars: int) -> bool:
    """True when constraint `which` (a >= row) holds with equality on the
    whole solution set of the system."""
    c = cons[which]
    strict = Constraint(c.coeffs, c.const, GT)
    probe = [strict if i == which else other for i, other in enumerate(cons)]
    return not feasible(probe, nvars)
