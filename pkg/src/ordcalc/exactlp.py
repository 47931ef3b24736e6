"""Exact rational linear feasibility and vertex enumeration.

Systems are ``A_eq x = b_eq`` and ``A_ub x <= b_ub`` over ``Fraction``.
Equalities are removed by Gaussian elimination; the remaining inequalities
are decided by Fourier-Motzkin elimination with duplicate pruning, or by a
phase-one simplex with Bland's rule when elimination grows too large.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]

FM_VARIABLE_LIMIT = 40
FM_ROW_LIMIT = 4000


class EnumerationLimit(RuntimeError):
    pass


@dataclass
class LinearSystem:
    n: int
    eq: list[tuple[Vector, Fraction]] = field(default_factory=list)
    ub: list[tuple[Vector, Fraction]] = field(default_factory=list)

    def _row(self, coeffs: dict[int, int | Fraction] | Sequence) -> Vector:
        if isinstance(coeffs, dict):
            row = [Fraction(0)] * self.n
            for k, v in coeffs.items():
                row[k] += Fraction(v)
            return tuple(row)
        if len(coeffs) != self.n:
            raise ValueError("row length does not match the number of variables")
        return tuple(Fraction(v) for v in coeffs)

    def add_eq(self, coeffs, rhs=0) -> None:
        self.eq.append((self._row(coeffs), Fraction(rhs)))

    def add_le(self, coeffs, rhs=0) -> None:
        self.ub.append((self._row(coeffs), Fraction(rhs)))

    def add_ge(self, coeffs, rhs=0) -> None:
        row = self._row(coeffs)
        self.ub.append((tuple(-v for v in row), -Fraction(rhs)))

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        dot = lambda r: sum((a * b for a, b in zip(r, x)), Fraction(0))  # noqa: E731
        return all(dot(r) == b for r, b in self.eq) and all(dot(r) <= b for r, b in self.ub)


@dataclass
class _Reduced:
    """``x = base + basis @ y`` with inequalities ``G y <= h`` on the free variables ``y``."""

    base: Vector
    basis: list[Vector]  # one column per free variable, stored as rows of length n
    rows: list[tuple[Vector, Fraction]]

    @property
    def k(self) -> int:
        return len(self.basis)

    def lift(self, y: Sequence[Fraction]) -> Vector:
        out = list(self.base)
        for coeff, col in zip(y, self.basis):
            if coeff:
                for i, v in enumerate(col):
                    out[i] += coeff * v
        return tuple(out)


def _reduce(sys: LinearSystem) -> _Reduced | None:
    n = sys.n
    rows = [list(r) + [b] for r, b in sys.eq]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for row in rows[r:]:
        if row[n] != 0:
            return None
    free = [c for c in range(n) if c not in pivots]
    base = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        base[c] = rows[i][n]
    basis = []
    for f in free:
        col = [Fraction(0)] * n
        col[f] = Fraction(1)
        for i, c in enumerate(pivots):
            col[c] = -rows[i][f]
        basis.append(tuple(col))
    red = []
    for coeffs, b in sys.ub:
        g = tuple(sum((a * v for a, v in zip(coeffs, col)), Fraction(0)) for col in basis)
        h = b - sum((a * v for a, v in zip(coeffs, base)), Fraction(0))
        red.append((g, h))
    return _Reduced(tuple(base), basis, red)


def _normalise(g: Vector, h: Fraction) -> tuple[Vector, Fraction]:
    lead = next((abs(v) for v in g if v != 0), None)
    if lead is None:
        return g, h
    return tuple(v / lead for v in g), h / lead


def _prune(rows: list[tuple[Vector, Fraction, frozenset]], eliminated: int) -> list[tuple[Vector, Fraction, frozenset]]:
    """Drop rows combining more than ``eliminated + 1`` originals (they are
    redundant) and rows beaten by a parallel row on both bound and origin set."""
    groups: dict[Vector, list[tuple[Fraction, frozenset]]] = {}
    for g, h, src in rows:
        if len(src) > eliminated + 1:
            continue
        kept = groups.setdefault(g, [])
        if any(h2 <= h and s2 <= src for h2, s2 in kept):
            continue
        kept[:] = [(h2, s2) for h2, s2 in kept if not (h <= h2 and src <= s2)]
        kept.append((h, src))
    return [(g, h, src) for g, kept in groups.items() for h, src in kept]


def _fourier_motzkin(k: int, rows: list[tuple[Vector, Fraction]]) -> list[Fraction] | None:
    stages: list[list[tuple[Vector, Fraction, frozenset]]] = [[] for _ in range(k)]
    cur = _prune([(*_normalise(g, h), frozenset([i])) for i, (g, h) in enumerate(rows)], 0)
    for t, j in enumerate(range(k - 1, -1, -1)):
        stages[j] = cur
        pos = [r for r in cur if r[0][j] > 0]
        neg = [r for r in cur if r[0][j] < 0]
        nxt = [r for r in cur if r[0][j] == 0]
        for gp, hp, sp in pos:
            for gn, hn, sn in neg:
                a, b = gp[j], -gn[j]
                g = tuple(b * x + a * y for x, y in zip(gp, gn))
                nxt.append((*_normalise(g, b * hp + a * hn), sp | sn))
        cur = _prune(nxt, t + 1)
        if len(cur) > FM_ROW_LIMIT:
            raise EnumerationLimit("Fourier-Motzkin row limit exceeded")
    if any(h < 0 for _, h, _ in cur):
        return None
    y = [Fraction(0)] * k
    for j in range(k):
        lo, hi = None, None
        for g, h, _ in stages[j]:
            if g[j] == 0:
                continue
            rest = h - sum((g[i] * y[i] for i in range(j)), Fraction(0))
            bound = rest / g[j]
            if g[j] > 0:
                hi = bound if hi is None else min(hi, bound)
            else:
                lo = bound if lo is None else max(lo, bound)
        if lo is not None:
            y[j] = lo
        elif hi is not None:
            y[j] = min(hi, Fraction(0))
        if lo is not None and hi is not None and lo > hi:
            raise AssertionError("Fourier-Motzkin back-substitution found an empty interval")
    return y


def _simplex_phase_one(k: int, rows: list[tuple[Vector, Fraction]]) -> list[Fraction] | None:
    """Feasibility of ``G y <= h`` with ``y`` free, via ``y = p - q`` and slacks."""
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * k
    # columns: p (k), q (k), slack (m), artificial (m)
    width = 2 * k + 2 * m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    for i, (g, h) in enumerate(rows):
        row = [Fraction(0)] * (width + 1)
        sign = -1 if h < 0 else 1
        for j in range(k):
            row[j] = sign * g[j]
            row[k + j] = -sign * g[j]
        row[2 * k + i] = Fraction(sign)
        row[2 * k + m + i] = Fraction(1)
        row[width] = sign * h
        tab.append(row)
        basis.append(2 * k + m + i)
    # objective: minimise the sum of artificials, kept as reduced costs
    cost = [Fraction(0)] * (width + 1)
    for row in tab:
        for j in range(width + 1):
            cost[j] -= row[j]
    for i in range(m):
        cost[2 * k + m + i] += 1
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i, row in enumerate(tab):
            if row[enter] > 0:
                ratio = row[width] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise AssertionError("phase-one objective is bounded below by zero")
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, tab[leave])]
        basis[leave] = enter
    if cost[width] != 0:
        return None
    vals = [Fraction(0)] * width
    for i, j in enumerate(basis):
        vals[j] = tab[i][width]
    return [vals[j] - vals[k + j] for j in range(k)]


def feasible_point(sys: LinearSystem, method: str = "auto") -> Vector | None:
    """Some solution of the system, or ``None`` if it is infeasible."""
    red = _reduce(sys)
    if red is None:
        return None
    if method not in ("auto", "fm", "simplex"):
        raise ValueError(f"unknown method {method!r}")
    y = None
    use_fm = method == "fm" or (method == "auto" and red.k <= FM_VARIABLE_LIMIT)
    if use_fm:
        try:
            y = _fourier_motzkin(red.k, red.rows)
            solved = True
        except EnumerationLimit:
            if method == "fm":
                raise
            solved = False
        if not solved:
            y = _simplex_phase_one(red.k, red.rows)
    else:
        y = _simplex_phase_one(red.k, red.rows)
    if y is None:
        return None
    x = red.lift(y)
    if not sys.satisfied_by(x):
        raise AssertionError("solver returned a point outside the system")
    return x


def _solve_square(mat: list[Vector], rhs: list[Fraction]) -> list[Fraction] | None:
    k = len(mat)
    rows = [list(r) + [b] for r, b in zip(mat, rhs)]
    for c in range(k):
        p = next((i for i in range(c, k) if rows[i][c] != 0), None)
        if p is None:
            return None
        rows[c], rows[p] = rows[p], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [v * inv for v in rows[c]]
        for i in range(k):
            if i != c and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return [rows[i][k] for i in range(k)]


def vertices(sys: LinearSystem, limit: int = 200_000) -> list[Vector]:
    """Extreme points of the feasible set, sorted; the set must be pointed."""
    red = _reduce(sys)
    if red is None:
        return []
    k = red.k
    rows = list(dict.fromkeys(_normalise(g, h) for g, h in red.rows))
    if k == 0:
        return [red.base] if all(h >= 0 for _, h in rows) else []
    found: set[Vector] = set()
    for count, combo in enumerate(itertools.combinations(range(len(rows)), k)):
        if count >= limit:
            raise EnumerationLimit("too many active sets to enumerate vertices")
        y = _solve_square([rows[i][0] for i in combo], [rows[i][1] for i in combo])
        if y is None:
            continue
        if all(sum((a * b for a, b in zip(g, y)), Fraction(0)) <= h for g, h in rows):
            found.add(red.lift(y))
    return sorted(found)
