"""Isomorphism search between finite W-semigroups.

Elements are first separated by refined invariants (down-set sizes, the
shape of their multiples, and how they add against every invariant class).
When every class is a singleton the bijection is read off directly; otherwise
a backtracking search propagates forced values through the addition table.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .wstruct import WSemigroup


@dataclass(frozen=True)
class IsoResult:
    mapping: tuple[int, ...] | None
    method: str  # "canonical", "search" or "invariants"

    def __bool__(self) -> bool:
        return self.mapping is not None


def is_isomorphism(s: WSemigroup, t: WSemigroup, mapping) -> bool:
    """``mapping`` is a bijection preserving zero, addition and ``prec`` both ways."""
    f = np.asarray(mapping, dtype=np.intp)
    if s.n != t.n or f.shape != (s.n,) or len(set(f.tolist())) != s.n:
        return False
    if int(f[s.zero]) != t.zero:
        return False
    if not np.array_equal(f[s.add], t.add[f[:, None], f[None, :]]):
        return False
    return bool(np.array_equal(s.prec.bits, t.prec.bits[f[:, None], f[None, :]]))


def _invariants(s: WSemigroup, rounds: int = 3) -> list:
    P = s.prec.bits
    sig = [
        (
            a == s.zero,
            int(P[:, a].sum()),
            int(P[a, :].sum()),
            bool(P[a, a]),
            len(s.multiples(a)),
        )
        for a in range(s.n)
    ]
    for _ in range(rounds):
        keys = {v: i for i, v in enumerate(sorted(set(sig)))}
        col = [keys[v] for v in sig]
        sig = [
            (
                col[a],
                tuple(sorted(Counter((col[b], col[int(s.add[a, b])], bool(P[a, b]), bool(P[b, a])) for b in range(s.n)).items())),
            )
            for a in range(s.n)
        ]
    keys = {v: i for i, v in enumerate(sorted(set(sig)))}
    return [keys[v] for v in sig], sorted(set(sig))


def find_isomorphism(s: WSemigroup, t: WSemigroup, limit: int = 200_000) -> IsoResult:
    if s.n != t.n:
        return IsoResult(None, "invariants")
    cs, ks = _invariants(s)
    ct, kt = _invariants(t)
    if ks != kt or sorted(cs) != sorted(ct):
        return IsoResult(None, "invariants")
    classes_t: dict[int, list[int]] = {}
    for b, c in enumerate(ct):
        classes_t.setdefault(c, []).append(b)
    if all(len(v) == 1 for v in classes_t.values()):
        f = tuple(classes_t[cs[a]][0] for a in range(s.n))
        return IsoResult(f if is_isomorphism(s, t, f) else None, "canonical")

    order = sorted(range(s.n), key=lambda a: (len(classes_t[cs[a]]), a))
    f = [-1] * s.n
    used = [False] * t.n
    budget = [limit]

    def assign(a: int, b: int, trail: list[int]) -> bool:
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            if f[x] == y:
                continue
            if f[x] != -1 or used[y] or ct[y] != cs[x]:
                return False
            f[x] = y
            used[y] = True
            trail.append(x)
            for z in range(s.n):
                if f[z] == -1:
                    continue
                if bool(s.prec.bits[x, z]) != bool(t.prec.bits[y, f[z]]) or bool(s.prec.bits[z, x]) != bool(t.prec.bits[f[z], y]):
                    return False
                stack.append((int(s.add[x, z]), int(t.add[y, f[z]])))
        return True

    def undo(trail: list[int]) -> None:
        for x in trail:
            used[f[x]] = False
            f[x] = -1

    def search(i: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise RuntimeError("isomorphism search budget exhausted")
        while i < len(order) and f[order[i]] != -1:
            i += 1
        if i == len(order):
            return True
        a = order[i]
        for b in classes_t[cs[a]]:
            if used[b]:
                continue
            trail: list[int] = []
            if assign(a, b, trail) and search(i + 1):
                return True
            undo(trail)
        return False

    trail0: list[int] = []
    if not assign(s.zero, t.zero, trail0):
        return IsoResult(None, "search")
    if search(0) and is_isomorphism(s, t, f):
        return IsoResult(tuple(f), "search")
    return IsoResult(None, "search")
