"""Relation algebra on finite carriers.

A relation on ``{0, ..., n-1}`` is an immutable ``n x n`` boolean matrix.
Entry ``(a, b)`` is set when ``a`` is related to ``b``.  Closures iterate to a
fixpoint with an explicit round cap; the cap only exists to catch bugs since
every operator here is monotone on a finite lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import TYPE_CHECKING, Iterable, Iterator, Protocol

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray


class HasAddition(Protocol):
    """Anything carrying an ``n x n`` addition table of indices."""

    @property
    def add(self) -> NDArray[np.intp]: ...


class SizeMismatch(ValueError):
    """Two relations (or a relation and a monoid) live on different carriers."""


class FixpointCapExceeded(RuntimeError):
    """A closure loop ran past its round cap."""


def _bool_matmul(x: NDArray[np.bool_], y: NDArray[np.bool_]) -> NDArray[np.bool_]:
    # float32 counts stay exact far beyond any carrier we accept
    return (x.astype(np.float32) @ y.astype(np.float32)) > 0.5


@dataclass(frozen=True, eq=False)
class Relation:
    """Binary relation stored as a read-only boolean matrix."""

    bits: NDArray[np.bool_]

    def __post_init__(self) -> None:
        arr = np.array(self.bits, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"relation matrix must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    # construction -------------------------------------------------------
    @classmethod
    def empty(cls, n: int) -> Relation:
        return cls(np.zeros((n, n), dtype=bool))

    @classmethod
    def identity(cls, n: int) -> Relation:
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> Relation:
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Relation:
        arr = np.zeros((n, n), dtype=bool)
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"pair {(a, b)} out of range for carrier of size {n}")
            arr[a, b] = True
        return cls(arr)

    @classmethod
    def from_predicate(cls, n: int, pred) -> Relation:
        return cls(np.array([[bool(pred(a, b)) for b in range(n)] for a in range(n)], dtype=bool))

    # basic access -------------------------------------------------------
    @property
    def size(self) -> int:
        return int(self.bits.shape[0])

    def pairs(self) -> list[tuple[int, int]]:
        rows, cols = np.nonzero(self.bits)
        return [(int(a), int(b)) for a, b in zip(rows, cols)]

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __contains__(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return bool(self.bits[a, b])

    def down(self, b: int) -> NDArray[np.intp]:
        """Indices ``a`` with ``(a, b)`` in the relation."""
        return np.flatnonzero(self.bits[:, b])

    def up(self, a: int) -> NDArray[np.intp]:
        """Indices ``b`` with ``(a, b)`` in the relation."""
        return np.flatnonzero(self.bits[a, :])

    # lattice operations -------------------------------------------------
    def _check(self, other: Relation) -> None:
        if self.size != other.size:
            raise SizeMismatch(f"carrier sizes differ: {self.size} vs {other.size}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.size, self.bits.tobytes()))

    def __le__(self, other: Relation) -> bool:
        self._check(other)
        return not bool(np.any(self.bits & ~other.bits))

    def __ge__(self, other: Relation) -> bool:
        return other <= self

    def __or__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.bits | other.bits)

    def __and__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.bits & other.bits)

    def __sub__(self, other: Relation) -> Relation:
        self._check(other)
        return Relation(self.bits & ~other.bits)

    def transpose(self) -> Relation:
        return Relation(self.bits.T)

    def first_outside(self, other: Relation) -> tuple[int, int] | None:
        """Lexicographically least pair of ``self`` missing from ``other``."""
        self._check(other)
        rows, cols = np.nonzero(self.bits & ~other.bits)
        if rows.size == 0:
            return None
        return int(rows[0]), int(cols[0])

    # predicates ---------------------------------------------------------
    def is_reflexive(self) -> bool:
        return bool(np.all(np.diag(self.bits)))

    def is_transitive(self) -> bool:
        return compose(self, self) <= self

    def is_dense(self) -> bool:
        return self <= compose(self, self)

    def is_preorder(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def is_antisymmetric(self) -> bool:
        both = self.bits & self.bits.T
        return bool(np.array_equal(both, both & np.eye(self.size, dtype=bool)))

    def __repr__(self) -> str:
        return f"Relation(n={self.size}, pairs={self.pairs()})"


def compose(r1: Relation, r2: Relation) -> Relation:
    """``(a, b)`` is in the result iff ``a r1 c`` and ``c r2 b`` for some ``c``."""
    r1._check(r2)
    return Relation(_bool_matmul(r1.bits, r2.bits))


def compose_all(*rels: Relation) -> Relation:
    return reduce(compose, rels)


def preorder_closure(r: Relation) -> Relation:
    """Smallest preorder containing ``r`` (reflexive-transitive closure)."""
    n = r.size
    cur = r.bits | np.eye(n, dtype=bool)
    for _ in range(max(1, n * n)):
        nxt = _bool_matmul(cur, cur)
        if np.array_equal(nxt, cur):
            return Relation(cur)
        cur = nxt
    raise FixpointCapExceeded("preorder closure did not stabilise")


def _check_monoid(r: Relation, m: HasAddition) -> NDArray[np.intp]:
    add = np.asarray(m.add)
    if add.shape != (r.size, r.size):
        raise SizeMismatch(f"relation of size {r.size} used with monoid of size {add.shape[0]}")
    return add


def relation_sum(r1: Relation, r2: Relation, m: HasAddition) -> Relation:
    """All ``(a + a', b + b')`` with ``(a, b)`` in ``r1`` and ``(a', b')`` in ``r2``."""
    r1._check(r2)
    add = _check_monoid(r1, m)
    a1, b1 = np.nonzero(r1.bits)
    a2, b2 = np.nonzero(r2.bits)
    out = np.zeros_like(r1.bits)
    if a1.size and a2.size:
        out[add[a1[:, None], a2[None, :]], add[b1[:, None], b2[None, :]]] = True
    return Relation(out)


def additive_closure(r: Relation, m: HasAddition) -> Relation:
    """Least relation containing ``r`` and closed under ``+``."""
    _check_monoid(r, m)
    cur = r
    for _ in range(max(1, r.size * r.size) + 1):
        nxt = cur | relation_sum(cur, cur, m)
        if nxt == cur:
            return cur
        cur = nxt
    raise FixpointCapExceeded("additive closure did not stabilise")


def is_additive(r: Relation, m: HasAddition) -> bool:
    return relation_sum(r, r, m) <= r


def induced_preorder(prec: Relation) -> Relation:
    """``a <= b`` iff every ``x`` with ``x prec a`` also has ``x prec b``."""
    p = prec.bits.astype(np.float32)
    # bad[a, b] counts x with x prec a but not x prec b
    bad = p.T @ (1.0 - p)
    return Relation(bad < 0.5)


def is_auxiliary(r: Relation, leq: Relation) -> bool:
    """``r`` sits inside ``leq`` and absorbs ``leq`` on both sides."""
    return r <= leq and compose_all(leq, r, leq) <= r


def is_left_continuous(r: Relation, prec: Relation) -> bool:
    return compose(prec, r) <= compose_all(prec, r, prec)


def is_almost_transitive(r: Relation, prec: Relation) -> bool:
    core = compose_all(prec, r, prec)
    return compose_all(core, r, prec) <= core


# almost refinement ----------------------------------------------------------


def _tuple_sums(add: NDArray[np.intp], k: int) -> NDArray[np.intp]:
    """Sum of every k-tuple of elements, tuples in row-major order."""
    n = add.shape[0]
    sums = np.arange(n, dtype=np.intp)
    for _ in range(k - 1):
        sums = add[sums[:, None], np.arange(n)[None, :]].reshape(-1)
    return sums


def _kron_power(mat: NDArray[np.bool_], k: int) -> NDArray[np.bool_]:
    out = mat
    for _ in range(k - 1):
        out = np.kron(out, mat).astype(bool)
    return out


def refinement_counterexample(
    r: Relation, prec: Relation, m: HasAddition, rows: int, cols: int
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Search for a failure of prec-almost (rows, cols)-refinement of ``r``.

    Returns ``(primed, bs)`` where ``primed`` are the ``a_i'`` and ``bs`` the
    ``b_j`` of a configuration admitting no decomposition, or ``None``.
    """
    add = _check_monoid(r, m)
    n = r.size
    P = prec.bits
    Q = compose_all(prec, r, prec).bits
    zero_idx = _zero_index(add)
    row_sums = _tuple_sums(add, rows)  # index of sum for each rows-tuple
    Pm = _kron_power(P, rows).astype(np.float32)
    Qm = _kron_power(Q, rows).astype(np.float32)
    # y-tuples whose sum sits prec-below b, one column per b
    y_ok = P[row_sums, :].astype(np.float32)
    cell_ok = (Qm @ y_ok) > 0.5  # x-tuple admits y-tuple under some b
    # componentwise sum of two rows-tuples, as a flat index table
    digits = np.array(list(itertools.product(range(n), repeat=rows)), dtype=np.intp)
    weights = n ** np.arange(rows - 1, -1, -1)
    tup_add = (add[digits[:, None, :], digits[None, :, :]] * weights).sum(axis=2)
    start = int((np.full(rows, zero_idx) * weights).sum())
    for bs in itertools.product(range(n), repeat=cols):
        b_sum = reduce(lambda x, y: int(add[x, y]), bs)
        a_ok = Q[row_sums, b_sum].astype(np.float32)
        ante = (Pm @ a_ok) > 0.5
        if not ante.any():
            continue
        states = np.zeros(n**rows, dtype=bool)
        states[start] = True
        for b in bs:
            s_idx = np.flatnonzero(states)
            x_idx = np.flatnonzero(cell_ok[:, b])
            states = np.zeros_like(states)
            if s_idx.size and x_idx.size:
                states[tup_add[s_idx[:, None], x_idx[None, :]]] = True
        good = (Pm[:, states].sum(axis=1) > 0.5) if states.any() else np.zeros_like(ante)
        bad = np.flatnonzero(ante & ~good)
        if bad.size:
            return tuple(int(v) for v in digits[bad[0]]), tuple(bs)
    return None


def _zero_index(add: NDArray[np.intp]) -> int:
    n = add.shape[0]
    for z in range(n):
        if np.array_equal(add[z], np.arange(n)):
            return z
    raise ValueError("addition table has no neutral element")


@dataclass(frozen=True)
class RelationProfile:
    """Structural flags of a relation relative to a transitive relation ``prec``."""

    transitive: bool
    reflexive: bool
    dense: bool
    additive: bool | None
    auxiliary: bool | None
    left_continuous: bool
    almost_transitive: bool
    refinement: dict[tuple[int, int], bool]

    def has_refinement(self) -> bool:
        return all(self.refinement.values()) if self.refinement else False


def classify(
    r: Relation,
    prec: Relation,
    leq: Relation | None = None,
    m: HasAddition | None = None,
    refinement_bound: int = 2,
) -> RelationProfile:
    """Compute the structural profile of ``r``.

    ``additive`` and the refinement flags need ``m``; ``auxiliary`` needs ``leq``.
    Refinement is evaluated for every ``(rows, cols)`` up to ``refinement_bound``.
    """
    r._check(prec)
    if leq is not None:
        r._check(leq)
    refinement: dict[tuple[int, int], bool] = {}
    if m is not None:
        for rows in range(1, refinement_bound + 1):
            for cols in range(1, refinement_bound + 1):
                refinement[(rows, cols)] = refinement_counterexample(r, prec, m, rows, cols) is None
    return RelationProfile(
        transitive=r.is_transitive(),
        reflexive=r.is_reflexive(),
        dense=r.is_dense(),
        additive=None if m is None else is_additive(r, m),
        auxiliary=None if leq is None else is_auxiliary(r, leq),
        left_continuous=is_left_continuous(r, prec),
        almost_transitive=is_almost_transitive(r, prec),
        refinement=refinement,
    )


# Public alias.  Inside this module the builtin ``sum`` is not used below.
sum = relation_sum  # noqa: A001
