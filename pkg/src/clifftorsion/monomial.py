"""Monomial matrices over the fourth roots of unity.

A :class:`MonomialMatrix` of dimension ``d`` stores one nonzero entry per
column: column ``j`` holds the unit ``i**exps[j]`` in row ``perm[j]``.
With this column convention the action on a column vector ``x`` reads

    (M x)[perm[j]] = i**exps[j] * x[j]

so the permutation part moves component ``j`` to position ``perm[j]``.
Indices are 0-based internally; formatting helpers convert to 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "Unit",
    "EntryType",
    "MixedTypeError",
    "MonomialMatrix",
    "DenseGaussian",
    "unit_mul",
    "mono_matmul",
    "mono_kron",
    "mono_kron_all",
    "shape_of",
    "type_of",
    "to_dense",
    "dense_matmul",
    "dense_kron",
    "identity",
    "I2",
    "E1",
    "E2",
    "E12",
    "B",
    "DENSE_ORACLE_MAX_DIM",
]

DENSE_ORACLE_MAX_DIM = 64


class Unit(enum.IntEnum):
    """A fourth root of unity, stored as the exponent of ``i``."""

    ONE = 0
    I = 1
    MINUS_ONE = 2
    MINUS_I = 3

    def __str__(self) -> str:
        return ("1", "i", "-1", "-i")[self]

    @property
    def re(self) -> int:
        return (1, 0, -1, 0)[self]

    @property
    def im(self) -> int:
        return (0, 1, 0, -1)[self]

    @property
    def is_real(self) -> bool:
        return self % 2 == 0


def unit_mul(u: int, v: int) -> Unit:
    return Unit((u + v) % 4)


class EntryType(enum.Enum):
    REAL = "real"
    IMAGINARY = "imaginary"


class MixedTypeError(ValueError):
    """Raised when a matrix has both real and imaginary nonzero entries."""


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class MonomialMatrix:
    perm: tuple[int, ...]
    exps: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(r) for r in self.perm)
        exps = tuple(int(e) % 4 for e in self.exps)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "exps", exps)
        if len(perm) != len(exps):
            raise ValueError("perm and exps must have the same length")
        if not _is_power_of_two(len(perm)):
            raise ValueError(f"dimension {len(perm)} is not a power of two")
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"{perm} is not a permutation of 0..{len(perm) - 1}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex | int]]) -> MonomialMatrix:
        """Build from a dense nested list with entries in {0, 1, -1, 1j, -1j}."""
        dim = len(rows)
        perm = [-1] * dim
        exps = [0] * dim
        lookup = {1: 0, 1j: 1, -1: 2, -1j: 3}
        for r, row in enumerate(rows):
            if len(row) != dim:
                raise ValueError("matrix must be square")
            for c, value in enumerate(row):
                if value == 0:
                    continue
                if perm[c] != -1:
                    raise ValueError(f"column {c} has more than one nonzero entry")
                try:
                    exps[c] = lookup[complex(value)]
                except KeyError:
                    raise ValueError(f"entry {value!r} is not a fourth root of unity") from None
                perm[c] = r
        if -1 in perm:
            raise ValueError("every column needs a nonzero entry")
        return cls(tuple(perm), tuple(exps))

    @property
    def dim(self) -> int:
        return len(self.perm)

    @property
    def k(self) -> int:
        return self.dim.bit_length() - 1

    def entry(self, row: int, col: int) -> Unit | None:
        """The unit at ``(row, col)``, or ``None`` for a zero entry."""
        if self.perm[col] == row:
            return Unit(self.exps[col])
        return None

    def scale(self, u: int) -> MonomialMatrix:
        return MonomialMatrix(self.perm, tuple((e + u) % 4 for e in self.exps))

    def __neg__(self) -> MonomialMatrix:
        return self.scale(Unit.MINUS_ONE)

    def __matmul__(self, other: MonomialMatrix) -> MonomialMatrix:
        return mono_matmul(self, other)

    def rows(self) -> list[list[Unit | None]]:
        out: list[list[Unit | None]] = [[None] * self.dim for _ in range(self.dim)]
        for c, (r, e) in enumerate(zip(self.perm, self.exps)):
            out[r][c] = Unit(e)
        return out

    def pretty(self) -> str:
        cells = [[str(u) if u is not None else "0" for u in row] for row in self.rows()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + " ".join(c.rjust(width) for c in row) + "]" for row in cells)


def identity(dim: int) -> MonomialMatrix:
    return MonomialMatrix(tuple(range(dim)), (0,) * dim)


def mono_matmul(m: MonomialMatrix, n: MonomialMatrix) -> MonomialMatrix:
    if m.dim != n.dim:
        raise ValueError(f"dimension mismatch: {m.dim} vs {n.dim}")
    mp, me = m.perm, m.exps
    perm = tuple(mp[r] for r in n.perm)
    exps = tuple((me[r] + e) % 4 for r, e in zip(n.perm, n.exps))
    return MonomialMatrix(perm, exps)


def mono_kron(m: MonomialMatrix, n: MonomialMatrix) -> MonomialMatrix:
    d = n.dim
    perm = []
    exps = []
    for rm, em in zip(m.perm, m.exps):
        for rn, en in zip(n.perm, n.exps):
            perm.append(rm * d + rn)
            exps.append((em + en) % 4)
    return MonomialMatrix(tuple(perm), tuple(exps))


def mono_kron_all(factors: Sequence[MonomialMatrix]) -> MonomialMatrix:
    """Left-to-right Kronecker product; the empty product is the 1x1 identity."""
    out = identity(1)
    for f in factors:
        out = mono_kron(out, f)
    return out


def shape_of(m: MonomialMatrix) -> tuple[int, ...]:
    """The permutation matrix ``Sh(M)`` as a map column -> row."""
    return m.perm


def type_of(m: MonomialMatrix) -> EntryType:
    parities = {e % 2 for e in m.exps}
    if parities == {0}:
        return EntryType.REAL
    if parities == {1}:
        return EntryType.IMAGINARY
    raise MixedTypeError("matrix has both real and imaginary entries")


class DenseGaussian(NamedTuple):
    """Dense matrix of Gaussian integers as separate integer parts."""

    re: np.ndarray
    im: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, DenseGaussian):
            return NotImplemented
        return np.array_equal(self.re, other.re) and np.array_equal(self.im, other.im)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def tolist(self) -> list[list[complex]]:
        return [[complex(int(a), int(b)) for a, b in zip(ra, rb)] for ra, rb in zip(self.re, self.im)]


def to_dense(m: MonomialMatrix) -> DenseGaussian:
    if m.dim > DENSE_ORACLE_MAX_DIM:
        raise ValueError(f"dense oracle limited to dim <= {DENSE_ORACLE_MAX_DIM}")
    re = np.zeros((m.dim, m.dim), dtype=np.int64)
    im = np.zeros((m.dim, m.dim), dtype=np.int64)
    for c, (r, e) in enumerate(zip(m.perm, m.exps)):
        re[r, c] = Unit(e).re
        im[r, c] = Unit(e).im
    return DenseGaussian(re, im)


def dense_matmul(a: DenseGaussian, b: DenseGaussian) -> DenseGaussian:
    return DenseGaussian(a.re @ b.re - a.im @ b.im, a.re @ b.im + a.im @ b.re)


def dense_kron(a: DenseGaussian, b: DenseGaussian) -> DenseGaussian:
    return DenseGaussian(
        np.kron(a.re, b.re) - np.kron(a.im, b.im),
        np.kron(a.re, b.im) + np.kron(a.im, b.re),
    )


I2 = identity(2)
E1 = MonomialMatrix.from_rows([[1j, 0], [0, -1j]])
E2 = MonomialMatrix.from_rows([[0, 1j], [1j, 0]])
E12 = MonomialMatrix.from_rows([[0, -1], [1, 0]])
B = MonomialMatrix.from_rows([[0, -1j], [1j, 0]])
