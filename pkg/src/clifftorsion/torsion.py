"""n-torsion points of the Dirac spinor torus C^(2^k) / (Z^(2^k) + iZ^(2^k)).

A point is stored in *matrix form*: a ``2^k x 2`` array of residues mod ``n``
flattened row-wise, so flat index ``2*l`` is the real numerator of component
``l`` and ``2*l + 1`` the imaginary numerator (0-based). Component ``l``
therefore stands for ``a_l/n + (b_l/n) i``.

For ``n = 2`` each component is one of the quarter points ``v0 = 0``,
``v1 = 1/2``, ``v2 = i/2``, ``v3 = (1+i)/2``; label ``a`` encodes
``(a & 1, a >> 1)`` as (real, imaginary) numerators.

Bulk work goes through numpy arrays of shape ``(count, 2^(k+1))``; the
:class:`TorsionPoint` dataclass is the per-point API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .monomial import MonomialMatrix, Unit

__all__ = [
    "DEFAULT_CAP",
    "MAX_ORDER",
    "EnumerationCapExceeded",
    "TorsionPoint",
    "QUARTER_POINTS",
    "quarter_add",
    "add_points",
    "unit_scale",
    "monomial_act",
    "monomial_act_array",
    "scale_array",
    "torsion_count",
    "point_array",
    "enumerate_torsion",
    "sample_array",
    "sample_torsion",
    "encode_array",
    "decode_codes",
]

DEFAULT_CAP = 2**24
MAX_ORDER = 2**16


class EnumerationCapExceeded(RuntimeError):
    """The requested enumeration is larger than the configured cap."""


def _check_order(n: int) -> None:
    if not 2 <= n <= MAX_ORDER:
        raise ValueError(f"torsion order must lie in 2..{MAX_ORDER}, got {n}")


def _dtype(n: int):
    return np.uint8 if n <= 256 else np.uint16


@dataclass(frozen=True)
class TorsionPoint:
    k: int
    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        _check_order(self.n)
        if self.k < 0:
            raise ValueError("k must be >= 0")
        entries = tuple(int(x) % self.n for x in self.entries)
        if len(entries) != 2 ** (self.k + 1):
            raise ValueError(f"expected {2 ** (self.k + 1)} matrix-form entries, got {len(entries)}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zero(cls, k: int, n: int) -> TorsionPoint:
        return cls(k, n, (0,) * 2 ** (k + 1))

    @classmethod
    def from_matrix(cls, n: int, rows: Sequence[Sequence[int]]) -> TorsionPoint:
        k = len(rows).bit_length() - 1
        if 2**k != len(rows) or any(len(r) != 2 for r in rows):
            raise ValueError("matrix form must be 2^k rows of (real, imaginary) pairs")
        return cls(k, n, tuple(x for row in rows for x in row))

    @classmethod
    def from_label(cls, label: str) -> TorsionPoint:
        """2-torsion point from quarter-point labels, e.g. ``"0321"`` or ``"v_0321"``."""
        digits = label.removeprefix("v").removeprefix("_")
        k = len(digits).bit_length() - 1
        if 2**k != len(digits) or any(ch not in "0123" for ch in digits):
            raise ValueError(f"bad 2-torsion label {label!r}")
        entries = []
        for ch in digits:
            a = int(ch)
            entries += [a & 1, a >> 1]
        return cls(k, 2, tuple(entries))

    @classmethod
    def from_json(cls, text: str | dict) -> TorsionPoint:
        data = json.loads(text) if isinstance(text, str) else text
        point = cls.from_matrix(int(data["n"]), data["matrix"])
        if "k" in data and int(data["k"]) != point.k:
            raise ValueError("k does not match the matrix size")
        return point

    @property
    def dim(self) -> int:
        return 2**self.k

    def components(self) -> list[tuple[int, int]]:
        e = self.entries
        return [(e[2 * l], e[2 * l + 1]) for l in range(self.dim)]

    def matrix(self) -> list[list[int]]:
        return [list(c) for c in self.components()]

    @property
    def label(self) -> str:
        if self.n != 2:
            raise ValueError("quarter-point labels exist only for n = 2")
        return "".join(str(a + 2 * b) for a, b in self.components())

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "n": self.n, "matrix": self.matrix()})

    def __add__(self, other: TorsionPoint) -> TorsionPoint:
        return add_points(self, other)

    def __neg__(self) -> TorsionPoint:
        return TorsionPoint(self.k, self.n, tuple(-x for x in self.entries))

    def __sub__(self, other: TorsionPoint) -> TorsionPoint:
        return add_points(self, -other)

    def __str__(self) -> str:
        if self.n == 2:
            return "v" + self.label
        return f"J{self.n}{self.matrix()}"

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=_dtype(self.n))


# addition table of v0..v3 (the Klein four-group)
QUARTER_POINTS = ("0", "1/2", "i/2", "(1+i)/2")


def quarter_add(a: int, b: int) -> int:
    return a ^ b


def add_points(v: TorsionPoint, w: TorsionPoint) -> TorsionPoint:
    if (v.k, v.n) != (w.k, w.n):
        raise ValueError(f"cannot add points of shape (k={v.k}, n={v.n}) and (k={w.k}, n={w.n})")
    return TorsionPoint(v.k, v.n, tuple(a + b for a, b in zip(v.entries, w.entries)))


def _scale_pair(u: int, a: int, b: int, n: int) -> tuple[int, int]:
    u %= 4
    if u == Unit.ONE:
        return a, b
    if u == Unit.I:
        return (-b) % n, a
    if u == Unit.MINUS_ONE:
        return (-a) % n, (-b) % n
    return b, (-a) % n


def unit_scale(u: int, v: TorsionPoint) -> TorsionPoint:
    out: list[int] = []
    for a, b in v.components():
        out += _scale_pair(u, a, b, v.n)
    return TorsionPoint(v.k, v.n, tuple(out))


def monomial_act(m: MonomialMatrix, v: TorsionPoint) -> TorsionPoint:
    """``rho * v`` modulo the lattice: component ``j`` moves to ``perm[j]`` scaled by its unit."""
    if m.dim != v.dim:
        raise ValueError(f"matrix dim {m.dim} does not match point dim {v.dim}")
    comps = v.components()
    out = [0] * len(v.entries)
    for j, (r, e) in enumerate(zip(m.perm, m.exps)):
        out[2 * r], out[2 * r + 1] = _scale_pair(e, *comps[j], v.n)
    return TorsionPoint(v.k, v.n, tuple(out))


def scale_array(u: int, arr: np.ndarray, n: int) -> np.ndarray:
    """Scale every component of a batch of points by the same unit."""
    width = arr.shape[1] // 2
    return _act_columns(arr, np.arange(width), np.full(width, u % 4), n)


def _act_columns(arr: np.ndarray, perm: np.ndarray, exps: np.ndarray, n: int) -> np.ndarray:
    # component j is multiplied by i**exps[j] and written to component perm[j]
    re = arr[:, 0::2]
    im = arr[:, 1::2]
    out = np.empty_like(arr)
    need_neg = bool(np.any(exps != 0))
    if need_neg:
        wide = np.int32
        neg_re = ((n - re.astype(wide)) % n).astype(arr.dtype)
        neg_im = ((n - im.astype(wide)) % n).astype(arr.dtype)
    # (re, im) * i**e for e = 0, 1, 2, 3
    sources = {
        0: lambda: (re, im),
        1: lambda: (neg_im, re),
        2: lambda: (neg_re, neg_im),
        3: lambda: (im, neg_re),
    }
    for e in range(4):
        cols = np.flatnonzero(exps == e)
        if cols.size == 0:
            continue
        src_re, src_im = sources[e]()
        dest = perm[cols]
        out[:, 2 * dest] = src_re[:, cols]
        out[:, 2 * dest + 1] = src_im[:, cols]
    return out


def monomial_act_array(m: MonomialMatrix, arr: np.ndarray, n: int) -> np.ndarray:
    """Vectorised :func:`monomial_act` over a batch of matrix-form points."""
    if arr.shape[1] != 2 * m.dim:
        raise ValueError(f"matrix dim {m.dim} does not match point width {arr.shape[1]}")
    return _act_columns(arr, np.asarray(m.perm), np.asarray(m.exps), n)


def torsion_count(k: int, n: int) -> int:
    return n ** (2 ** (k + 1))


def _check_cap(k: int, n: int, cap: int) -> int:
    _check_order(n)
    total = torsion_count(k, n)
    if total > cap:
        raise EnumerationCapExceeded(
            f"|J_{n}| = {n}^{2 ** (k + 1)} = {total} points at k={k} exceeds the cap {cap}; sample instead"
        )
    return total


def decode_codes(codes: np.ndarray, k: int, n: int) -> np.ndarray:
    """Inverse of :func:`encode_array`: base-``n`` digits, first entry most significant."""
    width = 2 ** (k + 1)
    codes = np.asarray(codes, dtype=np.int64)
    powers = n ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] // powers[None, :]) % n).astype(_dtype(n))


def encode_array(arr: np.ndarray, n: int) -> np.ndarray:
    """Lexicographic integer code of each point; only valid when n**width fits in int64."""
    width = arr.shape[1]
    powers = n ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return arr.astype(np.int64) @ powers


def point_array(k: int, n: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """Every point of J_n at level ``k`` in lexicographic order of its entries."""
    total = _check_cap(k, n, cap)
    return decode_codes(np.arange(total, dtype=np.int64), k, n)


def enumerate_torsion(k: int, n: int, cap: int = DEFAULT_CAP) -> Iterator[TorsionPoint]:
    total = _check_cap(k, n, cap)
    block = 1 << 16
    for start in range(0, total, block):
        chunk = decode_codes(np.arange(start, min(start + block, total), dtype=np.int64), k, n)
        for row in chunk:
            yield TorsionPoint(k, n, tuple(int(x) for x in row))


def sample_array(k: int, n: int, count: int, seed: int) -> np.ndarray:
    _check_order(n)
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=(count, 2 ** (k + 1))).astype(_dtype(n))


def sample_torsion(k: int, n: int, count: int, seed: int) -> list[TorsionPoint]:
    return [TorsionPoint(k, n, tuple(int(x) for x in row)) for row in sample_array(k, n, count, seed)]
