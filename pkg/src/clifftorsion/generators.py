"""Matrix representations of the Clifford generators of Cl(C^2k).

Vector generators are Kronecker products of the 2x2 blocks ``I2``, ``E1``,
``E2`` and ``B``::

    e_{2j-1} -> I2^(k-j) (x) E1 (x) B^(j-1)
    e_{2j}   -> I2^(k-j) (x) E2 (x) B^(j-1)

A general generator ``e_mu`` is the ordered product over increasing ``mu``.
The recursive lifting formulas from level ``k`` to ``k + 1`` are kept as an
independent construction route (:func:`lifted_rep`) for cross-checking.
"""

from __future__ import annotations

import contextlib
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from . import monomial as mono
from ._report import Report
from .monomial import B, E1, E2, E12, I2, MonomialMatrix

__all__ = [
    "K_MAX",
    "GeneratorIndex",
    "vector_generator_rep",
    "generator_rep",
    "all_reps",
    "clifford_relations_check",
    "lift_generator",
    "lifted_rep",
    "enumerate_gamma_hat",
    "enumerate_unsigned",
    "corrupted_vector_generator",
    "verify_representations",
]

K_MAX = 6

_LABEL_RE = re.compile(r"^(-?)e_?(\{?)([0-9.,]*)\}?$")


@dataclass(frozen=True, order=True)
class GeneratorIndex:
    """An element ``+-e_mu`` of the signed generator group at level ``k``.

    ``mask`` bit ``i - 1`` is set when index ``i`` belongs to ``mu``.
    """

    k: int
    mask: int
    negative: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.mask < 0 or self.mask >> (2 * self.k):
            raise ValueError(f"mask {self.mask:#b} uses indices outside 1..{2 * self.k}")

    @classmethod
    def from_indices(cls, k: int, indices, negative: bool = False) -> GeneratorIndex:
        idx = list(indices)
        if idx != sorted(set(idx)):
            raise ValueError(f"indices {idx} must be strictly increasing")
        mask = 0
        for i in idx:
            if not 1 <= i <= 2 * k:
                raise ValueError(f"index {i} out of range 1..{2 * k}")
            mask |= 1 << (i - 1)
        return cls(k, mask, negative)

    @classmethod
    def parse(cls, k: int, label: str) -> GeneratorIndex:
        """Parse labels such as ``e14``, ``-e2``, ``e`` (identity) or ``e1.10``."""
        m = _LABEL_RE.match(label.strip())
        if not m:
            raise ValueError(f"cannot parse generator label {label!r}")
        sign, _, body = m.groups()
        if not body:
            indices = []
        elif "." in body or "," in body:
            indices = [int(t) for t in re.split(r"[.,]", body) if t]
        else:
            indices = [int(ch) for ch in body]
        return cls.from_indices(k, indices, negative=bool(sign))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(2 * self.k) if self.mask >> i & 1)

    @property
    def length(self) -> int:
        return bin(self.mask).count("1")

    @property
    def label(self) -> str:
        idx = self.indices
        sep = "." if any(i >= 10 for i in idx) else ""
        return ("-" if self.negative else "") + "e" + sep.join(map(str, idx))

    def unsigned(self) -> GeneratorIndex:
        return GeneratorIndex(self.k, self.mask)

    def canon_key(self) -> tuple:
        """Ordering used to pick class representatives: fewer indices first."""
        return (self.length, self.indices, self.negative)

    def __str__(self) -> str:
        return self.label


def _check_k(k: int, k_max: int | None) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k_max is not None and k > k_max:
        raise ValueError(f"k={k} exceeds the configured cap {k_max}")


@lru_cache(maxsize=None)
def vector_generator_rep(k: int, i: int) -> MonomialMatrix:
    _check_k(k, None)
    if not 1 <= i <= 2 * k:
        raise ValueError(f"vector generator index {i} out of range 1..{2 * k}")
    j = (i + 1) // 2
    middle = E1 if i % 2 else E2
    return mono.mono_kron_all([I2] * (k - j) + [middle] + [B] * (j - 1))


@lru_cache(maxsize=8)
def _unsigned_reps(k: int) -> tuple[MonomialMatrix, ...]:
    # reps[mask] = reps[mask without its top index] @ rho(e_top)
    vec = [vector_generator_rep(k, i) for i in range(1, 2 * k + 1)]
    reps = [mono.identity(2**k)]
    for mask in range(1, 4**k):
        top = mask.bit_length() - 1
        reps.append(reps[mask ^ (1 << top)] @ vec[top])
    return tuple(reps)


def all_reps(k: int, k_max: int | None = K_MAX) -> tuple[MonomialMatrix, ...]:
    """``rho(e_mu)`` for every unsigned generator, indexed by mask."""
    _check_k(k, k_max)
    return _unsigned_reps(k)


def generator_rep(g: GeneratorIndex) -> MonomialMatrix:
    if g.k <= K_MAX:
        rep = _unsigned_reps(g.k)[g.mask]
    else:
        rep = mono.identity(2**g.k)
        for i in g.indices:
            rep = rep @ vector_generator_rep(g.k, i)
    return -rep if g.negative else rep


@contextlib.contextmanager
def corrupted_vector_generator(k: int, i: int):
    """Temporarily flip the sign of one entry of ``rho(e_i)``.

    Only meant for exercising failure paths of the verification suites.
    """
    good = vector_generator_rep(k, i)
    exps = list(good.exps)
    exps[0] = (exps[0] + 2) % 4
    bad = MonomialMatrix(good.perm, tuple(exps))
    original = globals()["vector_generator_rep"]

    @lru_cache(maxsize=None)
    def patched(kk: int, ii: int) -> MonomialMatrix:
        if (kk, ii) == (k, i):
            return bad
        return original(kk, ii)

    globals()["vector_generator_rep"] = patched
    _unsigned_reps.cache_clear()
    try:
        yield bad
    finally:
        globals()["vector_generator_rep"] = original
        _unsigned_reps.cache_clear()


def clifford_relations_check(k: int, k_max: int | None = K_MAX) -> Report:
    """Check ``rho(e_i)^2 = -I`` and anticommutation for all vector generators."""
    _check_k(k, k_max)
    report = Report(f"clifford-relations k={k}")
    vec = [vector_generator_rep(k, i) for i in range(1, 2 * k + 1)]
    minus_id = -mono.identity(2**k)
    squares_ok = True
    anti_ok = True
    for a, ea in enumerate(vec, start=1):
        if ea @ ea != minus_id:
            squares_ok = False
            report.fail("square", f"rho(e{a})^2 != -I")
        for b in range(a + 1, len(vec) + 1):
            eb = vec[b - 1]
            if ea @ eb != -(eb @ ea):
                anti_ok = False
                report.fail("anticommute", f"rho(e{a}) rho(e{b}) != -rho(e{b}) rho(e{a})")
    report.check("square", squares_ok)
    report.check("anticommute", anti_ok)
    report.details["vector_generators"] = len(vec)
    return report


def lift_generator(g: GeneratorIndex, verify: bool = True) -> tuple[GeneratorIndex, ...]:
    """The four lifts ``()^mu', 1^mu', 2^mu', 12^mu'`` with ``mu' = mu + 2``.

    With ``verify`` set, also confirms ``rho(e_mu') = rho(e_mu) (x) B**|mu|``
    at level ``k + 1``.
    """
    if g.negative:
        raise ValueError("lift_generator expects an unsigned generator")
    shifted = g.mask << 2
    lifts = tuple(GeneratorIndex(g.k + 1, shifted | prefix) for prefix in (0b00, 0b01, 0b10, 0b11))
    if verify:
        tail = B if g.length % 2 else I2
        if generator_rep(lifts[0]) != mono.mono_kron(generator_rep(g), tail):
            raise RuntimeError(f"shifted lift of {g} does not match rho({g}) (x) {'B' if g.length % 2 else 'I2'}")
    return lifts


def lifted_rep(g: GeneratorIndex) -> MonomialMatrix:
    """``rho(e_mu)`` at level ``g.k`` built from level ``g.k - 1`` by the four-case recursion.

    Strip indices 1 and 2 from ``mu``, shift the rest down by two, tensor the
    level-below representation with ``B**|rest|`` (``I2`` or ``B``), then
    multiply on the left by ``rho(e_1)``, ``rho(e_2)`` or ``rho(e_12)``.
    """
    if g.k == 1:
        base = {0b00: I2, 0b01: E1, 0b10: E2, 0b11: E12}[g.mask]
        return -base if g.negative else base
    rest = GeneratorIndex(g.k - 1, g.mask >> 2)
    tail = B if rest.length % 2 else I2
    core = mono.mono_kron(lifted_rep(rest), tail)
    head = g.mask & 0b11
    if head == 0b01:
        core = vector_generator_rep(g.k, 1) @ core
    elif head == 0b10:
        core = vector_generator_rep(g.k, 2) @ core
    elif head == 0b11:
        core = vector_generator_rep(g.k, 1) @ vector_generator_rep(g.k, 2) @ core
    return -core if g.negative else core


def enumerate_unsigned(k: int, k_max: int | None = K_MAX) -> Iterator[GeneratorIndex]:
    _check_k(k, k_max)
    for mask in range(4**k):
        yield GeneratorIndex(k, mask)


def enumerate_gamma_hat(k: int, k_max: int | None = K_MAX) -> Iterator[GeneratorIndex]:
    """All ``2**(2k+1)`` signed generators, ordered by mask then sign."""
    _check_k(k, k_max)
    for mask in range(4**k):
        yield GeneratorIndex(k, mask)
        yield GeneratorIndex(k, mask, True)


def verify_representations(k: int, k_max: int | None = K_MAX) -> Report:
    """Type purity, shape bijectivity, the lifting recursion and the
    left-multiplication effects of ``rho(e_1)``, ``rho(e_2)``, ``rho(e_12)``
    over every unsigned generator at level ``k``."""
    _check_k(k, k_max)
    report = Report(f"representations k={k}")
    reps = all_reps(k, k_max)
    e1 = vector_generator_rep(k, 1)
    e2 = vector_generator_rep(k, 2)
    e12 = e1 @ e2
    dim = 2**k
    for mask, rep in enumerate(reps):
        g = GeneratorIndex(k, mask)
        try:
            mono.type_of(rep)
        except mono.MixedTypeError:
            report.fail("pure-type", f"{g} has mixed entries")
        if sorted(mono.shape_of(rep)) != list(range(dim)):
            report.fail("shape-bijection", f"Sh({g}) is not a permutation")
        if k > 1 and lifted_rep(g) != rep:
            report.fail("lifting-recursion", f"recursive construction of {g} disagrees")
        for name, left, swaps, odd in (("e1", e1, False, True), ("e2", e2, True, True), ("e12", e12, True, False)):
            prod = left @ rep
            want = tuple(r ^ 1 for r in rep.perm) if swaps else rep.perm
            if prod.perm != want:
                report.fail(f"left-{name}-rows", f"rho({name}) {g} moved rows unexpectedly")
            diffs = {(a - b) % 4 for a, b in zip(prod.exps, rep.exps)}
            if diffs - ({1, 3} if odd else {0, 2}):
                report.fail(f"left-{name}-scale", f"rho({name}) {g} rescaled by {sorted(diffs)}")
    for inv in ("pure-type", "shape-bijection", "lifting-recursion", "left-e1-rows", "left-e1-scale",
                "left-e2-rows", "left-e2-scale", "left-e12-rows", "left-e12-scale"):
        report.checks.setdefault(inv, True)
    report.details["generators"] = len(reps)
    return report
