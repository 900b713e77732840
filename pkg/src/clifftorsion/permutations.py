"""Switch permutations and induced Clifford permutations.

The switch permutation ``A_{2^j}`` on ``{0, .., 2^k - 1}`` swaps adjacent
blocks of size ``2^j``; in 0-based terms it is ``x -> x ^ 2**j``. A Clifford
permutation ``S_k o ... o S_1`` with ``S_l`` in ``{(1), A_{2^(l-1)}}`` is
therefore ``x -> x ^ switch_bits``, optionally followed by multiplication by
``i``. On 2-torsion points ``i * i`` acts trivially, so the pair
``(imaginary, switch_bits)`` composes by XOR.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import classification as classes_mod
from . import generators as gens
from . import torsion
from ._report import Report
from .generators import GeneratorIndex
from .monomial import EntryType, MonomialMatrix, shape_of, type_of
from .torsion import TorsionPoint

__all__ = [
    "ShapeNotBlockStructured",
    "SwitchPermutation",
    "CliffordPermutation",
    "switch_permutation",
    "block_swap_oracle",
    "switch_bits_of_shape",
    "induced_permutation",
    "clifford_perm_act",
    "clifford_perm_act_array",
    "compose_clifford",
    "compose_perms",
    "cycles_of",
    "format_cycles",
    "is_even",
    "all_clifford_permutations",
    "verify_group_structure",
    "verify_induced_action",
]


class ShapeNotBlockStructured(ValueError):
    """The shape lacks the recursive diagonal / anti-diagonal block structure."""


def compose_perms(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``p o q`` (apply ``q`` first)."""
    return tuple(p[x] for x in q)


def cycles_of(perm: Sequence[int]) -> list[tuple[int, ...]]:
    """Disjoint cycles (0-based), each starting at its least element, including fixed points."""
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        cycles.append(tuple(cyc))
    return cycles


def format_cycles(perm: Sequence[int]) -> str:
    """1-based cycle notation without fixed points; ``(1)`` for the identity."""
    nontrivial = [c for c in cycles_of(perm) if len(c) > 1]
    if not nontrivial:
        return "(1)"
    sep = " " if len(perm) > 9 else ""
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in nontrivial)


def is_even(perm: Sequence[int]) -> bool:
    return sum(len(c) - 1 for c in cycles_of(perm)) % 2 == 0


@dataclass(frozen=True)
class SwitchPermutation:
    k: int
    j: int

    def __post_init__(self):
        if not 0 <= self.j <= self.k - 1:
            raise ValueError(f"block exponent j={self.j} outside 0..{self.k - 1}")

    @property
    def block(self) -> int:
        return 2**self.j

    @property
    def perm(self) -> tuple[int, ...]:
        return tuple(x ^ self.block for x in range(2**self.k))

    @property
    def name(self) -> str:
        return f"A{self.block}"

    def cycles(self) -> str:
        return format_cycles(self.perm)


def switch_permutation(k: int, j: int) -> SwitchPermutation:
    return SwitchPermutation(k, j)


def block_swap_oracle(k: int, j: int) -> tuple[int, ...]:
    """Switch permutation built literally: cut ``<0..2^k-1>`` into blocks of
    size ``2^j`` and swap each consecutive pair of blocks.

    Returns the permutation as a map position -> image.
    """
    if not 0 <= j <= k - 1:
        raise ValueError(f"block exponent j={j} outside 0..{k - 1}")
    size = 2**j
    items = list(range(2**k))
    blocks = [items[i : i + size] for i in range(0, len(items), size)]
    swapped: list[int] = []
    for a in range(0, len(blocks), 2):
        swapped += blocks[a + 1] + blocks[a]
    # the arrangement lists which original element now sits at each position
    perm = [0] * len(items)
    for position, element in enumerate(swapped):
        perm[element] = position
    return tuple(perm)


@dataclass(frozen=True, order=True)
class CliffordPermutation:
    k: int
    switch_bits: int
    imaginary: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0 <= self.switch_bits < 2**self.k:
            raise ValueError(f"switch bits {self.switch_bits:#b} do not fit in k={self.k} levels")

    @property
    def row_permutation(self) -> tuple[int, ...]:
        return tuple(x ^ self.switch_bits for x in range(2**self.k))

    @property
    def factors(self) -> list[str]:
        """``S_k, ..., S_1`` as written left to right."""
        return [f"A{2 ** (l - 1)}" if self.switch_bits >> (l - 1) & 1 else "(1)" for l in range(self.k, 0, -1)]

    @property
    def name(self) -> str:
        if self.switch_bits == 0:
            body = "(1)"
        else:
            body = "∘".join(self.factors)
        if not self.imaginary:
            return body
        return f"i·{body}" if self.k == 1 or self.switch_bits == 0 else f"i·({body})"

    @property
    def is_identity(self) -> bool:
        return self.switch_bits == 0 and not self.imaginary

    def cycles(self) -> str:
        return format_cycles(self.row_permutation)

    def __matmul__(self, other: CliffordPermutation) -> CliffordPermutation:
        return compose_clifford(self, other)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "name": self.name,
            "imaginary": self.imaginary,
            "switch_bits": format(self.switch_bits, f"0{self.k}b"),
            "row_cycles": self.cycles(),
        }


def switch_bits_of_shape(shape: Sequence[int]) -> int:
    """Read ``S_k, .., S_1`` off a permutation matrix with the recursive block property.

    At each level the matrix must be ``[[C, 0], [0, C]]`` (bit clear) or
    ``[[0, C], [C, 0]]`` (bit set) with the same block ``C`` twice.
    """
    size = len(shape)
    if size == 0 or size & (size - 1):
        raise ShapeNotBlockStructured(f"size {size} is not a power of two")
    bits = 0
    block = list(shape)
    level = size.bit_length() - 1
    while len(block) > 1:
        half = len(block) // 2
        left = block[:half]  # columns of the left half
        right = block[half:]
        if all(r < half for r in left) and all(r >= half for r in right):
            inner_left, inner_right = left, [r - half for r in right]
        elif all(r >= half for r in left) and all(r < half for r in right):
            bits |= 1 << (level - 1)
            inner_left, inner_right = [r - half for r in left], right
        else:
            raise ShapeNotBlockStructured("block is neither diagonal nor anti-diagonal")
        if inner_left != inner_right:
            raise ShapeNotBlockStructured("the two nonzero blocks differ")
        block = inner_left
        level -= 1
    return bits


def induced_permutation(g: GeneratorIndex | MonomialMatrix) -> CliffordPermutation:
    rep = gens.generator_rep(g) if isinstance(g, GeneratorIndex) else g
    bits = switch_bits_of_shape(shape_of(rep))
    return CliffordPermutation(rep.k, bits, type_of(rep) is EntryType.IMAGINARY)


def clifford_perm_act(p: CliffordPermutation, v: TorsionPoint) -> TorsionPoint:
    if v.n != 2:
        raise ValueError("Clifford permutations act on 2-torsion points only")
    if v.k != p.k:
        raise ValueError(f"level mismatch: permutation k={p.k}, point k={v.k}")
    comps = v.components()
    out: list[int] = []
    for x in range(v.dim):
        a, b = comps[x ^ p.switch_bits]
        out += (b, a) if p.imaginary else (a, b)
    return TorsionPoint(v.k, 2, tuple(out))


def clifford_perm_act_array(p: CliffordPermutation, arr: np.ndarray) -> np.ndarray:
    src = np.asarray(p.row_permutation)
    cols = np.empty(2 * len(src), dtype=np.int64)
    if p.imaginary:
        cols[0::2] = 2 * src + 1
        cols[1::2] = 2 * src
    else:
        cols[0::2] = 2 * src
        cols[1::2] = 2 * src + 1
    return arr[:, cols]


def compose_clifford(p: CliffordPermutation, q: CliffordPermutation) -> CliffordPermutation:
    if p.k != q.k:
        raise ValueError(f"level mismatch: {p.k} vs {q.k}")
    return CliffordPermutation(p.k, p.switch_bits ^ q.switch_bits, p.imaginary != q.imaginary)


def all_clifford_permutations(k: int) -> Iterator[CliffordPermutation]:
    for imaginary in (False, True):
        for bits in range(2**k):
            yield CliffordPermutation(k, bits, imaginary)


def verify_group_structure(k: int, cayley_k_max: int = 4) -> Report:
    """Real induced permutations form an abelian group of involutions of order
    ``2^k`` (inside the alternating group for ``k >= 2``); switch maps commute;
    and for ``k <= cayley_k_max`` the class Cayley table matches XOR on
    ``(imaginary, switch_bits)``."""
    report = Report(f"group-structure k={k}")
    identity = tuple(range(2**k))
    real_perms: set[tuple[int, ...]] = set()
    for mask, rep in enumerate(gens.all_reps(k)):
        if type_of(rep) is EntryType.REAL:
            real_perms.add(induced_permutation(rep).row_permutation)
    report.check("order", len(real_perms) == 2**k)
    for p, q in itertools.product(real_perms, repeat=2):
        pq = compose_perms(p, q)
        if pq not in real_perms:
            report.fail("closure", f"{format_cycles(p)} o {format_cycles(q)} leaves the set")
        if pq != compose_perms(q, p):
            report.fail("abelian", f"{format_cycles(p)} and {format_cycles(q)} do not commute")
    for p in real_perms:
        if p == identity:
            continue
        cyc = cycles_of(p)
        if compose_perms(p, p) != identity:
            report.fail("involution", f"{format_cycles(p)} has order > 2")
        if any(len(c) != 2 for c in cyc):
            report.fail("derangement-by-transpositions", format_cycles(p))
        if k >= 2 and not is_even(p):
            report.fail("alternating", f"{format_cycles(p)} is odd")
    switches = [switch_permutation(k, j).perm for j in range(k)]
    for a, b in itertools.combinations(switches, 2):
        if compose_perms(a, b) != compose_perms(b, a):
            report.fail("switch-commute", f"{format_cycles(a)} and {format_cycles(b)}")
    for inv in ("closure", "abelian", "involution", "derangement-by-transpositions", "switch-commute"):
        report.checks.setdefault(inv, True)
    if k >= 2:
        report.checks.setdefault("alternating", True)
    if k <= cayley_k_max:
        _check_cayley_table(k, report)
    report.details.update(real_group_order=len(real_perms), alternating_checked=k >= 2)
    return report


def _check_cayley_table(k: int, report: Report) -> None:
    # class product via representative matrices vs XOR of (imaginary, bits)
    cls_list = classes_mod.classify(k)
    label_of = {(c.shape, c.entry_type): c.label for c in cls_list}
    images = {}
    for c in cls_list:
        images[c.label] = induced_permutation(c.canonical)
    if len(set(images.values())) != len(cls_list):
        report.fail("isomorphism", "two classes share an induced permutation")
    for a, b in itertools.product(cls_list, repeat=2):
        prod = gens.generator_rep(a.canonical) @ gens.generator_rep(b.canonical)
        key = (shape_of(prod), type_of(prod))
        if key not in label_of:
            report.fail("class-closure", f"[{a.label}][{b.label}] is not a class")
            continue
        if images[label_of[key]] != images[a.label] @ images[b.label]:
            report.fail("isomorphism", f"[{a.label}][{b.label}] -> [{label_of[key]}] breaks the XOR law")
    report.checks.setdefault("class-closure", True)
    report.checks.setdefault("isomorphism", True)
    report.details["cayley_table"] = f"{len(cls_list)}x{len(cls_list)}"


def verify_induced_action(k: int, samples: int | None = None, seed: int = 0) -> Report:
    """Induced permutation action equals monomial action for every generator.

    ``samples=None`` means every point of J_2 (small ``k`` only).
    """
    report = Report(f"induced-action k={k}")
    if samples is None:
        pts = torsion.point_array(k, 2)
        report.details["points"] = "all"
    else:
        pts = torsion.sample_array(k, 2, samples, seed)
        report.details["points"] = samples
    for g in gens.enumerate_gamma_hat(k):
        rep = gens.generator_rep(g)
        try:
            p = induced_permutation(rep)
        except ShapeNotBlockStructured as exc:
            report.fail("block-structure", f"{g}: {exc}")
            continue
        if not np.array_equal(clifford_perm_act_array(p, pts), torsion.monomial_act_array(rep, pts, 2)):
            report.fail("same-action", f"{g} vs {p.name}")
    report.checks.setdefault("block-structure", True)
    report.checks.setdefault("same-action", True)
    report.details["generators"] = 2 ** (2 * k + 1)
    return report
