"""Fixed points, translation constants and entry-permuting maps on J_n.

An entry permutation ``sigma`` acts on the ``2^(k+1)`` matrix-form entries of
a point: ``(A w)[sigma(i)] = w[i]``. The translation constant of ``w`` is
``A w - w`` and the responsibility set of ``v`` is the fibre of that map over
``v``. Internally ``sigma`` is 0-based; all printed cycles are 1-based.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import classification as classes_mod
from . import generators as gens
from . import torsion
from ._report import Report
from .generators import GeneratorIndex
from .permutations import CliffordPermutation, cycles_of, format_cycles, induced_permutation
from .torsion import TorsionPoint

__all__ = [
    "SAMPLE_CHECK_POINTS",
    "NotATranslationConstant",
    "EntryPermutation",
    "cycle_decomposition",
    "eta_of",
    "entry_act",
    "entry_act_array",
    "fixed_points",
    "fixed_point_count",
    "translation_constant",
    "translation_constants",
    "responsibility_set",
    "responsibility_array",
    "verify_counting_laws",
    "verify_fp_tc",
    "fixed_point_table",
    "format_fixed_point_table",
    "compare_fixed_point_table",
    "negative_witness",
    "fuzz_fp_equals_tc",
]

SAMPLE_CHECK_POINTS = 10_000

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class NotATranslationConstant(ValueError):
    """The point is not of the form ``A w - w`` for any ``w``."""


def cycle_decomposition(sigma: Sequence[int]) -> tuple[list[tuple[int, ...]], int, int]:
    """Disjoint cycles (0-based) plus the counts ``p`` (length >= 2) and ``q`` (fixed)."""
    cycles = cycles_of(sigma)
    p = sum(1 for c in cycles if len(c) > 1)
    return cycles, p, len(cycles) - p


@dataclass(frozen=True)
class EntryPermutation:
    k: int
    sigma: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        if len(sigma) != 2 ** (self.k + 1) or sorted(sigma) != list(range(len(sigma))):
            raise ValueError(f"sigma must be a permutation of {2 ** (self.k + 1)} entry indices")
        object.__setattr__(self, "sigma", sigma)

    @classmethod
    def identity(cls, k: int) -> EntryPermutation:
        return cls(k, tuple(range(2 ** (k + 1))))

    @classmethod
    def column_swap(cls, k: int) -> EntryPermutation:
        """Swap the real and imaginary entry of every row."""
        return cls(k, tuple(i ^ 1 for i in range(2 ** (k + 1))))

    @classmethod
    def from_cycles(cls, k: int, text: str) -> EntryPermutation:
        """Parse 1-based cycle notation such as ``"(17)(28)"`` or ``"(1 10)(2 3)"``."""
        size = 2 ** (k + 1)
        sigma = list(range(size))
        stripped = text.replace(" ", "").replace(",", "")
        if stripped in ("", "()", "(1)", "id"):
            return cls(k, tuple(sigma))
        if _CYCLE_RE.sub("", text).strip():
            raise ValueError(f"cannot parse cycle notation {text!r}")
        seen: set[int] = set()
        for body in _CYCLE_RE.findall(text):
            if re.search(r"[\s,]", body.strip()):
                elems = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            else:
                elems = [int(ch) for ch in body]
            if any(not 1 <= e <= size for e in elems) or seen & set(elems) or len(set(elems)) != len(elems):
                raise ValueError(f"cycle ({body}) is not disjoint or leaves 1..{size}")
            seen |= set(elems)
            for a, b in zip(elems, elems[1:] + elems[:1]):
                sigma[a - 1] = b - 1
        return cls(k, tuple(sigma))

    @classmethod
    def random(cls, k: int, rng: np.random.Generator) -> EntryPermutation:
        return cls(k, tuple(int(x) for x in rng.permutation(2 ** (k + 1))))

    @cached_property
    def _decomposition(self):
        return cycle_decomposition(self.sigma)

    @property
    def cycles(self) -> list[tuple[int, ...]]:
        return self._decomposition[0]

    @property
    def p(self) -> int:
        return self._decomposition[1]

    @property
    def q(self) -> int:
        return self._decomposition[2]

    @property
    def inverse(self) -> tuple[int, ...]:
        inv = [0] * len(self.sigma)
        for i, j in enumerate(self.sigma):
            inv[j] = i
        return tuple(inv)

    def is_derangement_by_transpositions(self) -> bool:
        return all(len(c) == 2 for c in self.cycles)

    def __str__(self) -> str:
        return format_cycles(self.sigma)


def eta_of(p: CliffordPermutation) -> EntryPermutation:
    """The entry permutation with the same action as ``p`` on 2-torsion points.

    Real: entry ``(row x, column c)`` goes to ``(x ^ bits, c)``; imaginary
    additionally swaps the column.
    """
    flip = 1 if p.imaginary else 0
    sigma = tuple(2 * ((i >> 1) ^ p.switch_bits) + ((i & 1) ^ flip) for i in range(2 ** (p.k + 1)))
    return EntryPermutation(p.k, sigma)


def _check_level(sigma: EntryPermutation, k: int) -> None:
    if sigma.k != k:
        raise ValueError(f"level mismatch: permutation k={sigma.k}, point k={k}")


def entry_act(sigma: EntryPermutation, w: TorsionPoint) -> TorsionPoint:
    _check_level(sigma, w.k)
    out = [0] * len(w.entries)
    for i, j in enumerate(sigma.sigma):
        out[j] = w.entries[i]
    return TorsionPoint(w.k, w.n, tuple(out))


def entry_act_array(sigma: EntryPermutation, arr: np.ndarray) -> np.ndarray:
    return arr[:, list(sigma.inverse)]


def _difference(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    return ((a.astype(np.int32) - b.astype(np.int32)) % n).astype(a.dtype)


def _points(arr: np.ndarray, k: int, n: int) -> list[TorsionPoint]:
    return [TorsionPoint(k, n, tuple(int(x) for x in row)) for row in arr]


def _sorted_unique(arr: np.ndarray) -> np.ndarray:
    # lexicographic on matrix-form residues
    return np.unique(arr, axis=0) if len(arr) else arr


def fixed_point_count(sigma: EntryPermutation, n: int) -> int:
    return n ** (sigma.p + sigma.q)


def fixed_points(sigma: EntryPermutation, n: int, cap: int = torsion.DEFAULT_CAP) -> list[TorsionPoint]:
    """All fixed points, by enumeration of J_n, in lexicographic order."""
    pts = torsion.point_array(sigma.k, n, cap)
    mask = np.all(entry_act_array(sigma, pts) == pts, axis=1)
    return _points(pts[mask], sigma.k, n)


def translation_constant(sigma: EntryPermutation, w: TorsionPoint) -> TorsionPoint:
    return entry_act(sigma, w) - w


def translation_constants(sigma: EntryPermutation, n: int, cap: int = torsion.DEFAULT_CAP) -> list[TorsionPoint]:
    """The image of ``w -> A w - w`` over J_n, in lexicographic order."""
    pts = torsion.point_array(sigma.k, n, cap)
    tc = _difference(entry_act_array(sigma, pts), pts, n)
    return _points(_sorted_unique(tc), sigma.k, n)


def _is_translation_constant(sigma: EntryPermutation, v: Sequence[int], n: int) -> bool:
    return all(sum(v[i] for i in cyc) % n == 0 for cyc in sigma.cycles)


def responsibility_array(
    sigma: EntryPermutation, v: TorsionPoint, cap: int = torsion.DEFAULT_CAP
) -> np.ndarray:
    """Every ``w`` with ``A w = v + w``, built cycle by cycle.

    Along a cycle ``i -> sigma(i)`` the condition reads
    ``w[sigma(i)] = w[i] - v[sigma(i)]``, so each cycle carries one free value
    and is consistent exactly when ``v`` sums to zero over it.
    """
    _check_level(sigma, v.k)
    n = v.n
    if not _is_translation_constant(sigma, v.entries, n):
        raise NotATranslationConstant(f"{v} is not a translation constant of {sigma}")
    free = len(sigma.cycles)
    count = n**free
    if count > cap:
        raise torsion.EnumerationCapExceeded(f"responsibility set of size {count} exceeds the cap {cap}")
    grid = ((np.arange(count, dtype=np.int64)[:, None] // n ** np.arange(free - 1, -1, -1)) % n)
    out = np.zeros((count, len(sigma.sigma)), dtype=np.int64)
    for c, cyc in enumerate(sigma.cycles):
        acc = grid[:, c]
        out[:, cyc[0]] = acc
        for j in cyc[1:]:
            acc = (acc - v.entries[j]) % n
            out[:, j] = acc
    return _sorted_unique(out.astype(v.as_array().dtype))


def responsibility_set(
    sigma: EntryPermutation, v: TorsionPoint, cap: int = torsion.DEFAULT_CAP
) -> list[TorsionPoint]:
    return _points(responsibility_array(sigma, v, cap), v.k, v.n)


def verify_counting_laws(
    sigma: EntryPermutation,
    n: int,
    cap: int = torsion.DEFAULT_CAP,
    samples: int = SAMPLE_CHECK_POINTS,
    seed: int = 0,
    constructive_checks: int = 8,
) -> Report:
    """``|FP| = n^(p+q)``, equal disjoint responsibility sets covering J_n,
    and ``|TC| * |FP| = |J_n|``.

    Counts come from enumeration when ``|J_n| <= cap``. Beyond the cap they
    come from the formulas, backed by a seeded sampled consistency check, and
    ``details["counts_source"]`` says ``"formula"``.
    """
    k = sigma.k
    report = Report(f"counting-laws sigma={sigma} n={n} k={k}")
    total = torsion.torsion_count(k, n)
    expected_fp = fixed_point_count(sigma, n)
    try:
        pts = torsion.point_array(k, n, cap)
    except torsion.EnumerationCapExceeded:
        pts = None
    if pts is not None:
        source = "enumerated"
        tc = _difference(entry_act_array(sigma, pts), pts, n)
        codes = torsion.encode_array(tc, n)
        uniq, inverse, fibre = np.unique(codes, return_inverse=True, return_counts=True)
        fixed_codes = torsion.encode_array(pts[np.all(tc == 0, axis=1)], n)
        fp_count = len(fixed_codes)
        tc_count = len(uniq)
        partition_ok = bool(np.all(fibre == expected_fp)) and int(fibre.sum()) == total
        # constructive fibres must match the enumerated ones
        rng = np.random.default_rng(seed)
        picks = rng.choice(tc_count, size=min(constructive_checks, tc_count), replace=False)
        for idx in picks:
            v = TorsionPoint(k, n, tuple(int(x) for x in torsion.decode_codes(uniq[idx : idx + 1], k, n)[0]))
            built = torsion.encode_array(responsibility_array(sigma, v, cap), n)
            enumerated = np.sort(torsion.encode_array(pts[inverse.ravel() == idx], n))
            if not np.array_equal(np.sort(built), enumerated):
                partition_ok = False
                report.fail("constructive-fibre", f"r({v}) built from cycles differs from enumeration")
        fp_equals_tc = bool(np.array_equal(np.sort(fixed_codes), uniq))
    else:
        source = "formula"
        fp_count = expected_fp
        tc_count = total // expected_fp
        pts = torsion.sample_array(k, n, samples, seed)
        tc = _difference(entry_act_array(sigma, pts), pts, n)
        sample_ok = all(_is_translation_constant(sigma, row, n) for row in tc.astype(np.int64))
        fixed = np.all(tc == 0, axis=1)
        const_on_cycles = np.ones(len(pts), dtype=bool)
        for cyc in sigma.cycles:
            const_on_cycles &= np.all(pts[:, list(cyc)] == pts[:, [cyc[0]]], axis=1)
        sample_ok = sample_ok and bool(np.array_equal(fixed, const_on_cycles))
        report.check("sampled-consistency", sample_ok)
        partition_ok = sample_ok
        fp_equals_tc = None
    report.check("fp-count", fp_count == expected_fp)
    report.check("partition", partition_ok)
    report.check("product", tc_count * fp_count == total)
    report.details.update(
        sigma_cycles=str(sigma),
        n=n,
        k=k,
        p=sigma.p,
        q=sigma.q,
        fp_count=fp_count,
        tc_count=tc_count,
        product=tc_count * fp_count,
        partition_ok=partition_ok,
        fp_equals_tc=fp_equals_tc,
        counts_source=source,
    )
    return report


def _nonidentity_classes(k: int) -> list[classes_mod.ActionClass]:
    return [c for c in classes_mod.classify(k) if not c.is_identity]


def verify_fp_tc(
    k: int,
    cap: int = torsion.DEFAULT_CAP,
    samples: int = SAMPLE_CHECK_POINTS,
    seed: int = 0,
) -> Report:
    """For every nonidentity class on J_2: ``FP = TC`` as sets,
    ``|FP| = 2^(2^k)``, the eta permutation reproduces the monomial action,
    and the two constant points ``v0..0``, ``v3..3`` are exactly the points
    fixed by every class.

    Exhaustive while ``|J_2|`` fits under ``cap``; beyond that the counts come
    from the cycle type of eta and a sampled check.
    """
    report = Report(f"fp-equals-tc k={k}")
    expected = 2 ** (2**k)
    try:
        pts = torsion.point_array(k, 2, cap)
        source = "enumerated"
    except torsion.EnumerationCapExceeded:
        pts = torsion.sample_array(k, 2, samples, seed)
        source = "formula"
    common = np.ones(len(pts), dtype=bool)
    sizes = {}
    for cls in _nonidentity_classes(k):
        rep = gens.generator_rep(cls.canonical)
        act = torsion.monomial_act_array(rep, pts, 2)
        eta = eta_of(induced_permutation(rep))
        if not np.array_equal(entry_act_array(eta, pts), act):
            report.fail("eta-action", f"eta for [{cls.label}] disagrees with the monomial action")
        if not eta.is_derangement_by_transpositions():
            report.fail("eta-derangement", f"eta for [{cls.label}] is {eta}")
        tc = act ^ pts  # subtraction mod 2
        fixed = np.all(tc == 0, axis=1)
        common &= fixed
        if source == "enumerated":
            fp_codes = torsion.encode_array(pts[fixed], 2)
            tc_codes = np.unique(torsion.encode_array(tc, 2))
            sizes[cls.label] = int(fixed.sum())
            if len(fp_codes) != expected:
                report.fail("fp-count", f"[{cls.label}] has {len(fp_codes)} fixed points, expected {expected}")
            if not np.array_equal(np.sort(fp_codes), tc_codes):
                report.fail("fp-equals-tc", f"[{cls.label}] FP and TC differ")
        else:
            sizes[cls.label] = 2 ** (eta.p + eta.q)
            if sizes[cls.label] != expected:
                report.fail("fp-count", f"[{cls.label}] cycle type gives {sizes[cls.label]} fixed points")
            # A(Aw - w) = Aw - w on 2-torsion, so every sampled constant must be fixed
            if not np.array_equal(torsion.monomial_act_array(rep, tc, 2), tc):
                report.fail("fp-equals-tc", f"[{cls.label}] a sampled translation constant is not fixed")
    if source == "enumerated":
        everywhere = {TorsionPoint(k, 2, tuple(int(x) for x in row)).label for row in pts[common]}
        want = {"0" * 2**k, "3" * 2**k}
        if everywhere != want:
            report.fail("common-fixed-points", f"points fixed by every class: {sorted(everywhere)}")
        report.checks.setdefault("common-fixed-points", True)
    for inv in ("eta-action", "eta-derangement", "fp-count", "fp-equals-tc"):
        report.checks.setdefault(inv, True)
    report.details.update(fp_sizes=sizes, expected_fp=expected, counts_source=source)
    return report


def fixed_point_table(k: int = 2) -> list[tuple[str, list[str]]]:
    """Fixed points of every nonidentity class at level ``k`` as ``v``-labels.

    Computed from the monomial action of each class representative over all
    of J_2; rows follow class order and entries are sorted.
    """
    pts = torsion.point_array(k, 2)
    rows = []
    for cls in _nonidentity_classes(k):
        act = torsion.monomial_act_array(gens.generator_rep(cls.canonical), pts, 2)
        fixed = pts[np.all(act == pts, axis=1)]
        labels = sorted(TorsionPoint(k, 2, tuple(int(x) for x in row)).label for row in fixed)
        rows.append((cls.label, labels))
    return rows


def format_fixed_point_table(rows: Iterable[tuple[str, list[str]]]) -> str:
    width = max(len(label) for label, _ in rows) + 2
    lines = [f"{'[' + label + ']':<{width}}  " + " ".join("v" + p for p in points) for label, points in rows]
    return "\n".join(lines) + "\n"


def compare_fixed_point_table(reference: Mapping[str, Iterable[str]], k: int = 2) -> Report:
    """Set-compare computed fixed points with a reference table (``label -> v-labels``)."""
    report = Report(f"fixed-point-table k={k}")
    computed = dict(fixed_point_table(k))
    if set(reference) != set(computed):
        report.fail("class-labels", f"reference {sorted(reference)} vs computed {sorted(computed)}")
    for label in sorted(set(reference) & set(computed), key=lambda s: (len(s), s)):
        ref = {p.removeprefix("v").removeprefix("_") for p in reference[label]}
        got = set(computed[label])
        if ref != got:
            report.fail(
                "set-equal",
                f"[{label}] reference-only {sorted(ref - got)}, computed-only {sorted(got - ref)}",
            )
    report.checks.setdefault("class-labels", True)
    report.checks.setdefault("set-equal", True)
    return report


def negative_witness(n: int, k: int) -> Report:
    """``rho(e1)`` on the all-``(1, 1)`` point of J_n is not an entry permutation for ``n > 2``.

    Any entry permutation preserves the multiset of entries; the action here
    negates imaginary parts, which changes it. For ``2^(k+1) <= 8`` entries
    every permutation is also tried outright.
    """
    report = Report(f"negative-witness n={n} k={k}")
    width = 2 ** (k + 1)
    w = TorsionPoint(k, n, (1,) * width)
    image = torsion.monomial_act(gens.generator_rep(GeneratorIndex(k, 0b1)), w)
    report.check("multiset-changed", Counter(image.entries) != Counter(w.entries))
    if width <= 8:
        perms = np.array(list(itertools.permutations(range(width))), dtype=np.int64)
        outputs = np.asarray(w.entries)[perms]
        matches = np.all(outputs == np.asarray(image.entries), axis=1)
        report.check("no-sigma-matches", not bool(matches.any()))
        report.details["sigmas_tried"] = len(perms)
    report.details.update(point=w.matrix(), image=image.matrix())
    return report


def fuzz_fp_equals_tc(k: int, n: int, trials: int, seed: int = 0) -> list[dict]:
    """Random entry permutations with ``FP = TC``, flagged by whether they are
    derangements by disjoint transpositions. Reports only; asserts nothing."""
    rng = np.random.default_rng(seed)
    hits = []
    for _ in range(trials):
        sigma = EntryPermutation.random(k, rng)
        report = verify_counting_laws(sigma, n, constructive_checks=0)
        if report.details["fp_equals_tc"]:
            hits.append(
                {
                    "sigma_cycles": str(sigma),
                    "n": n,
                    "k": k,
                    "derangement_by_transpositions": sigma.is_derangement_by_transpositions(),
                }
            )
    return hits
