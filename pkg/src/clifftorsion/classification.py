"""Equivalence of generator actions on 2-torsion points.

Two signed generators are equivalent when they act identically on every
2-torsion point. Classes are keyed by ``(shape, type)``; for small ``k`` the
key is cross-checked against a brute-force fingerprint of the action on all
of J_2.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
import numpy as np

from . import generators as gens
from . import torsion
from ._report import Report
from .generators import GeneratorIndex
from .monomial import EntryType, shape_of, type_of

__all__ = [
    "EXHAUSTIVE_K_MAX",
    "SAMPLE_POINTS",
    "ActionClass",
    "class_key",
    "action_fingerprint",
    "actions_equivalent",
    "classify",
    "clear_cache",
    "class_of",
    "classify_by_action",
    "verify_structure_theorem",
    "verify_lift_classes",
    "verify_key_matches_action",
    "class_registry",
]

EXHAUSTIVE_K_MAX = 3
SAMPLE_POINTS = 10_000


def class_key(g: GeneratorIndex) -> tuple[tuple[int, ...], EntryType]:
    rep = gens.generator_rep(g)
    return shape_of(rep), type_of(rep)


@dataclass(frozen=True)
class ActionClass:
    k: int
    shape: tuple[int, ...]
    entry_type: EntryType
    members: tuple[GeneratorIndex, ...]

    @property
    def canonical(self) -> GeneratorIndex:
        return min(self.members, key=GeneratorIndex.canon_key)

    @property
    def label(self) -> str:
        return self.canonical.label

    @property
    def signed_members(self) -> tuple[GeneratorIndex, ...]:
        return tuple(GeneratorIndex(g.k, g.mask, neg) for g in self.members for neg in (False, True))

    @property
    def even_count(self) -> int:
        return sum(1 for g in self.members if g.length % 2 == 0)

    @property
    def odd_count(self) -> int:
        return len(self.members) - self.even_count

    @property
    def is_identity(self) -> bool:
        return self.entry_type is EntryType.REAL and self.shape == tuple(range(len(self.shape)))

    def shape_one_based(self) -> list[int]:
        return [r + 1 for r in self.shape]

    def to_dict(self) -> dict:
        return {
            "canonical": self.label,
            "type": self.entry_type.value,
            "shape": self.shape_one_based(),
            "members": [g.label for g in sorted(self.members, key=GeneratorIndex.canon_key)],
            "even_count": self.even_count,
            "odd_count": self.odd_count,
        }


@lru_cache(maxsize=8)
def _classify(k: int) -> tuple[ActionClass, ...]:
    buckets: dict[tuple, list[GeneratorIndex]] = defaultdict(list)
    for mask, rep in enumerate(gens.all_reps(k)):
        buckets[(shape_of(rep), type_of(rep))].append(GeneratorIndex(k, mask))
    classes = [ActionClass(k, shape, etype, tuple(members)) for (shape, etype), members in buckets.items()]
    classes.sort(key=lambda c: c.canonical.canon_key())
    return tuple(classes)


def clear_cache() -> None:
    """Forget memoised classes (needed after the generator reps change)."""
    _classify.cache_clear()


def classify(k: int, k_max: int | None = gens.K_MAX) -> list[ActionClass]:
    """Partition the unsigned generators into action classes, ordered by canonical member."""
    gens._check_k(k, k_max)
    return list(_classify(k))


def class_of(g: GeneratorIndex) -> ActionClass:
    key = class_key(g)
    for cls in _classify(g.k):
        if (cls.shape, cls.entry_type) == key:
            return cls
    raise LookupError(f"no class for {g}")  # unreachable for valid generators


def action_fingerprint(g: GeneratorIndex, points: np.ndarray) -> bytes:
    out = torsion.monomial_act_array(gens.generator_rep(g), points, 2)
    return hashlib.blake2b(np.ascontiguousarray(out).tobytes(), digest_size=16).digest()


def actions_equivalent(
    g: GeneratorIndex,
    h: GeneratorIndex,
    method: str = "auto",
    samples: int = SAMPLE_POINTS,
    seed: int = 0,
) -> bool:
    """Whether ``g`` and ``h`` act identically on 2-torsion points.

    ``method`` is ``"exhaustive"`` (all of J_2), ``"criterion"`` (equal shape
    and type), ``"sampled"`` (seeded random points) or ``"auto"``, which is
    exhaustive up to :data:`EXHAUSTIVE_K_MAX` and the criterion beyond.
    """
    if g.k != h.k:
        raise ValueError("generators live at different levels")
    if method == "auto":
        method = "exhaustive" if g.k <= EXHAUSTIVE_K_MAX else "criterion"
    if method == "criterion":
        return class_key(g) == class_key(h)
    if method == "exhaustive":
        pts = torsion.point_array(g.k, 2)
    elif method == "sampled":
        pts = torsion.sample_array(g.k, 2, samples, seed)
    else:
        raise ValueError(f"unknown method {method!r}")
    a = torsion.monomial_act_array(gens.generator_rep(g), pts, 2)
    b = torsion.monomial_act_array(gens.generator_rep(h), pts, 2)
    return bool(np.array_equal(a, b))


def classify_by_action(k: int, points: np.ndarray | None = None) -> list[list[GeneratorIndex]]:
    """Group all signed generators by a hash of their action on ``points``.

    Defaults to the whole of J_2, which is only feasible for small ``k``.
    """
    if points is None:
        points = torsion.point_array(k, 2)
    groups: dict[bytes, list[GeneratorIndex]] = defaultdict(list)
    for g in gens.enumerate_gamma_hat(k):
        groups[action_fingerprint(g, points)].append(g)
    return sorted(groups.values(), key=lambda members: min(m.canon_key() for m in members))


def verify_structure_theorem(k: int, check_parity: bool = True) -> Report:
    """Class sizes, class count, type split, shape count and parity balance.

    Parity balance cannot hold at ``k = 1`` where every class is a singleton;
    callers that want a green aggregate there pass ``check_parity=False``.
    """
    if not 1 <= k <= 5:
        raise ValueError("structure theorem verification supports 1 <= k <= 5")
    report = Report(f"structure-theorem k={k}")
    classes = classify(k)
    size = 2 ** (k - 1)
    for cls in classes:
        if len(cls.members) != size:
            report.fail("class-size", f"[{cls.label}] has {len(cls.members)} members, expected {size}")
        if check_parity and cls.even_count != cls.odd_count:
            report.fail("parity-balance", f"[{cls.label}] even={cls.even_count} odd={cls.odd_count}")
    n_real = sum(1 for c in classes if c.entry_type is EntryType.REAL)
    report.check("class-count", len(classes) == 2 ** (k + 1))
    report.check("type-split", n_real == len(classes) - n_real == 2**k)
    shapes: dict[tuple[int, ...], list[EntryType]] = defaultdict(list)
    for cls in classes:
        shapes[cls.shape].append(cls.entry_type)
    report.check("shape-count", len(shapes) == 2**k)
    report.check(
        "shape-per-type",
        all(sorted(t.value for t in ts) == ["imaginary", "real"] for ts in shapes.values()),
    )
    report.checks.setdefault("class-size", True)
    if check_parity:
        report.checks.setdefault("parity-balance", True)
    else:
        report.details["parity_balance"] = "skipped"
    report.details.update(classes=len(classes), class_size=size, shapes=len(shapes), real=n_real)
    return report


def verify_lift_classes(k: int) -> Report:
    """Lifted class sets coincide exactly when shapes agree, and are disjoint otherwise."""
    if not 1 <= k <= 4:
        raise ValueError("lift verification supports 1 <= k <= 4")
    report = Report(f"lift-classes k={k}")
    unsigned = list(gens.enumerate_unsigned(k))
    lifted: dict[int, frozenset] = {}
    for g in unsigned:
        lifted[g.mask] = frozenset(class_key(h) for h in gens.lift_generator(g))
    shape = {g.mask: shape_of(gens.generator_rep(g)) for g in unsigned}
    equal_pairs = disjoint_pairs = 0
    for g in unsigned:
        for h in unsigned:
            a, b = lifted[g.mask], lifted[h.mask]
            if len(a) != 4:
                report.fail("four-classes", f"lifts of {g} fall into {len(a)} classes")
            if shape[g.mask] == shape[h.mask]:
                equal_pairs += 1
                if a != b:
                    report.fail("same-shape-equal", f"{g}, {h}: equal shapes but different lifted classes")
            else:
                disjoint_pairs += 1
                if a & b:
                    report.fail("different-shape-disjoint", f"{g}, {h}: lifted classes overlap")
    for inv in ("four-classes", "same-shape-equal", "different-shape-disjoint"):
        report.checks.setdefault(inv, True)
    report.details.update(pairs=len(unsigned) ** 2, equal_shape_pairs=equal_pairs, disjoint_pairs=disjoint_pairs)
    return report


def verify_key_matches_action(k: int, samples: int = SAMPLE_POINTS, seed: int = 0) -> Report:
    """The ``(shape, type)`` key induces the same partition as the actual action.

    Exhaustive over J_2 up to :data:`EXHAUSTIVE_K_MAX`; seeded samples beyond.
    """
    report = Report(f"key-vs-action k={k}")
    if k <= EXHAUSTIVE_K_MAX:
        points = torsion.point_array(k, 2)
        report.details["points"] = "all"
    else:
        points = torsion.sample_array(k, 2, samples, seed)
        report.details["points"] = samples
    by_action = {frozenset(m.unsigned() for m in group) for group in classify_by_action(k, points)}
    by_key = {frozenset(c.members) for c in classify(k)}
    if by_action != by_key:
        report.fail("same-partition", f"{len(by_action)} action groups vs {len(by_key)} keyed classes")
    report.checks.setdefault("same-partition", True)
    report.details["classes"] = len(by_key)
    return report


def class_registry(k: int) -> dict:
    return {"k": k, "classes": [c.to_dict() for c in classify(k)]}

