"""Command-line entry point: ``clifftorsion <command> [options]``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
import time
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from . import __version__
from . import classification as classes_mod
from . import diagrams
from . import dynamics as dyn
from . import generators as gens
from . import permutations as perms
from . import torsion
from ._report import Report
from .monomial import shape_of, type_of

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DIAGRAM_K_MAX = 4
VERIFY_K_MAX = 5
FUZZ_TRIALS = 100


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _order(text: str) -> int:
    value = _positive_int(text)
    if not 2 <= value <= torsion.MAX_ORDER:
        raise argparse.ArgumentTypeError(f"torsion order must lie in 2..{torsion.MAX_ORDER}")
    return value


def _order_list(text: str) -> list[int]:
    return [_order(t) for t in text.split(",") if t.strip()]


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--k", type=_positive_int, help="level k (spinor dimension 2^k)")
    p.add_argument("--n", type=_order, default=2, help="torsion order (default 2)")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    p.add_argument("--cap", type=_positive_int, default=torsion.DEFAULT_CAP,
                   help="largest point set enumerated before falling back to sampling")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path, help="write output here instead of stdout")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="clifftorsion",
        description="Clifford generator actions on torsion points of the Dirac spinor torus.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("gens", parents=[common], help="list vector generator matrices")
    sub.add_parser("classify", parents=[common], help="action classes and structure verdicts")
    sub.add_parser("table1", parents=[common], help="fixed points of the nonidentity classes at k=2")
    sub.add_parser("perms", parents=[common], help="induced Clifford permutations of every class")

    p = sub.add_parser("dynamics", parents=[common], help="fixed points and translation constants")
    p.add_argument("--sigma", help="entry permutation in 1-based cycle notation, e.g. '(17)(28)'")
    p.add_argument("--class", dest="class_id", help="use the eta permutation of this class, e.g. e14")

    p = sub.add_parser("diagram", parents=[common], help="shoelace diagram as text and SVG")
    p.add_argument("--class", dest="class_id", required=True, help="canonical class label, e.g. e14")

    p = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    p.add_argument("--k-max", type=_positive_int, default=3)
    p.add_argument("--n-list", type=_order_list, default=[2, 3, 4])
    p.add_argument("--inject-fault", metavar="K,I", help=argparse.SUPPRESS)
    return parser


def _emit(args, text: str, payload) -> None:
    body = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text
    if args.out:
        args.out.write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _level(args, default: int, k_max: int) -> int:
    k = args.k if args.k is not None else default
    if k > k_max:
        raise UsageError(f"--k {k} exceeds the supported maximum {k_max} for {args.command}")
    return k


def _find_class(k: int, label: str) -> classes_mod.ActionClass:
    for cls in classes_mod.classify(k):
        if cls.label == label:
            return cls
    known = ", ".join(c.label for c in classes_mod.classify(k))
    raise UsageError(f"unknown class id {label!r} at k={k}; known: {known}")


def _factor_names(k: int, i: int) -> str:
    j = (i + 1) // 2
    return " ⊗ ".join(["I2"] * (k - j) + ["E1" if i % 2 else "E2"] + ["B"] * (j - 1))


def cmd_gens(args) -> int:
    k = _level(args, 1, gens.K_MAX)
    rows, blocks = [], []
    for i in range(1, 2 * k + 1):
        rep = gens.vector_generator_rep(k, i)
        entry = {
            "label": f"e{i}",
            "factors": _factor_names(k, i),
            "type": type_of(rep).value,
            "shape_cycles": perms.format_cycles(shape_of(rep)),
            "matrix": [[str(u) if u is not None else "0" for u in row] for row in rep.rows()],
        }
        rows.append(entry)
        blocks.append(
            f"e{i} = {entry['factors']}   type={entry['type']}   shape={entry['shape_cycles']}\n{rep.pretty()}\n"
        )
    _emit(args, "\n".join(blocks), {"k": k, "generators": rows})
    return EXIT_OK


def cmd_classify(args) -> int:
    k = _level(args, 2, gens.K_MAX)
    registry = classes_mod.class_registry(k)
    verdict = classes_mod.verify_structure_theorem(k) if k <= 5 else None
    if verdict is not None:
        registry["structure_theorem"] = verdict.to_dict()
    lines = [f"k={k}: {len(registry['classes'])} classes of {4**k} unsigned generators"]
    for c in registry["classes"]:
        members = " ".join(c["members"])
        tag = "[" + c["canonical"] + "]"
        lines.append(f"  {tag:<{k + 3}} {c['type']:<9} even={c['even_count']} odd={c['odd_count']}  {members}")
    if verdict is not None:
        lines.append(verdict.summary_line())
    _emit(args, "\n".join(lines) + "\n", registry)
    return EXIT_OK


def cmd_table1(args) -> int:
    if args.k not in (None, 2):
        raise UsageError("table1 is defined at k=2 only")
    rows = dyn.fixed_point_table(2)
    payload = {"k": 2, "classes": [{"class": label, "fixed_points": ["v" + p for p in pts]} for label, pts in rows]}
    _emit(args, dyn.format_fixed_point_table(rows), payload)
    return EXIT_OK


def cmd_perms(args) -> int:
    k = _level(args, 2, gens.K_MAX)
    entries, lines = [], []
    for cls in classes_mod.classify(k):
        p = perms.induced_permutation(cls.canonical)
        entries.append({"class": cls.label, **p.to_dict()})
        tag = "[" + cls.label + "]"
        lines.append(f"{tag:<{k + 3}} {p.name:<{6 * k + 4}} rows {p.cycles()}")
    report = perms.verify_group_structure(k)
    lines.append(report.summary_line())
    _emit(args, "\n".join(lines) + "\n", {"k": k, "classes": entries, "group_structure": report.to_dict()})
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_dynamics(args) -> int:
    k = _level(args, 2, gens.K_MAX)
    if args.sigma and args.class_id:
        raise UsageError("give either --sigma or --class, not both")
    if args.sigma:
        try:
            targets = [(args.sigma, dyn.EntryPermutation.from_cycles(k, args.sigma))]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif args.class_id:
        cls = _find_class(k, args.class_id)
        targets = [(cls.label, dyn.eta_of(perms.induced_permutation(cls.canonical)))]
    else:
        targets = [
            (c.label, dyn.eta_of(perms.induced_permutation(c.canonical)))
            for c in classes_mod.classify(k)
            if not c.is_identity
        ]
    reports = [dyn.verify_counting_laws(s, args.n, cap=args.cap, seed=args.seed) for _, s in targets]
    lines = []
    for (name, _), r in zip(targets, reports):
        d = r.details
        lines.append(
            f"{name:<10} sigma={d['sigma_cycles']}  p={d['p']} q={d['q']}  |FP|={d['fp_count']} "
            f"|TC|={d['tc_count']} product={d['product']}  fp=tc:{d['fp_equals_tc']}  ({d['counts_source']})"
        )
        lines.append("  " + r.summary_line())
    payload = [r.details for r in reports]
    _emit(args, "\n".join(lines) + "\n", payload[0] if len(payload) == 1 else payload)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_diagram(args) -> int:
    k = _level(args, 3, DIAGRAM_K_MAX)
    cls = _find_class(k, args.class_id)
    p = perms.induced_permutation(cls.canonical)
    text = diagrams.text_diagram(p, cls.label)
    stem = args.out if args.out else Path(f"diagram-k{k}-{cls.label}")
    stem.with_suffix(".txt").write_text(text, encoding="utf-8")
    stem.with_suffix(".svg").write_text(diagrams.svg_diagram(p, cls.label), encoding="utf-8")
    written = [str(stem.with_suffix(".txt")), str(stem.with_suffix(".svg"))]
    if args.format == "json":
        payload = {"k": k, "class": cls.label, **p.to_dict(), "arrows": diagrams.arrows(p), "files": written}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(text + "wrote " + ", ".join(written) + "\n")
    return EXIT_OK


@contextlib.contextmanager
def _fault(spec: str | None) -> Iterator[None]:
    if not spec:
        yield
        return
    try:
        k, i = (int(t) for t in spec.split(","))
    except ValueError:
        raise UsageError("--inject-fault expects K,I") from None
    with gens.corrupted_vector_generator(k, i):
        classes_mod.clear_cache()
        try:
            yield
        finally:
            classes_mod.clear_cache()


def _suites(k_max: int, n_list: list[int], seed: int, cap: int) -> Iterator[tuple[str, Callable[[], Report]]]:
    for k in range(1, k_max + 1):
        yield f"clifford-relations k={k}", lambda k=k: gens.clifford_relations_check(k)
        yield f"representations k={k}", lambda k=k: gens.verify_representations(k)
        # every class is a singleton at k=1, so parity balance is only meaningful from k=2
        yield f"structure-theorem k={k}", lambda k=k: classes_mod.verify_structure_theorem(k, check_parity=k >= 2)
        yield f"key-vs-action k={k}", lambda k=k: classes_mod.verify_key_matches_action(k, seed=seed)
        if k <= 4:
            yield f"lift-classes k={k}", lambda k=k: classes_mod.verify_lift_classes(k)
        yield f"group-structure k={k}", lambda k=k: perms.verify_group_structure(k)
        samples = None if k <= classes_mod.EXHAUSTIVE_K_MAX else classes_mod.SAMPLE_POINTS
        yield f"induced-action k={k}", lambda k=k, s=samples: perms.verify_induced_action(k, samples=s, seed=seed)
        yield f"fp-equals-tc k={k}", lambda k=k: dyn.verify_fp_tc(k, cap=cap, seed=seed)
    yield "counting-laws", lambda: dyn.verify_counting_laws(dyn.EntryPermutation.from_cycles(2, "(17)(28)"), 2)
    yield "counting-laws", lambda: dyn.verify_counting_laws(dyn.EntryPermutation.column_swap(1), 4)
    for n in n_list:
        for k in range(1, min(2, k_max) + 1):
            yield f"counting-law-fuzz n={n} k={k}", lambda n=n, k=k: _fuzz_counting(k, n, seed, cap)
            if n > 2:
                yield f"negative-witness n={n} k={k}", lambda n=n, k=k: dyn.negative_witness(n, k)


def _fuzz_counting(k: int, n: int, seed: int, cap: int) -> Report:
    report = Report(f"counting-law-fuzz n={n} k={k}")
    rng = np.random.default_rng([seed, n, k])
    for _ in range(FUZZ_TRIALS):
        sigma = dyn.EntryPermutation.random(k, rng)
        r = dyn.verify_counting_laws(sigma, n, cap=cap, seed=seed)
        for inv, ok in r.checks.items():
            report.check(inv, ok)
        for f in r.failures:
            report.fail(f["invariant"], f"{sigma}: {f['detail']}")
    report.details["trials"] = FUZZ_TRIALS
    return report


def cmd_verify_all(args) -> int:
    if args.k_max > VERIFY_K_MAX:
        raise UsageError(f"--k-max must be <= {VERIFY_K_MAX}")
    started = time.perf_counter()
    reports: list[Report] = []
    with _fault(args.inject_fault):
        for name, suite in _suites(args.k_max, args.n_list, args.seed, args.cap):
            t0 = time.perf_counter()
            try:
                r = suite()
            except Exception as exc:  # a crashing suite is a failed suite
                r = Report(name)
                r.fail("raised", f"{type(exc).__name__}: {exc}")
            r.details["seconds"] = round(time.perf_counter() - t0, 3)
            reports.append(r)
            if args.format == "text" and not args.out:
                print(r.summary_line(), flush=True)
    failures = [f for r in reports for f in r.failures]
    failing_checks = [{"suite": r.name, "invariant": inv} for r in reports for inv, ok in r.checks.items() if not ok]
    passed = not failing_checks
    summary = {
        "passed": passed,
        "k_max": args.k_max,
        "n_list": args.n_list,
        "seed": args.seed,
        "seconds": round(time.perf_counter() - started, 2),
        "suites": [r.to_dict() for r in reports],
        "failing_checks": failing_checks,
        "failures": failures,
    }
    text = "\n".join(r.summary_line() for r in reports) + "\n" if args.out else ""
    text += f"verify-all: {'PASS' if passed else 'FAIL'} ({len(reports)} suites, {summary['seconds']} s)\n"
    _emit(args, text, summary)
    if not passed and args.format == "text":
        manifest = {"failing_checks": failing_checks, "failures": failures}
        sys.stderr.write(json.dumps(manifest, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_FAIL


COMMANDS = {
    "gens": cmd_gens,
    "classify": cmd_classify,
    "table1": cmd_table1,
    "perms": cmd_perms,
    "dynamics": cmd_dynamics,
    "diagram": cmd_diagram,
    "verify-all": cmd_verify_all,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, torsion.EnumerationCapExceeded) as exc:
        parser.error(str(exc))  # exits with status 2
    return EXIT_USAGE  # not reached


if __name__ == "__main__":
    sys.exit(main())
