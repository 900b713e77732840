"""Shoelace diagrams of induced Clifford permutations, as aligned text and SVG.

Real permutations are drawn on the ``2^k`` rows. Imaginary ones are drawn on
the ``2^(k+1)`` matrix-form entries, with the imaginary column shaded.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .dynamics import eta_of
from .permutations import CliffordPermutation

__all__ = ["arrows", "text_diagram", "svg_diagram"]

_ROW_GAP = 28
_LEFT_X = 60
_RIGHT_X = 260
_TOP = 50


def _node_labels(p: CliffordPermutation) -> list[str]:
    if not p.imaginary:
        return [str(x + 1) for x in range(2**p.k)]
    # entry 2l+c is row l+1, column re/im
    return [f"{(i >> 1) + 1}{'i' if i & 1 else 'r'}" for i in range(2 ** (p.k + 1))]


def arrows(p: CliffordPermutation) -> list[tuple[int, int]]:
    """1-based ``(source, target)`` pairs: rows for real, entries for imaginary."""
    perm = eta_of(p).sigma if p.imaginary else p.row_permutation
    return [(i + 1, j + 1) for i, j in enumerate(perm)]


def text_diagram(p: CliffordPermutation, class_label: str | None = None) -> str:
    labels = _node_labels(p)
    width = max(len(s) for s in labels)
    kind = "imaginary" if p.imaginary else "real"
    title = f"{p.name}  ({kind}, k={p.k})"
    if class_label:
        title = f"[{class_label}]  " + title
    lines = [title]
    for src, dst in arrows(p):
        a, b = labels[src - 1], labels[dst - 1]
        mark = "*" if p.imaginary and (src - 1) & 1 else " "
        lines.append(f" {mark}{a:>{width}} ----> {b}")
    if p.imaginary:
        lines.append(" (* imaginary column)")
    return "\n".join(lines) + "\n"


def svg_diagram(p: CliffordPermutation, class_label: str | None = None) -> str:
    labels = _node_labels(p)
    count = len(labels)
    height = _TOP + _ROW_GAP * count + 20
    width = _RIGHT_X + _LEFT_X
    title = escape((f"[{class_label}] " if class_label else "") + p.name)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">',
        f'<text x="{width // 2}" y="20" text-anchor="middle">{title}</text>',
    ]

    def y(i: int) -> int:
        return _TOP + _ROW_GAP * i

    if p.imaginary:
        for i in range(1, count, 2):
            for x in (_LEFT_X, _RIGHT_X):
                parts.append(
                    f'<rect x="{x - 30}" y="{y(i) - _ROW_GAP // 2}" width="60" '
                    f'height="{_ROW_GAP}" fill="#dddddd"/>'
                )
    for src, dst in arrows(p):
        parts.append(
            f'<line x1="{_LEFT_X + 14}" y1="{y(src - 1)}" x2="{_RIGHT_X - 14}" y2="{y(dst - 1)}" '
            f'stroke="black" marker-end="url(#head)"/>'
        )
    for i, label in enumerate(labels):
        parts.append(f'<text x="{_LEFT_X - 6}" y="{y(i) + 4}" text-anchor="end">{label}</text>')
        parts.append(f'<text x="{_RIGHT_X + 6}" y="{y(i) + 4}">{label}</text>')
        for x in (_LEFT_X + 10, _RIGHT_X - 10):
            parts.append(f'<circle cx="{x}" cy="{y(i)}" r="3"/>')
    parts.insert(
        1,
        '<defs><marker id="head" markerWidth="8" markerHeight="6" refX="8" refY="3" orient="auto">'
        '<path d="M0,0 L8,3 L0,6 z"/></marker></defs>',
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
