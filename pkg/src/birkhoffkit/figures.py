"""SVG drawing of the parallelogram in the torus and its fixed points."""
from __future__ import annotations

from fractions import Fraction

from .points import TorusPointQ
from .torus import _OFFSETS, ParallelogramData

__all__ = ["emit_parallelogram_svg"]

_SCALE = 400
_PAD = 40


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _inside_closed(quad, pt) -> bool:
    return all(_cross(quad[i], quad[(i + 1) % 4], pt) >= 0 for i in range(4))


def _lift(p: ParallelogramData, pt: TorusPointQ):
    # show the dot inside the quadrilateral when some lift lands there
    quad = (p.lift_o, p.lift_m, p.lift_o2, p.lift_n)
    for dx, dy in _OFFSETS:
        cand = (pt.x + dx, pt.y + dy)
        if _inside_closed(quad, cand):
            return cand
    return (pt.x, pt.y)


def _fmt(v) -> str:
    return f"{float(v):.4f}".rstrip("0").rstrip(".")


def emit_parallelogram_svg(p: ParallelogramData, fixed_points=()) -> str:
    """SVG text: the unit squares, the quadrilateral O M O' N, its four sides and the dots.

    The drawing window is the two unit squares ``[0,1] x [-1,1]`` holding every
    lift used by the construction.  Each dot carries its exact coordinates in
    ``data-x``/``data-y``.
    """
    def sx(x):
        return _fmt(_PAD + _SCALE * Fraction(x))

    def sy(y):
        return _fmt(_PAD + _SCALE * (1 - Fraction(y)))

    width, height = 2 * _PAD + _SCALE, 2 * _PAD + 2 * _SCALE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{p.word}: RW = {p.rw}</title>",
    ]
    if not p.generic:
        out.append("<!-- caption: M and N coincide on the torus (degenerate embedding) -->")
    for y0 in (0, -1):
        out.append(
            f'<rect class="unit-square" x="{sx(0)}" y="{sy(y0 + 1)}" width="{_SCALE}" '
            f'height="{_SCALE}" fill="none" stroke="#888" stroke-dasharray="4 4"/>'
        )
    quad = (p.lift_o, p.lift_m, p.lift_o2, p.lift_n)
    pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in quad)
    out.append(f'<polygon class="parallelogram" points="{pts}" fill="#dde8f7" '
               f'stroke="#124" stroke-width="2"/>')
    for name, (a, b) in p.sides.items():
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        out.append(f'<text class="side" x="{sx(mx)}" y="{sy(my)}" font-size="16" '
                   f'fill="#124">{name}</text>')
    for name, v in (("O", p.lift_o), ("O'", p.lift_o2), ("M", p.lift_m), ("N", p.lift_n)):
        out.append(f'<text class="vertex" x="{sx(v[0])}" y="{sy(v[1])}" dx="6" dy="-6" '
                   f'font-size="16">{name}</text>')
    for pt in sorted(fixed_points):
        x, y = _lift(p, pt)
        out.append(f'<circle class="fixed-point" cx="{sx(x)}" cy="{sy(y)}" r="5" fill="red" '
                   f'data-x="{pt.x}" data-y="{pt.y}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
