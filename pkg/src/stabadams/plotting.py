"""Minimal standalone SVG output (no plotting library dependency)."""

import math

WIDTH, HEIGHT, PAD = 640, 480, 50
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"]


def _fmt(v):
    return f"{v:.6g}"


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi

    def sx(self, x):
        return PAD + (x - self.xlo) / (self.xhi - self.xlo) * (WIDTH - 2 * PAD)

    def sy(self, y):
        return HEIGHT - PAD - (y - self.ylo) / (self.yhi - self.ylo) * (HEIGHT - 2 * PAD)


def _document(body, title, xlabel, ylabel):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>\n'
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 10}" text-anchor="middle" font-size="12">{xlabel}</text>\n'
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{ylabel}</text>\n'
    )
    return head + "".join(body) + "</svg>\n"


def _polyline(frame, xs, ys, color, label, idx):
    pts = " ".join(f"{frame.sx(x):.2f},{frame.sy(y):.2f}" for x, y in zip(xs, ys))
    out = [f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>\n']
    if label:
        y = 40 + 16 * idx
        out.append(f'<line x1="{WIDTH - 150}" y1="{y}" x2="{WIDTH - 130}" y2="{y}" stroke="{color}" stroke-width="2"/>\n')
        out.append(f'<text x="{WIDTH - 125}" y="{y + 4}" font-size="11">{label}</text>\n')
    return out


def locus_svg(curves, title="root locus"):
    """Locus curves in the lambda*tau plane with real and imaginary axes.

    ``curves`` is a list of ``(label, complex_values)`` pairs.
    """
    re = [z.real for _, c in curves for z in c]
    im = [z.imag for _, c in curves for z in c]
    span = max(max(re) - min(re), max(im) - min(im), 1e-12)
    cx, cy = (max(re) + min(re)) / 2, (max(im) + min(im)) / 2
    # equal aspect ratio so circles stay circles
    half_x = 0.55 * span * (WIDTH - 2 * PAD) / (HEIGHT - 2 * PAD)
    half_y = 0.55 * span
    f = _Frame(cx - half_x, cx + half_x, cy - half_y, cy + half_y)
    body = []
    if f.ylo <= 0 <= f.yhi:
        body.append(f'<line x1="{PAD}" y1="{f.sy(0):.2f}" x2="{WIDTH - PAD}" y2="{f.sy(0):.2f}" stroke="#888"/>\n')
    if f.xlo <= 0 <= f.xhi:
        body.append(f'<line x1="{f.sx(0):.2f}" y1="{PAD}" x2="{f.sx(0):.2f}" y2="{HEIGHT - PAD}" stroke="#888"/>\n')
    body.append(f'<text x="{PAD}" y="{HEIGHT - PAD + 15}" font-size="10">{_fmt(f.xlo)}</text>\n')
    body.append(f'<text x="{WIDTH - PAD}" y="{HEIGHT - PAD + 15}" font-size="10" text-anchor="end">{_fmt(f.xhi)}</text>\n')
    for i, (label, c) in enumerate(curves):
        xs = [z.real for z in c] + [c[0].real]
        ys = [z.imag for z in c] + [c[0].imag]
        body += _polyline(f, xs, ys, COLORS[i % len(COLORS)], label, i)
    return _document(body, title, "Re(lambda tau)", "Im(lambda tau)")


def loglog_svg(series, title="convergence", xlabel="tau", ylabel="max-norm error"):
    """Log-log plot of ``(label, xs, ys)`` series; non-finite points are skipped."""
    pts = [(x, y) for _, xs, ys in series for x, y in zip(xs, ys) if x > 0 and 0 < y < math.inf]
    if not pts:
        return _document([], title, xlabel, ylabel)
    lx = [math.log10(x) for x, _ in pts]
    ly = [math.log10(y) for _, y in pts]
    f = _Frame(min(lx) - 0.1, max(lx) + 0.1, min(ly) - 0.3, max(ly) + 0.3)
    body = [
        f'<rect x="{PAD}" y="{PAD}" width="{WIDTH - 2 * PAD}" height="{HEIGHT - 2 * PAD}" fill="none" stroke="#888"/>\n'
    ]
    for d in range(math.ceil(f.ylo), math.floor(f.yhi) + 1):
        body.append(f'<text x="{PAD - 4}" y="{f.sy(d) + 3:.2f}" font-size="10" text-anchor="end">1e{d}</text>\n')
    for d in range(math.ceil(f.xlo), math.floor(f.xhi) + 1):
        body.append(f'<text x="{f.sx(d):.2f}" y="{HEIGHT - PAD + 15}" font-size="10" text-anchor="middle">1e{d}</text>\n')
    for i, (label, xs, ys) in enumerate(series):
        good = [(math.log10(x), math.log10(y)) for x, y in zip(xs, ys) if x > 0 and 0 < y < math.inf]
        if good:
            body += _polyline(f, [a for a, _ in good], [b for _, b in good], COLORS[i % len(COLORS)], label, i)
    return _document(body, title, f"log10 {xlabel}", f"log10 {ylabel}")
