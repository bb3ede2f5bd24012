"""Problem files and result files.

A problem file is a Matrix Market matrix ``M`` (coordinate or array;
real, integer or complex; general or symmetric), optionally followed by a
second Matrix Market object holding ``b`` as an ``n x 1`` array.  The shift
``kappa`` is read from a comment line ``%%kappa re im`` anywhere in the file
(default 0).  Without a ``b`` block the right-hand side is all ones.

Results are written as CSV (``iter,residual,relresid[,bound]``) and as
small standalone SVG charts.
"""

import csv
import io as _io
import os
import tempfile

import numpy as np

from .errors import ArgumentError

__all__ = ["ProblemFileError", "read_problem", "write_problem", "write_csv",
           "trace_rows", "residual_svg", "spectrum_svg", "emit_outputs"]


class ProblemFileError(ArgumentError):
    pass


def _parse_header(line, lineno):
    parts = line.split()
    if len(parts) != 5 or parts[0].lower() != "%%matrixmarket" or parts[1].lower() != "matrix":
        raise ProblemFileError(f"line {lineno}: malformed Matrix Market header: {line.strip()!r}")
    fmt, field, sym = (p.lower() for p in parts[2:])
    if fmt not in ("coordinate", "array"):
        raise ProblemFileError(f"line {lineno}: unsupported format {fmt!r}")
    if field not in ("real", "complex", "integer"):
        raise ProblemFileError(f"line {lineno}: unsupported field {field!r}")
    if sym not in ("general", "symmetric"):
        raise ProblemFileError(f"line {lineno}: unsupported symmetry {sym!r}")
    return fmt, field, sym


def _value(tokens, field, lineno):
    try:
        if field == "complex":
            if len(tokens) != 2:
                raise ValueError
            return complex(float(tokens[0]), float(tokens[1]))
        if len(tokens) != 1:
            raise ValueError
        return complex(float(tokens[0]))
    except ValueError:
        raise ProblemFileError(f"line {lineno}: expected a {field} value, got {' '.join(tokens)!r}")


def _read_object(lines, pos):
    """Parse one Matrix Market object starting at ``lines[pos]``; returns
    ``(array, kappa or None, next_pos)``."""
    lineno, header = lines[pos]
    fmt, field, sym = _parse_header(header, lineno)
    pos += 1
    kappa = None
    while pos < len(lines) and lines[pos][1].lstrip().startswith("%"):
        kappa = _kappa(lines[pos], kappa)
        pos += 1
    if pos >= len(lines):
        raise ProblemFileError(f"line {lineno}: missing size line")
    lineno, size_line = lines[pos]
    try:
        dims = [int(t) for t in size_line.split()]
    except ValueError:
        raise ProblemFileError(f"line {lineno}: malformed size line {size_line.strip()!r}")
    pos += 1
    if fmt == "coordinate":
        if len(dims) != 3:
            raise ProblemFileError(f"line {lineno}: coordinate size line needs 'rows cols nnz'")
        rows, cols, nnz = dims
    else:
        if len(dims) != 2:
            raise ProblemFileError(f"line {lineno}: array size line needs 'rows cols'")
        rows, cols = dims
        nnz = rows * cols if sym == "general" else rows * (rows + 1) // 2
    A = np.zeros((rows, cols), dtype=complex)
    entries = []
    while len(entries) < nnz:
        if pos >= len(lines):
            raise ProblemFileError(f"line {lineno}: expected {nnz} entries, found {len(entries)}")
        lineno, line = lines[pos]
        pos += 1
        if line.lower().startswith("%%matrixmarket"):
            raise ProblemFileError(f"line {lineno}: expected {nnz} entries, found {len(entries)}")
        if line.lstrip().startswith("%"):
            kappa = _kappa((lineno, line), kappa)
            continue
        entries.append((lineno, line.split()))
    if fmt == "coordinate":
        for ln, tok in entries:
            try:
                i, j = int(tok[0]) - 1, int(tok[1]) - 1
            except (ValueError, IndexError):
                raise ProblemFileError(f"line {ln}: malformed coordinate entry")
            if not (0 <= i < rows and 0 <= j < cols):
                raise ProblemFileError(f"line {ln}: index ({i + 1}, {j + 1}) out of range")
            A[i, j] = _value(tok[2:], field, ln)
            if sym == "symmetric":
                A[j, i] = A[i, j]
    else:
        k = 0
        for j in range(cols):
            for i in range(j if sym == "symmetric" else 0, rows):
                ln, tok = entries[k]
                A[i, j] = _value(tok, field, ln)
                if sym == "symmetric":
                    A[j, i] = A[i, j]
                k += 1
    return A, kappa, pos


def _kappa(item, current):
    lineno, line = item
    parts = line.split()
    if parts and parts[0].lower() == "%%kappa":
        if len(parts) not in (2, 3):
            raise ProblemFileError(f"line {lineno}: expected '%%kappa re im'")
        try:
            return complex(float(parts[1]), float(parts[2]) if len(parts) == 3 else 0.0)
        except ValueError:
            raise ProblemFileError(f"line {lineno}: malformed %%kappa value")
    return current


def read_problem(path):
    """Read ``(kappa, M, b)`` from a problem file."""
    with open(path, encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    lines = [(i + 1, l) for i, l in enumerate(raw) if l.strip()]
    kappa = 0j
    pos = 0
    while pos < len(lines) and not lines[pos][1].lower().startswith("%%matrixmarket"):
        kappa = _kappa(lines[pos], kappa)
        if not lines[pos][1].lstrip().startswith("%"):
            raise ProblemFileError(f"line {lines[pos][0]}: expected a %%MatrixMarket header")
        pos += 1
    if pos >= len(lines):
        raise ProblemFileError(f"{path}: no Matrix Market header found")
    M, k, pos = _read_object(lines, pos)
    kappa = k if k is not None else kappa
    n = M.shape[0]
    if M.shape != (n, n):
        raise ProblemFileError(f"M must be square, got {M.shape[0]} x {M.shape[1]}")
    b = np.ones(n, dtype=complex)
    if pos < len(lines):
        start = lines[pos][0]
        B, k, pos = _read_object(lines, pos)
        kappa = k if k is not None else kappa
        if B.shape[1] != 1 or B.shape[0] != n:
            raise ProblemFileError(
                f"line {start}: right-hand side has shape {B.shape[0]} x {B.shape[1]}, expected {n} x 1")
        b = B[:, 0]
        if pos < len(lines):
            raise ProblemFileError(f"line {lines[pos][0]}: unexpected content after the right-hand side")
    return complex(kappa), M, b


def write_problem(path, kappa, M, b=None):
    """Write a problem file (coordinate format for ``M``, array for ``b``)."""
    M = np.asarray(M, dtype=complex)
    out = _io.StringIO()
    out.write("%%MatrixMarket matrix coordinate complex general\n")
    out.write(f"%%kappa {_fmt(complex(kappa).real)} {_fmt(complex(kappa).imag)}\n")
    nz = np.argwhere(M != 0)
    out.write(f"{M.shape[0]} {M.shape[1]} {len(nz)}\n")
    for i, j in nz:
        out.write(f"{i + 1} {j + 1} {_fmt(M[i, j].real)} {_fmt(M[i, j].imag)}\n")
    if b is not None:
        b = np.asarray(b, dtype=complex)
        out.write("%%MatrixMarket matrix array complex general\n")
        out.write(f"{len(b)} 1\n")
        for v in b:
            out.write(f"{_fmt(v.real)} {_fmt(v.imag)}\n")
    _atomic_write(path, out.getvalue())


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    except OSError as exc:
        raise ArgumentError(f"cannot write {path}: {exc}")
    with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _fmt(x):
    return repr(float(x))


def trace_rows(trace, bound=None):
    """CSV rows ``iter,residual,relresid[,bound]`` for a residual trace."""
    header = ["iter", "residual", "relresid"] + (["bound"] if bound is not None else [])
    rows = [header]
    for j, r in enumerate(trace.residual_norms):
        row = [str(j), _fmt(r), _fmt(r / trace.rhs_norm)]
        if bound is not None:
            # bound[j-1] is for step j; step 0 has the trivial bound ||b||
            row.append(_fmt(trace.rhs_norm if j == 0 else
                            (bound[j - 1] if j - 1 < len(bound) else float("nan"))))
        rows.append(row)
    return rows


def write_csv(path, rows):
    buf = _io.StringIO()
    csv.writer(buf, lineterminator="\r\n").writerows(rows)
    _atomic_write(path, buf.getvalue())


_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"]


def _frame(title, xlabel, ylabel, xr, yr, w=640, h=420, m=(60, 20, 40, 50)):
    left, right, top, bottom = m
    x0, x1 = xr
    y0, y1 = yr
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    sx = lambda x: left + (x - x0) / (x1 - x0) * (w - left - right)
    sy = lambda y: h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
             f'viewBox="0 0 {w} {h}">',
             f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
             f'<text x="{w / 2:.1f}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<line x1="{left}" y1="{h - bottom}" x2="{w - right}" y2="{h - bottom}" stroke="black"/>',
             f'<line x1="{left}" y1="{top}" x2="{left}" y2="{h - bottom}" stroke="black"/>',
             f'<text x="{w / 2:.1f}" y="{h - 10}" text-anchor="middle" font-size="12">{xlabel}</text>',
             f'<text x="15" y="{h / 2:.1f}" text-anchor="middle" font-size="12" '
             f'transform="rotate(-90 15 {h / 2:.1f})">{ylabel}</text>']
    for t in np.linspace(x0, x1, 6):
        parts.append(f'<text x="{sx(t):.1f}" y="{h - bottom + 15}" text-anchor="middle" '
                     f'font-size="10">{t:.3g}</text>')
    for t in np.linspace(y0, y1, 6):
        parts.append(f'<text x="{left - 5}" y="{sy(t) + 3:.1f}" text-anchor="end" '
                     f'font-size="10">{t:.3g}</text>')
    return parts, sx, sy


def residual_svg(traces, title="relative residual"):
    """Line chart of ``log10`` relative residual against iteration, one
    polyline per trace (zero residuals are left out)."""
    series = []
    for label, tr in traces.items():
        r = np.asarray(tr.relative, dtype=float)
        j = np.nonzero(r > 0)[0]
        series.append((label, j, np.log10(r[j])))
    xmax = max((s[1].max() for s in series if len(s[1])), default=1)
    ys = np.concatenate([s[2] for s in series]) if series else np.zeros(1)
    ymin = np.floor(ys.min()) if len(ys) else -1.0
    parts, sx, sy = _frame(title, "iteration", "log10 relative residual", (0, xmax), (ymin, 0.0))
    for k, (label, j, y) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(j, y))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{520}" y="{40 + 15 * k}" font-size="11" fill="{color}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def spectrum_svg(points, title="diagonal entries"):
    """Scatter plot of complex numbers (equal axis scaling)."""
    z = np.asarray(points, dtype=complex)
    lim = float(np.max(np.abs(z))) * 1.05 if len(z) else 1.0
    parts, sx, sy = _frame(title, "Re", "Im", (-lim, lim), (-lim, lim), w=460, h=460,
                           m=(60, 20, 40, 50))
    for p in z:
        parts.append(f'<circle cx="{sx(p.real):.2f}" cy="{sy(p.imag):.2f}" r="1.8" fill="#1f77b4"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _safe(label):
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in label)


def emit_outputs(traces, prefix, bounds=None, diagonal=None):
    """Write ``{prefix}_{label}.csv`` per trace, ``{prefix}_residuals.svg``
    and, when ``diagonal`` is given, ``{prefix}_spectrum.svg``.  Returns the
    list of paths written."""
    d = os.path.dirname(os.path.abspath(prefix))
    if not os.path.isdir(d):
        raise ArgumentError(f"output directory {d} does not exist")
    paths = []
    for label, tr in traces.items():
        b = bounds.get(label) if bounds else None
        path = f"{prefix}_{_safe(label)}.csv" if len(traces) > 1 or label else f"{prefix}.csv"
        write_csv(path, trace_rows(tr, b))
        paths.append(path)
    path = f"{prefix}_residuals.svg"
    _atomic_write(path, residual_svg(traces))
    paths.append(path)
    if diagonal is not None:
        path = f"{prefix}_spectrum.svg"
        _atomic_write(path, spectrum_svg(diagonal))
        paths.append(path)
    return paths
