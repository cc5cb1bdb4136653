"""CSV and SVG artifact writers.

Every file starts with a metadata header ("# key = value" lines) recording
the fully resolved configuration and convention choices, so a run can be
reproduced from any one of its outputs. Files are written atomically
(temporary file in the target directory, then rename).
"""

import json
import math
import os
import tempfile

import numpy as np

QUADRATURE_NAMES = ("X_fa", "Y_fa", "X_fb", "Y_fb", "X_ha", "Y_ha", "X_hb", "Y_hb")

TRAJECTORY_COLUMNS = ("zeta", "u_f2", "v_f2", "u_h2", "v_h2",
                      "theta_f", "phi_f", "theta_h", "phi_h",
                      "dtheta", "dphi")

PAIR_COLUMNS = ("en_ff", "en_hh", "en_fh_same", "en_fh_cross",
                "en_ff_hh", "en_wg", "en_swap")

VLF_COLUMNS = ("vlf_1", "vlf_2", "vlf_3")
# optimal gains of the first two inequalities; the third mirrors the first
GAIN_COLUMNS = ("g1_1", "g1_2", "g2_1", "g2_2")


def _fmt(v):
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.12g}"
    return str(v)


def _atomic_write(path, text):
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def metadata_lines(metadata):
    lines = []
    for key, value in metadata.items():
        if isinstance(value, (dict, list, tuple)):
            value = json.dumps(value)
        lines.append(f"# {key} = {value}")
    return lines


def write_csv(path, columns, rows, metadata=None, footer=None):
    """Write a CSV with a commented metadata header and optional key-value
    footer, atomically."""
    lines = metadata_lines(metadata or {})
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    for key, value in (footer or {}).items():
        lines.append(f"# {key} = {_fmt(value)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Read back a CSV written by write_csv: (metadata, columns, array, footer)."""
    metadata, footer, columns, rows = {}, {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                target = footer if columns is not None else metadata
                target[key.strip()] = value.strip()
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append([float(v) for v in line.split(",")])
    return metadata, columns, np.array(rows), footer


def trajectory_rows(traj):
    """Rows in the trajectory CSV schema from a 4-mode Trajectory."""
    powers = traj.powers()
    phases = traj.phases()
    dth, dph = traj.phase_mismatches()
    for i, zeta in enumerate(traj.zetas):
        yield (float(zeta), *map(float, powers[i]), *map(float, phases[i]),
               float(dth[i]), float(dph[i]))


def write_trajectory_csv(path, traj, metadata=None):
    write_csv(path, TRAJECTORY_COLUMNS, trajectory_rows(traj), metadata)


def covariance_columns(n_modes=4):
    names = QUADRATURE_NAMES[:2 * n_modes]
    cols = ["zeta"]
    for i in range(2 * n_modes):
        for j in range(i, 2 * n_modes):
            cols.append(f"{names[i]}.{names[j]}")
    return tuple(cols)


def write_covariance_csv(path, zetas, covariances, metadata=None):
    """zeta plus the upper triangle of V(zeta), row-major."""
    n = covariances[0].shape[0]
    iu = np.triu_indices(n)

    def rows():
        for zeta, V in zip(zetas, covariances):
            yield (float(zeta), *map(float, V[iu]))

    write_csv(path, covariance_columns(n // 2), rows(), metadata)


def write_entanglement_csv(path, zetas, pair_rows, vlf_rows, epr=None,
                           metadata=None, lossy_pair_rows=None):
    """zeta, the seven negativity columns, three VLF values, four gains, and
    (when a lossy run is present) the lossy negativities side by side. The
    EPR summary is appended as a key-value footer."""
    columns = ["zeta", *PAIR_COLUMNS, *VLF_COLUMNS, "vlf_threshold",
               *GAIN_COLUMNS]
    if lossy_pair_rows is not None:
        columns += [f"{c}_lossy" for c in PAIR_COLUMNS]

    def rows():
        for i, zeta in enumerate(zetas):
            row = [float(zeta), *pair_rows[i].values(), *vlf_rows[i].values,
                   2.0]
            row += list(vlf_rows[i].gains[0]) + list(vlf_rows[i].gains[1])
            if lossy_pair_rows is not None:
                row += list(lossy_pair_rows[i].values())
            yield row

    footer = {}
    if epr is not None:
        footer = {
            "epr.zeta0": epr.zeta0,
            "epr.mu_h": epr.mu_h,
            "epr.en_hh": epr.en_hh,
            "epr.r_star": epr.r_star,
            "epr.phi_star": epr.phi_star,
            "epr.f_star": epr.f_star,
            "epr.f_star_oriented": epr.f_star_oriented,
        }
    write_csv(path, columns, rows(), metadata, footer)


def write_json(path, payload):
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd",
              "#ff7f0e", "#8c564b", "#17becf")


def write_svg_lines(path, x, series, title="", xlabel="", ylabel="",
                    width=640, height=420):
    """Minimal multi-line SVG chart: labeled axes box, one polyline per
    series, legend in the top right. No plotting dependency."""
    x = np.asarray(x, dtype=float)
    ys = {name: np.asarray(y, dtype=float) for name, y in series.items()}
    finite = np.concatenate([y[np.isfinite(y)] for y in ys.values()]
                            or [np.array([0.0])])
    y_lo = float(finite.min()) if finite.size else 0.0
    y_hi = float(finite.max()) if finite.size else 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    x_lo, x_hi = float(x.min()), float(x.max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    m_l, m_r, m_t, m_b = 60, 20, 30, 45
    pw, ph = width - m_l - m_r, height - m_t - m_b

    def px(v):
        return m_l + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return m_t + (y_hi - v) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect x="{m_l}" y="{m_t}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
        f'<text x="{width / 2:.0f}" y="18" text-anchor="middle" '
        f'font-size="14">{title}</text>',
        f'<text x="{m_l + pw / 2:.0f}" y="{height - 8}" text-anchor="middle" '
        f'font-size="12">{xlabel}</text>',
        f'<text x="15" y="{m_t + ph / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 15 {m_t + ph / 2:.0f})">{ylabel}</text>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        yv = y_lo + frac * (y_hi - y_lo)
        parts.append(f'<text x="{px(xv):.1f}" y="{m_t + ph + 16}" '
                     f'text-anchor="middle" font-size="10">{xv:.3g}</text>')
        parts.append(f'<text x="{m_l - 6}" y="{py(yv):.1f}" text-anchor="end" '
                     f'font-size="10">{yv:.3g}</text>')
    for k, (name, y) in enumerate(ys.items()):
        color = SVG_COLORS[k % len(SVG_COLORS)]
        pts = " ".join(f"{px(xi):.2f},{py(yi):.2f}"
                       for xi, yi in zip(x, y) if np.isfinite(yi))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = m_t + 14 + 16 * k
        parts.append(f'<line x1="{m_l + pw - 90}" y1="{ly - 4}" '
                     f'x2="{m_l + pw - 70}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{m_l + pw - 65}" y="{ly}" '
                     f'font-size="11">{name}</text>')
    parts.append("</svg>")
    _atomic_write(path, "\n".join(parts) + "\n")
