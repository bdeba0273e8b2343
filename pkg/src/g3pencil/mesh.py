"""Grid sampling of pencil surfaces and OBJ / CSV export.

Vertices are stored row major in s-major order (all v values of the first
s row, then the next row).  Output bytes depend only on the configuration,
never on worker count or timing: every sample is computed independently
and assembled in index order.  Signed zeros serialize as "0".
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .config import PencilConfig, realize
from .curve import frenet, point, usable_s_intervals
from .errors import ZeroVector
from .exprjet import compile_expr
from .g3core import G3Vector, normalize_isotropic
from .pencil import PencilSpec, combine_on_frame, surface_normal


@dataclass
class Mesh:
    ns: int
    nv: int
    s_values: list[float]
    v_values: list[float]
    vertices: list[G3Vector]  # row major, s-major order; len == ns * nv
    normals: list[G3Vector | None] | None = None  # None entries are degenerate


def _fmt(x: float) -> str:
    if x == 0.0:
        x = 0.0  # canonicalize -0.0
    return format(x, ".17g")


def _grid_s_values(pencil: PencilSpec, ns: int, min_kappa: float | None) -> list[float]:
    d = pencil.domain
    v_mid = 0.5 * (d.v_min + d.v_max)

    def probe(s: float) -> None:
        # Surface expressions must evaluate across the v range; probing the
        # midline and the far edge catches domain gaps such as square roots
        # going negative.
        pencil.point(s, v_mid)
        pencil.point(s, d.v_max)

    kwargs = {} if min_kappa is None else {"min_kappa": min_kappa}
    intervals = usable_s_intervals(pencil.curve, d.s_min, d.s_max, extra_check=probe, **kwargs)
    if intervals != [(d.s_min, d.s_max)]:
        warnings.warn(
            "grid re-spans usable sub-intervals "
            + ", ".join(f"[{a:.6g}, {b:.6g}]" for a, b in intervals)
            + " (guard bands excised)",
            stacklevel=2,
        )
    if not intervals:
        raise ZeroVector("no usable s interval in the requested domain")
    total = sum(b - a for a, b in intervals)
    values: list[float] = []
    remaining = ns
    for idx, (a, b) in enumerate(intervals):
        if idx == len(intervals) - 1:
            count = remaining
        else:
            count = max(2, round(ns * (b - a) / total))
            count = min(count, remaining - 2 * (len(intervals) - idx - 1))
        remaining -= count
        values.extend(a + (b - a) * i / (count - 1) for i in range(count))
    return values


def mesh_from_pencil(
    pencil: PencilSpec,
    ns: int,
    nv: int,
    *,
    workers: int = 1,
    with_normals: bool = False,
    min_kappa: float | None = None,
) -> Mesh:
    """Sample the surface on a uniform grid.

    The s grid respects guard bands around frame singularities and
    expression domain gaps (with a warning when anything is excised); the
    v grid spans [v_min, v_max] uniformly.  All rows are computed with
    compiled marching-scale functions and assembled in index order, so the
    result is identical for any worker count.
    """
    d = pencil.domain
    s_values = _grid_s_values(pencil, ns, min_kappa)
    v_values = [d.v_min + (d.v_max - d.v_min) * j / (nv - 1) for j in range(nv)]
    ms = pencil.marching
    f_alpha = compile_expr(ms.alpha)
    f_beta = compile_expr(ms.beta)
    f_gamma = compile_expr(ms.gamma)

    def build_row(i: int) -> tuple[list[G3Vector], list[G3Vector | None]]:
        s = s_values[i]
        fr = frenet(pencil.curve, s)
        base = point(pencil.curve, s)
        row = [
            combine_on_frame(base, fr, f_alpha(s, v), f_beta(s, v), f_gamma(s, v))
            for v in v_values
        ]
        nrow: list[G3Vector | None] = []
        if with_normals:
            for v in v_values:
                eta = surface_normal(pencil.curve, ms, s, v, frame=fr)
                try:
                    nrow.append(normalize_isotropic(eta))
                except ZeroVector:
                    nrow.append(None)
        return row, nrow

    indices = range(len(s_values))
    if workers <= 1:
        rows = [build_row(i) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(build_row, indices))
    vertices: list[G3Vector] = []
    normals: list[G3Vector | None] = []
    for row, nrow in rows:
        vertices.extend(row)
        normals.extend(nrow)
    return Mesh(
        ns=len(s_values),
        nv=nv,
        s_values=s_values,
        v_values=v_values,
        vertices=vertices,
        normals=normals if with_normals else None,
    )


def sample_grid(
    config: PencilConfig,
    *,
    workers: int = 1,
    with_normals: bool = False,
    as_printed: bool = False,
    sign: float | None = None,
) -> Mesh:
    """Realize a configuration and sample its grid (all or nothing)."""
    pencil = realize(config, as_printed=as_printed, sign=sign)
    return mesh_from_pencil(
        pencil,
        config.grid.ns,
        config.grid.nv,
        workers=workers,
        with_normals=with_normals,
    )


def export_obj(mesh: Mesh, path: str) -> None:
    """Wavefront OBJ: v records in row-major order, quads split in two.

    Each grid cell emits the lower-left triangle first, then the upper
    right, with consistent winding.  When normals are present they are
    written as vn records (degenerate ones as "vn 0 0 0") and faces index
    them alongside the vertices.
    """
    if not mesh.vertices:
        raise ValueError("refusing to export an empty mesh")
    lines: list[str] = []
    for p in mesh.vertices:
        lines.append(f"v {_fmt(p.x)} {_fmt(p.y)} {_fmt(p.z)}")
    has_normals = mesh.normals is not None
    if has_normals:
        for q in mesh.normals:
            if q is None:
                lines.append("vn 0 0 0")
            else:
                lines.append(f"vn {_fmt(q.x)} {_fmt(q.y)} {_fmt(q.z)}")
    nv = mesh.nv
    for i in range(mesh.ns - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            b = (i + 1) * nv + j + 1
            c = (i + 1) * nv + j + 2
            d = i * nv + j + 2
            if has_normals:
                lines.append(f"f {a}//{a} {b}//{b} {d}//{d}")
                lines.append(f"f {b}//{b} {c}//{c} {d}//{d}")
            else:
                lines.append(f"f {a} {b} {d}")
                lines.append(f"f {b} {c} {d}")
    data = "\n".join(lines) + "\n"
    with open(path, "wb") as fh:
        fh.write(data.encode("ascii"))


def export_csv(mesh: Mesh, path: str) -> None:
    """CSV with header s,v,x,y,z; one row per vertex, 17 significant digits."""
    if not mesh.vertices:
        raise ValueError("refusing to export an empty mesh")
    lines = ["s,v,x,y,z"]
    for i, s in enumerate(mesh.s_values):
        for j, v in enumerate(mesh.v_values):
            p = mesh.vertices[i * mesh.nv + j]
            lines.append(f"{_fmt(s)},{_fmt(v)},{_fmt(p.x)},{_fmt(p.y)},{_fmt(p.z)}")
    data = "\n".join(lines) + "\n"
    with open(path, "wb") as fh:
        fh.write(data.encode("ascii"))


def export_curve_csv(s_values: list[float], points: list[G3Vector], path: str) -> None:
    """CSV polyline of curve samples with header s,x,y,z."""
    lines = ["s,x,y,z"]
    for s, p in zip(s_values, points):
        lines.append(f"{_fmt(s)},{_fmt(p.x)},{_fmt(p.y)},{_fmt(p.z)}")
    data = "\n".join(lines) + "\n"
    with open(path, "wb") as fh:
        fh.write(data.encode("ascii"))
