"""Shape blending for compatibly triangulated meshes.

Every face of each target mesh gets the unique affine map carrying its rest
face (and rest unit normal) onto it. Those per-face maps are blended in
parameter space face by face, which leaves them incoherent along shared
edges; a sparse linear least squares over the deformed vertex positions
(plus one auxiliary normal-tip point per face, which keeps the face frames
linear in the unknowns) patches them into a single piecewise-linear
deformation. The energy covers the full 3x4 block of each face transform,
translation column included, so the normal equations are generically full
rank and the solved mesh is anchored in space.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from .blend import WeightedTransforms, blend
from .errors import (
    DegenerateTriangleError,
    FileFormatError,
    OrientationFlipWarning,
    SolverNotConvergedError,
)
from .linalg3 import (
    Mat3,
    Vec3,
    mat_det,
    mat_inverse,
    mat_mul,
    mat_vec,
    vec_cross,
    vec_norm,
    vec_scale,
    vec_sub,
)
from .param import HomAffine3

_MIN_AREA = 1e-12
_CG_RTOL = 1e-10


@dataclass
class TriMesh:
    vertices: list[Vec3]
    faces: list[tuple[int, int, int]]

    def face_points(self, j: int) -> tuple[Vec3, Vec3, Vec3]:
        i0, i1, i2 = self.faces[j]
        return self.vertices[i0], self.vertices[i1], self.vertices[i2]


@dataclass
class CompatibleSet:
    """A rest mesh plus targets sharing its face list one-to-one."""

    rest: TriMesh
    targets: list[TriMesh] = field(default_factory=list)

    def __post_init__(self):
        for k, tgt in enumerate(self.targets):
            if len(tgt.vertices) != len(self.rest.vertices):
                raise ValueError(
                    f"target {k}: {len(tgt.vertices)} vertices, rest has "
                    f"{len(self.rest.vertices)}")
            if tgt.faces != self.rest.faces:
                raise ValueError(f"target {k}: face connectivity differs from the rest mesh")


def face_frame(p0: Vec3, p1: Vec3, p2: Vec3, normal: Vec3 | None = None) -> Mat3:
    """Columns [p1-p0, p2-p0, unit normal].

    By default the normal follows the index order (counterclockwise); a
    caller-supplied normal (e.g. authored shading normals) is normalised
    and used as-is.
    """
    e1 = vec_sub(p1, p0)
    e2 = vec_sub(p2, p0)
    n = vec_cross(e1, e2)
    ln = vec_norm(n)
    if 0.5 * ln <= _MIN_AREA:
        raise DegenerateTriangleError(f"triangle area {0.5 * ln:.3e} below {_MIN_AREA}")
    if normal is not None:
        ln = vec_norm(normal)
        if ln <= _MIN_AREA:
            raise DegenerateTriangleError(f"supplied normal has length {ln:.3e}")
        n = normal
    n = vec_scale(n, 1.0 / ln)
    return Mat3(e1.x, e2.x, n.x,
                e1.y, e2.y, n.y,
                e1.z, e2.z, n.z)


def per_face_affine(rest_tri: Sequence[Vec3], target_tri: Sequence[Vec3],
                    rest_normal: Vec3 | None = None,
                    target_normal: Vec3 | None = None) -> HomAffine3:
    """The unique affine map sending one triangle-with-normal onto another.

    The linear part carries the rest edge frame and unit normal onto the
    target's; the translation pins the first vertex. Normals default to the
    index-order orientation, in which case the map always preserves
    orientation; a supplied normal pair that disagrees with the winding
    trips an OrientationFlipWarning (downstream parameter extraction would
    reject the transform).
    """
    v0 = face_frame(*rest_tri, normal=rest_normal)
    vi = face_frame(*target_tri, normal=target_normal)
    linear = mat_mul(vi, mat_inverse(v0))
    det = mat_det(linear)
    if det <= 0.0:
        warnings.warn(f"face transform determinant {det:.3e} flips orientation",
                      OrientationFlipWarning, stacklevel=2)
    translation = vec_sub(target_tri[0], mat_vec(linear, rest_tri[0]))
    return HomAffine3(linear, translation)


def blend_shapes(cset: CompatibleSet, weights: Sequence[float]) -> TriMesh:
    """Blend the targets at the given weights into one consistent mesh.

    Zero weights reproduce the rest mesh and a one-hot weight vector
    reproduces that target (up to solver tolerance), because in both cases
    the per-face blended transforms are already coherent and the least
    squares is exactly consistent.
    """
    if len(weights) != len(cset.targets):
        raise ValueError(f"{len(cset.targets)} targets but {len(weights)} weights")
    rest = cset.rest
    nf = len(rest.faces)
    nv = len(rest.vertices)
    weights = tuple(float(w) for w in weights)

    blended: list[HomAffine3] = []
    for j in range(nf):
        rest_tri = rest.face_points(j)
        face_maps = tuple(per_face_affine(rest_tri, tgt.face_points(j))
                          for tgt in cset.targets)
        if face_maps:
            blended.append(blend(WeightedTransforms(face_maps, weights)))
        else:
            blended.append(HomAffine3.identity())

    a, rhs = _assemble(rest, blended)
    x0 = _rest_configuration(rest)
    gram_op = (a.T @ a).tocsr()
    solved = np.empty((nv + nf, 3))
    for axis in range(3):
        b = a.T @ rhs[:, axis]
        solved[:, axis] = _conjugate_gradient(gram_op, b, x0[:, axis])
    vertices = [Vec3(float(solved[i, 0]), float(solved[i, 1]), float(solved[i, 2]))
                for i in range(nv)]
    return TriMesh(vertices, list(rest.faces))


def _rest_configuration(rest: TriMesh) -> np.ndarray:
    nv = len(rest.vertices)
    x0 = np.empty((nv + len(rest.faces), 3))
    for i, v in enumerate(rest.vertices):
        x0[i] = v
    for j in range(len(rest.faces)):
        p0 = rest.vertices[rest.faces[j][0]]
        frame = face_frame(*rest.face_points(j))
        x0[nv + j] = (p0.x + frame.a13, p0.y + frame.a23, p0.z + frame.a33)
    return x0


def _assemble(rest: TriMesh, blended: list[HomAffine3]):
    """Sparse residual matrix (shared by the three coordinates) and its RHS.

    Unknown layout: deformed vertices then one normal-tip point per face.
    Each face contributes three rows matching the columns of its linear
    part and one row for its translation.
    """
    nv = len(rest.vertices)
    nf = len(rest.faces)
    rows: list[int] = []
    cols: list[int] = []
    data: list[float] = []
    rhs = np.zeros((4 * nf + _count_unreferenced(rest), 3))
    row = 0
    for j, (i0, i1, i2) in enumerate(rest.faces):
        w = mat_inverse(face_frame(*rest.face_points(j)))
        p0 = rest.vertices[i0]
        target = blended[j]
        lin = target.linear
        cols_j = (i0, i1, i2, nv + j)
        wcol = ((w.a11, w.a21, w.a31), (w.a12, w.a22, w.a32), (w.a13, w.a23, w.a33))
        for c in range(3):
            w0, w1, w2 = wcol[c]
            rows.extend((row, row, row, row))
            cols.extend(cols_j)
            data.extend((-(w0 + w1 + w2), w0, w1, w2))
            rhs[row] = ((lin.a11, lin.a12, lin.a13)[c],
                        (lin.a21, lin.a22, lin.a23)[c],
                        (lin.a31, lin.a32, lin.a33)[c])
            row += 1
        # translation row: q0 - M p0
        wp0 = w.a11 * p0.x + w.a12 * p0.y + w.a13 * p0.z
        wp1 = w.a21 * p0.x + w.a22 * p0.y + w.a23 * p0.z
        wp2 = w.a31 * p0.x + w.a32 * p0.y + w.a33 * p0.z
        rows.extend((row, row, row, row))
        cols.extend(cols_j)
        data.extend((1.0 + wp0 + wp1 + wp2, -wp0, -wp1, -wp2))
        rhs[row] = target.translation
        row += 1
    # vertices outside every face have empty columns; pin them to rest
    referenced = [False] * nv
    for f in rest.faces:
        for i in f:
            referenced[i] = True
    for i, used in enumerate(referenced):
        if not used:
            rows.append(row)
            cols.append(i)
            data.append(1.0)
            rhs[row] = rest.vertices[i]
            row += 1
    a = sparse.coo_matrix((data, (rows, cols)), shape=(row, nv + nf)).tocsr()
    return a, rhs


def _count_unreferenced(rest: TriMesh) -> int:
    used = set()
    for f in rest.faces:
        used.update(f)
    return len(rest.vertices) - len(used)


def _conjugate_gradient(gram_op, b: np.ndarray, x0: np.ndarray) -> np.ndarray:
    """CG on the normal equations; cap 20 iterations per unknown."""
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        return np.zeros_like(b)
    x = x0.copy()
    r = b - gram_op @ x
    p = r.copy()
    rs = float(r @ r)
    maxiter = 20 * b.size
    for _ in range(maxiter):
        if math.sqrt(rs) <= _CG_RTOL * bnorm:
            return x
        ap = gram_op @ p
        pap = float(p @ ap)
        if pap <= 0.0:
            break
        alpha = rs / pap
        x += alpha * p
        r -= alpha * ap
        rs_new = float(r @ r)
        p = r + (rs_new / rs) * p
        rs = rs_new
    if math.sqrt(rs) <= _CG_RTOL * bnorm:
        return x
    raise SolverNotConvergedError("mesh patching least squares stalled",
                                  math.sqrt(rs) / bnorm)


# -- Wavefront OBJ (triangles only) ------------------------------------------

def load_obj(path: str) -> TriMesh:
    """Read `v`/`f` records; 1-based indices, triangles only.

    Face fields may carry `v/vt/vn` slashes (only the vertex index is
    kept). Unknown record types are skipped; malformed records raise
    FileFormatError with the offending line.
    """
    vertices: list[Vec3] = []
    faces: list[tuple[int, int, int]] = []
    face_lines: list[int] = []
    with open(path, encoding="utf-8") as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if parts[0] == "v":
                if len(parts) not in (4, 5):
                    raise FileFormatError(
                        f"{path}:{ln}: vertex record needs 3 coordinates, got {len(parts) - 1}")
                try:
                    coords = [float(s) for s in parts[1:4]]
                except ValueError as exc:
                    raise FileFormatError(f"{path}:{ln}: bad vertex coordinate: {exc}") from None
                if not all(math.isfinite(c) for c in coords):
                    raise FileFormatError(f"{path}:{ln}: vertex coordinate is not finite")
                vertices.append(Vec3(*coords))
            elif parts[0] == "f":
                if len(parts) != 4:
                    raise FileFormatError(
                        f"{path}:{ln}: only triangle faces are supported, got "
                        f"{len(parts) - 1} indices")
                idx = []
                for fieldstr in parts[1:]:
                    head = fieldstr.split("/")[0]
                    try:
                        i = int(head)
                    except ValueError:
                        raise FileFormatError(
                            f"{path}:{ln}: bad face index {fieldstr!r}") from None
                    if i < 1:
                        raise FileFormatError(
                            f"{path}:{ln}: face index {i} must be positive (1-based)")
                    idx.append(i - 1)
                faces.append((idx[0], idx[1], idx[2]))
                face_lines.append(ln)
    for (f, ln) in zip(faces, face_lines):
        for i in f:
            if i >= len(vertices):
                raise FileFormatError(
                    f"{path}:{ln}: face index {i + 1} exceeds vertex count {len(vertices)}")
    return TriMesh(vertices, faces)


def save_obj(path: str, mesh: TriMesh) -> None:
    """Write `v`/`f` records; floats keep full round-trip precision."""
    with open(path, "w", encoding="utf-8") as fh:
        write_obj(fh, mesh)


def write_obj(fh, mesh: TriMesh) -> None:
    for v in mesh.vertices:
        fh.write(f"v {v.x!r} {v.y!r} {v.z!r}\n")
    for f in mesh.faces:
        fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")
