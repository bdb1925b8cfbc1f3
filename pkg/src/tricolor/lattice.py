"""Three-coloring states with domain-wall boundary, vertex weights, brute-force Z.

Conventions (all indices 0-based):

* ``faces[i][j]`` for 0 <= i, j <= n, row i from the top, column j from the left;
  the corner color r is ``faces[0][0]``.
* vertex (i, j), 0 <= i, j < n, sits where horizontal line x_{i+1} meets
  vertical line y_{j+1}; its faces are TL (i, j), TR (i, j+1), BR (i+1, j+1)
  and BL (i+1, j).  Its spectral variable is w = x_{i+1} / y_{j+1}.
* u = (x_1, y_1, x_2, y_2, ...), so ``u[2*i]`` is x_{i+1} and ``u[2*i+1]`` is y_{i+1}.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, NamedTuple, Sequence

from .exactalg import (
    A,
    AlgebraContext,
    AlgebraElement,
    CycScalar,
    DegeneratePointError,
    UniPoly,
    sigma,
)

#: Alternating-sign-matrix counts, the expected number of states per corner color.
ASM_COUNTS = {1: 1, 2: 2, 3: 7, 4: 42, 5: 429, 6: 7436}

INV_SIGMA_A2 = sigma(A ** 2).inverse()


class ClassificationError(ValueError):
    pass


class Boundary(NamedTuple):
    top: tuple[int, ...]
    left: tuple[int, ...]
    bottom: tuple[int, ...]
    right: tuple[int, ...]


def boundary_colors(n: int, r: int) -> Boundary:
    """Domain-wall boundary: +1 per step down the left side, -1 per step along the bottom.

    Rows and columns are listed left-to-right and top-to-bottom.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    top = tuple((r + j) % 3 for j in range(n + 1))
    left = tuple((r + i) % 3 for i in range(n + 1))
    bottom = tuple((r + n - j) % 3 for j in range(n + 1))
    right = tuple((r + n - i) % 3 for i in range(n + 1))
    return Boundary(top, left, bottom, right)


@dataclass(frozen=True)
class ColorGrid:
    n: int
    faces: tuple[tuple[int, ...], ...]

    @property
    def corner(self) -> int:
        return self.faces[0][0]

    def validate(self) -> None:
        n, f = self.n, self.faces
        if len(f) != n + 1 or any(len(row) != n + 1 for row in f):
            raise ValueError("grid must be (n+1)x(n+1)")
        for i in range(n + 1):
            for j in range(n + 1):
                if f[i][j] not in (0, 1, 2):
                    raise ValueError("colors must be 0, 1 or 2")
                if j < n and (f[i][j] - f[i][j + 1]) % 3 == 0:
                    raise ValueError(f"faces ({i},{j}) and ({i},{j + 1}) share a color")
                if i < n and (f[i][j] - f[i + 1][j]) % 3 == 0:
                    raise ValueError(f"faces ({i},{j}) and ({i + 1},{j}) share a color")
        bnd = boundary_colors(n, self.corner)
        if (
            f[0] != bnd.top
            or f[n] != bnd.bottom
            or tuple(row[0] for row in f) != bnd.left
            or tuple(row[n] for row in f) != bnd.right
        ):
            raise ValueError("boundary is not domain-wall")

    def vertex_faces(self, i: int, j: int) -> tuple[int, int, int, int]:
        f = self.faces
        return f[i][j], f[i][j + 1], f[i + 1][j + 1], f[i + 1][j]

    def vertices(self) -> list[list["VertexClass"]]:
        return [[classify_vertex(*self.vertex_faces(i, j)) for j in range(self.n)] for i in range(self.n)]

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.corner, "faces": [list(row) for row in self.faces]}

    @classmethod
    def from_json(cls, obj: dict) -> "ColorGrid":
        grid = cls(int(obj["n"]), tuple(tuple(int(c) for c in row) for row in obj["faces"]))
        grid.validate()
        if "r" in obj and int(obj["r"]) != grid.corner:
            raise ValueError("stored corner color disagrees with faces")
        return grid


def enumerate_states(n: int, r: int) -> list[ColorGrid]:
    """All DWBC colorings with corner color r.

    Depth-first over interior faces in row-major order, trying colors 0, 1, 2.
    """
    r %= 3
    bnd = boundary_colors(n, r)
    g: list[list[int | None]] = [[None] * (n + 1) for _ in range(n + 1)]
    for j in range(n + 1):
        g[0][j], g[n][j] = bnd.top[j], bnd.bottom[j]
    for i in range(n + 1):
        g[i][0], g[i][n] = bnd.left[i], bnd.right[i]
    free = [(i, j) for i in range(1, n) for j in range(1, n)]
    out: list[ColorGrid] = []

    def fits(i: int, j: int, c: int) -> bool:
        for di, dj in ((-1, 0), (0, -1), (1, 0), (0, 1)):
            v = g[i + di][j + dj]
            if v is not None and (v - c) % 3 == 0:
                return False
        return True

    def dfs(k: int) -> None:
        if k == len(free):
            out.append(ColorGrid(n, tuple(tuple(row) for row in g)))
            return
        i, j = free[k]
        for c in range(3):
            if fits(i, j, c):
                g[i][j] = c
                dfs(k + 1)
                g[i][j] = None

    dfs(0)
    return out


class VertexKind(enum.Enum):
    ALPHA = "alpha"
    ALPHA_P = "alpha'"
    BETA = "beta"
    BETA_P = "beta'"
    GAMMA = "gamma"
    GAMMA_P = "gamma'"


class VertexClass(NamedTuple):
    kind: VertexKind
    r: int


# offsets of (TL, TR, BR, BL) relative to r
_PATTERNS = {
    VertexKind.ALPHA: (-1, 0, 1, 0),
    VertexKind.ALPHA_P: (1, 0, -1, 0),
    VertexKind.BETA: (0, -1, 0, 1),
    VertexKind.BETA_P: (0, 1, 0, -1),
    VertexKind.GAMMA: (0, 1, 0, 1),
    VertexKind.GAMMA_P: (0, -1, 0, -1),
}
_CLASSIFY = {
    tuple((r + d) % 3 for d in offsets): VertexClass(kind, r)
    for kind, offsets in _PATTERNS.items()
    for r in range(3)
}


def classify_vertex(tl: int, tr: int, br: int, bl: int) -> VertexClass:
    try:
        return _CLASSIFY[(tl % 3, tr % 3, br % 3, bl % 3)]
    except KeyError:
        raise ClassificationError(f"inadmissible vertex pattern {(tl, tr, br, bl)}") from None


def gamma_balance(g: ColorGrid) -> list[tuple[int, int]]:
    """(#gamma, #gamma') for every vertex column, left to right."""
    verts = g.vertices()
    report = []
    for j in range(g.n):
        col = [verts[i][j].kind for i in range(g.n)]
        report.append((col.count(VertexKind.GAMMA), col.count(VertexKind.GAMMA_P)))
    return report


def gamma_balance_ok(g: ColorGrid) -> bool:
    return all(ng >= 1 and ng == ngp + 1 for ng, ngp in gamma_balance(g))


def state_s_exponents(g: ColorGrid) -> tuple[int, int, int]:
    """Exponent of s_c in a state's weight before reduction.

    Each beta-type vertex of color r carries s_{r-1} s_{r+1}, so s_c gets one
    power from every beta/beta' vertex whose color differs from c.
    """
    counts = [0, 0, 0]
    for row in g.vertices():
        for vc in row:
            if vc.kind in (VertexKind.BETA, VertexKind.BETA_P):
                for c in range(3):
                    if c != vc.r:
                        counts[c] += 1
    return tuple(counts)


def state_is_s_free(g: ColorGrid) -> bool:
    return all(e % 2 == 0 for e in state_s_exponents(g))


@dataclass(frozen=True)
class EvaluationPoint:
    """Exact values for b, x_1..x_n, y_1..y_n.

    Construction rejects points where a weight denominator vanishes.  With
    ``distinct=True`` (the default) it also requires the squares u_mu^2 to be
    pairwise distinct, which every determinant-side formula divides by.
    """

    b: CycScalar
    x: tuple[CycScalar, ...]
    y: tuple[CycScalar, ...]
    distinct: bool = True

    def __post_init__(self):
        b = CycScalar.coerce(self.b)
        x = tuple(CycScalar.coerce(v) for v in self.x)
        y = tuple(CycScalar.coerce(v) for v in self.y)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if len(x) != len(y) or not x:
            raise ValueError("x and y must have the same positive length")
        if not all(x) or not all(y):
            raise DegeneratePointError("spectral variables must be nonzero")
        if not sigma(b ** 3):
            raise DegeneratePointError("sigma(b^3) vanishes")
        # t_r != 0 is enforced here; it also covers sigma(a^(2(n+r)) b)
        object.__setattr__(self, "_ctx", AlgebraContext(b))
        if self.distinct:
            squares = [v * v for v in self.u]
            for m in range(len(squares)):
                for k in range(m + 1, len(squares)):
                    if squares[m] == squares[k]:
                        raise DegeneratePointError(f"u_{m + 1}^2 = u_{k + 1}^2")

    @classmethod
    def from_u(cls, b, u: Sequence, distinct: bool = True) -> "EvaluationPoint":
        return cls(b, tuple(u[0::2]), tuple(u[1::2]), distinct)

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def u(self) -> tuple[CycScalar, ...]:
        return tuple(v for pair in zip(self.x, self.y) for v in pair)

    @property
    def ctx(self) -> AlgebraContext:
        return self._ctx

    def with_slot(self, mu: int, value, distinct: bool | None = None) -> "EvaluationPoint":
        u = list(self.u)
        u[mu] = value
        return EvaluationPoint.from_u(self.b, u, self.distinct if distinct is None else distinct)

    def truncated(self, n: int) -> "EvaluationPoint":
        return EvaluationPoint(self.b, self.x[:n], self.y[:n], self.distinct)

    def to_json(self) -> dict:
        return {
            "b": self.b.to_json(),
            "x": [v.to_json() for v in self.x],
            "y": [v.to_json() for v in self.y],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EvaluationPoint":
        return cls(
            CycScalar.from_json(obj["b"]),
            tuple(CycScalar.from_json(v) for v in obj["x"]),
            tuple(CycScalar.from_json(v) for v in obj["y"]),
        )


def spectral_values(pt: EvaluationPoint, symbolic: int | None = None, symbol: str | None = None) -> list:
    """u as a list, with slot ``symbolic`` replaced by the UniPoly variable."""
    u: list = list(pt.u)
    if symbolic is not None:
        u[symbolic] = UniPoly.var(symbol or slot_name(symbolic))
    return u


def slot_name(mu: int) -> str:
    return f"{'xy'[mu % 2]}{mu // 2 + 1}"


WeightFn = Callable[[VertexClass, object, AlgebraContext], object]


def trig_weight(vc: VertexClass, w, ctx: AlgebraContext):
    """Trigonometric-limit weight of a vertex with spectral variable w.

    ``w`` may be a CycScalar or a UniPoly monomial; the result is then an
    AlgebraElement or an AlgebraElement-coefficient UniPoly.
    """
    kind, r = vc
    if kind in (VertexKind.ALPHA, VertexKind.ALPHA_P):
        return AlgebraElement.scalar(ctx, INV_SIGMA_A2) * sigma(A * w ** -1)
    if kind in (VertexKind.BETA, VertexKind.BETA_P):
        return AlgebraElement.zeta_half(ctx, r) * INV_SIGMA_A2 * sigma(A * w)
    b, t_inv = ctx.b, ctx.t_inv(r)
    if kind is VertexKind.GAMMA:
        scale = CycScalar.a_pow(-1) * t_inv
        return AlgebraElement.scalar(ctx, scale) * (w ** -1 * sigma(CycScalar.a_pow(2 * r + 1) * b * w))
    scale = A * t_inv
    return AlgebraElement.scalar(ctx, scale) * (w * sigma(CycScalar.a_pow(2 * r - 1) * b * w ** -1))


def perturbed_weight(kind: VertexKind, factor, r: int | None = None, base: WeightFn = trig_weight) -> WeightFn:
    """Negative-control weights: multiply every vertex of ``kind`` (and color ``r``, if given) by ``factor``."""

    def weight(vc: VertexClass, w, ctx: AlgebraContext):
        value = base(vc, w, ctx)
        if vc.kind is kind and (r is None or vc.r == r % 3):
            return value * CycScalar.coerce(factor)
        return value

    return weight


def vertex_weight(vc: VertexClass, i: int, j: int, pt: EvaluationPoint, weight: WeightFn = trig_weight):
    return weight(vc, pt.x[i] * pt.y[j] ** -1, pt.ctx)


def partial_partition(
    n: int,
    r: int,
    pt: EvaluationPoint,
    *,
    symbolic: int | None = None,
    weight: WeightFn = trig_weight,
    states: Iterable[ColorGrid] | None = None,
):
    """Z^r_n by summing state weights.

    Returns an AlgebraElement, or a UniPoly in u_{symbolic+1} when ``symbolic``
    names a slot of u.
    """
    if pt.n != n:
        raise ValueError(f"point has n={pt.n}, expected {n}")
    r %= 3
    u = spectral_values(pt, symbolic)
    x, y = u[0::2], u[1::2]
    cache: dict = {}
    total = None
    for g in enumerate_states(n, r) if states is None else states:
        if g.n != n or g.corner != r:
            raise ValueError("state does not belong to this partial partition function")
        term = None
        for i in range(n):
            for j in range(n):
                vc = classify_vertex(*g.vertex_faces(i, j))
                key = (vc, i, j)
                wv = cache.get(key)
                if wv is None:
                    wv = cache[key] = weight(vc, x[i] * y[j] ** -1, pt.ctx)
                term = wv if term is None else term * wv
        total = term if total is None else total + term
    return total


def total_partition(n: int, pt: EvaluationPoint, **kwargs):
    return sum((partial_partition(n, r, pt, **kwargs) for r in range(1, 3)), partial_partition(n, 0, pt, **kwargs))


# state cache (JSON lines)


def write_states(path: str | Path, states: Iterable[ColorGrid]) -> int:
    count = 0
    with open(path, "w") as fh:
        for g in states:
            fh.write(json.dumps(g.to_json(), separators=(",", ":")) + "\n")
            count += 1
    return count


def read_states(path: str | Path) -> list[ColorGrid]:
    with open(path) as fh:
        return [ColorGrid.from_json(json.loads(line)) for line in fh if line.strip()]


class StateCache:
    """Enumerated states keyed by (n, r), optionally backed by a JSONL file."""

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path else None
        self._states: dict[tuple[int, int], list[ColorGrid]] = {}
        if self.path and self.path.exists():
            for g in read_states(self.path):
                self._states.setdefault((g.n, g.corner), []).append(g)
        self._dirty = False

    def get(self, n: int, r: int) -> list[ColorGrid]:
        key = (n, r % 3)
        if key not in self._states:
            self._states[key] = enumerate_states(n, r)
            self._dirty = True
        return self._states[key]

    def save(self) -> None:
        if self.path and self._dirty:
            write_states(self.path, (g for key in sorted(self._states) for g in self._states[key]))
            self._dirty = False

