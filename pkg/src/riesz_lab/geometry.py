"""Compact sets as bi-Lipschitz chart atlases, with Hausdorff-normalized quadrature.

A geometry is a finite list of charts: each chart maps a box (or disk) in R^d
into R^p through one of a few analytic parametrizations or an affine map.
Sampling a geometry produces a weighted point cloud whose weights are
d-dimensional Hausdorff measure under the normalization in which the unit
ball of R^d has measure 2^d (so the factor relative to ordinary surface
measure is 2^d / kappa_d, with kappa_d the volume of the unit d-ball; for
d = 1 the factor is 1).

Charts on closed loops (circle, torus) use a single chart with periodic
parameter axes; downstream optimizers wrap such axes instead of clamping.
The declared bilip_constant of a periodic chart refers to the quotient
(wrap) metric on its domain. Chart metadata is trusted; construction only
spot-checks injectivity and cross-chart disjointness by sampling.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree


def kappa_d(d: int) -> float:
    """Volume of the unit ball in R^d."""
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


def hausdorff_factor(d: int) -> float:
    """Scale from ordinary d-dimensional surface measure to the 2^d-ball normalization."""
    return 2.0**d / kappa_d(d)


class GeometryError(ValueError):
    """Invalid chart atlas or cloud construction."""


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


@dataclass
class Box:
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=float)
        self.hi = np.asarray(self.hi, dtype=float)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise GeometryError("box lo/hi must be 1-d arrays of equal length")
        if np.any(self.hi <= self.lo):
            raise GeometryError("box must have positive extent on every axis")

    @property
    def dim(self) -> int:
        return self.lo.size

    def to_dict(self) -> dict:
        return {"type": "box", "lo": self.lo.tolist(), "hi": self.hi.tolist()}


@dataclass
class Disk:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        if self.center.ndim != 1:
            raise GeometryError("disk center must be a 1-d array")
        if not self.radius > 0:
            raise GeometryError("disk radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def to_dict(self) -> dict:
        return {"type": "disk", "center": self.center.tolist(), "radius": self.radius}


def _domain_from_dict(doc: dict):
    kind = doc.get("type")
    if kind == "box":
        return Box(doc["lo"], doc["hi"])
    if kind == "disk":
        return Disk(doc["center"], doc["radius"])
    raise GeometryError(f"unknown domain type {kind!r}")


# ---------------------------------------------------------------------------
# Chart maps
# ---------------------------------------------------------------------------


@dataclass
class ChartMap:
    """Parametrization descriptor: analytic builtin or affine matrix+offset.

    `rotation` (p x p orthogonal) and `shift` (p,) compose an ambient isometry
    after the base map; the surface Jacobian factor is unaffected.
    """

    kind: str
    params: dict = field(default_factory=dict)
    rotation: np.ndarray | None = None
    shift: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in _MAPS:
            raise GeometryError(f"unknown chart map kind {self.kind!r}")
        if self.rotation is not None:
            self.rotation = np.asarray(self.rotation, dtype=float)
        if self.shift is not None:
            self.shift = np.asarray(self.shift, dtype=float)

    def apply(self, t: np.ndarray) -> np.ndarray:
        x = _MAPS[self.kind][0](np.atleast_2d(t), self.params)
        if self.rotation is not None:
            x = x @ self.rotation.T
        if self.shift is not None:
            x = x + self.shift
        return x

    def jacobian(self, t: np.ndarray) -> np.ndarray:
        """Jacobian matrices, shape (m, p, d)."""
        J = _MAPS[self.kind][1](np.atleast_2d(t), self.params)
        if self.rotation is not None:
            J = np.einsum("ij,mjk->mik", self.rotation, J)
        return J

    def surface_factor(self, t: np.ndarray) -> np.ndarray:
        """sqrt(det(J^T J)) at each parameter, shape (m,)."""
        J = self.jacobian(t)
        G = np.einsum("mij,mik->mjk", J, J)
        if G.shape[-1] == 1:
            return np.sqrt(G[:, 0, 0])
        return np.sqrt(np.linalg.det(G))

    def isometrized(self, rotation: np.ndarray, shift: np.ndarray) -> "ChartMap":
        """Compose an additional ambient isometry x -> rotation @ x + shift."""
        rotation = np.asarray(rotation, dtype=float)
        shift = np.asarray(shift, dtype=float)
        if self.rotation is None:
            rot, sh = rotation, shift
        else:
            rot = rotation @ self.rotation
            sh = rotation @ (self.shift if self.shift is not None else 0.0) + shift
        return ChartMap(self.kind, dict(self.params), rot, sh)

    def to_dict(self) -> dict:
        doc = {"kind": self.kind}
        if self.params:
            doc["params"] = {
                k: (v.tolist() if isinstance(v, np.ndarray) else v)
                for k, v in self.params.items()
            }
        if self.rotation is not None:
            doc["rotation"] = self.rotation.tolist()
        if self.shift is not None:
            doc["shift"] = self.shift.tolist()
        return doc

    @staticmethod
    def from_dict(doc: dict) -> "ChartMap":
        params = dict(doc.get("params", {}))
        if "matrix" in params:
            params["matrix"] = np.asarray(params["matrix"], dtype=float)
        if "offset" in params:
            params["offset"] = np.asarray(params["offset"], dtype=float)
        return ChartMap(
            doc["kind"],
            params,
            np.asarray(doc["rotation"], float) if "rotation" in doc else None,
            np.asarray(doc["shift"], float) if "shift" in doc else None,
        )


def _affine_apply(t, params):
    A = np.asarray(params["matrix"], dtype=float)
    b = np.asarray(params.get("offset", np.zeros(A.shape[0])), dtype=float)
    return t @ A.T + b


def _affine_jac(t, params):
    A = np.asarray(params["matrix"], dtype=float)
    return np.broadcast_to(A, (t.shape[0],) + A.shape).copy()


def _circle_apply(t, params):
    th = t[:, 0]
    return np.stack([np.cos(th), np.sin(th)], axis=1)


def _circle_jac(t, params):
    th = t[:, 0]
    return np.stack([-np.sin(th), np.cos(th)], axis=1)[:, :, None]


def _sphere_face_apply(t, params):
    axis, sign = int(params["axis"]), float(params["sign"])
    a, b = t[:, 0], t[:, 1]
    w = np.sqrt(1.0 + a * a + b * b)
    x = np.empty((t.shape[0], 3))
    others = [m for m in range(3) if m != axis]
    x[:, axis] = sign / w
    x[:, others[0]] = a / w
    x[:, others[1]] = b / w
    return x


def _sphere_face_jac(t, params):
    axis, sign = int(params["axis"]), float(params["sign"])
    a, b = t[:, 0], t[:, 1]
    w2 = 1.0 + a * a + b * b
    w3 = w2 ** 1.5
    others = [m for m in range(3) if m != axis]
    J = np.empty((t.shape[0], 3, 2))
    # d(u_i/w)/da with u = (a, b, sign) in (others0, others1, axis) slots
    J[:, others[0], 0] = (w2 - a * a) / w3
    J[:, others[1], 0] = -a * b / w3
    J[:, axis, 0] = -sign * a / w3
    J[:, others[0], 1] = -a * b / w3
    J[:, others[1], 1] = (w2 - b * b) / w3
    J[:, axis, 1] = -sign * b / w3
    return J


def _torus_apply(t, params):
    R, r = float(params["major"]), float(params["minor"])
    u, v = t[:, 0], t[:, 1]
    ring = R + r * np.cos(v)
    return np.stack([ring * np.cos(u), ring * np.sin(u), r * np.sin(v)], axis=1)


def _torus_jac(t, params):
    R, r = float(params["major"]), float(params["minor"])
    u, v = t[:, 0], t[:, 1]
    ring = R + r * np.cos(v)
    J = np.empty((t.shape[0], 3, 2))
    J[:, 0, 0] = -ring * np.sin(u)
    J[:, 1, 0] = ring * np.cos(u)
    J[:, 2, 0] = 0.0
    J[:, 0, 1] = -r * np.sin(v) * np.cos(u)
    J[:, 1, 1] = -r * np.sin(v) * np.sin(u)
    J[:, 2, 1] = r * np.cos(v)
    return J


def _graph_bump_apply(t, params):
    a = float(params.get("amplitude", 0.3))
    u, v = t[:, 0], t[:, 1]
    return np.stack([u, v, a * np.sin(np.pi * u) * np.sin(np.pi * v)], axis=1)


def _graph_bump_jac(t, params):
    a = float(params.get("amplitude", 0.3))
    u, v = t[:, 0], t[:, 1]
    J = np.zeros((t.shape[0], 3, 2))
    J[:, 0, 0] = 1.0
    J[:, 1, 1] = 1.0
    J[:, 2, 0] = a * np.pi * np.cos(np.pi * u) * np.sin(np.pi * v)
    J[:, 2, 1] = a * np.pi * np.sin(np.pi * u) * np.cos(np.pi * v)
    return J


_MAPS = {
    "affine": (_affine_apply, _affine_jac),
    "circle": (_circle_apply, _circle_jac),
    "sphere_face": (_sphere_face_apply, _sphere_face_jac),
    "torus": (_torus_apply, _torus_jac),
    "graph_bump": (_graph_bump_apply, _graph_bump_jac),
}


# ---------------------------------------------------------------------------
# Chart / Geometry
# ---------------------------------------------------------------------------


@dataclass
class Chart:
    id: str
    domain: Box | Disk
    map: ChartMap
    bilip_constant: float
    periodic: tuple = ()

    def __post_init__(self):
        if self.bilip_constant < 1.0:
            raise GeometryError("bilip_constant must be >= 1")
        if not self.periodic:
            self.periodic = tuple(False for _ in range(self.domain.dim))
        self.periodic = tuple(bool(p) for p in self.periodic)
        if len(self.periodic) != self.domain.dim:
            raise GeometryError("periodic flags must match domain dimension")
        if any(self.periodic) and not isinstance(self.domain, Box):
            raise GeometryError("periodic axes require a box domain")

    @property
    def dim(self) -> int:
        return self.domain.dim

    def apply(self, t: np.ndarray) -> np.ndarray:
        return self.map.apply(t)

    def project(self, t: np.ndarray) -> np.ndarray:
        """Wrap periodic axes into [lo, hi), clamp the rest."""
        t = np.atleast_2d(np.asarray(t, dtype=float)).copy()
        if isinstance(self.domain, Disk):
            off = t - self.domain.center
            rr = np.linalg.norm(off, axis=1)
            far = rr > self.domain.radius
            if np.any(far):
                t[far] = self.domain.center + off[far] * (self.domain.radius / rr[far])[:, None]
            return t
        lo, hi = self.domain.lo, self.domain.hi
        for k, per in enumerate(self.periodic):
            if per:
                span = hi[k] - lo[k]
                t[:, k] = lo[k] + np.mod(t[:, k] - lo[k], span)
            else:
                t[:, k] = np.clip(t[:, k], lo[k], hi[k])
        return t

    def interior_samples(self, count: int, seed: int = 0) -> np.ndarray:
        """Deterministic interior parameter samples used for spot checks."""
        rng = np.random.default_rng(seed)
        if isinstance(self.domain, Disk):
            ang = rng.uniform(0, 2 * np.pi, count)
            rad = self.domain.radius * np.sqrt(rng.uniform(0, 1, count))
            return self.domain.center + np.stack(
                [rad * np.cos(ang), rad * np.sin(ang)], axis=1
            )
        u = rng.uniform(0.0, 1.0, (count, self.dim))
        # keep strictly interior so half-open boundary conventions are moot
        return self.domain.lo + (0.02 + 0.96 * u) * (self.domain.hi - self.domain.lo)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "domain": self.domain.to_dict(),
            "map": self.map.to_dict(),
            "bilip_constant": self.bilip_constant,
            "periodic": list(self.periodic),
        }

    @staticmethod
    def from_dict(doc: dict) -> "Chart":
        return Chart(
            id=doc["id"],
            domain=_domain_from_dict(doc["domain"]),
            map=ChartMap.from_dict(doc["map"]),
            bilip_constant=float(doc["bilip_constant"]),
            periodic=tuple(doc.get("periodic", ())),
        )


@dataclass
class Geometry:
    name: str
    ambient_dim: int
    intrinsic_dim: int
    charts: list

    def __post_init__(self):
        if not (0 < self.intrinsic_dim <= self.ambient_dim):
            raise GeometryError("need 0 < intrinsic_dim <= ambient_dim")
        if not self.charts:
            raise GeometryError("geometry needs at least one chart")
        for ch in self.charts:
            if ch.dim != self.intrinsic_dim:
                raise GeometryError(f"chart {ch.id!r} has wrong parameter dimension")
        self._spot_check()

    def _spot_check(self, count: int = 64):
        # injectivity within charts and disjointness across charts, sampled
        samples = []
        for ch in self.charts:
            pts = ch.apply(ch.interior_samples(count, seed=17))
            if pts.shape[1] != self.ambient_dim:
                raise GeometryError(f"chart {ch.id!r} maps into wrong ambient dimension")
            d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
            np.fill_diagonal(d, np.inf)
            if d.min() < 1e-12:
                raise GeometryError(f"chart {ch.id!r} failed the sampled injectivity check")
            samples.append(pts)
        for i in range(len(samples)):
            for j in range(i + 1, len(samples)):
                d = np.linalg.norm(samples[i][:, None, :] - samples[j][None, :, :], axis=-1)
                if d.min() < 1e-9:
                    raise GeometryError(
                        f"charts {self.charts[i].id!r} and {self.charts[j].id!r} "
                        "failed the sampled disjointness check"
                    )

    def transformed(self, rotation: np.ndarray, shift: np.ndarray, name: str | None = None) -> "Geometry":
        """Geometry moved by the ambient isometry x -> rotation @ x + shift."""
        charts = [
            Chart(ch.id, ch.domain, ch.map.isometrized(rotation, shift),
                  ch.bilip_constant, ch.periodic)
            for ch in self.charts
        ]
        return Geometry(name or f"{self.name}-moved", self.ambient_dim,
                        self.intrinsic_dim, charts)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient_dim": self.ambient_dim,
            "intrinsic_dim": self.intrinsic_dim,
            # Definition-level residual set has no discrete counterpart; recorded absent.
            "residual_dimension": None,
            "charts": [ch.to_dict() for ch in self.charts],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @staticmethod
    def from_dict(doc: dict) -> "Geometry":
        return Geometry(
            name=doc["name"],
            ambient_dim=int(doc["ambient_dim"]),
            intrinsic_dim=int(doc["intrinsic_dim"]),
            charts=[Chart.from_dict(c) for c in doc["charts"]],
        )

    @staticmethod
    def from_json(text: str) -> "Geometry":
        return Geometry.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# Built-in geometries
# ---------------------------------------------------------------------------


def make_builtin(name: str, params: dict | None = None) -> Geometry:
    """Construct one of the built-in strongly rectifiable sets.

    interval         [-1, 1], d=1, p=1
    circle           unit circle, d=1, p=2 (single periodic chart)
    square           [0, 1]^2, d=2, p=2
    sphere2          unit sphere S^2, six gnomonic cube-face charts, d=2, p=3
    torus            radii major > minor > 0, d=2, p=3 (single biperiodic chart)
    lipschitz_graph  graph of a*sin(pi u)sin(pi v) over [0,1]^2, d=2, p=3
    """
    params = dict(params or {})
    if name == "interval":
        chart = Chart(
            "interval",
            Box([-1.0], [1.0]),
            ChartMap("affine", {"matrix": np.array([[1.0]]), "offset": np.array([0.0])}),
            bilip_constant=1.0,
        )
        return Geometry("interval", 1, 1, [chart])
    if name == "circle":
        chart = Chart(
            "circle",
            Box([0.0], [2.0 * np.pi]),
            ChartMap("circle"),
            bilip_constant=np.pi / 2.0,  # chord vs wrap metric on the angle
            periodic=(True,),
        )
        return Geometry("circle", 2, 1, [chart])
    if name == "square":
        chart = Chart(
            "square",
            Box([0.0, 0.0], [1.0, 1.0]),
            ChartMap("affine", {"matrix": np.eye(2), "offset": np.zeros(2)}),
            bilip_constant=1.0,
        )
        return Geometry("square", 2, 2, [chart])
    if name == "sphere2":
        charts = []
        for axis in range(3):
            for sign in (1.0, -1.0):
                tag = f"{'xyz'[axis]}{'+' if sign > 0 else '-'}"
                charts.append(
                    Chart(
                        f"face_{tag}",
                        Box([-1.0, -1.0], [1.0, 1.0]),
                        ChartMap("sphere_face", {"axis": axis, "sign": sign}),
                        bilip_constant=3.0,  # gnomonic singular values in [1/3, 1]
                    )
                )
        return Geometry("sphere2", 3, 2, charts)
    if name == "torus":
        R = float(params.get("major", 2.0))
        r = float(params.get("minor", 1.0))
        if not (R > r > 0):
            raise GeometryError("torus needs major > minor > 0")
        chart = Chart(
            "torus",
            Box([0.0, 0.0], [2.0 * np.pi, 2.0 * np.pi]),
            ChartMap("torus", {"major": R, "minor": r}),
            bilip_constant=max(R + r, np.pi / (2.0 * min(r, R - r)), 1.0),
            periodic=(True, True),
        )
        return Geometry("torus", 3, 2, [chart])
    if name == "lipschitz_graph":
        a = float(params.get("amplitude", 0.3))
        if not np.isfinite(a * np.pi):
            raise GeometryError("graph Lipschitz bound must be finite")
        chart = Chart(
            "graph",
            Box([0.0, 0.0], [1.0, 1.0]),
            ChartMap("graph_bump", {"amplitude": a}),
            bilip_constant=math.sqrt(1.0 + (a * np.pi) ** 2),
        )
        return Geometry("lipschitz_graph", 3, 2, [chart])
    raise GeometryError(f"unknown builtin geometry {name!r}")


BUILTIN_NAMES = ("interval", "circle", "square", "sphere2", "torus", "lipschitz_graph")

ANALYTIC_MASS = {
    # H^d(A) under the 2^d-ball normalization
    "interval": 2.0,
    "circle": 2.0 * np.pi,
    "square": 4.0 / np.pi,
    "sphere2": 16.0,
}


def analytic_mass(geom: Geometry) -> float | None:
    """Closed-form H^d(A) for built-ins that have one."""
    if geom.name in ANALYTIC_MASS:
        return ANALYTIC_MASS[geom.name]
    if geom.name == "torus":
        p = geom.charts[0].map.params
        return 16.0 * np.pi * float(p["major"]) * float(p["minor"])
    return None


# ---------------------------------------------------------------------------
# Weighted point clouds
# ---------------------------------------------------------------------------


@dataclass
class WeightedPointCloud:
    """Quadrature nodes on a geometry with H^d weights (2^d-ball normalization)."""

    points: np.ndarray
    weights: np.ndarray
    chart_ids: list
    intrinsic_dim: int
    ambient_dim: int
    name: str = ""
    total_mass: float = 0.0

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        if self.points.ndim != 2 or self.points.shape[0] != self.weights.size:
            raise GeometryError("points/weights shape mismatch")
        if np.any(self.weights <= 0):
            raise GeometryError("all quadrature weights must be positive")
        mass = float(self.weights.sum())
        if self.total_mass == 0.0:
            self.total_mass = mass
        elif abs(mass - self.total_mass) >= 1e-12 * self.total_mass:
            raise GeometryError("cached total_mass disagrees with weights")
        if len(self.points) >= 2 and min_separation(self) <= 0.0:
            raise GeometryError("cloud contains duplicate points")

    def __len__(self) -> int:
        return len(self.points)

    def lambda_weights(self) -> np.ndarray:
        """Probability weights of lambda^d = H^d_A / H^d(A) on this cloud."""
        return self.weights / self.total_mass

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        p = self.points.shape[1]
        writer.writerow([f"x_{k + 1}" for k in range(p)] + ["weight", "chart_id"])
        for row, w, cid in zip(self.points, self.weights, self.chart_ids):
            writer.writerow([repr(v) for v in row] + [repr(w), cid])
        return buf.getvalue()


def _axis_counts(domain, budget: float) -> list:
    """Midpoint cell counts per axis, roughly isotropic, >= 2 per axis."""
    if isinstance(domain, Disk):
        k_r = max(2, int(math.ceil(math.sqrt(budget / math.pi))))
        return [k_r, max(2, int(math.ceil(math.pi * k_r)))]
    lengths = domain.hi - domain.lo
    d = domain.dim
    if d == 1:
        return [max(2, int(round(budget)))]
    geo_mean = float(np.exp(np.mean(np.log(lengths))))
    base = budget ** (1.0 / d)
    return [max(2, int(math.ceil(base * L / geo_mean))) for L in lengths]


def _chart_nodes(chart: Chart, budget: float, rng, jitter: float):
    dom = chart.domain
    if isinstance(dom, Disk):
        k_r, k_t = _axis_counts(dom, budget)
        dr = dom.radius / k_r
        dt = 2.0 * math.pi / k_t
        r = (np.arange(k_r) + 0.5) * dr
        th = (np.arange(k_t) + 0.5) * dt
        Rg, Tg = np.meshgrid(r, th, indexing="ij")
        rr, tt = Rg.ravel(), Tg.ravel()
        if jitter > 0:
            rr = rr + rng.uniform(-0.5, 0.5, rr.size) * jitter * dr
            tt = tt + rng.uniform(-0.5, 0.5, tt.size) * jitter * dt
        t = dom.center + np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=1)
        cellvol = rr * dr * dt  # polar area element
        return t, cellvol
    counts = _axis_counts(dom, budget)
    axes = []
    steps = []
    for k, (lo, hi) in zip(counts, zip(dom.lo, dom.hi)):
        step = (hi - lo) / k
        axes.append(lo + (np.arange(k) + 0.5) * step)
        steps.append(step)
    grids = np.meshgrid(*axes, indexing="ij")
    t = np.stack([g.ravel() for g in grids], axis=1)
    if jitter > 0:
        t = t + rng.uniform(-0.5, 0.5, t.shape) * jitter * np.asarray(steps)
    cellvol = np.full(t.shape[0], float(np.prod(steps)))
    return t, cellvol


def sample_cloud(
    geom: Geometry, resolution: int, seed: int = 0, jitter: float = 0.0
) -> WeightedPointCloud:
    """Midpoint-rule quadrature cloud with ~`resolution` nodes over the atlas.

    Deterministic given (geom, resolution, seed); `jitter` (cell fraction,
    default off) perturbs nodes inside their cells using the seed.
    """
    if resolution < 2:
        raise GeometryError("resolution must be >= 2")
    rng = np.random.default_rng(seed)
    factor = hausdorff_factor(geom.intrinsic_dim)
    budget = resolution / len(geom.charts)
    pts, wts, cids = [], [], []
    for chart in geom.charts:
        t, cellvol = _chart_nodes(chart, budget, rng, jitter)
        pts.append(chart.apply(t))
        wts.append(factor * chart.map.surface_factor(t) * cellvol)
        cids.extend([chart.id] * t.shape[0])
    return WeightedPointCloud(
        points=np.vstack(pts),
        weights=np.concatenate(wts),
        chart_ids=cids,
        intrinsic_dim=geom.intrinsic_dim,
        ambient_dim=geom.ambient_dim,
        name=geom.name,
    )


# ---------------------------------------------------------------------------
# Cloud queries
# ---------------------------------------------------------------------------


def measure_of_ball(
    cloud: WeightedPointCloud, weights: np.ndarray, x: np.ndarray, r: float
) -> float:
    """Sum of `weights` over nodes within the closed ball B(x, r)."""
    if not r > 0:
        raise GeometryError("ball radius must be positive")
    x = np.asarray(x, dtype=float)
    dist = np.linalg.norm(cloud.points - x, axis=1)
    return float(np.asarray(weights)[dist <= r].sum())


def min_separation(cloud: WeightedPointCloud) -> float:
    """Exact minimum pairwise distance (KD-tree nearest neighbor)."""
    if len(cloud.points) < 2:
        raise GeometryError("min_separation needs at least two points")
    d, _ = cKDTree(cloud.points).query(cloud.points, k=2)
    return float(d[:, 1].min())


def diameter(cloud: WeightedPointCloud) -> float:
    """Exact maximum pairwise distance, computed in row blocks."""
    pts = cloud.points
    if len(pts) < 2:
        raise GeometryError("diameter needs at least two points")
    best = 0.0
    block = 1024
    for i in range(0, len(pts), block):
        chunk = pts[i : i + block]
        d2 = ((chunk[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
        best = max(best, float(d2.max()))
    return math.sqrt(best)
