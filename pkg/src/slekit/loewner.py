"""Discrete chordal Loewner evolution in the upper half-plane.

Driving functions are sampled on uniform grids from counter-based RNG
streams, so every value is a pure function of (seed, step, replica) and
results never depend on scheduling or batch sizes. Evolution uses the exact
per-step square-root map for piecewise-constant driving: over a step of
length dt with driving value fixed at the step's right endpoint, the
centered image v = g - W updates as

    v  <-  sqrt((v - delta)^2 + 4 dt),    delta = W_new - W_old,

with the square-root branch continuing into the closed upper half-plane.
Traces are built by the standard backward composition of the inverse step
maps.

Hull-avoidance queries are decided in two stages. A cheap forward scan
evolves a small family of probe points along the slit and flags candidate
replicas: any probe image that comes within a prescribed physical radius of
the driving, is strictly swallowed, or whose family ends split across the
trace. Candidates are then confirmed exactly by building the trace polyline
and intersecting it with the slit segment. Only the scan's completeness
matters for correctness; its false positives cost confirmation time, never
accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SWALLOW_TOL = 1e-9

_SALT_DRIVING = 0x51e5
_SALT_BRIDGE = 0xb11d6e


def _step_normals(seed: int, step: int, width: int,
                  salt: int = _SALT_DRIVING) -> np.ndarray:
    """Standard normals for one grid step, all replicas at once.

    Keyed by (salt, seed, step): deterministic, order-independent, and
    extending the replica count preserves earlier replicas.
    """
    ss = np.random.SeedSequence([salt, int(seed) & 0xFFFFFFFFFFFFFFFF, step])
    return np.random.Generator(np.random.Philox(ss)).standard_normal(width)


def _branch_sqrt_np(rad: np.ndarray, ref_real: np.ndarray) -> np.ndarray:
    """Vectorized square root into the closed upper half-plane.

    Real roots take the sign of ref_real so boundary orbits stay continuous.
    """
    s = np.sqrt(rad.astype(np.complex128, copy=False))
    flip = (s.imag < 0.0) | ((s.imag == 0.0) & (ref_real < 0.0))
    return np.where(flip, -s, s)


@dataclass(frozen=True)
class DrivingSample:
    """A sampled driving function W on a uniform time grid.

    values[k] is W at times[k]; values[0] = 0. replica/family_width record
    which component of the cross-replica increment streams this path is, so
    the same numbers can be regenerated inside batched runs.
    """
    kappa: float
    times: np.ndarray
    values: np.ndarray
    seed: int
    replica: int = 0
    family_width: int = 1

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ValueError("times and values must have equal length")
        if self.values[0] != 0.0:
            raise ValueError("driving must start at W_0 = 0")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    @property
    def T(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class TracePath:
    """Discrete trace: points[k] approximates the curve at times[k]."""
    points: np.ndarray
    times: np.ndarray
    scheme: str = "backward-sqrt"


def sample_driving(kappa: float, T: float, steps: int, seed: int,
                   replica: int = 0, family_width: int | None = None
                   ) -> DrivingSample:
    """Sample W = sqrt(kappa) B on a uniform grid of `steps` steps.

    Increment k comes from the stream keyed by (seed, k); `replica` selects
    the component within each cross-replica draw of `family_width` values.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if T <= 0.0:
        raise ValueError("T must be positive")
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    if family_width is None:
        family_width = replica + 1
    if not 0 <= replica < family_width:
        raise ValueError("replica must lie in [0, family_width)")
    dt = T / steps
    scale = math.sqrt(kappa * dt)
    incs = np.empty(steps)
    for k in range(1, steps + 1):
        incs[k - 1] = scale * _step_normals(seed, k, family_width)[replica]
    values = np.concatenate(([0.0], np.cumsum(incs)))
    times = np.linspace(0.0, T, steps + 1)
    return DrivingSample(kappa=float(kappa), times=times, values=values,
                         seed=int(seed), replica=replica,
                         family_width=family_width)


def refine_driving(d: DrivingSample) -> DrivingSample:
    """Halve the step size, filling midpoints by Brownian bridge.

    Bridge normals are keyed by (seed, current step count, step), so a
    refinement chain is reproducible and distinct stages use distinct
    streams. Existing grid values are preserved bit-for-bit.
    """
    K = d.steps
    dt = (d.times[-1] - d.times[0]) / K
    half_sd = math.sqrt(d.kappa * dt / 4.0)
    times = np.linspace(0.0, d.T, 2 * K + 1)
    values = np.empty(2 * K + 1)
    values[0::2] = d.values
    for j in range(1, K + 1):
        z = _step_normals(d.seed, (K << 20) + j, d.family_width,
                          salt=_SALT_BRIDGE)[d.replica]
        values[2 * j - 1] = 0.5 * (d.values[j - 1] + d.values[j]) + half_sd * z
    return DrivingSample(kappa=d.kappa, times=times, values=values,
                         seed=d.seed, replica=d.replica,
                         family_width=d.family_width)


def evolve_point(z: complex, d: DrivingSample
                 ) -> tuple[float | None, complex]:
    """Evolve one point under the forward Loewner flow of d.

    Returns (escape_time, final g value). escape_time is the grid time at
    which the point is swallowed (None if it survives to T): interior points
    escape when |g - W| < 1e-9; points started on the real axis additionally
    escape when g - W changes sign (the driving passed over them).
    """
    z = complex(z)
    if z.imag < 0.0:
        raise ValueError("point must lie in the closed upper half-plane")
    if z == 0:
        raise ValueError("the origin is the initial tip; evolution undefined")
    v = z  # v_k = g_k(z) - W_k; W_0 = 0
    on_axis = z.imag == 0.0
    for k in range(1, d.steps + 1):
        delta = d.values[k] - d.values[k - 1]
        dt = d.times[k] - d.times[k - 1]
        u = v - delta
        rad = u * u + 4.0 * dt
        s = np.sqrt(complex(rad))
        if s.imag < 0.0 or (s.imag == 0.0 and u.real < 0.0):
            s = -s
        prev = v
        v = complex(s)
        t_k = float(d.times[k])
        if abs(v) < SWALLOW_TOL:
            return t_k, v + d.values[k]
        # sign(v) equals sign(u) by the branch rule, so a sign change vs the
        # previous step means the driving passed over the point's image
        if on_axis and (u.real == 0.0 or prev.real * v.real < 0.0):
            return t_k, v + d.values[k]
    return None, v + d.values[-1]


def trace_from_driving(d: DrivingSample) -> TracePath:
    """Trace points by backward composition of inverse step maps.

    gamma(t_k) = E_1(E_2(...E_k(0)...)) with
    E_j(z) = sqrt(z^2 - 4 dt_j) + delta_j, the square root continued into
    the upper half-plane.
    """
    K = d.steps
    pts = np.zeros(K + 1, dtype=np.complex128)
    dts = np.diff(d.times)
    deltas = np.diff(d.values)
    for j in range(K, 0, -1):
        seg = pts[j:]
        rad = seg * seg - 4.0 * dts[j - 1]
        seg = _branch_sqrt_np(rad, seg.real) + deltas[j - 1]
        pts[j:] = seg
    return TracePath(points=pts, times=d.times.copy())


def removal_map_from_driving(d: DrivingSample):
    """The discrete forward map g_T as a composition of exact step maps.

    Step k removes the slit grown during (t_{k-1}, t_k] with the driving
    frozen at its right endpoint:

        y -> sqrt((y - W_k)^2 + 4 dt_k) + W_k,

    realized as shift / vertical-slit / shift. Each step contributes 2 dt_k
    to the expansion coefficient a1, so the composition satisfies a1 = 2T.
    """
    from .maps import Composition, ShiftMap, VerticalSlitMap
    stages = []
    for k in range(1, d.steps + 1):
        w = float(d.values[k])
        dt = float(d.times[k] - d.times[k - 1])
        stages.append(ShiftMap(-w))
        stages.append(VerticalSlitMap(0.0, math.sqrt(2.0 * dt)))
        stages.append(ShiftMap(w))
    return Composition(stages)


def slit_probes(x: float, eps: float) -> np.ndarray:
    """Probe points for the vertical slit [x, x + i eps sqrt(2)].

    Nine points along the slit (including the tip) plus two real points
    bracketing the foot at one half probe spacing.
    """
    if x == 0.0:
        raise ValueError("slit foot must not sit at the origin")
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    ell = eps * math.sqrt(2.0)
    heights = ell * np.arange(1, 10) / 9.0
    interior = x + 1j * heights
    half = ell / 18.0
    return np.concatenate((interior, [x - half + 0j, x + half + 0j]))


def probe_spacing(eps: float) -> float:
    """Gap between adjacent interior probes of slit_probes."""
    return eps * math.sqrt(2.0) / 9.0


def _candidate_scan(kappa: float, probes: np.ndarray, radii: np.ndarray,
                    T: float, steps: int, seed: int, n_total: int,
                    replicas: slice | None = None,
                    groups: list[np.ndarray] | None = None
                    ) -> tuple[np.ndarray, np.ndarray]:
    """Forward scan flagging replicas whose trace may cross the probed sets.

    Evolves the probe family under the centered flow, tracking each image
    v = g - W and the flow derivative g'. A probe flags its replica when

      * |v| < radius * |g'|, a physical-distance proxy for the trace
        passing within `radius` of the probe (by the Koebe estimate the
        true distance lies within a factor 4 of |v| / |g'|);
      * |v| < SWALLOW_TOL, strict swallowing;
      * the group's final images end with Re v on both sides, which for a
        simple trace is exactly the event that the curve separated them.

    Returns (candidates, last_flag_step): candidates has one column per
    probe group; last_flag_step[i] is the last step at which replica i
    registered a proximity or swallowing flag (steps when the replica is a
    candidate through side mixing alone), which bounds where a crossing can
    occur and lets the confirmation stage truncate its traces.

    Candidates must be a superset of the crossing paths: a polyline that
    crosses a slit drives some probe's physical distance through zero, so a
    radius of order the slit length flags it with a wide margin over the
    per-step motion. Precision is irrelevant; every candidate is confirmed
    or rejected exactly afterwards. replicas selects a contiguous block of
    the n_total replica columns (the RNG stream is keyed by (seed, step,
    column), so any block of the same seed is reproducible).
    """
    dt = T / steps
    scale = math.sqrt(kappa * dt)
    if replicas is None:
        replicas = slice(0, n_total)
    n = len(range(*replicas.indices(n_total)))
    V = np.broadcast_to(probes, (n, probes.size)).astype(np.complex128)
    V = V.copy()
    D = np.ones_like(V)
    radii = np.asarray(radii, dtype=float)
    flagged = np.zeros(V.shape, dtype=bool)
    k_last = np.zeros(n, dtype=np.int64)
    four_dt = 4.0 * dt
    for k in range(1, steps + 1):
        dW = scale * _step_normals(seed, k, n_total)[replicas]
        U = V - dW[:, None]
        S = np.sqrt(U * U + four_dt)
        np.copyto(S, -S, where=(S.imag < 0.0) | ((S.imag == 0.0)
                                                 & (U.real < 0.0)))
        # derivative of the step map at the pre-image: U / S
        with np.errstate(invalid="ignore", divide="ignore"):
            D *= np.where(S == 0.0, 1.0, U / S)
        V = S
        absV = np.abs(V)
        near = (absV < radii[None, :] * np.abs(D)) | (absV < SWALLOW_TOL)
        flagged |= near
        k_last[near.any(axis=1)] = k
    right = V.real > 0.0
    if groups is None:
        groups = [np.arange(probes.size)]
    cand = np.empty((n, len(groups)), dtype=bool)
    for j, g in enumerate(groups):
        mixed = right[:, g].any(axis=1) & (~right[:, g]).any(axis=1)
        cand[:, j] = flagged[:, g].any(axis=1) | mixed
    k_last[cand.any(axis=1) & (k_last == 0)] = steps
    return cand, k_last


def _trace_rows(deltas: np.ndarray, dts: np.ndarray) -> np.ndarray:
    """Backward-composition traces for a batch of driving rows.

    deltas[(i, k)] is the k-th driving increment of row i and dts[k] the
    matching step length; returns points[(i, k)], the trace of row i at grid
    index k. Row i reproduces trace_from_driving on the same increments
    bit for bit: the composition order, branch rule, and arithmetic are
    identical, only vectorized across rows.
    """
    B, K = deltas.shape
    pts = np.zeros((B, K + 1), dtype=np.complex128)
    for j in range(K, 0, -1):
        seg = pts[:, j:]
        rad = seg * seg - 4.0 * dts[j - 1]
        pts[:, j:] = _branch_sqrt_np(rad, seg.real) + deltas[:, j - 1][:, None]
    return pts


def driving_rows(kappa: float, T: float, steps: int, seed: int,
                 replicas, family_width: int,
                 columns: np.ndarray | None = None) -> np.ndarray:
    """Driving values for selected replicas of a family, as array rows.

    Row r equals sample_driving(kappa, T, steps, seed, replicas[r],
    family_width).values bit for bit: increments are drawn from the same
    per-step streams and accumulated in the same order. columns, if given,
    keeps only those grid indices (0..steps); the values are computed on
    the full grid first, so subsetting never changes them.
    """
    reps = np.asarray(replicas, dtype=np.intp)
    dt = T / steps
    scale = math.sqrt(kappa * dt)
    if columns is None:
        columns = np.arange(steps + 1)
    columns = np.asarray(columns, dtype=np.intp)
    out = np.empty((reps.size, columns.size))
    acc = np.zeros(reps.size)
    pos = dict(zip(columns.tolist(), range(columns.size)))
    if 0 in pos:
        out[:, pos[0]] = 0.0
    last = int(columns.max()) if columns.size else 0
    for k in range(1, last + 1):
        acc = acc + scale * _step_normals(seed, k, family_width)[reps]
        if k in pos:
            out[:, pos[k]] = acc
    return out


def trace_points_batch(kappa: float, T: float, steps: int, seed: int,
                       replicas, family_width: int,
                       k_max: int | None = None) -> np.ndarray:
    """Traces for selected replicas of a driving family, one row each.

    Equivalent to running sample_driving + trace_from_driving per replica,
    bit for bit, but batched. k_max truncates each trace to grid indices
    0..k_max; trace points only depend on the increments up to their own
    index, so the truncated rows are exact prefixes of the full ones.
    """
    if k_max is None:
        k_max = steps
    if not 1 <= k_max <= steps:
        raise ValueError("k_max must lie in [1, steps]")
    cols = np.arange(k_max + 1)
    W = driving_rows(kappa, T, steps, seed, replicas, family_width, cols)
    dts = np.diff(np.linspace(0.0, T, steps + 1))[:k_max]
    return _trace_rows(np.diff(W, axis=1), dts)


def polyline_crosses_slit(points: np.ndarray, x: float,
                          height: float) -> np.ndarray | bool:
    """Whether polylines cross the vertical segment [x, x + i height].

    points holds polyline vertices along the last axis; a crossing is a
    polyline edge whose endpoints straddle the line Re z = x strictly, with
    the interpolated crossing height in [0, height]. Edges that merely
    touch the line Re z = x without crossing it do not count. Returns one
    boolean per row (a scalar for a single polyline).
    """
    pts = np.asarray(points, dtype=np.complex128)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    a, b = pts[:, :-1], pts[:, 1:]
    straddle = (a.real - x) * (b.real - x) < 0.0
    denom = np.where(straddle, b.real - a.real, 1.0)
    t = np.where(straddle, (x - a.real) / denom, 0.0)
    y = a.imag + t * (b.imag - a.imag)
    out = (straddle & (y >= 0.0) & (y <= height)).any(axis=1)
    return bool(out[0]) if single else out


def avoids_hull(d: DrivingSample, slit_x: float, slit_eps: float) -> bool:
    """True iff the trace driven by d does not cross the vertical slit.

    Exact for the sampled polyline: builds the trace by backward
    composition and intersects it with the segment
    [slit_x, slit_x + i eps sqrt(2)].
    """
    if slit_x == 0.0:
        raise ValueError("slit foot must not sit at the origin")
    if slit_eps <= 0.0:
        raise ValueError("eps must be positive")
    pts = trace_from_driving(d).points
    ell = slit_eps * math.sqrt(2.0)
    return not polyline_crosses_slit(pts, float(slit_x), ell)
