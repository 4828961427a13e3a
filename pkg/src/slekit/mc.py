"""Monte Carlo checks of hull-avoidance laws under random driving.

Estimators sample the discrete Loewner evolution with Brownian driving and
compare against the closed-form predictions carried by the slit maps: the
avoidance probability phi'(0)^alpha of a vertical slit, its complementary
hitting probability, the martingale property of the avoidance weight

    Y_t = h_t'(0)^alpha * exp((lambda/6) \int_0^t S h_s(0) ds),

the t -> 0 drift of the shifted removal map at kappa = 0, and the fractal
dimension 1 + kappa/8 of the trace. Every estimator is a pure function of
its seed: the driving RNG is counter-based, keyed per step and replica, so
results are independent of threading and batch layout, and passing the same
seed to two estimators couples their drivings pathwise.

Hit and avoidance probabilities are exact functionals of the sampled
polylines: a cheap probe scan flags candidate replicas, whose traces are
then built and intersected with the slit segments. The only systematic
error left is the polyline discretization itself, which shrinks with the
step count.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .loewner import (
    SWALLOW_TOL,
    _branch_sqrt_np,
    _candidate_scan,
    _step_normals,
    _trace_rows,
    driving_rows,
    polyline_crosses_slit,
    sample_driving,
    slit_probes,
    trace_from_driving,
)
from .maps import (
    MapDomainError,
    VerticalSlitMap,
    ZipperError,
    schwarzian,
    slit_avoidance_probability,
    slit_hitting_probability,
    zipper_map,
)

RESTRICTION_KAPPA = 8.0 / 3.0

# Safety cap and stopping tolerance for the horizon-doubling rule; see
# _resolve_horizon.
_HORIZON_GROWTH_CAP = 64.0
_HORIZON_TOL = 0.0075
_PILOT_SAMPLES = 2000
_PILOT_STEPS = 2000

# Candidate-scan proximity radius as a fraction of the slit length, and the
# confirmation-stage batching policy; see _hit_flags. The radius only has to
# be wide enough that no crossing escapes the scan: with worst-case conformal
# distortion 4 and probe coverage gap (slit length)/18, a radius of 2/3
# still flags any step that ends within (slit length)/9 of the slit, several
# times the per-step chord scale at the supported resolutions. Widening it
# further only adds confirmation work, never changes confirmed results.
_PROX_FRACTION = 2.0 / 3.0
_WINDOW_PAD = 0.02
_CONFIRM_ROWS = 250
_CONFIRM_BUCKETS = 8


def config_digest(config: dict) -> str:
    """Stable sha256 of an estimator configuration.

    Canonical JSON (sorted keys, compact separators) so logically equal
    configurations digest identically across runs and platforms.
    """
    payload = json.dumps(config, sort_keys=True, separators=(",", ":"),
                         default=str)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class EstimateResult:
    """A Bernoulli or bounded-variable estimate with its provenance."""

    mean: float
    stderr: float
    n_samples: int
    theory: float | None
    horizon: float
    config_digest: str

    def deviation(self) -> float | None:
        if self.theory is None:
            return None
        return self.mean - self.theory


@dataclass(frozen=True)
class MartingaleReport:
    """E[Y at (t ^ tau)] per check time against the exact initial value."""

    times: tuple[float, ...]
    estimates: tuple[EstimateResult, ...]
    initial_value: float
    max_value: float
    n_samples: int
    n_discarded: int
    config_digest: str

    def within(self, k_stderr: float = 2.0) -> bool:
        return all(abs(e.mean - self.initial_value) <= k_stderr * e.stderr
                   for e in self.estimates)


@dataclass(frozen=True)
class DriftReport:
    """Finite-difference drift of the shifted removal map at kappa = 0."""

    slit: tuple[float, float]
    dts: tuple[float, ...]
    lhs: tuple[float, ...]
    rhs: float
    rel_errors: tuple[float, ...]
    order: float
    config_digest: str


@dataclass(frozen=True)
class DimensionReport:
    """Box-counting dimension estimate of the normalized trace."""

    kappa: float
    estimate: float
    target: float
    box_sizes: tuple[float, ...]
    counts: tuple[float, ...]
    n_paths: int
    config_digest: str


def _slit_family(slits) -> tuple[np.ndarray, np.ndarray, list[np.ndarray]]:
    """Concatenated probes, per-probe scan radii, and group index arrays."""
    probe_sets = [slit_probes(x, eps) for x, eps in slits]
    probes = np.concatenate(probe_sets)
    radii = np.concatenate(
        [np.full(ps.size, _PROX_FRACTION * eps * math.sqrt(2.0))
         for ps, (_, eps) in zip(probe_sets, slits)])
    groups = []
    start = 0
    for ps in probe_sets:
        groups.append(np.arange(start, start + ps.size))
        start += ps.size
    return probes, radii, groups


def _scan_candidates(kappa: float, probes: np.ndarray, radii: np.ndarray,
                     groups: list[np.ndarray], T: float, steps: int,
                     seed: int, n: int, threads: int = 1
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Candidate flags and window bounds, chunked over replicas.

    Chunks slice replica columns of the per-step RNG rows, so the output is
    bitwise identical for every thread count.
    """
    if threads <= 1:
        return _candidate_scan(kappa, probes, radii, T, steps, seed, n,
                               groups=groups)
    bounds = np.linspace(0, n, threads + 1).astype(int)
    blocks = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
        parts = list(pool.map(
            lambda blk: _candidate_scan(kappa, probes, radii, T, steps, seed,
                                        n, replicas=blk, groups=groups),
            blocks))
    cand = np.concatenate([p[0] for p in parts], axis=0)
    k_last = np.concatenate([p[1] for p in parts])
    return cand, k_last


def _hit_flags(kappa: float, slits: list[tuple[float, float]], T: float,
               steps: int, seed: int, n: int, threads: int = 1) -> np.ndarray:
    """Exact polyline hit flags, one column per slit.

    Two stages. The candidate scan flags every replica whose trace can
    cross a slit (plus false positives). Each candidate's trace is then
    built by backward composition at the full sampled resolution and
    intersected with the slit segments; non-candidates are certain misses
    and are never traced. The estimate is therefore an exact functional of
    the sampled polylines, with no detection heuristics left in the value.

    Traces are truncated a pad of _WINDOW_PAD capacity time past each
    replica's last scan flag (an exact prefix of the full trace, since a
    trace point only depends on the increments up to its own index) and
    batched in buckets of similar window length.
    """
    probes, radii, groups = _slit_family(slits)
    cand, k_last = _scan_candidates(kappa, probes, radii, groups, T, steps,
                                    seed, n, threads)
    hits = np.zeros((n, len(slits)), dtype=bool)
    idx = np.flatnonzero(cand.any(axis=1))
    if idx.size == 0:
        return hits
    dts = np.diff(np.linspace(0.0, T, steps + 1))
    pad = max(5, math.ceil(_WINDOW_PAD * steps / T))
    windows = np.minimum(k_last[idx] + pad, steps).astype(np.intp)
    order = np.argsort(windows, kind="stable")
    heights = [eps * math.sqrt(2.0) for _, eps in slits]
    for b in range(_CONFIRM_BUCKETS):
        grp = order[b * order.size // _CONFIRM_BUCKETS:
                    (b + 1) * order.size // _CONFIRM_BUCKETS]
        if grp.size == 0:
            continue
        kb = int(windows[grp].max())
        W = driving_rows(kappa, T, steps, seed, idx[grp], n,
                         columns=np.arange(kb + 1))
        for lo in range(0, grp.size, _CONFIRM_ROWS):
            rows = grp[lo:lo + _CONFIRM_ROWS]
            pts = _trace_rows(np.diff(W[lo:lo + _CONFIRM_ROWS], axis=1),
                              dts[:kb])
            for j, ((x, _), ell) in enumerate(zip(slits, heights)):
                hits[idx[rows], j] = polyline_crosses_slit(pts, x, ell)
    return hits


def _resolve_horizon(kappa: float, slits: list[tuple[float, float]],
                     x_scale: float, steps: int, seed: int,
                     n_samples: int) -> float:
    """Capacity horizon by doubling until the candidate fraction stabilizes.

    Starts from 4 max(1, x)^2, the capacity scale at which the evolution
    has swept past the slit feet, and doubles while the pilot fraction of
    all-slits candidates still moves by more than the stopping tolerance.
    Any hit appearing at a longer horizon is necessarily a new candidate
    there, so a stable candidate fraction bounds the hit fraction's tail.
    Pilots keep a fixed step length (the count doubles with the horizon)
    and share the seed, which couples them pathwise: the fraction is
    non-decreasing along the chain and its increments are measured on the
    same replicas.
    """
    probes, radii, groups = _slit_family(slits)
    T = 4.0 * max(1.0, x_scale) ** 2
    cap_T = _HORIZON_GROWTH_CAP * T
    n_pilot = min(n_samples, _PILOT_SAMPLES)
    pilot_steps = min(steps, _PILOT_STEPS)
    cand, _ = _candidate_scan(kappa, probes, radii, T, pilot_steps, seed,
                              n_pilot, groups=groups)
    r_prev = float(cand.all(axis=1).mean())
    while T < cap_T:
        pilot_steps *= 2
        cand, _ = _candidate_scan(kappa, probes, radii, 2.0 * T, pilot_steps,
                                  seed, n_pilot, groups=groups)
        r_next = float(cand.all(axis=1).mean())
        if abs(r_next - r_prev) <= _HORIZON_TOL:
            return T
        T *= 2.0
        r_prev = r_next
    return T


def _bernoulli_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n)


def estimate_avoidance(slit_x: float, slit_eps: float, *,
                       kappa: float = RESTRICTION_KAPPA,
                       n_samples: int = 10000, steps: int = 10000,
                       seed: int = 0, T: float | None = None,
                       threads: int = 1) -> EstimateResult:
    """Probability that the trace avoids the vertical slit at slit_x.

    The slit is [slit_x, slit_x + i eps sqrt(2)], capacity eps^2. At
    kappa = 8/3 the result carries the closed-form theory value
    (x / sqrt(x^2 + 2 eps^2))^(5/8); at other kappa theory is None.
    Computed as the exact complement of the single-slit hitting fraction on
    the same driving, so paired avoidance and hitting estimates with equal
    configuration sum to one.
    """
    slits = [(float(slit_x), float(slit_eps))]
    if T is None:
        T = _resolve_horizon(kappa, slits, abs(slit_x), steps, seed,
                             n_samples)
    hits = _hit_flags(kappa, slits, T, steps, seed, n_samples, threads)
    p_avoid = 1.0 - float(hits[:, 0].mean())
    theory = None
    if math.isclose(kappa, RESTRICTION_KAPPA, rel_tol=1e-12) and slit_x > 0:
        theory = slit_avoidance_probability(slit_x, slit_eps, 0.625)
    cfg = {"check": "avoidance", "kappa": kappa, "slit_x": slit_x,
           "slit_eps": slit_eps, "n_samples": n_samples, "steps": steps,
           "seed": seed, "T": T}
    return EstimateResult(mean=p_avoid,
                          stderr=_bernoulli_stderr(p_avoid, n_samples),
                          n_samples=n_samples, theory=theory, horizon=T,
                          config_digest=config_digest(cfg))


def estimate_hitting(slits, *, kappa: float = RESTRICTION_KAPPA,
                     n_samples: int = 10000, steps: int = 8000,
                     seed: int = 0, T: float | None = None,
                     threads: int = 1) -> EstimateResult:
    """Probability that the trace hits every slit in the family.

    slits is a sequence of (x, eps) pairs; the empty family is hit with
    probability one. Runs with the same seed and horizon share their
    driving pathwise, so estimates for nested slit families (for example an
    eps-halving pair) are positively coupled and their ratio has far less
    variance than independent runs would give. Hits are exact crossings of
    the sampled polyline, so the only systematic error is the path
    discretization; the default step count keeps it at 0.002 capacity time
    for horizons up to 16, where measured crossing rates of reference
    slits sit within a few thousandths of their continuum values. Slits
    far from the origin need proportionally more steps.
    """
    slits = [(float(x), float(eps)) for x, eps in slits]
    cfg = {"check": "hitting", "kappa": kappa, "slits": slits,
           "n_samples": n_samples, "steps": steps, "seed": seed, "T": T}
    if not slits:
        return EstimateResult(mean=1.0, stderr=0.0, n_samples=n_samples,
                              theory=1.0, horizon=0.0,
                              config_digest=config_digest(cfg))
    if T is None:
        T = _resolve_horizon(kappa, slits, max(abs(x) for x, _ in slits),
                             steps, seed, n_samples)
        cfg["T"] = T
    hits = _hit_flags(kappa, slits, T, steps, seed, n_samples, threads)
    p_hit = float(hits.all(axis=1).mean())
    theory = None
    if (len(slits) == 1 and slits[0][0] > 0
            and math.isclose(kappa, RESTRICTION_KAPPA, rel_tol=1e-12)):
        theory = slit_hitting_probability(slits[0][0], slits[0][1], 0.625)
    return EstimateResult(mean=p_hit,
                          stderr=_bernoulli_stderr(p_hit, n_samples),
                          n_samples=n_samples, theory=theory, horizon=T,
                          config_digest=config_digest(cfg))


def _slit_image_polyline(row: np.ndarray) -> list[complex]:
    """Polyline through the probe images of the evolved slit.

    Base from the two real foot probes, then the interior probes in height
    order. When the image slit has flattened (late times on avoiding
    paths), vertices whose height has rounded to or below the axis carry no
    hull and are dropped.
    """
    base = 0.5 * (row[9].real + row[10].real)
    poly = [complex(base, 0.0)]
    for w in row[:9]:
        w = complex(w)
        if w.imag > 1e-9 * max(1.0, abs(w)):
            poly.append(w)
    return poly


def _zipper_weight(row: np.ndarray, alpha: float, lam: float,
                   integral: float) -> float:
    """Avoidance weight at the origin, the image of the current tip."""
    comp = zipper_map(_slit_image_polyline(row))
    d1 = comp.derivatives(0.0)[0].real
    if not d1 > 0.0:
        raise ZipperError("nonpositive boundary derivative")
    weight = d1 ** alpha
    if lam != 0.0:
        weight *= math.exp((lam / 6.0) * integral)
    return weight


def _zipper_schwarzian(row: np.ndarray) -> float:
    return schwarzian(zipper_map(_slit_image_polyline(row)), 0.0).real


def martingale_check_Yt(slit_x: float, slit_eps: float, *,
                        kappa: float = RESTRICTION_KAPPA,
                        alpha: float | None = None,
                        lam: float | None = None,
                        times=(0.1, 0.25, 0.5),
                        n_samples: int = 4000, steps: int = 2000,
                        seed: int = 0, quad_points: int = 8
                        ) -> MartingaleReport:
    """Check E[Y at (t ^ tau)] = Y_0 for the avoidance weight Y.

    Y_t is the boundary derivative (to the power alpha) of the map removing
    the evolved slit, times the Schwarzian correction when lambda != 0. The
    weight is evaluated at stopping: on a strict swallow or a side
    separation (the trace crossed the slit) Y is exactly zero; on a near
    touch at the discretization scale Y is frozen at its current value, a
    legitimate stopping rule that keeps the expectation a martingale while
    the zipper geometry is still well conditioned. alpha and lam default to
    the dictionary values (6-kappa)/(2 kappa) and (8-3 kappa)(6-kappa)/
    (2 kappa); at kappa = 8/3 lam vanishes and the quadrature is skipped.

    Replicas where the zipper rejects the probe polyline are discarded and
    counted; n_discarded must stay a tiny fraction of n_samples for the
    report to be trustworthy.

    The stopping rule freezes a replica the first time the estimated
    physical distance min |v| / |g'| of the trace to the slit drops below
    one sixth of the slit length (or on a strict swallow, where Y is
    exactly zero). Stopping this early costs nothing, since any stopping
    time preserves the expectation of a martingale, and it buys two things:
    the trace cannot cross the slit without first entering the freeze
    radius (per-step moves are far smaller), and the zipper still sees a
    cleanly separated polyline when the frozen value is computed.
    """
    if alpha is None:
        alpha = (6.0 - kappa) / (2.0 * kappa)
    if lam is None:
        lam = (8.0 - 3.0 * kappa) * (6.0 - kappa) / (2.0 * kappa)
        if math.isclose(kappa, RESTRICTION_KAPPA, rel_tol=1e-12):
            lam = 0.0
    times = tuple(sorted(float(t) for t in times))
    if not times or times[0] <= 0.0:
        raise ValueError("check times must be positive")
    t_max = times[-1]
    dt = t_max / steps
    check_steps = {}
    for t in times:
        k = round(t / dt)
        if abs(k * dt - t) > 1e-9 * t_max:
            raise ValueError(f"check time {t} not on the step grid")
        check_steps[k] = t
    quad_steps = set(check_steps)
    if lam != 0.0 and quad_points > 0:
        for j in range(1, quad_points + 1):
            quad_steps.add(max(1, round(j * steps / quad_points)))

    probes = slit_probes(slit_x, slit_eps)
    freeze_radius = slit_eps * math.sqrt(2.0) / 6.0
    scale = math.sqrt(kappa * dt)
    n = n_samples
    V = np.broadcast_to(probes, (n, probes.size)).astype(np.complex128).copy()
    D = np.ones_like(V)
    on_axis = probes.imag == 0.0
    active = np.ones(n, dtype=bool)
    discarded = np.zeros(n, dtype=bool)
    frozen_Y = np.zeros(n)
    integrals = np.zeros(n)
    last_sq_t = np.zeros(n)
    last_sq_val = np.zeros(n)
    have_sq = lam != 0.0
    if have_sq:
        sq0 = _zipper_schwarzian(probes.astype(np.complex128))
        last_sq_val[:] = sq0
    columns: dict[float, np.ndarray] = {}
    max_value = 0.0

    def freeze_value(i: int) -> float:
        return _zipper_weight(V[i], alpha, lam, integrals[i])

    for k in range(1, steps + 1):
        dW = scale * _step_normals(seed, k, n)
        U = V - dW[:, None]
        S = np.sqrt(U * U + 4.0 * dt)
        np.copyto(S, -S, where=(S.imag < 0.0) | ((S.imag == 0.0)
                                                 & (U.real < 0.0)))
        with np.errstate(invalid="ignore", divide="ignore"):
            D *= np.where(S == 0.0, 1.0, U / S)
        prevV = V
        V = S
        absV = np.abs(V)
        strict = (absV < SWALLOW_TOL).any(axis=1)
        strict |= (on_axis[None, :] & ((prevV.real * V.real < 0.0)
                                       | (U.real == 0.0))).any(axis=1)
        near = (absV < freeze_radius * np.abs(D)).any(axis=1)
        for i in np.flatnonzero(active & strict):
            frozen_Y[i] = 0.0
            active[i] = False
        for i in np.flatnonzero(active & near):
            try:
                frozen_Y[i] = freeze_value(i)
            except (ZipperError, MapDomainError):
                discarded[i] = True
            active[i] = False
        if k in quad_steps and have_sq:
            t_k = k * dt
            for i in np.flatnonzero(active):
                try:
                    sq = _zipper_schwarzian(V[i])
                except (ZipperError, MapDomainError):
                    discarded[i] = True
                    active[i] = False
                    continue
                integrals[i] += 0.5 * (last_sq_val[i] + sq) \
                    * (t_k - last_sq_t[i])
                last_sq_t[i] = t_k
                last_sq_val[i] = sq
        if k in check_steps:
            col = frozen_Y.copy()
            for i in np.flatnonzero(active):
                try:
                    col[i] = _zipper_weight(V[i], alpha, lam, integrals[i])
                except (ZipperError, MapDomainError):
                    discarded[i] = True
                    active[i] = False
                    col[i] = 0.0
            columns[check_steps[k]] = col

    keep = ~discarded
    m = int(keep.sum())
    if m == 0:
        raise RuntimeError("all replicas discarded")
    y0 = slit_avoidance_probability(abs(slit_x), slit_eps, alpha)
    cfg = {"check": "martingale", "kappa": kappa, "alpha": alpha, "lam": lam,
           "slit_x": slit_x, "slit_eps": slit_eps, "times": list(times),
           "n_samples": n_samples, "steps": steps, "seed": seed}
    digest = config_digest(cfg)
    estimates = []
    for t in times:
        col = columns[t][keep]
        max_value = max(max_value, float(col.max()))
        mean = float(col.mean())
        se = float(col.std(ddof=1)) / math.sqrt(m)
        estimates.append(EstimateResult(mean=mean, stderr=se, n_samples=m,
                                        theory=y0, horizon=t_max,
                                        config_digest=digest))
    return MartingaleReport(times=times, estimates=tuple(estimates),
                            initial_value=y0, max_value=max_value,
                            n_samples=m, n_discarded=int(discarded.sum()),
                            config_digest=digest)


def drift_check_t0(slit_x: float, slit_eps: float, *,
                   dts=(0.01, 0.005, 0.0025, 0.00125),
                   n_probes: int = 50) -> DriftReport:
    """Drift of the shifted removal map at t = 0 under zero driving.

    At kappa = 0 the evolution is deterministic, g_dt(z) = sqrt(z^2+4dt),
    and the slit images are exact; h_dt rebuilds the removal map of the
    evolved slit through the zipper. The finite difference
    (h_dt(0) - h_0(0)) / dt must converge at first order in dt to
    -3 phi''(0), the drift coefficient that the Schwarzian correction term
    is built to cancel. Both h_dt and h_0 use the same probe count so the
    polyline discretization bias cancels in the difference.
    """
    phi = VerticalSlitMap(slit_x, slit_eps)
    rhs = (-3.0 * phi.derivatives(0.0)[1]).real
    ell = slit_eps * math.sqrt(2.0)
    heights = ell * np.arange(1, n_probes + 1) / n_probes
    pts = slit_x + 1j * heights
    poly0 = [complex(slit_x, 0.0)] + [complex(p) for p in pts]
    h0 = zipper_map(poly0).apply(0.0).real
    lhs = []
    for dt in dts:
        base = _branch_sqrt_np(np.array([slit_x ** 2 + 4.0 * dt + 0j]),
                               np.array([slit_x]))[0].real
        imgs = _branch_sqrt_np(pts * pts + 4.0 * dt, pts.real)
        poly = [complex(base, 0.0)] + [complex(w) for w in imgs]
        h_dt = zipper_map(poly).apply(0.0).real
        lhs.append((h_dt - h0) / dt)
    rel = [abs(v - rhs) / abs(rhs) for v in lhs]
    errs = np.array([max(abs(v - rhs), 1e-300) for v in lhs])
    order = float(np.polyfit(np.log(np.asarray(dts)), np.log(errs), 1)[0])
    cfg = {"check": "drift", "slit_x": slit_x, "slit_eps": slit_eps,
           "dts": list(dts), "n_probes": n_probes}
    return DriftReport(slit=(slit_x, slit_eps), dts=tuple(float(d) for d in dts),
                       lhs=tuple(lhs), rhs=rhs, rel_errors=tuple(rel),
                       order=order, config_digest=config_digest(cfg))


def estimate_dimension(kappa: float, *, n_paths: int = 12, steps: int = 10000,
                       seed: int = 0, T: float = 1.0) -> DimensionReport:
    """Box-counting dimension of the normalized trace.

    Each path's trace is scaled into the closed unit half-disc, covered by
    dyadic boxes of side 2^-3 .. 2^-8, and the dimension is the slope of
    log(mean box count) against log(1/size). Informational: the estimate
    carries the usual finite-resolution bias of box counting, so compare
    against the 1 + kappa/8 target with a generous window.
    """
    sizes = 2.0 ** -np.arange(3, 9)
    counts = np.zeros((n_paths, sizes.size))
    for p in range(n_paths):
        d = sample_driving(kappa, T, steps, seed, replica=p,
                           family_width=n_paths)
        pts = trace_from_driving(d).points
        radius = np.abs(pts).max()
        if radius == 0.0:
            raise RuntimeError("degenerate trace")
        z = pts / radius
        for j, delta in enumerate(sizes):
            ix = np.floor(z.real / delta).astype(np.int64)
            iy = np.floor(z.imag / delta).astype(np.int64)
            counts[p, j] = np.unique(ix + (iy << 32)).size
    mean_counts = counts.mean(axis=0)
    slope = float(np.polyfit(np.log(1.0 / sizes), np.log(mean_counts), 1)[0])
    cfg = {"check": "dimension", "kappa": kappa, "n_paths": n_paths,
           "steps": steps, "seed": seed, "T": T}
    return DimensionReport(kappa=kappa, estimate=slope,
                           target=1.0 + kappa / 8.0,
                           box_sizes=tuple(float(s) for s in sizes),
                           counts=tuple(float(c) for c in mean_counts),
                           n_paths=n_paths,
                           config_digest=config_digest(cfg))


def driving_variance_ratio(kappa: float, *, T: float = 1.0, steps: int = 256,
                           n_samples: int = 4000, seed: int = 0) -> float:
    """Sample Var(W_T) / (kappa T); should be 1 within sampling error."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    dt = T / steps
    scale = math.sqrt(kappa * dt)
    W = np.zeros(n_samples)
    for k in range(1, steps + 1):
        W += scale * _step_normals(seed, k, n_samples)
    return float(W.var(ddof=1) / (kappa * T))
