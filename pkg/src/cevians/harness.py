"""Seeded randomized suites confronting every closed form with determinant
oracles.

Each suite draws (simplex, interior point) configurations, evaluates a
closed-form quantity and an independent Cartesian-determinant quantity per
trial, and records any discrepancy beyond the plan tolerance.  Trials are
reproducible and schedule-independent: trial t of a run with seed s draws
every random number from its own counter-based Philox substream keyed by
(s, t), so reports are byte-identical for any batch size or execution
order.

Suites and their per-trial checks:

* ``theorem1``       cevian-simplex / base volume ratio (determinant and
                     closed form) stays at most n^-n, within absolute slack
                     ``tol`` on the ratio scale;
* ``theorem2``       last-corner ratio stays at most f(theta_n), same slack;
* ``eq2``            every corner ratio: closed form vs determinant volume,
                     relative error at most ``tol``;
* ``decomposition``  sum of the n+1 corner ratios equals the cevian ratio:
                     closed forms within ``tol``, determinant route within
                     max(tol, DET_ROUTE_TOL);
* ``moebius``        (n=2) |4pqr - x^2(p+q+r+x)| at most ``tol`` * S^3;
* ``segment_ratio``  distance ratios |M-N_i| / |M-A_i| match w_i/(1-w_i)
                     within relative ``tol``, and A_i, M, N_i are collinear
                     within COLLINEARITY_TOL of the edge scale;
* ``affine``         determinant volume ratios are unchanged (relative
                     ``tol``) under a random invertible affine map.

Sampling applies a conditioning filter so the determinant oracle's own
rounding stays far below the tolerances: every suite requires the base
simplex determinant to clear COND_DET * (max edge)^n, and the suites that
compare routes at relative tolerance also require every weight >=
COND_WEIGHT.  Filtered draws are resampled from the same trial substream
and do not count as trials.  Oracle determinants are evaluated in extended
precision (80-bit on x86) by a batched pivoted-LU routine, which keeps the
oracle's relative error near 1e-12 even for the very flat cevian simplices
that near-boundary points produce.
"""
from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import SamplingError, UnsupportedDimensionError
from .geometry import (
    EPS_BOUNDARY,
    DELTA_DEGENERACY,
    BarycentricPoint,
    CartesianSimplex,
    max_edge_length,
)
from .ratios import theorem1_bound, theorem2_value

SUITES = (
    "theorem1",
    "theorem2",
    "eq2",
    "decomposition",
    "moebius",
    "segment_ratio",
    "affine",
)

# Default tolerance per suite: absolute slack on the ratio scale for the
# inequality suites, relative everywhere else (moebius scales by S^3).
DEFAULT_TOLERANCES = {
    "theorem1": 1e-12,
    "theorem2": 1e-12,
    "eq2": 1e-9,
    "decomposition": 1e-12,
    "moebius": 1e-10,
    "segment_ratio": 1e-9,
    "affine": 1e-9,
}

# Conditioning filter: base-simplex determinant floor (relative to edge
# scale) for all suites, plus a weight floor for the relative-tolerance
# suites, calibrated so the extended-precision determinant oracle keeps
# three orders of magnitude of headroom under a 1e-9 relative tolerance.
COND_DET = 1e-3
COND_WEIGHT = 1e-3
# Floor for determinant-route equality checks (the oracle itself cannot do
# relative 1e-12 on flat sub-simplices).
DET_ROUTE_TOL = 1e-9
# Collinearity slack for A_i, M, N_i, relative to the edge scale.
COLLINEARITY_TOL = 1e-9
# Minimum determinant of the random affine map in the affine suite.
AFFINE_MIN_DET = 1e-6

# Retry budget for rejection sampling, per trial and per sampler call.
MAX_REJECTIONS = 1000

_NEEDS_WEIGHT_FLOOR = {"eq2", "decomposition", "segment_ratio", "affine"}


@dataclass(frozen=True)
class TrialPlan:
    """What to run: suite, dimension, trial count, seed, and tolerance.

    ``tol=None`` picks the suite default from DEFAULT_TOLERANCES.
    """

    suite: str
    n: int
    trials: int
    seed: int
    tol: float | None = None

    def __post_init__(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; pick one of {SUITES}")
        if self.n < 2:
            raise UnsupportedDimensionError(f"suites require n >= 2, got {self.n}")
        if self.suite == "moebius" and self.n != 2:
            raise ValueError("the moebius suite is defined for n = 2 only")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.tol is None:
            object.__setattr__(self, "tol", DEFAULT_TOLERANCES[self.suite])
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")


@dataclass(frozen=True)
class Violation:
    trial_index: int
    inputs_digest: str
    margin: float


@dataclass(frozen=True)
class VerificationReport:
    """Suite outcome: violations (empty when passed) plus the worst margins.

    ``worst_margin`` is the maximum over trials of (observed - allowed);
    negative when the suite passes, and consistent with the violation list
    (a violation is exactly a trial with positive margin).
    ``max_ratio_observed`` is the suite's headline observable: the largest
    volume ratio for the inequality suites, the largest relative (or
    S^3-scaled) discrepancy for the equality suites.  ``bound`` is the
    inequality bound where one exists, None otherwise.  ``elapsed`` (seconds)
    is excluded from serialized reports so reruns compare byte-identical.
    """

    plan: TrialPlan
    violations: tuple
    worst_margin: float
    max_ratio_observed: float
    bound: float | None
    passed: bool
    elapsed: float = field(compare=False)

    def to_dict(self) -> dict:
        """JSON-shaped report; field set fixed, elapsed deliberately absent."""
        return {
            "suite": self.plan.suite,
            "n": self.plan.n,
            "trials": self.plan.trials,
            "seed": self.plan.seed,
            "tol": self.plan.tol,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "max_ratio_observed": self.max_ratio_observed,
            "bound": self.bound,
            "violations": [
                {
                    "trial_index": v.trial_index,
                    "inputs_digest": v.inputs_digest,
                    "margin": v.margin,
                }
                for v in self.violations
            ],
        }


def sample_interior(n: int, rng: np.random.Generator) -> BarycentricPoint:
    """Uniform sample from the open standard simplex in n+1 weights.

    Normalizes n+1 independent standard exponentials (the flat Dirichlet);
    resamples in the astronomically rare event a weight lands inside the
    EPS_BOUNDARY margin.
    """
    if n < 2:
        raise UnsupportedDimensionError(f"need n >= 2, got {n}")
    for _ in range(MAX_REJECTIONS):
        e = rng.standard_exponential(n + 1)
        w = e / e.sum()
        if w.min() >= EPS_BOUNDARY:
            return BarycentricPoint(w)
    raise SamplingError(f"no interior point in {MAX_REJECTIONS} draws")


def random_simplex(n: int, rng: np.random.Generator) -> CartesianSimplex:
    """Random nondegenerate simplex with vertex coordinates uniform in [-1, 1].

    Resamples until the degeneracy guard passes; nearly every draw is
    accepted for n <= 6.
    """
    if n < 2:
        raise UnsupportedDimensionError(f"need n >= 2, got {n}")
    for _ in range(MAX_REJECTIONS):
        v = rng.uniform(-1.0, 1.0, size=(n + 1, n))
        det = float(np.linalg.det(v[:-1] - v[-1]))
        if abs(det) > DELTA_DEGENERACY * max_edge_length(v) ** n:
            return CartesianSimplex(v)
    raise SamplingError(f"no nondegenerate simplex in {MAX_REJECTIONS} draws")


class _TrialStream:
    """One reusable Philox generator, reset per trial to key (seed, trial)."""

    def __init__(self) -> None:
        self._bitgen = np.random.Philox(key=0)
        self.generator = np.random.Generator(self._bitgen)

    def for_trial(self, seed: int, trial: int) -> np.random.Generator:
        self._bitgen.state = {
            "bit_generator": "Philox",
            "state": {
                "counter": np.zeros(4, dtype=np.uint64),
                "key": np.array([seed, trial], dtype=np.uint64),
            },
            "buffer": np.zeros(4, dtype=np.uint64),
            "buffer_pos": 4,
            "has_uint32": 0,
            "uinteger": 0,
        }
        return self.generator


def _det_ld(mats: np.ndarray) -> np.ndarray:
    """Batched determinants in extended precision via pivoted LU.

    mats: (B, m, m) in any float dtype; returns (B,) longdouble.  Row
    operations are per-matrix, so results do not depend on the batch split.
    """
    a = mats.astype(np.longdouble)
    b, m, _ = a.shape
    det = np.ones(b, dtype=np.longdouble)
    rows = np.arange(b)
    for col in range(m):
        piv = np.abs(a[:, col:, col]).argmax(axis=1) + col
        swapped = piv != col
        pivot_rows = a[rows, piv].copy()
        a[rows, piv] = a[:, col]
        a[:, col] = pivot_rows
        det = np.where(swapped, -det, det)
        pivots = a[:, col, col]
        det = det * pivots
        safe = np.where(pivots == 0.0, 1.0, pivots)
        factors = a[:, col + 1 :, col] / safe[:, None]
        a[:, col + 1 :, col:] -= factors[:, :, None] * a[:, col : col + 1, col:]
    return det


def _pair_scale(points: np.ndarray) -> np.ndarray:
    """Max pairwise distance per batch row; points: (B, m, d) -> (B,)."""
    diff = points[:, :, None, :] - points[:, None, :, :]
    return np.sqrt((diff * diff).sum(-1).max((1, 2)))


def _feet_weight_matrix(wts: np.ndarray) -> np.ndarray:
    """Row i = barycentric coordinates of cevian foot i; (B, k) -> (B, k, k)."""
    k = wts.shape[1]
    x = wts[:, None, :] / (1.0 - wts)[:, :, None]
    idx = np.arange(k)
    x[:, idx, idx] = 0.0
    return x


def _draw_trial(
    gen: np.random.Generator, suite: str, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray | None, np.ndarray | None]:
    """One trial's accepted inputs, drawn with the conditioning filter.

    The whole candidate (vertices, weights, and for the affine suite the
    map) is redrawn together until every filter passes, so the accepted
    draw depends only on the trial substream.
    """
    k = n + 1
    want_floor = suite in _NEEDS_WEIGHT_FLOOR
    affine = suite == "affine"
    wmin = max(COND_WEIGHT, EPS_BOUNDARY) if want_floor else EPS_BOUNDARY
    for _ in range(MAX_REJECTIONS):
        verts = gen.uniform(-1.0, 1.0, size=(k, n))
        raw = gen.standard_exponential(k)
        amat = gen.uniform(-1.0, 1.0, size=(n, n)) if affine else None
        shift = gen.uniform(-1.0, 1.0, size=n) if affine else None

        wts = raw / raw.sum()
        if wts.min() < wmin:
            continue
        edges = verts[:-1] - verts[-1]
        det = float(np.linalg.det(edges))
        if not abs(det) > COND_DET * max_edge_length(verts) ** n:
            continue
        if affine:
            det_map = float(np.linalg.det(amat))
            if abs(det_map) < AFFINE_MIN_DET:
                continue
            mapped = verts @ amat.T + shift
            if not abs(det * det_map) > COND_DET * max_edge_length(mapped) ** n:
                continue
        return verts, wts, amat, shift
    raise SamplingError(f"conditioning filter rejected {MAX_REJECTIONS} draws")


def _det_volume_ratios(
    verts: np.ndarray, wts: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Determinant-oracle ratios: (cevian (B,), corners (B, k)) / base volume."""
    b, k, n = verts.shape
    det_base = _det_ld(verts[:, :-1, :] - verts[:, -1:, :])
    feet = _feet_weight_matrix(wts) @ verts
    m_cart = np.einsum("bj,bjd->bd", wts, verts)
    cevian = np.abs(_det_ld(feet[:, :-1, :] - feet[:, -1:, :]) / det_base)
    corners = np.empty((b, k), dtype=np.longdouble)
    for c in range(k):
        keep = [j for j in range(k) if j != c]
        corners[:, c] = np.abs(
            _det_ld(feet[:, keep, :] - m_cart[:, None, :]) / det_base
        )
    return cevian.astype(float), corners.astype(float)


def _closed_corner_ratios(wts: np.ndarray) -> np.ndarray:
    """Closed-form corner ratios w_c * prod_{i != c} w_i/(1-w_i); (B, k)."""
    b, k = wts.shape
    g = wts / (1.0 - wts)
    out = np.empty((b, k))
    for c in range(k):
        keep = [j for j in range(k) if j != c]
        out[:, c] = wts[:, c] * np.prod(g[:, keep], axis=1)
    return out


def _evaluate(
    suite: str,
    n: int,
    tol: float,
    verts: np.ndarray,
    wts: np.ndarray,
    amats: np.ndarray | None,
    shifts: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, float | None]:
    """Per-trial (margin, observed) for one batch, plus the suite bound.

    margin > 0 is a violation; observed is the suite's headline quantity.
    """
    b, k, _ = verts.shape
    one_minus = 1.0 - wts

    if suite == "theorem1":
        bound = theorem1_bound(n)
        cev_det, _ = _det_volume_ratios(verts, wts)
        cev_closed = n * np.prod(wts, 1) / np.prod(one_minus, 1)
        observed = np.maximum(cev_det, cev_closed)
        return observed - (bound + tol), observed, bound

    if suite == "theorem2":
        bound = theorem2_value(n)
        det_base = _det_ld(verts[:, :-1, :] - verts[:, -1:, :])
        feet = _feet_weight_matrix(wts) @ verts
        m_cart = np.einsum("bj,bjd->bd", wts, verts)
        corner_det = np.abs(
            _det_ld(feet[:, :n, :] - m_cart[:, None, :]) / det_base
        ).astype(float)
        g = wts / one_minus
        corner_closed = wts[:, n] * np.prod(g[:, :n], axis=1)
        observed = np.maximum(corner_det, corner_closed)
        return observed - (bound + tol), observed, bound

    if suite == "eq2":
        _, corners_det = _det_volume_ratios(verts, wts)
        corners_closed = _closed_corner_ratios(wts)
        rel = np.abs(corners_det - corners_closed) / corners_closed
        observed = rel.max(1)
        return observed - tol, observed, None

    if suite == "decomposition":
        cev_det, corners_det = _det_volume_ratios(verts, wts)
        corners_closed = _closed_corner_ratios(wts)
        cev_closed = n * np.prod(wts, 1) / np.prod(one_minus, 1)
        closed_rel = np.abs(corners_closed.sum(1) - cev_closed) / cev_closed
        det_rel = np.abs(corners_det.sum(1) - cev_det) / cev_det
        margins = np.maximum(
            closed_rel - tol, det_rel - max(tol, DET_ROUTE_TOL)
        )
        return margins, closed_rel, None

    if suite == "moebius":
        det_base = _det_ld(verts[:, :2, :] - verts[:, 2:, :])
        feet = _feet_weight_matrix(wts) @ verts
        s_area = np.abs(det_base) / 2.0
        x_area = np.abs(_det_ld(feet[:, :2, :] - feet[:, 2:, :])) / 2.0
        corner = []
        for i in range(3):
            jk = [j for j in range(3) if j != i]
            corner.append(
                np.abs(_det_ld(feet[:, jk, :] - verts[:, i : i + 1, :])) / 2.0
            )
        p, q, r = corner
        resid = 4.0 * p * q * r - x_area**2 * (p + q + r + x_area)
        observed = (np.abs(resid) / s_area**3).astype(float)
        margins = (np.abs(resid) - tol * s_area**3).astype(float)
        return margins, observed, None

    if suite == "segment_ratio":
        feet = _feet_weight_matrix(wts) @ verts
        m_cart = np.einsum("bj,bjd->bd", wts, verts)
        to_vertex = verts - m_cart[:, None, :]
        to_foot = feet - m_cart[:, None, :]
        dist_v = np.sqrt((to_vertex**2).sum(-1))
        dist_f = np.sqrt((to_foot**2).sum(-1))
        expected = wts / one_minus
        rel = np.abs(dist_f / dist_v - expected) / expected
        # collinearity of A_i, M, N_i: component of (M - A_i) off the cevian
        # direction, relative to the edge scale
        cevian_dir = feet - verts
        cevian_dir = cevian_dir / np.sqrt((cevian_dir**2).sum(-1))[:, :, None]
        along = (-to_vertex * cevian_dir).sum(-1)
        perp = -to_vertex - along[:, :, None] * cevian_dir
        coll = np.sqrt((perp**2).sum(-1)) / _pair_scale(verts)[:, None]
        margins = np.maximum(
            rel.max(1) - tol, coll.max(1) - COLLINEARITY_TOL
        )
        return margins, rel.max(1), None

    if suite == "affine":
        mapped = np.einsum("bij,bvj->bvi", amats, verts) + shifts[:, None, :]
        cev_a, corners_a = _det_volume_ratios(verts, wts)
        cev_b, corners_b = _det_volume_ratios(mapped, wts)
        all_a = np.concatenate([cev_a[:, None], corners_a], axis=1)
        all_b = np.concatenate([cev_b[:, None], corners_b], axis=1)
        rel = np.abs(all_a - all_b) / np.maximum(all_a, all_b)
        observed = rel.max(1)
        return observed - tol, observed, None

    raise ValueError(f"unknown suite {suite!r}")


def _digest(suite: str, seed: int, trial: int, *arrays: np.ndarray | None) -> str:
    h = hashlib.sha256()
    h.update(suite.encode())
    h.update(seed.to_bytes(8, "little"))
    h.update(trial.to_bytes(8, "little"))
    for a in arrays:
        if a is not None:
            h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()[:16]


def run_suite(plan: TrialPlan, batch_size: int = 4096) -> VerificationReport:
    """Run every trial of the plan and aggregate the report.

    ``batch_size`` only controls how many trials are evaluated per
    vectorized pass; any value produces the identical report.  Sampling
    failures are recorded as violations with infinite margin rather than
    raised.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be >= 1, got {batch_size}")
    start = time.perf_counter()
    n = plan.n
    k = n + 1
    affine = plan.suite == "affine"
    stream = _TrialStream()

    violations: list[Violation] = []
    worst = -math.inf
    observed_max = -math.inf

    for chunk_start in range(0, plan.trials, batch_size):
        chunk = range(chunk_start, min(chunk_start + batch_size, plan.trials))
        b = len(chunk)
        verts = np.empty((b, k, n))
        wts = np.empty((b, k))
        amats = np.empty((b, n, n)) if affine else None
        shifts = np.empty((b, n)) if affine else None
        failed: list[int] = []
        for row, trial in enumerate(chunk):
            gen = stream.for_trial(plan.seed, trial)
            try:
                v, w, a, sh = _draw_trial(gen, plan.suite, n)
            except SamplingError:
                failed.append(row)
                violations.append(
                    Violation(trial, "sampling-failure", math.inf)
                )
                worst = math.inf
                continue
            verts[row], wts[row] = v, w
            if affine:
                amats[row], shifts[row] = a, sh

        failed_set = set(failed)
        ok_rows = np.array(
            [r for r in range(b) if r not in failed_set], dtype=int
        )
        if ok_rows.size == 0:
            continue
        margins, observed, _ = _evaluate(
            plan.suite,
            n,
            plan.tol,
            verts[ok_rows],
            wts[ok_rows],
            amats[ok_rows] if affine else None,
            shifts[ok_rows] if affine else None,
        )
        worst = max(worst, float(margins.max()))
        observed_max = max(observed_max, float(observed.max()))
        for pos in np.flatnonzero(margins > 0.0):
            row = int(ok_rows[pos])
            trial = chunk_start + row
            violations.append(
                Violation(
                    trial,
                    _digest(
                        plan.suite,
                        plan.seed,
                        trial,
                        verts[row],
                        wts[row],
                        amats[row] if affine else None,
                        shifts[row] if affine else None,
                    ),
                    float(margins[pos]),
                )
            )

    violations.sort(key=lambda v: v.trial_index)
    bound_value = {
        "theorem1": theorem1_bound(n),
        "theorem2": theorem2_value(n),
    }.get(plan.suite)
    return VerificationReport(
        plan=plan,
        violations=tuple(violations),
        worst_margin=worst,
        max_ratio_observed=observed_max,
        bound=bound_value,
        passed=not violations,
        elapsed=time.perf_counter() - start,
    )
