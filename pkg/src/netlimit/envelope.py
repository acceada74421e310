"""Limit estimation through tail envelopes.

For a net f along a direction, the envelopes at a point x are

    M(x) = sup { f(t) : t in the tail of x },   m(x) = inf { ... }

so m(x) <= f(x) <= M(x), M is nonincreasing, m is nondecreasing, and f
converges to l exactly when both envelopes converge to l.  Sup and inf are
taken over finite samples: every gap of the cofinal chain receives
``subsamples`` points, and the envelope at chain point x_k is the max/min
over every sample from gap k onwards.  The sampled M therefore
under-estimates the true sup and m over-estimates the inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Any, Sequence

import numpy as np

from netlimit.errors import (
    CertificationFailure,
    EvaluationError,
    NotMonotone,
    OperandDiverges,
    OrderingViolated,
    ParamError,
    SandwichGap,
    ZeroDenominatorLimit,
)
from netlimit.nets import Direction, Holds, Net, RefutedAt, as_net, common_anchor, ultimately_less


@dataclass(frozen=True)
class EstimateConfig:
    tolerance: float = 1e-9
    max_steps: int = 200
    subsamples: int = 64
    divergence_threshold: float = 1e12
    ratio: float = 0.5
    # Widest envelope still reported as convergence once sampling has run
    # into the direction's horizon or the function's rounding-noise floor.
    resolution: float = 1e-6

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ParamError("tolerance", "must be > 0")
        if self.max_steps < 2:
            raise ParamError("max_steps", "must be >= 2")
        if self.subsamples < 1:
            raise ParamError("subsamples", "must be >= 1")
        if not self.divergence_threshold > 0:
            raise ParamError("divergence_threshold", "must be > 0")
        if not 0 < self.ratio < 1:
            raise ParamError("ratio", "must lie in (0, 1)")
        if not self.resolution > 0:
            raise ParamError("resolution", "must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)


# --- verdicts ---------------------------------------------------------------

@dataclass(frozen=True)
class Converges:
    value: float
    error_bound: float = 0.0
    kind = "converges"


@dataclass(frozen=True)
class DivergesToPlusInfinity:
    kind = "diverges_to_plus_infinity"


@dataclass(frozen=True)
class DivergesToMinusInfinity:
    kind = "diverges_to_minus_infinity"


@dataclass(frozen=True)
class Oscillates:
    liminf: float
    limsup: float
    kind = "oscillates"

    def __post_init__(self):
        if not self.liminf < self.limsup:
            raise ValueError("Oscillates needs liminf < limsup")


@dataclass(frozen=True)
class Inconclusive:
    reason: str = ""
    kind = "inconclusive"


LimitVerdict = Converges | DivergesToPlusInfinity | DivergesToMinusInfinity | Oscillates | Inconclusive


def verdict_to_dict(v: LimitVerdict) -> dict:
    out: dict[str, Any] = {"verdict": v.kind, "value": None, "error_bound": None}
    if isinstance(v, Converges):
        out["value"] = v.value
        out["error_bound"] = v.error_bound
    elif isinstance(v, Oscillates):
        out["liminf"] = v.liminf
        out["limsup"] = v.limsup
    elif isinstance(v, Inconclusive):
        out["reason"] = v.reason
    return out


# --- sampling ---------------------------------------------------------------

# Sampling stops where the per-gap spread starts growing by this factor
# while the samples turn jagged (total variation much larger than range).
NOISE_GROWTH = 4.0
NOISE_JAG = 3.0
# Spreads below this multiple of max(1, |samples|) are plain rounding.
NOISE_FLOOR_REL = 1e-13


@dataclass
class _Sampled:
    chain: list
    points: list = field(repr=False)     # per gap
    values: list = field(repr=False)     # per gap, np.ndarray
    stop: str = "max_steps"


def _sample(net: Net, direction: Direction, cfg: EstimateConfig, density: int | None = None,
            detect_noise: bool = True, max_points: int | None = None) -> _Sampled:
    n = cfg.max_steps if max_points is None else max_points
    chain = direction.chain(n, cfg.ratio)
    stop = "max_steps" if len(chain) >= cfg.max_steps else "horizon"
    density = density or cfg.subsamples

    # skip the part of the chain before the net's definition tail
    start = 0
    if net.anchor is not None:
        while start < len(chain) and not net.defined_at(chain[start], direction):
            start += 1
        chain = chain[start:]
    if len(chain) < 2:
        raise EvaluationError(f"direction {direction.spec()} yields fewer than two chain points")

    gaps = []
    for x, y in zip(chain, chain[1:]):
        pts = direction.segment(x, y, density)
        if net.anchor is not None:
            pts = [p for p in pts if net.defined_at(p, direction)]
        gaps.append(pts)
    flat = [p for g in gaps for p in g]
    allv = net.values(flat)
    values, i = [], 0
    for g in gaps:
        values.append(allv[i:i + len(g)])
        i += len(g)

    keep = len(gaps)
    for k, v in enumerate(values):
        if not np.isfinite(v).any():
            if k < 2:
                raise EvaluationError(
                    f"all samples non-finite between {chain[k]!r} and {chain[k + 1]!r}")
            keep, stop = k, "non_finite"
            break

    if detect_noise and keep > 2:
        lowest = math.inf
        for k in range(keep):
            v = values[k][np.isfinite(values[k])]
            spread = float(v.max() - v.min())
            tv = float(np.abs(np.diff(v)).sum())
            jag = tv / spread if spread > 0 else 1.0
            floor = NOISE_FLOOR_REL * max(1.0, float(np.abs(v).max()))
            if k > 0 and spread > max(NOISE_GROWTH * lowest, floor) and jag > NOISE_JAG:
                spreads = [float(np.ptp(values[j][np.isfinite(values[j])])) for j in range(k)]
                best = min(spreads)
                keep = max(j for j, s in enumerate(spreads) if s == best) + 1
                stop = "noise_floor"
                break
            lowest = min(lowest, spread)

    return _Sampled(chain[:keep + 1], gaps[:keep], values[:keep], stop)


# --- envelopes --------------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeStep:
    x: Any
    m: float
    M: float
    samples: int


@dataclass(frozen=True)
class EnvelopeTrace:
    steps: tuple
    stop_reason: str = "max_steps"

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def final(self) -> EnvelopeStep:
        return self.steps[-1]

    def width(self, k: int = -1) -> float:
        s = self.steps[k]
        return s.M - s.m

    def to_list(self, direction: Direction) -> list:
        return [{"x": direction.coordinate(s.x), "m": s.m, "M": s.M, "samples": s.samples}
                for s in self.steps]


def _trace(sampled: _Sampled) -> EnvelopeTrace:
    steps = []
    hi, lo, count = -math.inf, math.inf, 0
    for k in range(len(sampled.values) - 1, -1, -1):
        v = sampled.values[k]
        v = v[np.isfinite(v)]
        if v.size:
            hi = max(hi, float(v.max()))
            lo = min(lo, float(v.min()))
        count += int(v.size)
        steps.append(EnvelopeStep(sampled.chain[k], lo, hi, count))
    return EnvelopeTrace(tuple(reversed(steps)), sampled.stop)


def envelopes(f, direction: Direction, cfg: EstimateConfig | None = None) -> EnvelopeTrace:
    """Sampled sup/inf envelopes of ``f`` at each chain point."""
    cfg = cfg or EstimateConfig()
    return _trace(_sample(as_net(f), direction, cfg))


# --- limit estimation -------------------------------------------------------

# The oscillation test looks at envelopes this many gaps before the end of
# the chain so that each envelope aggregates several gaps' worth of samples.
DECISION_LAG = 8
STABLE_WINDOW = 5
# Envelope moves below this fraction of the envelope width count as stable.
STALL_RATIO = 1e-3


def _strictly_monotone(seq: Sequence[float], sign: float) -> bool:
    return all(sign * (b - a) > 0 for a, b in zip(seq, seq[1:]))


def _remaining_drift(steps: Sequence[EnvelopeStep]) -> float:
    """How much further the envelopes may still move once sampling has stopped.

    Each envelope's last two moves give a contraction ratio r; the geometric
    tail d * r / (1 - r) of the last move d bounds the rest of its path.
    """
    if len(steps) < 3:
        return math.inf
    a, b, c = steps[-3:]
    out = 0.0
    for d0, d1 in ((b.m - a.m, c.m - b.m), (a.M - b.M, b.M - c.M)):
        if d1 <= 0:
            continue
        out = max(out, d1 * (d1 / d0) / (1 - d1 / d0) if 0 < d1 < d0 else math.inf)
    return out


def classify(trace: EnvelopeTrace, cfg: EstimateConfig) -> LimitVerdict:
    steps = trace.steps
    last = steps[-1]
    width = last.M - last.m
    mid = 0.5 * (last.M + last.m)
    if width <= cfg.tolerance:
        return Converges(mid, 0.5 * width)
    if width <= cfg.resolution and trace.stop_reason in ("horizon", "noise_floor"):
        err = 0.5 * width + _remaining_drift(steps)
        if err <= cfg.resolution:
            return Converges(mid, err)

    tail = steps[-STABLE_WINDOW:]
    if len(tail) == STABLE_WINDOW:
        if last.m > cfg.divergence_threshold and _strictly_monotone([s.m for s in tail], 1.0):
            return DivergesToPlusInfinity()
        if last.M < -cfg.divergence_threshold and _strictly_monotone([s.M for s in tail], -1.0):
            return DivergesToMinusInfinity()

    d = len(steps) - 1 - DECISION_LAG
    if d - STABLE_WINDOW < 0:
        return Inconclusive(f"chain too short to judge stability ({len(steps)} steps), "
                            f"envelope width {width:.3g}")
    window = steps[d - STABLE_WINDOW:d + 1]
    at = steps[d]
    spread = at.M - at.m
    stall = max(cfg.tolerance, STALL_RATIO * spread)
    stable_hi = all(abs(b.M - a.M) <= stall for a, b in zip(window, window[1:]))
    stable_lo = all(abs(b.m - a.m) <= stall for a, b in zip(window, window[1:]))
    if stable_hi and stable_lo and spread > cfg.tolerance and math.isfinite(spread):
        return Oscillates(at.m, at.M)
    return Inconclusive(f"envelope width {width:.3g} after {len(steps)} steps "
                        f"(stopped: {trace.stop_reason})")


def estimate_limit(f, direction: Direction, cfg: EstimateConfig | None = None
                   ) -> tuple[LimitVerdict, EnvelopeTrace]:
    """Classify the limit of ``f`` from its sampled envelopes.

    Converges(l) when the final envelope width is within tolerance (or
    within ``resolution`` once sampling can go no deeper); l is the
    envelope midpoint and the error bound half the width.
    """
    cfg = cfg or EstimateConfig()
    trace = envelopes(f, direction, cfg)
    return classify(trace, cfg), trace


# --- epsilon-delta certificates ----------------------------------------------

@dataclass(frozen=True)
class CertificateEntry:
    epsilon: float
    anchor: Any
    samples: int


@dataclass(frozen=True)
class Certificate:
    limit: float
    entries: tuple

    def to_dict(self, direction: Direction) -> dict:
        rows = []
        for e in self.entries:
            label, val = direction.anchor_report(e.anchor)
            rows.append({"epsilon": e.epsilon, "anchor": direction.coordinate(e.anchor),
                         label: val, "samples": e.samples})
        return {"limit": self.limit, "entries": rows}


VERIFY_DENSITY = 10


def epsilon_delta_certificate(f, direction: Direction, limit: float, eps_list: Sequence[float],
                              cfg: EstimateConfig | None = None) -> Certificate:
    """For each epsilon, the earliest chain anchor past which |f - limit| <= epsilon
    on a verification grid ten times denser than the estimation grid."""
    cfg = cfg or EstimateConfig()
    eps_list = list(eps_list)
    if not eps_list:
        raise ParamError("eps", "need at least one epsilon")
    if any(not (e > 0) for e in eps_list):
        raise ParamError("eps", "every epsilon must be > 0")
    if not math.isfinite(limit):
        raise ParamError("value", "claimed limit must be finite")
    net = as_net(f)
    base = _sample(net, direction, cfg)
    dense = _sample(net, direction, cfg, density=VERIFY_DENSITY * cfg.subsamples,
                    detect_noise=False, max_points=len(base.chain))
    devs, counts = [], []
    for v in dense.values:
        d = np.abs(v - limit)
        devs.append(float(np.max(np.where(np.isfinite(d), d, np.inf))) if v.size else 0.0)
        counts.append(int(v.size))
    # suffix maxima: worst deviation from each anchor onwards
    worst = np.maximum.accumulate(np.asarray(devs)[::-1])[::-1]
    seen = np.cumsum(np.asarray(counts)[::-1])[::-1]
    entries = []
    for eps in eps_list:
        ok = np.flatnonzero(worst <= eps)
        if ok.size == 0:
            raise CertificationFailure(eps)
        k = int(ok[0])
        entries.append(CertificateEntry(float(eps), dense.chain[k], int(seen[k])))
    return Certificate(float(limit), tuple(entries))


# --- monotone bounded nets -----------------------------------------------------

def mb_limit(f, direction: Direction, cfg: EstimateConfig | None = None) -> LimitVerdict:
    """Limit of a net that is monotone on a tail.

    Monotonicity is checked (ties allowed, with ``tolerance`` slack) on the
    second half of the sampled chain.  Bounded monotone nets converge to their
    extreme value; unbounded ones escape to +/- infinity.
    """
    cfg = cfg or EstimateConfig()
    s = _sample(as_net(f), direction, cfg)
    first = len(s.values) // 2
    pts = [p for g in s.points[first:] for p in g]
    vals = np.concatenate(s.values[first:])
    finite = np.isfinite(vals)
    pts = [p for p, ok in zip(pts, finite) if ok]
    vals = vals[finite]
    if vals.size < 2:
        return Inconclusive("too few finite samples")
    diffs = np.diff(vals)
    slack = cfg.tolerance * max(1.0, float(np.max(np.abs(vals))))
    up = bool(np.all(diffs >= -slack))
    down = bool(np.all(diffs <= slack))
    if not (up or down):
        i = int(np.flatnonzero(diffs < -slack)[0])
        j = int(np.flatnonzero(diffs > slack)[0])
        raise NotMonotone(((pts[i], pts[i + 1]), (pts[j], pts[j + 1])))

    trace = _trace(s)
    w = trace.width()
    if up and down:
        return Converges(float(np.mean(vals)), 0.5 * float(np.ptp(vals)))

    sign = 1.0 if up else -1.0
    heads = [sign * float(v[np.isfinite(v)].max() if up else v[np.isfinite(v)].min())
             for v in s.values[first:] if np.isfinite(v).any()]
    extreme = sign * heads[-1]
    if sign * extreme > cfg.divergence_threshold and _strictly_monotone(heads[-STABLE_WINDOW:], 1.0):
        return DivergesToPlusInfinity() if up else DivergesToMinusInfinity()
    steps = np.diff(heads)
    if steps.size > STABLE_WINDOW:
        contracting = steps[-1] <= max(cfg.tolerance, 0.5 * steps[-1 - STABLE_WINDOW])
    else:
        contracting = steps.size == 0 or steps[-1] <= cfg.tolerance
    if not contracting:
        return Inconclusive("monotone, but increments do not shrink: no evidence of boundedness")
    # the extreme sample still sits short of the limit by the unsampled tail
    tail = 0.0
    if steps.size >= 2 and steps[-1] > 0:
        r = steps[-1] / steps[-2] if steps[-2] > 0 else math.inf
        tail = steps[-1] * r / (1 - r) if r < 1 else steps[-1]
    return Converges(extreme, float(w + tail))


# --- sandwich -----------------------------------------------------------------

def _converged(net: Net, name: str, direction: Direction, cfg: EstimateConfig) -> Converges:
    v, _ = estimate_limit(net, direction, cfg)
    if not isinstance(v, Converges):
        raise OperandDiverges(name, v)
    return v


def sandwich_limit(f, g, h, direction: Direction, cfg: EstimateConfig | None = None) -> Converges:
    cfg = cfg or EstimateConfig()
    f, g, h = as_net(f), as_net(g), as_net(h)
    for lo, hi in ((f, g), (g, h)):
        verdict = ultimately_less(lo, hi, direction, budget=cfg.max_steps, strict=False)
        if not isinstance(verdict, Holds):
            raise OrderingViolated(verdict.point if isinstance(verdict, RefutedAt) else None)
    lf = _converged(f, "f", direction, cfg)
    lh = _converged(h, "h", direction, cfg)
    if abs(lf.value - lh.value) > cfg.tolerance + lf.error_bound + lh.error_bound:
        raise SandwichGap(lf.value, lh.value)
    value = 0.5 * (lf.value + lh.value)
    return Converges(value, 0.5 * abs(lf.value - lh.value) + max(lf.error_bound, lh.error_bound))


# --- algebra of limits ----------------------------------------------------------
#
# Each combinator reduces to null nets: z = f - lim f must tend to 0 (recentring),
# sums of null nets are null, and a bounded net times a null net is null.

def _assert_null(residual: Net, name: str, direction: Direction, cfg: EstimateConfig,
                 slack: float) -> None:
    v, _ = estimate_limit(residual, direction, cfg)
    if not isinstance(v, Converges) or abs(v.value) > cfg.tolerance + v.error_bound + slack:
        raise OperandDiverges(name, v)


def _operands(f, g, direction, cfg, allow_bounded: bool = False):
    f, g = as_net(f, "f"), as_net(g, "g")
    anchor = common_anchor(direction, f, g)
    vf, _ = estimate_limit(f, direction, cfg)
    vg, _ = estimate_limit(g, direction, cfg)
    for name, v in (("f", vf), ("g", vg)):
        if not (isinstance(v, Converges) or (allow_bounded and isinstance(v, Oscillates))):
            raise OperandDiverges(name, v)
    return f, g, anchor, vf, vg


def limit_of_sum(f, g, direction: Direction, cfg: EstimateConfig | None = None) -> Converges:
    cfg = cfg or EstimateConfig()
    f, g, anchor, lf, lg = _operands(f, g, direction, cfg)
    a, b = lf.value, lg.value
    residual = Net(lambda x: (f.func(x) - a) + (g.func(x) - b), anchor, "zf + zg")
    err = lf.error_bound + lg.error_bound
    _assert_null(residual, "f + g - (lim f + lim g)", direction, cfg, err)
    return Converges(a + b, err)


def limit_of_product(f, g, direction: Direction, cfg: EstimateConfig | None = None) -> Converges:
    """Limit of f*g.  One factor may merely be bounded (oscillating) if the other is null."""
    cfg = cfg or EstimateConfig()
    f, g, anchor, lf, lg = _operands(f, g, direction, cfg, allow_bounded=True)
    if isinstance(lf, Oscillates) or isinstance(lg, Oscillates):
        bounded, null = (lf, lg) if isinstance(lf, Oscillates) else (lg, lf)
        if not isinstance(null, Converges) or abs(null.value) > cfg.tolerance + null.error_bound:
            raise OperandDiverges("f" if bounded is lf else "g", bounded)
        err = max(abs(bounded.liminf), abs(bounded.limsup)) * (abs(null.value) + null.error_bound)
        product = Net(lambda x: f.func(x) * g.func(x), anchor, "bounded * null")
        _assert_null(product, "bounded * null", direction, cfg, err)
        return Converges(0.0, err)
    a, b = lf.value, lg.value
    # f*g - a*b = b*(f - a) + f*(g - b): constant times null plus bounded times null
    residual = Net(lambda x: b * (f.func(x) - a) + f.func(x) * (g.func(x) - b), anchor, "fg - ab")
    err = abs(a) * lg.error_bound + abs(b) * lf.error_bound + lf.error_bound * lg.error_bound
    _assert_null(residual, "f*g - lim f * lim g", direction, cfg, err)
    return Converges(a * b, err)


def limit_of_quotient(f, g, direction: Direction, cfg: EstimateConfig | None = None) -> Converges:
    cfg = cfg or EstimateConfig()
    f, g, anchor, lf, lg = _operands(f, g, direction, cfg)
    a, b = lf.value, lg.value
    if abs(b) <= max(cfg.tolerance, lg.error_bound):
        raise ZeroDenominatorLimit(f"denominator limit {b:g} is within tolerance of 0")
    # f/g - a/b = (b*(f - a) - a*(g - b)) * 1/(g*b): null times a bounded net
    residual = Net(lambda x: (b * (f.func(x) - a) - a * (g.func(x) - b)) / (g.func(x) * b),
                   anchor, "f/g - a/b")
    err = (abs(a) * lg.error_bound + abs(b) * lf.error_bound) / (abs(b) * (abs(b) - lg.error_bound))
    _assert_null(residual, "f/g - lim f / lim g", direction, cfg, err)
    return Converges(a / b, err)
