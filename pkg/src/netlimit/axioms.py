"""Axioms of the limit operator, checked as properties over a seeded corpus.

Limit axioms: constants (1) and inequality (2).  Convergence axioms:
monotone-bounded (8) and sandwich (9).  Derived: inequality theorem (3) and
uniqueness of the limit operator (7).  Each check takes any object with an
``evaluate(net, direction)`` method and returns an :class:`AxiomReport`;
reports say "no violation found in N cases", never "proved".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from netlimit.directions import PartitionsOf
from netlimit.envelope import (
    Converges,
    EstimateConfig,
    Inconclusive,
    LimitVerdict,
    estimate_limit,
    mb_limit,
    verdict_to_dict,
)
from netlimit.errors import NotMonotone
from netlimit.nets import Direction, Holds, Net, ultimately_less


class LimitOperator(Protocol):
    name: str
    tolerance: float

    def evaluate(self, f: Net, direction: Direction) -> LimitVerdict: ...


class EnvelopeOperator:
    """Reference operator: envelope estimation."""

    def __init__(self, cfg: EstimateConfig | None = None, name: str = "envelope"):
        self.cfg = cfg or EstimateConfig()
        self.name = name
        self.tolerance = self.cfg.tolerance

    def evaluate(self, f, direction):
        return estimate_limit(f, direction, self.cfg)[0]


class MonotoneOperator:
    """Defined only on monotone nets; Inconclusive elsewhere."""

    def __init__(self, cfg: EstimateConfig | None = None, name: str = "monotone"):
        self.cfg = cfg or EstimateConfig()
        self.name = name
        self.tolerance = self.cfg.tolerance

    def evaluate(self, f, direction):
        try:
            return mb_limit(f, direction, self.cfg)
        except NotMonotone as exc:
            return Inconclusive(str(exc))


# --- adversarial stubs used to show each check can fail ---------------------

class ShiftedOperator:
    def __init__(self, base: LimitOperator | None = None, shift: float = 1.0):
        self.base = base or EnvelopeOperator()
        self.shift = shift
        self.name = f"shifted({shift:g})"
        self.tolerance = self.base.tolerance

    def evaluate(self, f, direction):
        v = self.base.evaluate(f, direction)
        return Converges(v.value + self.shift, v.error_bound) if isinstance(v, Converges) else v


class NegatingOperator:
    def __init__(self, base: LimitOperator | None = None):
        self.base = base or EnvelopeOperator()
        self.name = "negating"
        self.tolerance = self.base.tolerance

    def evaluate(self, f, direction):
        v = self.base.evaluate(f, direction)
        return Converges(-v.value, v.error_bound) if isinstance(v, Converges) else v


class EarlyValueOperator:
    """Reports the value at the first chain point as the limit."""

    name = "early-value"
    tolerance = 1e-9

    def evaluate(self, f, direction):
        x = direction.chain(1)[0]
        return Converges(float(f.values([x])[0]), 0.0)


class SilentOperator:
    name = "silent"
    tolerance = 1e-9

    def evaluate(self, f, direction):
        return Inconclusive("stub")


ADVERSARIES: dict[str, Callable[[], LimitOperator]] = {
    "constants": lambda: ShiftedOperator(shift=1.0),
    "inequality": NegatingOperator,
    "inequality_theorem": EarlyValueOperator,
    "mb": SilentOperator,
    "sandwich": SilentOperator,
    "uniqueness": lambda: ShiftedOperator(shift=0.1),
}


# --- corpus -------------------------------------------------------------------

def _progress(direction: Direction, x):
    """Vectorised distance-to-the-limit for scalar, array or partition input."""
    if isinstance(x, tuple):
        return direction.progress(x)
    arr = np.asarray(x, dtype=float)
    kind = direction.kind
    if kind in ("left", "right", "both"):
        t = np.abs(arr - direction.x0)
    elif kind == "inf":
        t = 1.0 / arr
    elif kind == "-inf":
        t = -1.0 / arr
    elif kind == "seq":
        t = 1.0 / arr
    else:
        t = np.vectorize(direction.progress, otypes=[float])(arr)
    return float(t) if t.ndim == 0 else t


@dataclass(frozen=True)
class CorpusFunction:
    """phi(progress(x)) for a closed-form phi with a known limit at progress 0.

    ``limit`` is None when the function has no limit.
    """

    label: str
    phi: Callable = field(repr=False, compare=False)
    limit: float | None
    family: str
    monotone: bool = False
    bounded: bool = True

    def net(self, direction: Direction) -> Net:
        phi = self.phi
        return Net(lambda x: phi(_progress(direction, x)), None, self.label)


_GRID = np.arange(-12, 13) / 4.0   # limits on a quarter grid: gaps are 0 or >= 0.25


def _q(x: float) -> str:
    return f"{x:g}"


class FunctionCorpus:
    """Seeded families of test functions in the variable s = t^2, t = progress(x)."""

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def limit(self) -> float:
        return float(self.rng.choice(_GRID))

    def coef(self) -> float:
        return float(self.rng.choice([-1, 1]) * self.rng.choice([0.5, 1.0, 1.5, 2.0]))

    def constant(self, c: float | None = None) -> CorpusFunction:
        c = self.limit() if c is None else float(c)
        return CorpusFunction(_q(c), lambda t, c=c: c + 0.0 * t, c, "constant", True)

    def affine(self) -> CorpusFunction:
        L, a = self.limit(), self.coef()
        return CorpusFunction(f"{_q(L)} + {_q(a)}*t^2", lambda t: L + a * t * t, L, "affine", True)

    def polynomial(self) -> CorpusFunction:
        L, a, b = self.limit(), self.coef(), self.coef()
        return CorpusFunction(f"{_q(L)} + {_q(a)}*t^2 + {_q(b)}*t^4",
                              lambda t: L + a * t ** 2 + b * t ** 4, L, "polynomial")

    def rational(self) -> CorpusFunction:
        L = self.limit()
        return CorpusFunction(f"(t^4 + {_q(L)}*t^2)/t^2",
                              lambda t: (t ** 4 + L * t ** 2) / t ** 2, L, "rational", True)

    def monotone(self) -> CorpusFunction:
        L, a = self.limit(), self.coef()
        kind = int(self.rng.integers(3))
        if kind == 0:
            return CorpusFunction(f"{_q(L)} + {_q(a)}*t^2/(1+t^2)",
                                  lambda t: L + a * t * t / (1 + t * t), L, "monotone", True)
        if kind == 1:
            return CorpusFunction(f"{_q(L)} + {_q(a)}*atan(t^2)",
                                  lambda t: L + a * np.arctan(t * t), L, "monotone", True)
        return CorpusFunction(f"{_q(L)} + {_q(a)}*(1 - exp(-t^2))",
                              lambda t: L + a * -np.expm1(-t * t), L, "monotone", True)

    def unbounded(self) -> CorpusFunction:
        a = abs(self.coef())
        return CorpusFunction(f"{_q(a)}/t", lambda t: a / t, None, "unbounded", True, False)

    def damped(self) -> CorpusFunction:
        L, a = self.limit(), self.coef()
        return CorpusFunction(f"{_q(L)} + {_q(a)}*t^2*sin(1/t)",
                              lambda t: L + a * t * t * np.sin(1.0 / t), L, "damped")

    def oscillator(self) -> CorpusFunction:
        L, a = self.limit(), abs(self.coef())
        return CorpusFunction(f"{_q(L)} + {_q(a)}*sin(1/t)",
                              lambda t: L + a * np.sin(1.0 / t), None, "oscillator")

    def convergent(self) -> CorpusFunction:
        return [self.affine, self.polynomial, self.rational, self.monotone,
                self.damped, self.sum, self.product][int(self.rng.integers(7))]()

    def _simple(self) -> CorpusFunction:
        return [self.affine, self.polynomial, self.monotone, self.damped][int(self.rng.integers(4))]()

    def sum(self) -> CorpusFunction:
        f, g = self._simple(), self._simple()
        return CorpusFunction(f"({f.label}) + ({g.label})", lambda t: f.phi(t) + g.phi(t),
                              f.limit + g.limit, "sum")

    def product(self) -> CorpusFunction:
        f, g = self._simple(), self._simple()
        return CorpusFunction(f"({f.label}) * ({g.label})", lambda t: f.phi(t) * g.phi(t),
                              f.limit * g.limit, "product")


# --- reports --------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    function: str
    direction: str
    expected: str
    observed: str


@dataclass
class AxiomReport:
    axiom: str
    direction: str
    operator: str
    cases: int = 0
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def flag(self, function: str, expected: str, observed) -> None:
        if not isinstance(observed, str):
            observed = _show(observed)
        self.violations.append(Violation(function, self.direction, expected, observed))

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "direction": self.direction,
            "operator": self.operator,
            "cases": self.cases,
            "passed": self.passed,
            "violations": [vars(v) for v in self.violations],
            "notes": list(self.notes),
        }


def _show(v) -> str:
    d = verdict_to_dict(v) if hasattr(v, "kind") else {"value": repr(v)}
    return ", ".join(f"{k}={d[k]!r}" for k in sorted(d) if d[k] is not None)


def _tol(op) -> float:
    return getattr(op, "tolerance", 1e-9)


# --- checks ---------------------------------------------------------------------

CASES = 6


def check_constants(op: LimitOperator, direction: Direction, seed: int) -> AxiomReport:
    """Axiom (1): a constant net converges to its constant."""
    rep = AxiomReport("constants", direction.spec(), op.name)
    corpus = FunctionCorpus(seed)
    funcs = [corpus.constant(0.0), corpus.constant(-3.5)] + [corpus.constant() for _ in range(CASES)]
    for cf in funcs:
        v = op.evaluate(cf.net(direction), direction)
        rep.cases += 1
        if not (isinstance(v, Converges) and abs(v.value - cf.limit) <= _tol(op) + v.error_bound):
            rep.flag(cf.label, f"converges to {cf.limit:g}", v)
    return rep


def check_inequality(op: LimitOperator, direction: Direction, seed: int) -> AxiomReport:
    """Axiom (2): lim f < lim g forces f < g on some tail.

    Pairs whose limit gap is within 2*tolerance (plus the estimates' error
    bounds) are skipped; the skipped count is noted in the report.
    """
    rep = AxiomReport("inequality", direction.spec(), op.name)
    corpus = FunctionCorpus(seed)
    skipped = 0
    for _ in range(CASES + 2):
        f, g = corpus.convergent(), corpus.convergent()
        nf, ng = f.net(direction), g.net(direction)
        vf, vg = op.evaluate(nf, direction), op.evaluate(ng, direction)
        if not (isinstance(vf, Converges) and isinstance(vg, Converges)):
            skipped += 1
            continue
        margin = 2 * _tol(op) + vf.error_bound + vg.error_bound
        if abs(vf.value - vg.value) <= margin:
            skipped += 1
            continue
        lo, hi = ((f, nf), (g, ng)) if vf.value < vg.value else ((g, ng), (f, nf))
        rep.cases += 1
        verdict = ultimately_less(lo[1], hi[1], direction, strict=True)
        if not isinstance(verdict, Holds):
            rep.flag(f"{lo[0].label} -< {hi[0].label}", "holds on some tail", repr(verdict))
    rep.notes.append(f"skipped {skipped} pairs (non-convergent or gap within margin)")
    return rep


def check_inequality_theorem(op: LimitOperator, direction: Direction, seed: int) -> AxiomReport:
    """Theorem (3): f <= g on a tail implies lim f <= lim g.

    Pairs cross: f > g at the first chain point, f <= g further on.
    """
    rep = AxiomReport("inequality_theorem", direction.spec(), op.name)
    corpus = FunctionCorpus(seed)
    s0 = direction.progress(direction.chain(1)[0]) ** 2
    for i in range(CASES):
        lf = corpus.limit()
        lg = lf if i % 2 == 0 else lf + 0.25 * float(corpus.rng.integers(1, 4))
        a = float(corpus.rng.choice([1.0, 2.0]))
        b = 0.2 * a
        f = CorpusFunction(f"{_q(lf)} + {_q(a)}*t^2*(t^2/{s0:g} - 1/2)",
                           lambda t, lf=lf, a=a: lf + a * t * t * (t * t / s0 - 0.5), lf, "crossing")
        g = CorpusFunction(f"{_q(lg)} + {_q(b)}*t^2", lambda t, lg=lg, b=b: lg + b * t * t, lg, "affine")
        nf, ng = f.net(direction), g.net(direction)
        if not isinstance(ultimately_less(nf, ng, direction, strict=False), Holds):
            rep.notes.append(f"ordering not established for {f.label} <= {g.label}")
            continue
        vf, vg = op.evaluate(nf, direction), op.evaluate(ng, direction)
        if not (isinstance(vf, Converges) and isinstance(vg, Converges)):
            rep.notes.append(f"non-convergent verdict for {f.label} or {g.label}")
            continue
        rep.cases += 1
        if vf.value > vg.value + 2 * _tol(op) + vf.error_bound + vg.error_bound:
            rep.flag(f"{f.label} <= {g.label}", f"lim f <= lim g",
                     f"lim f={vf.value!r}, lim g={vg.value!r}")
    return rep


def check_mb(op: LimitOperator, direction: Direction, seed: int) -> AxiomReport:
    """Axiom (8): monotone bounded nets converge (unbounded ones filtered out)."""
    rep = AxiomReport("mb", direction.spec(), op.name)
    corpus = FunctionCorpus(seed)
    candidates = [corpus.monotone() for _ in range(CASES - 1)] + [corpus.rational(), corpus.unbounded()]
    for cf in (c for c in candidates if c.monotone and c.bounded):
        rep.cases += 1
        v = op.evaluate(cf.net(direction), direction)
        if not isinstance(v, Converges):
            rep.flag(cf.label, "converges", v)
    return rep


def check_sandwich(op: LimitOperator, direction: Direction, seed: int) -> AxiomReport:
    """Axiom (9): g squeezed between f and h with a common limit converges."""
    rep = AxiomReport("sandwich", direction.spec(), op.name)
    corpus = FunctionCorpus(seed)
    for i in range(CASES):
        if i == 0:
            c = corpus.limit()
            triple = [corpus.constant(c)] * 3
        else:
            L, a = corpus.limit(), abs(corpus.coef())
            triple = [
                CorpusFunction(f"{_q(L)} - {_q(a)}*t^2", lambda t, L=L, a=a: L - a * t * t, L, "affine"),
                CorpusFunction(f"{_q(L)} + {_q(a)}*t^2*sin(1/t)",
                               lambda t, L=L, a=a: L + a * t * t * np.sin(1.0 / t), L, "damped"),
                CorpusFunction(f"{_q(L)} + {_q(a)}*t^2", lambda t, L=L, a=a: L + a * t * t, L, "affine"),
            ]
        rep.cases += 1
        v = op.evaluate(triple[1].net(direction), direction)
        if not isinstance(v, Converges):
            rep.flag(f"{triple[0].label} <= {triple[1].label} <= {triple[2].label}", "g converges", v)
    return rep


def check_uniqueness(op_a: LimitOperator, op_b: LimitOperator, direction: Direction,
                     seed: int) -> AxiomReport:
    """Consequence (7): two limit operators agree wherever both converge."""
    rep = AxiomReport("uniqueness", direction.spec(), f"{op_a.name} vs {op_b.name}")
    corpus = FunctionCorpus(seed)
    funcs = [corpus.monotone() for _ in range(CASES - 2)] + [corpus.constant(), corpus.affine()]
    for cf in funcs:
        net = cf.net(direction)
        va, vb = op_a.evaluate(net, direction), op_b.evaluate(net, direction)
        if not (isinstance(va, Converges) and isinstance(vb, Converges)):
            continue
        rep.cases += 1
        allowed = _tol(op_a) + _tol(op_b) + va.error_bound + vb.error_bound
        if abs(va.value - vb.value) > allowed:
            rep.flag(cf.label, f"agreement within {allowed:.3g}",
                     f"{op_a.name}={va.value!r}, {op_b.name}={vb.value!r}")
    return rep


CHECKS = {
    "constants": check_constants,
    "inequality": check_inequality,
    "inequality_theorem": check_inequality_theorem,
    "mb": check_mb,
    "sandwich": check_sandwich,
}


def default_operators(cfg: EstimateConfig | None = None) -> list:
    return [EnvelopeOperator(cfg), MonotoneOperator(cfg)]


def run_all(ops: Sequence[LimitOperator] | None, dirs: Sequence[Direction], seed: int) -> list[AxiomReport]:
    """Every check on every direction.

    ``ops[0]`` is the operator under test; uniqueness compares it with each
    further operator (or with itself when only one is given).
    """
    ops = list(ops) if ops else default_operators()
    reports = []
    for d in dirs:
        for check in CHECKS.values():
            reports.append(check(ops[0], d, seed))
        for other in ops[1:] or ops[:1]:
            reports.append(check_uniqueness(ops[0], other, d, seed))
    return reports


def reports_passed(reports: Sequence[AxiomReport]) -> bool:
    return all(r.passed for r in reports)
