"""Directed sets, tails, nets and the "ultimately less" relation.

A direction is a reflexive, transitive order on a point set in which any
two points have a common successor.  Numerically every direction also
supplies a cofinal chain, a sequence of points marching along the order,
which is what all sampling in this package is built on.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from netlimit.errors import DomainError, EvaluationError

Point = Any


class Direction(ABC):
    """Base class for concrete directed sets (see :mod:`netlimit.directions`)."""

    kind: str = "abstract"

    @abstractmethod
    def contains(self, x: Point) -> bool: ...

    @abstractmethod
    def _precedes(self, x: Point, y: Point) -> bool: ...

    @abstractmethod
    def chain(self, n: int, ratio: float | None = None) -> list:
        """Up to ``n`` chain points; shorter when the numerical horizon is hit.

        ``ratio`` overrides the direction's own refinement parameter.
        """

    @abstractmethod
    def segment(self, x: Point, y: Point, count: int) -> list:
        """Points from ``x`` (included) towards ``y`` (excluded), in order."""

    @abstractmethod
    def progress(self, x: Point) -> float:
        """Nonnegative distance-to-the-limit; shrinks to 0 along the order."""

    @abstractmethod
    def spec(self) -> str:
        """The ``--dir`` text that builds this direction."""

    @abstractmethod
    def random_point(self, rng: np.random.Generator) -> Point: ...

    def coordinate(self, x: Point) -> float:
        return float(x)

    def anchor_report(self, anchor: Point) -> tuple[str, float]:
        return "anchor", self.coordinate(anchor)

    def check(self, x: Point) -> None:
        if not self.contains(x):
            raise DomainError(f"{x!r} is outside the domain of {self.spec()}")

    def precedes(self, x: Point, y: Point) -> bool:
        self.check(x)
        self.check(y)
        return self._precedes(x, y)

    def join(self, x: Point, y: Point) -> Point:
        # Total preorders: the later of the two dominates both.
        self.check(x)
        self.check(y)
        return y if self._precedes(x, y) else x

    def tail(self, anchor: Point) -> "Tail":
        self.check(anchor)
        return Tail(anchor, self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec()}>"


@dataclass(frozen=True)
class Tail:
    anchor: Point
    direction: Direction

    def __contains__(self, x: Point) -> bool:
        return self.direction.contains(x) and self.direction._precedes(self.anchor, x)


@dataclass(frozen=True)
class Net:
    """A real-valued function defined on a tail of some direction.

    ``anchor=None`` means the function is defined on the whole domain.
    """

    func: Callable[[Point], float]
    anchor: Point = None
    label: str = ""

    def __call__(self, x: Point) -> float:
        return self.func(x)

    def defined_at(self, x: Point, direction: Direction) -> bool:
        return self.anchor is None or direction._precedes(self.anchor, x)

    def values(self, points: Sequence[Point]) -> np.ndarray:
        return evaluate_points(self.func, points)


def as_net(f, label: str = "") -> Net:
    if isinstance(f, Net):
        return f
    return Net(f, None, label or getattr(f, "__name__", ""))


def common_anchor(direction: Direction, *nets: Net) -> Point:
    """Anchor of the tail on which all ``nets`` are defined (join of anchors)."""
    anchors = [n.anchor for n in nets if n.anchor is not None]
    if not anchors:
        return None
    a = anchors[0]
    for b in anchors[1:]:
        a = direction.join(a, b)
    return a


def combine(op: Callable[[float, float], float], f: Net, g: Net, direction: Direction,
            label: str = "") -> Net:
    anchor = common_anchor(direction, f, g)
    return Net(lambda x: op(f.func(x), g.func(x)), anchor, label)


def _scalar(func, x) -> float:
    try:
        return float(func(x))
    except (ZeroDivisionError, OverflowError, ValueError, TypeError):
        return math.nan


def evaluate_points(func, points: Sequence[Point]) -> np.ndarray:
    """Evaluate ``func`` on ``points``, vectorised when the function allows it."""
    if len(points) == 0:
        return np.empty(0)
    if not isinstance(points[0], tuple):
        arr = np.asarray(points, dtype=float)
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(func(arr), dtype=float)
            if out.shape == arr.shape:
                return out
            if out.shape == ():
                return np.full(arr.shape, float(out))
        except EvaluationError:
            raise
        except Exception:
            pass
    with np.errstate(all="ignore"):
        return np.array([_scalar(func, p) for p in points], dtype=float)


def join(direction: Direction, x: Point, y: Point) -> Point:
    return direction.join(x, y)


def cofinal_chain(direction: Direction, n: int, ratio: float | None = None) -> list:
    if n < 1:
        raise ValueError("n must be >= 1")
    return direction.chain(n, ratio)


@dataclass(frozen=True)
class Holds:
    anchor: Point
    checked: int = 0

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class RefutedAt:
    point: Point

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class BudgetExhausted:
    reason: str = ""

    def __bool__(self) -> bool:
        return False


UltimatelyVerdict = Holds | RefutedAt | BudgetExhausted

# a Holds verdict needs at least this many consecutive satisfied segments
MIN_TAIL_SEGMENTS = 3


def ultimately_less(f, g, direction: Direction, budget: int = 60, strict: bool = True,
                    density: int = 32) -> UltimatelyVerdict:
    """Empirical test of ``f -< g``: does f < g (or <=) hold on some tail?

    Probes ``density`` points in each gap of a ``budget``-point chain.  The
    answer is evidence, never proof.
    """
    f, g = as_net(f), as_net(g)
    chain = direction.chain(budget)
    if len(chain) < 2:
        return BudgetExhausted("chain too short")
    ok_per_segment: list[bool] = []
    bad_points: list = []
    checked: list[int] = []
    for x, y in zip(chain, chain[1:]):
        pts = [p for p in direction.segment(x, y, density)
               if f.defined_at(p, direction) and g.defined_at(p, direction)]
        fv, gv = f.values(pts), g.values(pts)
        if np.isnan(fv).any() or np.isnan(gv).any():
            i = int(np.flatnonzero(np.isnan(fv) | np.isnan(gv))[0])
            raise EvaluationError(f"non-finite value at probe point {pts[i]!r}")
        good = fv < gv if strict else fv <= gv
        ok_per_segment.append(bool(good.all()))
        bad_points.append(None if good.all() else pts[int(np.flatnonzero(~good)[0])])
        checked.append(len(pts))
    if not ok_per_segment[-1]:
        return RefutedAt(bad_points[-1])
    k = len(ok_per_segment)
    while k > 0 and ok_per_segment[k - 1]:
        k -= 1
    if len(ok_per_segment) - k < MIN_TAIL_SEGMENTS:
        return BudgetExhausted(f"relation holds only on the last {len(ok_per_segment) - k} segments")
    return Holds(chain[k], sum(checked[k:]))

