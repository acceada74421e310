"""Concrete directions: one-sided, two-sided, infinities, sequences, partitions."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from netlimit.errors import EvaluationError, ParamError
from netlimit.nets import Direction, Net, evaluate_points

# Closest approach to a finite x0, relative to |x0|.  2**-44 still leaves
# dozens of distinct doubles between neighbouring sub-samples.
REL_HORIZON = 2.0 ** -44
ABS_HORIZON = 1e-290


def _finite(x) -> bool:
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def _dedupe(points: list) -> list:
    return list(dict.fromkeys(points))


def _ordered_unique(arr: np.ndarray) -> list:
    _, idx = np.unique(arr, return_index=True)
    return arr[np.sort(idx)].tolist()


def _check_ratio(ratio: float, field: str = "ratio") -> float:
    if not (0.0 < ratio < 1.0):
        raise ParamError(field, f"must lie in (0, 1), got {ratio}")
    return float(ratio)


class _PointDirection(Direction):
    """Approach to a finite point, ordered by distance to ``x0``."""

    side = 1.0

    def __init__(self, x0: float, h: float = 0.5, ratio: float = 0.5):
        if not _finite(x0):
            raise ParamError("x0", f"must be finite, got {x0}")
        if not (_finite(h) and h > 0):
            raise ParamError("h", f"must be > 0, got {h}")
        self.x0 = float(x0)
        self.h = float(h)
        self.ratio = _check_ratio(ratio)
        self.min_offset = max(REL_HORIZON * abs(self.x0), ABS_HORIZON)

    def _offset(self, x: float) -> float:
        return abs(x - self.x0)

    def _precedes(self, x, y) -> bool:
        return self._offset(y) <= self._offset(x)

    def _place(self, offsets) -> list:
        return (self.x0 + self.side * np.asarray(offsets, dtype=float)).tolist()

    def _mask(self, arr: np.ndarray) -> np.ndarray:
        return np.isfinite(arr) & (self.side * (arr - self.x0) > 0)

    def chain(self, n: int, ratio: float | None = None) -> list:
        r = self.ratio if ratio is None else _check_ratio(ratio)
        out: list[float] = []
        off = self.h
        while len(out) < n and off >= self.min_offset:
            (x,) = self._place([off])
            if not self.contains(x) or (out and x == out[-1]):
                break
            out.append(x)
            off *= r
        return out

    def _offsets_between(self, x, y, count: int) -> np.ndarray:
        a, b = self._offset(x), self._offset(y)
        return a + (b - a) * np.arange(count) / count

    def segment(self, x, y, count: int) -> list:
        arr = self.x0 + self.side * self._offsets_between(x, y, count)
        return _ordered_unique(arr[self._mask(arr)])

    def progress(self, x) -> float:
        return self._offset(x)

    def anchor_report(self, anchor) -> tuple[str, float]:
        return "delta", self._offset(anchor)

    def random_point(self, rng: np.random.Generator) -> float:
        (x,) = self._place([self.h * math.exp(rng.uniform(-25.0, 3.0))])
        return x if self.contains(x) else self.chain(1)[0]


class LeftAt(_PointDirection):
    kind = "left"
    side = -1.0

    def contains(self, x) -> bool:
        return _finite(x) and x < self.x0

    def spec(self) -> str:
        return f"left:{self.x0:g}"


class RightAt(_PointDirection):
    kind = "right"

    def contains(self, x) -> bool:
        return _finite(x) and x > self.x0

    def spec(self) -> str:
        return f"right:{self.x0:g}"


class TwoSidedAt(_PointDirection):
    """Distance order around x0; the chain runs along the right-hand side."""

    kind = "both"

    def contains(self, x) -> bool:
        return _finite(x) and x != self.x0

    def join(self, x, y):
        self.check(x)
        self.check(y)
        dx, dy = self._offset(x), self._offset(y)
        if dx == dy:
            return max(x, y)
        return x if dx < dy else y

    def segment(self, x, y, count: int) -> list:
        offs = self._offsets_between(x, y, count)
        arr = np.concatenate([self.x0 + offs, self.x0 - offs])
        return _ordered_unique(arr[np.isfinite(arr) & (arr != self.x0)])

    def random_point(self, rng: np.random.Generator) -> float:
        x = super().random_point(rng)
        return x if rng.random() < 0.5 else 2 * self.x0 - x

    def spec(self) -> str:
        return f"both:{self.x0:g}"


class _InfiniteDirection(Direction):
    sign = 1.0

    def __init__(self, start: float, growth: float = 2.0, horizon: float = 2.0 ** 64):
        if not (_finite(start) and start * self.sign > 0):
            side = "positive" if self.sign > 0 else "negative"
            raise ParamError("start", f"must be finite and {side}, got {start}")
        if not (_finite(growth) and growth > 1):
            raise ParamError("growth", f"must be > 1, got {growth}")
        self.start = float(start)
        self.growth = float(growth)
        self.horizon = float(horizon)

    def contains(self, x) -> bool:
        return _finite(x)

    def _precedes(self, x, y) -> bool:
        return self.sign * x <= self.sign * y

    def chain(self, n: int, ratio: float | None = None) -> list:
        g = self.growth if ratio is None else 1.0 / _check_ratio(ratio)
        out: list[float] = []
        x = self.start
        while len(out) < n and abs(x) <= self.horizon:
            out.append(x)
            x *= g
        return out

    def segment(self, x, y, count: int) -> list:
        return _ordered_unique(x + (y - x) * np.arange(count) / count)

    def progress(self, x) -> float:
        return 1.0 / (self.sign * x) if self.sign * x > 0 else math.inf

    def anchor_report(self, anchor) -> tuple[str, float]:
        return "N", float(anchor)

    def random_point(self, rng: np.random.Generator) -> float:
        if rng.random() < 0.2:
            return float(rng.uniform(-100.0, 100.0))
        return self.start * math.exp(rng.uniform(0.0, 40.0))


class ToInfinity(_InfiniteDirection):
    kind = "inf"
    sign = 1.0

    def __init__(self, start: float = 1.0, growth: float = 2.0, horizon: float = 2.0 ** 64):
        super().__init__(start, growth, horizon)

    def spec(self) -> str:
        return "inf"


class ToMinusInfinity(_InfiniteDirection):
    kind = "-inf"
    sign = -1.0

    def __init__(self, start: float = -1.0, growth: float = 2.0, horizon: float = 2.0 ** 64):
        super().__init__(start, growth, horizon)

    def spec(self) -> str:
        return "-inf"


class Naturals(Direction):
    """Sequence direction on 1, 2, 3, ...

    The default chain is geometric (``growth=2``) up to ``horizon``; with
    ``growth=1`` it visits every integer.
    """

    kind = "seq"

    def __init__(self, start: int = 1, growth: float = 2.0, horizon: int = 2 ** 20):
        if int(start) != start or start < 1:
            raise ParamError("start", f"must be an integer >= 1, got {start}")
        if not (_finite(growth) and growth >= 1):
            raise ParamError("growth", f"must be >= 1, got {growth}")
        if horizon < start:
            raise ParamError("horizon", "must be >= start")
        self.start = int(start)
        self.growth = float(growth)
        self.horizon = int(horizon)

    def contains(self, x) -> bool:
        try:
            return int(x) == x and x >= 1
        except (TypeError, ValueError, OverflowError):
            return False

    def _precedes(self, x, y) -> bool:
        return x <= y

    def chain(self, n: int, ratio: float | None = None) -> list:
        g = self.growth if ratio is None else 1.0 / _check_ratio(ratio)
        out: list[int] = []
        k = self.start
        while len(out) < n and k <= self.horizon:
            out.append(k)
            k = max(k + 1, int(round(k * g)))
        return out

    def segment(self, x, y, count: int) -> list:
        pts = np.linspace(int(x), int(y), count, endpoint=False).round().astype(np.int64)
        return _dedupe([int(p) for p in pts])

    def progress(self, x) -> float:
        return 1.0 / x

    def anchor_report(self, anchor) -> tuple[str, float]:
        return "N", float(anchor)

    def random_point(self, rng: np.random.Generator) -> int:
        return int(rng.integers(1, 2 ** 40))

    def spec(self) -> str:
        return "seq"


TAG_RULES = ("left", "midpoint", "right")


def mesh(partition) -> float:
    return float(np.max(np.diff(np.asarray(partition, dtype=float))))


class PartitionsOf(Direction):
    """Partitions of [a, b] directed by decreasing mesh.

    Chain points are uniform partitions; the default chain starts from the
    one-cell partition and halves the mesh at every step.
    """

    kind = "riemann"

    def __init__(self, a: float, b: float, tag: str = "midpoint", ratio: float = 0.5,
                 max_cells: int = 2 ** 14):
        if not (_finite(a) and _finite(b)):
            raise ParamError("a", "interval endpoints must be finite")
        if not a < b:
            raise ParamError("b", f"need a < b, got a={a}, b={b}")
        if tag not in TAG_RULES:
            raise ParamError("tag", f"must be one of {TAG_RULES}, got {tag!r}")
        self.a, self.b = float(a), float(b)
        self.tag = tag
        self.ratio = _check_ratio(ratio)
        self.max_cells = int(max_cells)

    def uniform(self, cells: int) -> tuple:
        return tuple(np.linspace(self.a, self.b, cells + 1).tolist())

    def contains(self, p) -> bool:
        if not isinstance(p, tuple) or len(p) < 2:
            return False
        if p[0] != self.a or p[-1] != self.b:
            return False
        return bool(np.all(np.diff(np.asarray(p, dtype=float)) > 0))

    def _precedes(self, p, q) -> bool:
        return mesh(q) <= mesh(p)

    def join(self, p, q):
        self.check(p)
        self.check(q)
        return tuple(sorted(set(p) | set(q)))

    def _cells(self, p) -> int:
        return max(1, int(round((self.b - self.a) / mesh(p))))

    def chain(self, n: int, ratio: float | None = None) -> list:
        r = self.ratio if ratio is None else _check_ratio(ratio)
        out: list[tuple] = []
        c = 1
        while len(out) < n and c <= self.max_cells:
            out.append(self.uniform(c))
            c = max(c + 1, int(round(c / r)))
        return out

    def segment(self, p, q, count: int) -> list:
        lo, hi = self._cells(p), self._cells(q)
        cells = np.linspace(lo, hi, count, endpoint=False).round().astype(int)
        pts = [self.uniform(int(c)) for c in dict.fromkeys(cells.tolist())]
        pts[0] = p
        return pts

    def progress(self, p) -> float:
        return mesh(p)

    def coordinate(self, p) -> float:
        return mesh(p)

    def anchor_report(self, anchor) -> tuple[str, float]:
        return "mesh", mesh(anchor)

    def random_point(self, rng: np.random.Generator) -> tuple:
        k = int(rng.integers(0, 12))
        inner = rng.uniform(self.a, self.b, size=k)
        return tuple(sorted({self.a, self.b, *map(float, inner)}))

    def tags(self, p) -> np.ndarray:
        x = np.asarray(p, dtype=float)
        if self.tag == "left":
            return x[:-1]
        if self.tag == "right":
            return x[1:]
        return 0.5 * (x[:-1] + x[1:])

    def spec(self) -> str:
        return f"riemann:{self.a:g}:{self.b:g}"


def riemann_stieltjes_net(f: Callable, g: Callable, direction: PartitionsOf,
                          label: str = "") -> Net:
    """Net P -> sum f(t_i) * (g(x_{i+1}) - g(x_i)) over the tagged partition P."""

    def value(p) -> float:
        x = np.asarray(p, dtype=float)
        t = direction.tags(p)
        fv = evaluate_points(f, list(t))
        gv = evaluate_points(g, list(x))
        if not np.isfinite(fv).all():
            bad = t[~np.isfinite(fv)][0]
            raise EvaluationError(f"integrand is non-finite at t={bad:g}")
        if not np.isfinite(gv).all():
            bad = x[~np.isfinite(gv)][0]
            raise EvaluationError(f"integrator is non-finite at x={bad:g}")
        return float(np.dot(fv, np.diff(gv)))

    return Net(value, None, label or "riemann-stieltjes sum")


def make_direction(kind: str, **params) -> Direction:
    builders = {
        "left": LeftAt,
        "right": RightAt,
        "both": TwoSidedAt,
        "inf": ToInfinity,
        "-inf": ToMinusInfinity,
        "seq": Naturals,
        "riemann": PartitionsOf,
        "partitions": PartitionsOf,
    }
    try:
        cls = builders[kind]
    except KeyError:
        raise ParamError("kind", f"unknown direction kind {kind!r}") from None
    try:
        return cls(**params)
    except TypeError as exc:
        raise ParamError("params", str(exc)) from None


def _number(text: str, field: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParamError(field, f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ParamError(field, f"must be finite: {text!r}")
    return v


def parse_dirspec(text: str, **extra) -> Direction:
    """Build a direction from ``left:<x0>``, ``right:<x0>``, ``both:<x0>``,
    ``inf``, ``-inf``, ``seq`` or ``riemann:<a>:<b>``."""
    parts = text.strip().split(":")
    head = parts[0]
    if head in ("left", "right", "both"):
        if len(parts) != 2:
            raise ParamError("dir", f"expected {head}:<x0>, got {text!r}")
        return make_direction(head, x0=_number(parts[1], "x0"), **extra)
    if head in ("inf", "-inf", "seq"):
        if len(parts) != 1:
            raise ParamError("dir", f"{head} takes no arguments, got {text!r}")
        return make_direction(head, **extra)
    if head == "riemann":
        if len(parts) != 3:
            raise ParamError("dir", f"expected riemann:<a>:<b>, got {text!r}")
        return make_direction("riemann", a=_number(parts[1], "a"), b=_number(parts[2], "b"), **extra)
    raise ParamError("dir", f"unknown direction {text!r}")
