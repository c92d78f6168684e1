"""Right-continuous piecewise-constant paths on a finite horizon.

A :class:`StepPath` is a pair of arrays ``times``/``values``: the path equals
``values[k]`` on ``[times[k], times[k+1])`` and keeps its last value up to
(and beyond) the horizon. Every supremum or infimum of such a path over an
interval is attained on the grid, which is what makes the reflection formulas
in this package exactly computable.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass

import numpy as np

from .report import DomainError


class PathParseError(DomainError):
    """A path file could not be parsed; the message names the offending row."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class StepPath:
    """Càdlàg step path ``t -> values[k]`` for ``times[k] <= t < times[k+1]``.

    Parameters
    ----------
    times : array_like
        Strictly increasing grid starting at 0.
    values : array_like
        Finite path values, one per grid time.
    horizon : float, optional
        Final time ``T``; defaults to the last grid time and may not be
        smaller than it.
    """

    __slots__ = ("times", "values", "horizon")

    def __init__(self, times, values, horizon: float | None = None):
        t = np.array(times, dtype=float).reshape(-1)
        v = np.array(values, dtype=float).reshape(-1)
        if t.size == 0:
            raise DomainError("a step path needs at least one grid point")
        if t.size != v.size:
            raise DomainError(f"times and values differ in length ({t.size} != {v.size})")
        if t[0] != 0.0:
            raise DomainError(f"grid must start at 0, got {t[0]!r}")
        if not np.all(np.isfinite(t)):
            raise DomainError("grid times must be finite")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            k = int(np.flatnonzero(np.diff(t) <= 0)[0]) + 1
            raise DomainError(f"grid times must be strictly increasing (index {k}: {t[k]!r})")
        if not np.all(np.isfinite(v)):
            raise DomainError("path values must be finite")
        T = float(t[-1]) if horizon is None else float(horizon)
        if not np.isfinite(T) or T < t[-1]:
            raise DomainError(f"horizon {horizon!r} precedes the last grid time {t[-1]!r}")
        object.__setattr__(self, "times", _frozen(t))
        object.__setattr__(self, "values", _frozen(v))
        object.__setattr__(self, "horizon", T)

    def __setattr__(self, name, value):
        raise AttributeError("StepPath is immutable")

    @classmethod
    def constant(cls, value: float, horizon: float = 0.0) -> "StepPath":
        return cls([0.0], [value], horizon)

    @classmethod
    def _trusted(cls, times: np.ndarray, values: np.ndarray, horizon: float) -> "StepPath":
        # Skips validation; only for arrays derived from an already valid path.
        obj = object.__new__(cls)
        object.__setattr__(obj, "times", _frozen(np.asarray(times, dtype=float)))
        object.__setattr__(obj, "values", _frozen(np.asarray(values, dtype=float)))
        object.__setattr__(obj, "horizon", float(horizon))
        return obj

    def __len__(self) -> int:
        return self.times.size

    def __repr__(self) -> str:
        if len(self) <= 6:
            pts = ", ".join(f"({t:g}, {v:g})" for t, v in zip(self.times, self.values))
            return f"StepPath([{pts}], T={self.horizon:g})"
        return f"StepPath(n={len(self)}, T={self.horizon:g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepPath):
            return NotImplemented
        return (
            self.horizon == other.horizon
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def index(self, t):
        """Index of the largest grid time ``<= t`` (vectorised)."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0) or np.any(np.isnan(t_arr)):
            raise DomainError(f"cannot evaluate a path at negative time {t!r}")
        return np.searchsorted(self.times, t_arr, side="right") - 1

    def eval(self, t):
        """Path value at time(s) ``t``; constant after the horizon."""
        idx = self.index(t)
        out = self.values[idx]
        return float(out) if np.ndim(out) == 0 else out

    __call__ = eval

    def with_values(self, values) -> "StepPath":
        """Same grid and horizon, new values."""
        v = np.array(values, dtype=float).reshape(-1)
        if v.size != self.times.size:
            raise DomainError("value array does not match the grid")
        if not np.all(np.isfinite(v)):
            raise DomainError("path values must be finite")
        return StepPath._trusted(self.times, v, self.horizon)

    def resample(self, grid, horizon: float | None = None) -> "StepPath":
        """Represent the same path on a finer grid (which must start at 0)."""
        return StepPath(grid, self.eval(np.asarray(grid, dtype=float)),
                        self.horizon if horizon is None else horizon)

    def same_grid(self, other: "StepPath") -> bool:
        if self.times is other.times:
            return True
        return self.times.shape == other.times.shape and np.array_equal(self.times, other.times)

    # affine algebra: scalars act on values, paths are combined on the merged grid
    def _combine(self, other, op) -> "StepPath":
        if isinstance(other, StepPath):
            if self.same_grid(other):
                return StepPath(self.times, op(self.values, other.values),
                                max(self.horizon, other.horizon))
            grid = merged_grid(self, other)
            return StepPath(grid, op(self.eval(grid), other.eval(grid)),
                            max(self.horizon, other.horizon))
        return self.with_values(op(self.values, float(other)))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self.with_values(float(other) - self.values)

    def __neg__(self):
        return self.with_values(-self.values)

    def __mul__(self, c):
        return self.with_values(self.values * float(c))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"times": self.times.tolist(), "values": self.values.tolist()}


@dataclass(frozen=True)
class Band:
    """Closed interval ``[z, a]`` with ``z < a``."""

    z: float
    a: float

    def __post_init__(self):
        z, a = float(self.z), float(self.a)
        if not (np.isfinite(z) and np.isfinite(a)):
            raise DomainError(f"band limits must be finite, got [{self.z}, {self.a}]")
        if not z < a:
            raise DomainError(f"band needs z < a, got [{self.z}, {self.a}]")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "a", a)

    @property
    def width(self) -> float:
        return self.a - self.z

    def project(self, x):
        return project_band(x, self)


def as_band(band) -> Band:
    if isinstance(band, Band):
        return band
    z, a = band
    return Band(z, a)


def evaluate(p: StepPath, t):
    return p.eval(t)


def project_band(x, band: Band):
    """Nearest point of ``[z, a]``: ``a`` above the band, ``z`` below it."""
    band = as_band(band)
    if np.ndim(x) == 0:
        return min(max(float(x), band.z), band.a)
    return np.minimum(np.maximum(np.asarray(x, dtype=float), band.z), band.a)


def shift(p: StepPath, r: float) -> StepPath:
    """The increment path ``t -> p(r + t) - p(r)`` on ``[0, T - r]``."""
    r = float(r)
    if not 0.0 <= r <= p.horizon:
        raise DomainError(f"shift {r!r} outside [0, {p.horizon!r}]")
    k = int(p.index(r))
    base = p.values[k]
    times = np.concatenate(([0.0], p.times[k + 1:] - r))
    values = p.values[k:] - base
    return StepPath(times, values, p.horizon - r)


def merged_grid(*paths: StepPath, T: float | None = None) -> np.ndarray:
    grid = np.unique(np.concatenate([p.times for p in paths]))
    if T is not None:
        grid = grid[grid <= T]
    return grid


def uniform_distance(p1: StepPath, p2: StepPath, T: float | None = None) -> float:
    """Sup-norm distance on ``[0, T]``; exact because the difference is a step path."""
    if T is None:
        T = max(p1.horizon, p2.horizon)
    if T < 0:
        raise DomainError(f"negative horizon {T!r}")
    if p1.same_grid(p2):
        keep = p1.times <= T
        diff = p1.values[keep] - p2.values[keep]
    else:
        grid = merged_grid(p1, p2, T=T)
        diff = p1.eval(grid) - p2.eval(grid)
    return float(np.max(np.abs(diff)))


def oscillation(p: StepPath, t1: float, t2: float) -> float:
    """``max - min`` of the path over the closed window ``[t1, t2]``."""
    if t1 > t2:
        raise DomainError(f"empty window [{t1}, {t2}]")
    i, j = int(p.index(t1)), int(p.index(t2))
    window = p.values[i:j + 1]
    return float(window.max() - window.min())


# --- file formats ---------------------------------------------------------

def parse_csv(text: str, source: str = "<csv>") -> StepPath:
    reader = csv.reader(io.StringIO(text))
    rows = [(n, row) for n, row in enumerate(reader, start=1) if any(c.strip() for c in row)]
    if not rows:
        raise PathParseError(f"{source}: empty file")
    lineno, header = rows[0]
    if [c.strip().lower() for c in header] != ["t", "value"]:
        raise PathParseError(f"{source}: line {lineno}: expected header 't,value', got {','.join(header)!r}")
    times, values = [], []
    for lineno, row in rows[1:]:
        if len(row) != 2:
            raise PathParseError(f"{source}: line {lineno}: expected 2 columns, got {len(row)}")
        try:
            t, v = float(row[0]), float(row[1])
        except ValueError:
            raise PathParseError(f"{source}: line {lineno}: not a number: {','.join(row)!r}") from None
        if times and not t > times[-1]:
            raise PathParseError(f"{source}: line {lineno}: time {t!r} does not increase")
        times.append(t)
        values.append(v)
    if not times:
        raise PathParseError(f"{source}: no data rows")
    if times[0] != 0.0:
        raise PathParseError(f"{source}: line {rows[1][0]}: first time must be 0, got {times[0]!r}")
    try:
        return StepPath(times, values)
    except DomainError as exc:
        raise PathParseError(f"{source}: {exc}") from None


def parse_json(text: str, source: str = "<json>") -> StepPath:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PathParseError(f"{source}: line {exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict) or "times" not in obj or "values" not in obj:
        raise PathParseError(f"{source}: expected an object with 'times' and 'values'")
    times, values = obj["times"], obj["values"]
    if len(times) != len(values):
        raise PathParseError(f"{source}: 'times' and 'values' differ in length")
    for k, (t, v) in enumerate(zip(times, values)):
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (t, v)):
            raise PathParseError(f"{source}: row {k}: not a number: {t!r}, {v!r}")
        if k and not t > times[k - 1]:
            raise PathParseError(f"{source}: row {k}: time {t!r} does not increase")
    try:
        return StepPath(times, values)
    except DomainError as exc:
        raise PathParseError(f"{source}: {exc}") from None


def read_path(path) -> StepPath:
    """Load a path from a ``.csv`` (``t,value``) or ``.json`` file."""
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.lower().endswith(".json") or text.lstrip().startswith("{"):
        return parse_json(text, path)
    return parse_csv(text, path)


def format_csv(p: StepPath) -> str:
    lines = ["t,value"]
    lines.extend(f"{t!r},{v!r}" for t, v in zip(p.times.tolist(), p.values.tolist()))
    return "\n".join(lines) + "\n"


def write_path(p: StepPath, path, fmt: str | None = None) -> None:
    path = os.fspath(path)
    fmt = fmt or ("csv" if path.lower().endswith(".csv") else "json")
    with open(path, "w", encoding="utf-8") as fh:
        if fmt == "csv":
            fh.write(format_csv(p))
        else:
            json.dump(p.to_dict(), fh)
