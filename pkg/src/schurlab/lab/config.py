"""Plain-text experiment configuration: ``key = value`` lines, lists as ``a,b,c``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


def parse_scalar(text: str):
    """int, float, fraction ``1/3`` (as float), ``inf``, ``true``/``false`` or a bare string."""
    s = text.strip()
    low = s.lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        pass
    if "/" in s:
        try:
            return float(Fraction(s))
        except (ValueError, ZeroDivisionError):
            pass
    return s


def parse_value(text: str):
    """A list when the value contains commas, else a scalar; ``a..b`` expands an integer range."""
    s = text.strip()
    if ".." in s and "," not in s:
        a, b = s.split("..", 1)
        lo, hi = parse_scalar(a), parse_scalar(b)
        if isinstance(lo, int) and isinstance(hi, int):
            return list(range(lo, hi + 1))
    if "," in s:
        return [parse_scalar(t) for t in s.split(",") if t.strip()]
    return parse_scalar(s)


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ValueError(f"line {lineno}: empty key")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = parse_value(value)
    return out


@dataclass
class ExperimentConfig:
    """Named experiment with a parameter grid; every list must be nonempty."""

    experiment: str
    params: dict = field(default_factory=dict)
    output: str | None = None

    def __post_init__(self):
        for k, v in self.params.items():
            if isinstance(v, (list, tuple)) and len(v) == 0:
                raise ValueError(f"grid {k!r} is empty")

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        d = parse_config_text(text)
        if "experiment" not in d:
            raise ValueError("config needs an 'experiment' key")
        name = str(d.pop("experiment"))
        out = d.pop("output", None)
        return cls(name, d, None if out is None else str(out))

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        return cls.from_text(Path(path).read_text())

    def grid(self, key: str, default) -> list:
        v = self.params.get(key, default)
        return list(v) if isinstance(v, (list, tuple, range)) else [v]

    def scalar(self, key: str, default):
        v = self.params.get(key, default)
        if isinstance(v, (list, tuple)):
            if len(v) != 1:
                raise ValueError(f"{key!r} must be a single value")
            v = v[0]
        return v
