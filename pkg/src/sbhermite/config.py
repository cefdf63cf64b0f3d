"""Run configuration: quadrature orders, tolerances, sweep bounds and outputs."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import tomli
import tomli_w

DEFAULT_TOLERANCES = {
    "coefficient": 1e-12,  # exact polynomial algebra
    "vanishing": 1e-10,  # relative to the polynomial norm
    "series": 1e-9,  # truncated series vs closed form
    "quadrature": 1e-8,  # one Gauss-Hermite rule on C or R
    "representation": 1e-7,  # oscillatory integral representations
    "composed": 1e-6,  # C^2 quadrature and composed transforms
    "roundtrip": 1e-5,  # inverse transforms of quadrature outputs
}


@dataclass
class RunConfig:
    """Everything a suite run depends on besides the code itself."""

    N_r: int = 80
    N_c: int = 80
    N_c2: int = 40
    N_line: int = 1024
    L: float = 20.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    nus: tuple = (0.5, 1.0, 2.0)
    max_order: int = 6
    max_order_c2: int = 4
    points: int = 5
    combos: int = 5
    series_terms: int = 64
    radius: float = 2.0
    seed: int = 7
    out: str = "report.json"
    csv: str = "summary.csv"
    chunk: int = 160
    workers: int = 1

    def __post_init__(self):
        self.nus = tuple(float(v) for v in self.nus)
        self.tolerances = {**DEFAULT_TOLERANCES, **{k: float(v) for k, v in self.tolerances.items()}}
        for name in ("N_r", "N_c", "N_c2", "N_line", "points", "combos", "series_terms", "chunk", "workers"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.max_order < 0 or self.max_order_c2 < 0:
            raise ValueError("orders must be nonnegative")
        if not (self.L > 0 and self.radius > 0):
            raise ValueError("L and radius must be positive")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if not self.nus or any(v <= 0 for v in self.nus):
            raise ValueError("nus must be a nonempty list of positive values")

    def tolerance(self, cls: str) -> float:
        return self.tolerances[cls]

    def orders(self) -> dict:
        return {"N_r": self.N_r, "N_c": self.N_c, "N_c2": self.N_c2, "N_line": self.N_line, "L": self.L}

    def numerics(self) -> dict:
        """Settings that can change a computed value (everything but output paths and workers)."""
        d = self.to_dict()
        for key in ("out", "csv", "workers"):
            d.pop(key)
        return d

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["nus"] = list(self.nus)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        return cls.from_dict(tomli.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.loads(Path(path).read_text())
