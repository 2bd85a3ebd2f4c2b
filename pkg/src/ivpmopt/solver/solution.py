from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

STATUSES = ("optimal", "local-optimal", "unbounded", "iteration-limit")


@dataclass
class Solution:
    status: str
    variables: tuple[str, ...]
    x: np.ndarray
    psi: np.ndarray
    zeta: np.ndarray
    objective: float
    iterations: int
    method: str
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.x = np.asarray(self.x, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        self.zeta = np.asarray(self.zeta, dtype=float)

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "x": {name: float(v) for name, v in zip(self.variables, self.x)},
            "psi": [float(v) for v in self.psi],
            "zeta": [float(v) for v in self.zeta],
            "objective": float(self.objective),
            "method": self.method,
            "iterations": int(self.iterations),
        }
