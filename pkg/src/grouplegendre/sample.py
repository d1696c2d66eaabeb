"""Point clouds sampled from generated Lagrangian submanifolds."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class LagrangianSample:
    """``{(parameter, phase-space point)}`` plus per-point residual columns.

    ``points`` may carry any trailing shape and may be complex; :meth:`table`
    flattens it, splitting complex entries into real and imaginary columns.
    """

    params: np.ndarray
    points: np.ndarray
    param_names: list[str]
    point_names: list[str] | None = None
    residuals: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float).reshape(len(self.points), -1)
        self.points = np.asarray(self.points)
        if len(self.param_names) != self.params.shape[1]:
            raise ValueError("one name per parameter column is required")

    def __len__(self) -> int:
        return len(self.points)

    def _flat_points(self) -> tuple[list[str], np.ndarray]:
        flat = self.points.reshape(len(self), -1)
        names = self.point_names or [f"z{k}" for k in range(flat.shape[1])]
        if np.iscomplexobj(flat):
            cols = [f"{nm}_{part}" for nm in names for part in ("re", "im")]
            data = np.stack([flat.real, flat.imag], axis=-1).reshape(len(self), -1)
            return cols, data
        return list(names), flat.astype(float)

    def table(self) -> tuple[list[str], np.ndarray]:
        pnames, pdata = self._flat_points()
        res = [np.asarray(v, dtype=float).reshape(len(self), 1) for v in self.residuals.values()]
        cols = list(self.param_names) + pnames + list(self.residuals)
        return cols, np.hstack([self.params, pdata] + res)
