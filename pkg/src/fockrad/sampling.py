"""Uniform-grid complex functions with linear interpolation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Samples v_k at x_k = origin + k*step.

    Between nodes the function is linear; outside [x_0, x_last] the
    nearest end value is held.
    """

    origin: float
    step: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.step > 0 and np.isfinite(self.step)):
            raise ValueError("step must be positive")
        s = np.array(self.samples, dtype=complex)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("samples must be a non-empty 1-D array")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "origin", float(self.origin))
        object.__setattr__(self, "step", float(self.step))

    @property
    def nodes(self) -> np.ndarray:
        return self.origin + self.step * np.arange(self.samples.size)

    @property
    def end(self) -> float:
        return self.origin + self.step * (self.samples.size - 1)

    def __len__(self):
        return self.samples.size

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.samples
        if s.size == 1:
            out = np.full(x.shape, s[0])
        else:
            pos = np.clip((x - self.origin) / self.step, 0.0, s.size - 1)
            i = np.minimum(pos.astype(np.intp), s.size - 2)
            frac = pos - i
            out = s[i] * (1.0 - frac) + s[i + 1] * frac
        return out[()] if out.ndim == 0 else out

    def sup_norm(self) -> float:
        return float(np.abs(self.samples).max())

    def restrict(self, lower: float) -> "SampledFunction":
        """Drop the nodes left of ``lower``.

        A node within 1e-9 steps of ``lower`` is moved onto it exactly.
        """
        pos = (lower - self.origin) / self.step
        k = int(np.ceil(pos - 1e-9))
        k = min(max(k, 0), self.samples.size - 1)
        origin = self.origin + k * self.step
        if abs(k - pos) <= 1e-9:
            origin = float(lower)
        return SampledFunction(origin, self.step, self.samples[k:])
