"""Min-max feature scaling fitted on training rows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..corpus import fingerprint_ids


@dataclass(frozen=True)
class Scaler:
    minimum: np.ndarray
    maximum: np.ndarray
    fitted_on: str = ""
    fitted_ids: tuple = ()

    @property
    def dimension(self) -> int:
        return len(self.minimum)

    def to_dict(self) -> dict:
        return {"min": [float(v) for v in self.minimum], "max": [float(v) for v in self.maximum], "fitted_on": self.fitted_on}

    @classmethod
    def from_dict(cls, d: dict) -> "Scaler":
        return cls(np.array(d["min"], dtype=float), np.array(d["max"], dtype=float), d.get("fitted_on", ""))


def fit_scaler(X, ids=None) -> Scaler:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[0] == 0:
        raise ValueError("cannot fit a scaler on zero rows")
    ids = tuple(ids) if ids is not None else ()
    return Scaler(X.min(axis=0), X.max(axis=0), fingerprint_ids(ids) if ids else "", ids)


def scale(s: Scaler, v):
    """Map each feature to [0, 1]; constant features become 0, test values are clipped.

    Accepts a 1-D vector, a 2-D matrix, or a FeatureVector.
    """
    from .assemble import FeatureVector

    if isinstance(v, FeatureVector):
        return FeatureVector(v.names, scale(s, v.values), v.groups)
    X = np.asarray(v, dtype=float)
    if X.shape[-1] != s.dimension:
        raise ValueError(f"dimension mismatch: scaler has {s.dimension} features, input has {X.shape[-1]}")
    span = s.maximum - s.minimum
    safe = np.where(span > 0, span, 1.0)
    out = np.where(span > 0, (X - s.minimum) / safe, 0.0)
    return np.clip(out, 0.0, 1.0)
