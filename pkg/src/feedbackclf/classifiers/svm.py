"""Linear SVM trained by deterministic hinge-loss subgradient descent (Pegasos)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class SvmParams:
    lam: float = 1e-4
    epochs: int = 10

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


def _logistic(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LinearSVM:
    """Minimizes ``lam/2 |w|^2 + mean(hinge)`` with step ``1/(lam t)``.

    A constant 1 is appended to every row, so the bias is regularized too.
    """

    def __init__(self, params: SvmParams = SvmParams()):
        self.params = params

    def fit(self, X, y, seed: int):
        X = np.asarray(X, dtype=float)
        Xa = np.hstack([X, np.ones((len(X), 1))])
        ys = np.where(np.asarray(y) == 1, 1.0, -1.0)
        lam = self.params.lam
        w = np.zeros(Xa.shape[1])
        rng = np.random.default_rng(seed)
        t = 0
        for _ in range(self.params.epochs):
            for i in rng.permutation(len(ys)):
                t += 1
                eta = 1.0 / (lam * t)
                margin = ys[i] * (w @ Xa[i])
                w *= 1.0 - eta * lam
                if margin < 1.0:
                    w += eta * ys[i] * Xa[i]
        self.w = w[:-1].copy()
        self.b = float(w[-1])
        return self

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.w + self.b

    def predict_proba(self, X) -> np.ndarray:
        return _logistic(self.decision_function(X))

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "w": self.w.tolist(), "b": self.b}

    @classmethod
    def from_dict(cls, d: dict) -> "LinearSVM":
        m = cls(SvmParams(**d["params"]))
        m.w = np.array(d["w"], dtype=float)
        m.b = float(d["b"])
        return m
