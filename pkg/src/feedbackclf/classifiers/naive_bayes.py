"""Gaussian naive Bayes for binary labels."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class NbParams:
    var_smoothing: float = 1e-9

    def to_dict(self) -> dict:
        return asdict(self)


class GaussianNB:
    """Per-feature normal class conditionals.

    ``var_smoothing`` times the largest feature variance is added to every
    class variance so constant features do not produce zero variances.
    """

    def __init__(self, params: NbParams = NbParams()):
        self.params = params

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=np.int64)
        eps = self.params.var_smoothing * np.var(X, axis=0).max()
        if eps == 0:
            eps = self.params.var_smoothing
        self.theta = np.vstack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.var = np.vstack([X[y == c].var(axis=0) for c in (0, 1)]) + eps
        self.log_prior = np.log(np.array([np.mean(y == 0), np.mean(y == 1)]))
        return self

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty((len(X), 2))
        for c in (0, 1):
            ll = -0.5 * np.sum(np.log(2.0 * np.pi * self.var[c]))
            ll = ll - 0.5 * np.sum((X - self.theta[c]) ** 2 / self.var[c], axis=1)
            out[:, c] = self.log_prior[c] + ll
        return out

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        top = jll.max(axis=1, keepdims=True)
        p = np.exp(jll - top)
        return p[:, 1] / p.sum(axis=1)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "theta": self.theta.tolist(),
            "var": self.var.tolist(),
            "log_prior": self.log_prior.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianNB":
        m = cls(NbParams(**d["params"]))
        m.theta = np.array(d["theta"], dtype=float)
        m.var = np.array(d["var"], dtype=float)
        m.log_prior = np.array(d["log_prior"], dtype=float)
        return m
