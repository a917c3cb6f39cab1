"""L2-regularized logistic regression fit by damped Newton iterations.

The objective is mean cross-entropy plus (l2/2) * ||w||^2 over the
non-intercept coefficients. Full Newton steps are backtracked (halved) until
the objective does not increase, which keeps the optimizer monotone even on
separable data; iteration stops at the gradient-norm tolerance or the
iteration cap.
"""

from __future__ import annotations

import numpy as np

_P_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -36.0, 36.0)))


class LogisticGlm:
    def __init__(self, l2: float = 1e-4, tol: float = 1e-6, max_iter: int = 500):
        self.l2 = l2
        self.tol = tol
        self.max_iter = max_iter
        self.coef: np.ndarray | None = None  # [intercept, weights...]

    def _objective(self, xd, y, w):
        p = _sigmoid(xd @ w)
        p = np.clip(p, _P_EPS, 1.0 - _P_EPS)
        nll = -np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
        return nll + 0.5 * self.l2 * float(w[1:] @ w[1:])

    def fit(self, x_mat, y, seed: int = 0):
        del seed
        y = np.asarray(y, dtype=float)
        n = len(y)
        xd = np.hstack([np.ones((n, 1)), x_mat])
        d = xd.shape[1]
        reg_mask = np.ones(d)
        reg_mask[0] = 0.0
        w = np.zeros(d)
        obj = self._objective(xd, y, w)
        for _ in range(self.max_iter):
            p = _sigmoid(xd @ w)
            grad = xd.T @ (p - y) / n + self.l2 * reg_mask * w
            if float(np.linalg.norm(grad)) <= self.tol:
                break
            h_weights = np.maximum(p * (1.0 - p), _P_EPS)
            hess = (xd * h_weights[:, None]).T @ xd / n + self.l2 * np.diag(reg_mask)
            try:
                step = np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = np.linalg.solve(hess + 1e-10 * np.eye(d), grad)
            scale = 1.0
            for _ in range(30):
                candidate = w - scale * step
                cand_obj = self._objective(xd, y, candidate)
                if cand_obj <= obj:
                    break
                scale *= 0.5
            else:
                break  # no productive step remains
            w, obj = candidate, cand_obj
        self.coef = w
        return self

    def scores(self, x_mat) -> np.ndarray:
        z = self.coef[0] + x_mat @ self.coef[1:]
        return _sigmoid(z)

    def to_dict(self) -> dict:
        return {
            "l2": self.l2,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "coef": [float(v) for v in self.coef],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogisticGlm":
        model = cls(d["l2"], d["tol"], d["max_iter"])
        model.coef = np.asarray(d["coef"], dtype=float)
        return model
