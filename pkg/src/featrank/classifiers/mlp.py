"""Single-hidden-layer network: tanh units into a logistic output.

Trained by seeded mini-batch gradient descent on mean cross-entropy. The
analytic gradient lives in one routine shared by training and the finite-
difference check, so the check exercises exactly what training uses.
"""

from __future__ import annotations

import numpy as np

_P_EPS = 1e-12


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -36.0, 36.0)))


def _loss_and_grads(params, x_mat, y):
    """Mean cross-entropy and its gradient w.r.t. (w1, b1, w2, b2)."""
    w1, b1, w2, b2 = params
    n = len(y)
    hidden = np.tanh(x_mat @ w1 + b1)
    p = _sigmoid(hidden @ w2 + b2)
    clipped = np.clip(p, _P_EPS, 1.0 - _P_EPS)
    loss = float(-np.mean(y * np.log(clipped) + (1.0 - y) * np.log(1.0 - clipped)))

    delta_out = (p - y) / n  # d loss / d (output pre-activation)
    g_w2 = hidden.T @ delta_out
    g_b2 = float(delta_out.sum())
    delta_hidden = np.outer(delta_out, w2) * (1.0 - hidden * hidden)
    g_w1 = x_mat.T @ delta_hidden
    g_b1 = delta_hidden.sum(axis=0)
    return loss, (g_w1, g_b1, g_w2, g_b2)


class Mlp:
    def __init__(
        self,
        hidden: int = 16,
        learning_rate: float = 0.01,
        epochs: int = 200,
        batch_size: int = 32,
        init_scale: float = 0.1,
    ):
        self.hidden = hidden
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.batch_size = batch_size
        self.init_scale = init_scale
        self.params = None  # (w1, b1, w2, b2)

    def _init_params(self, n_inputs: int, rng: np.random.Generator):
        s = self.init_scale
        w1 = rng.uniform(-s, s, size=(n_inputs, self.hidden))
        b1 = rng.uniform(-s, s, size=self.hidden)
        w2 = rng.uniform(-s, s, size=self.hidden)
        b2 = float(rng.uniform(-s, s))
        return [w1, b1, w2, b2]

    def fit(self, x_mat, y, seed: int = 0):
        y = np.asarray(y, dtype=float)
        n = len(y)
        rng = np.random.default_rng(seed)
        params = self._init_params(x_mat.shape[1], rng)
        lr = self.learning_rate
        for _ in range(self.epochs):
            perm = rng.permutation(n)
            for start in range(0, n, self.batch_size):
                batch = perm[start : start + self.batch_size]
                _, grads = _loss_and_grads(params, x_mat[batch], y[batch])
                for i in range(4):
                    params[i] = params[i] - lr * grads[i]
        self.params = tuple(params)
        return self

    def scores(self, x_mat) -> np.ndarray:
        w1, b1, w2, b2 = self.params
        hidden = np.tanh(x_mat @ w1 + b1)
        return _sigmoid(hidden @ w2 + b2)

    def to_dict(self) -> dict:
        w1, b1, w2, b2 = self.params
        return {
            "hidden": self.hidden,
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "init_scale": self.init_scale,
            "w1": [[float(v) for v in row] for row in w1],
            "b1": [float(v) for v in b1],
            "w2": [float(v) for v in w2],
            "b2": float(b2),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Mlp":
        model = cls(d["hidden"], d["learning_rate"], d["epochs"], d["batch_size"], d["init_scale"])
        model.params = (
            np.asarray(d["w1"], dtype=float),
            np.asarray(d["b1"], dtype=float),
            np.asarray(d["w2"], dtype=float),
            float(d["b2"]),
        )
        return model


def gradient_check(mlp: Mlp, x_mat, y, epsilon: float, seed: int = 0, n_coords: int = 40) -> float:
    """Max relative error between analytic and central-difference gradients.

    Evaluated at a seeded random parameter point over at least 20 sampled
    coordinates (all coordinates when the network is small). The relative
    error uses an absolute floor so near-zero gradient coordinates cannot
    inflate the ratio.
    """
    if not 1e-7 <= epsilon <= 1e-3:
        raise ValueError("epsilon must be within [1e-7, 1e-3]")
    y = np.asarray(y, dtype=float)
    rng = np.random.default_rng(seed)
    d, h = x_mat.shape[1], mlp.hidden
    params = [
        rng.uniform(-0.5, 0.5, size=(d, h)),
        rng.uniform(-0.5, 0.5, size=h),
        rng.uniform(-0.5, 0.5, size=h),
        float(rng.uniform(-0.5, 0.5)),
    ]

    _, grads = _loss_and_grads(params, x_mat, y)
    flat_analytic = np.concatenate([np.ravel(g) for g in grads])
    total = flat_analytic.size
    n_coords = max(20, n_coords)
    coords = (
        np.arange(total) if total <= n_coords else np.sort(rng.choice(total, n_coords, False))
    )

    def loss_with(flat):
        d = x_mat.shape[1]
        h = mlp.hidden
        w1 = flat[: d * h].reshape(d, h)
        b1 = flat[d * h : d * h + h]
        w2 = flat[d * h + h : d * h + 2 * h]
        b2 = float(flat[-1])
        return _loss_and_grads((w1, b1, w2, b2), x_mat, y)[0]

    flat = np.concatenate(
        [np.ravel(params[0]), np.ravel(params[1]), np.ravel(params[2]), [params[3]]]
    )
    worst = 0.0
    for c in coords:
        bumped = flat.copy()
        bumped[c] = flat[c] + epsilon
        up = loss_with(bumped)
        bumped[c] = flat[c] - epsilon
        down = loss_with(bumped)
        numeric = (up - down) / (2.0 * epsilon)
        analytic = flat_analytic[c]
        rel = abs(analytic - numeric) / max(1e-3, abs(analytic) + abs(numeric))
        worst = max(worst, rel)
    return worst
