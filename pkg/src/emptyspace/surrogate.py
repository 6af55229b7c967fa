"""Surrogate regressor plus the maturity phases it drives.

A small fully-connected network (written on bare numpy so training is
bit-reproducible from a seed) learns one target variable from normalized
inputs.  Its held-out absolute percentage error decides the pipeline phase:
above t1 the model is decoration (Initial), between t2 and t1 it may rank
proposals (Developed), at or below t2 its gradient may refine them (Expert).
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

PHASES = ("Initial", "Developed", "Expert")
MIN_TRAIN_ROWS = 20


class InsufficientDataError(ValueError):
    """Training refused: not enough verified rows."""


@dataclass(frozen=True)
class SurrogateConfig:
    hidden_layers: tuple = (64, 64)
    activation: str = "tanh"  # tanh | identity (identity mainly for tests)
    train_fraction: float = 0.8
    max_epochs: int = 600
    learning_rate: float = 3e-3
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")
        if self.activation not in ("tanh", "identity"):
            raise ValueError(f"unknown activation {self.activation!r}")


def _split_hash(row_id):
    # Stable across processes and dataset growth: a row keeps its bucket.
    # str() so int, numpy int and string ids of the same row agree.
    h = hashlib.sha256(str(row_id).encode()).digest()
    return int.from_bytes(h[:4], "big") / 2**32


def holdout_split(row_ids, train_fraction):
    """Deterministic train/test membership by hashing row ids."""
    ids = np.asarray(row_ids)
    in_train = np.array([_split_hash(i) < train_fraction for i in ids])
    return in_train


class MlpModel:
    """Fully-connected regressor with a linear head.

    Inputs are expected in [0, 1]; the target is standardized internally and
    predictions come back in raw units.
    """

    def __init__(self, weights, biases, activation, y_mean, y_std, data_version=0):
        self.weights = weights
        self.biases = biases
        self.activation = activation
        self.y_mean = float(y_mean)
        self.y_std = float(y_std)
        self.data_version = data_version

    def _act(self, z):
        return np.tanh(z) if self.activation == "tanh" else z

    def _act_grad(self, z):
        if self.activation == "tanh":
            t = np.tanh(z)
            return 1.0 - t * t
        return np.ones_like(z)

    def _forward(self, X):
        zs = []
        a = X
        for W, b in zip(self.weights[:-1], self.biases[:-1]):
            z = a @ W + b
            zs.append(z)
            a = self._act(z)
        out = a @ self.weights[-1] + self.biases[-1]
        return zs, out[:, 0]

    def predict(self, X):
        """Raw-unit prediction for (d,) or (N, d) input."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        _, out = self._forward(np.atleast_2d(X))
        y = out * self.y_std + self.y_mean
        return float(y[0]) if single else y

    def gradient(self, p):
        """Analytic d(prediction)/d(input) at one point, raw units."""
        p = np.asarray(p, dtype=float)
        zs, _ = self._forward(p[None, :])
        g = self.weights[-1][:, 0]  # gradient wrt last hidden activation
        for W, z in zip(reversed(self.weights[:-1]), reversed(zs)):
            g = W @ (self._act_grad(z[0]) * g)
        return g * self.y_std


def _init_net(d, cfg):
    rng = np.random.default_rng(cfg.seed)
    sizes = [d, *cfg.hidden_layers, 1]
    weights, biases = [], []
    for a, b in zip(sizes[:-1], sizes[1:]):
        scale = np.sqrt(2.0 / (a + b))
        weights.append(rng.normal(0.0, scale, size=(a, b)))
        biases.append(np.zeros(b))
    return weights, biases, rng


def train(X, y, row_ids, cfg=SurrogateConfig(), data_version=0):
    """Fit a model and report its held-out APE.

    Returns (model, ape_percent).  Raises InsufficientDataError below
    MIN_TRAIN_ROWS so callers keep their phase untouched.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    row_ids = np.asarray(row_ids)
    if len(X) < MIN_TRAIN_ROWS:
        raise InsufficientDataError(
            f"need at least {MIN_TRAIN_ROWS} verified rows, have {len(X)}"
        )
    in_train = holdout_split(row_ids, cfg.train_fraction)
    if in_train.all() or not in_train.any():
        # Hash split landed everything on one side (tiny data): carve the
        # tail off deterministically instead.
        cut = max(1, int(round(len(X) * cfg.train_fraction)))
        in_train = np.arange(len(X)) < cut

    Xtr, ytr = X[in_train], y[in_train]
    Xte, yte = X[~in_train], y[~in_train]

    y_mean = float(ytr.mean())
    y_std = float(ytr.std())
    if y_std < 1e-12:
        y_std = 1.0
    t = (ytr - y_mean) / y_std

    weights, biases, rng = _init_net(X.shape[1], cfg)
    model = MlpModel(weights, biases, cfg.activation, y_mean, y_std, data_version)

    # Adam on mini-batch MSE.
    mw = [np.zeros_like(W) for W in weights]
    vw = [np.zeros_like(W) for W in weights]
    mb = [np.zeros_like(b) for b in biases]
    vb = [np.zeros_like(b) for b in biases]
    b1, b2, eps = 0.9, 0.999, 1e-8
    step = 0
    n = len(Xtr)
    batch = min(cfg.batch_size, n)
    for _ in range(cfg.max_epochs):
        order = rng.permutation(n)
        for s in range(0, n, batch):
            sel = order[s : s + batch]
            xb, tb = Xtr[sel], t[sel]
            # Forward pass, caching pre-activations.
            zs, acts = [], [xb]
            a = xb
            for W, bias in zip(weights[:-1], biases[:-1]):
                z = a @ W + bias
                zs.append(z)
                a = model._act(z)
                acts.append(a)
            out = (a @ weights[-1] + biases[-1])[:, 0]
            err = (out - tb) / len(xb)

            grads_w = [None] * len(weights)
            grads_b = [None] * len(biases)
            delta = err[:, None]
            grads_w[-1] = acts[-1].T @ delta
            grads_b[-1] = delta.sum(axis=0)
            back = delta @ weights[-1].T
            for li in range(len(weights) - 2, -1, -1):
                back = back * model._act_grad(zs[li])
                grads_w[li] = acts[li].T @ back
                grads_b[li] = back.sum(axis=0)
                if li:
                    back = back @ weights[li].T

            step += 1
            lr = cfg.learning_rate * np.sqrt(1 - b2**step) / (1 - b1**step)
            for li in range(len(weights)):
                mw[li] = b1 * mw[li] + (1 - b1) * grads_w[li]
                vw[li] = b2 * vw[li] + (1 - b2) * grads_w[li] ** 2
                weights[li] -= lr * mw[li] / (np.sqrt(vw[li]) + eps)
                mb[li] = b1 * mb[li] + (1 - b1) * grads_b[li]
                vb[li] = b2 * vb[li] + (1 - b2) * grads_b[li] ** 2
                biases[li] -= lr * mb[li] / (np.sqrt(vb[li]) + eps)

    eval_X, eval_y = (Xte, yte) if len(Xte) else (Xtr, ytr)
    return model, ape(model.predict(eval_X), eval_y, y)


def train_on_dataset(ds, target_name, cfg=SurrogateConfig()):
    """Train against one target of a dataset's verified rows."""
    names = [v.name for v in ds.target_specs]
    if target_name not in names:
        raise ValueError(f"unknown target {target_name!r}")
    col = names.index(target_name)
    X, y, ids = [], [], []
    for i, row in enumerate(ds.rows):
        if row.status == "existing" and row.targets is not None and len(row.targets) > col:
            X.append(row.values)
            y.append(row.targets[col])
            ids.append(i)
    if len(X) < MIN_TRAIN_ROWS:
        raise InsufficientDataError(
            f"need at least {MIN_TRAIN_ROWS} verified rows, have {len(X)}"
        )
    return train(np.array(X), np.array(y), np.array(ids), cfg, data_version=ds.version)


def model_to_dict(model):
    """JSON-ready checkpoint: weights, head scaling, activation."""
    return {
        "weights": [W.tolist() for W in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "activation": model.activation,
        "y_mean": model.y_mean,
        "y_std": model.y_std,
        "data_version": model.data_version,
    }


def model_from_dict(d):
    return MlpModel(
        [np.array(W) for W in d["weights"]],
        [np.array(b) for b in d["biases"]],
        d["activation"],
        d["y_mean"],
        d["y_std"],
        d.get("data_version", 0),
    )


def ape(pred, actual, reference=None):
    """Mean absolute percentage error with a range-scaled division guard.

    reference (default: actual) supplies the target range used to size the
    guard; constant targets fall back to an absolute guard.
    """
    pred = np.asarray(pred, dtype=float)
    actual = np.asarray(actual, dtype=float)
    ref = actual if reference is None else np.asarray(reference, dtype=float)
    span = float(ref.max() - ref.min())
    guard = max(1e-8 * span, 1e-12)
    denom = np.maximum(np.abs(actual), guard)
    return float(np.mean(np.abs(pred - actual) / denom) * 100.0)


# ---------------------------------------------------------------------------
# Phase machine.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseState:
    phase: str = "Initial"
    t1: float = 20.0
    t2: float = 10.0
    error_history: tuple = ()

    def __post_init__(self):
        if self.t2 >= self.t1:
            raise ValueError("thresholds need t2 < t1")


def phase_for(ape_percent, t1=20.0, t2=10.0):
    """Pure threshold rule: >t1 Initial, (t2, t1] Developed, <=t2 Expert."""
    if ape_percent > t1:
        return "Initial"
    if ape_percent > t2:
        return "Developed"
    return "Expert"


def advance_phase(state, ape_percent, data_version=0):
    """Fold one fresh APE measurement into the phase state."""
    return replace(
        state,
        phase=phase_for(ape_percent, state.t1, state.t2),
        error_history=state.error_history + ((data_version, float(ape_percent)),),
    )


def refine(model, p, orientation="maximize", steps=50, eta=0.05, constraints=()):
    """Push a point uphill (or downhill for minimize) on the model surface.

    Plain clipped gradient ascent; stops at the step limit, when predicted
    improvement drops under 1e-6, or when a constraint blocks the move.  The
    returned point never predicts worse than the input.
    """
    from .dataset import violates_any  # local import to avoid cycles

    sign = 1.0 if orientation == "maximize" else -1.0
    cur = np.asarray(p, dtype=float).copy()
    cur_val = sign * model.predict(cur)
    for _ in range(steps):
        g = model.gradient(cur) * sign
        cand = np.clip(cur + eta * g, 0.0, 1.0)
        if bool(violates_any(constraints, cand)[0]):
            break
        cand_val = sign * model.predict(cand)
        if cand_val - cur_val < 1e-6:
            break
        cur, cur_val = cand, cand_val
    return cur
