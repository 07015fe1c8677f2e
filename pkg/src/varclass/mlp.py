"""Feed-forward network: rectified hidden layers, softmax output, Adam.

The network functions (init_network, forward, loss_and_gradients) are plain
functions over a parameter list so that gradients can be checked against
finite differences without an estimator in the way. Training is fully
deterministic for a given seed: weight init and the per-epoch shuffles all
come from one generator.
"""

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y
from sklearn.utils.multiclass import unique_labels

from .errors import ConfigError, NumericError
from .ranking import rank_from_scores


def init_network(layer_sizes, rng):
    """He-initialized (W, b) pairs: W ~ N(0, 2/fan_in), b = 0."""
    params = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        W = rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
        params.append((W, np.zeros(fan_out)))
    return params


def forward(params, X):
    """Class probabilities for every row of X."""
    A = X
    for W, b in params[:-1]:
        A = np.maximum(A @ W + b, 0.0)
    W, b = params[-1]
    Z = A @ W + b
    shifted = Z - Z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_gradients(params, X, onehot):
    """Mean cross-entropy and its gradients for one batch.

    Returns (loss, grads) with grads a list of (dW, db) aligned with
    params. The loss uses the log-sum-exp form, so it stays finite for
    any parameter values.
    """
    batch = X.shape[0]
    activations = [X]
    A = X
    for W, b in params[:-1]:
        A = np.maximum(A @ W + b, 0.0)
        activations.append(A)
    W, b = params[-1]
    Z = A @ W + b
    shifted = Z - Z.max(axis=1, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=1))
    loss = float((lse - (shifted * onehot).sum(axis=1)).mean())
    P = np.exp(shifted - lse[:, None])
    delta = (P - onehot) / batch
    grads = [None] * len(params)
    for layer in range(len(params) - 1, -1, -1):
        A_prev = activations[layer]
        grads[layer] = (A_prev.T @ delta, delta.sum(axis=0))
        if layer > 0:
            # rectifier derivative: 1 where the stored activation is positive
            delta = (delta @ params[layer][0].T) * (A_prev > 0)
    return loss, grads


class _Adam:
    """Standard Adam with bias correction; one step per mini-batch."""

    def __init__(self, params, learning_rate, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        self.v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]

    def step(self, params, grads):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        c1 = 1 - b1**self.t
        c2 = 1 - b2**self.t
        lr = self.learning_rate
        out = []
        for (W, b), (dW, db), (mW, mb), (vW, vb) in zip(params, grads, self.m, self.v):
            mW *= b1
            mW += (1 - b1) * dW
            mb *= b1
            mb += (1 - b1) * db
            vW *= b2
            vW += (1 - b2) * dW**2
            vb *= b2
            vb += (1 - b2) * db**2
            out.append(
                (
                    W - lr * (mW / c1) / (np.sqrt(vW / c2) + self.eps),
                    b - lr * (mb / c1) / (np.sqrt(vb / c2) + self.eps),
                )
            )
        return out


class MlpVarietyClassifier(ClassifierMixin, BaseEstimator):
    """Multilayer perceptron over reduced product vectors.

    Parameters
    ----------
    hidden_layers : int
        Number of hidden layers, >= 1; all share the same width.
    hidden_units : int
        Width of each hidden layer, >= 1.
    epochs : int
        Full passes over the training data, >= 1.
    learning_rate : float
        Adam step size, > 0.
    batch_size : int
        Mini-batch size, >= 1; the last batch of an epoch may be smaller.
    seed : int
        Seed for weight initialization and shuffling.

    Attributes
    ----------
    classes_ : ndarray of sorted variety ids.
    params_ : list of (W, b) pairs, input to output.
    loss_curve_ : ndarray of per-epoch mean training cross-entropy.
    """

    def __init__(self, hidden_layers=3, hidden_units=800, epochs=600,
                 learning_rate=0.001, batch_size=32, seed=0):
        self.hidden_layers = hidden_layers
        self.hidden_units = hidden_units
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.seed = seed

    def _validate_params(self):
        for name in ("hidden_layers", "hidden_units", "epochs", "batch_size"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ConfigError(f"{name} must be a positive integer, got {v!r}")
        if not self.learning_rate > 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate!r}")

    def fit(self, X, y, epoch_hook=None):
        """Train the network; epoch_hook(epoch, params) runs after each epoch."""
        self._validate_params()
        X, y = check_X_y(X, y, dtype=np.float64)
        self.classes_ = unique_labels(y)
        class_idx = np.searchsorted(self.classes_, y)
        m = X.shape[0]
        n_classes = len(self.classes_)
        onehot = np.zeros((m, n_classes))
        onehot[np.arange(m), class_idx] = 1.0
        sizes = [X.shape[1]] + [self.hidden_units] * self.hidden_layers + [n_classes]
        rng = np.random.default_rng(self.seed)
        params = init_network(sizes, rng)
        adam = _Adam(params, self.learning_rate)
        curve = []
        for epoch in range(1, self.epochs + 1):
            perm = rng.permutation(m)
            total = 0.0
            for start in range(0, m, self.batch_size):
                sel = perm[start : start + self.batch_size]
                loss, grads = loss_and_gradients(params, X[sel], onehot[sel])
                if not np.isfinite(loss):
                    raise NumericError(
                        f"non-finite training loss at epoch {epoch}, "
                        f"batch {start // self.batch_size}"
                    )
                params = adam.step(params, grads)
                total += loss * len(sel)
            curve.append(total / m)
            if epoch_hook is not None:
                epoch_hook(epoch, params)
        self.params_ = params
        self.loss_curve_ = np.array(curve)
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=np.float64)
        return forward(self.params_, X)

    def predict_ranking(self, X):
        """One RankedPrediction per row, over all fitted varieties."""
        proba = self.predict_proba(X)
        return [rank_from_scores(self.classes_, row) for row in proba]

    def predict(self, X):
        proba = self.predict_proba(X)
        return self.classes_[np.argmax(proba, axis=1)]
