"""Dense numeric primitives: linear maps, softmax, cross-entropy, ReLU."""

import numpy as np

# floor applied to probabilities before taking logs
PROB_FLOOR = 1e-12


def linear_forward(x, weight, bias):
    """Apply weight @ x + bias; x may be a vector (n,) or a batch (B, n)."""
    x = np.asarray(x, dtype=np.float64)
    weight = np.asarray(weight, dtype=np.float64)
    bias = np.asarray(bias, dtype=np.float64)
    if weight.ndim != 2:
        raise ValueError(f"weight must be a matrix, got shape {weight.shape}")
    if x.shape[-1] != weight.shape[1]:
        raise ValueError(
            f"input shape {x.shape} incompatible with weight shape {weight.shape}"
        )
    if bias.shape != (weight.shape[0],):
        raise ValueError(
            f"bias shape {bias.shape} incompatible with weight shape {weight.shape}"
        )
    return x @ weight.T + bias


def softmax(z):
    """Shift-stable softmax along the last axis."""
    z = np.asarray(z, dtype=np.float64)
    if z.size == 0:
        raise ValueError("softmax of empty input")
    shifted = z - z.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(probabilities, gold):
    """-log p[gold], with p floored at PROB_FLOOR."""
    p = np.asarray(probabilities, dtype=np.float64)
    if p.ndim != 1:
        raise ValueError(f"probabilities must be a vector, got shape {p.shape}")
    if not 0 <= gold < p.shape[0]:
        raise ValueError(f"gold index {gold} out of range for {p.shape[0]} classes")
    return -np.log(max(p[gold], PROB_FLOOR))


def softmax_cross_entropy(logits, golds):
    """Mean cross-entropy over a batch of logits (B, k).

    Returns (loss, dlogits) where dlogits is the gradient of the mean loss,
    i.e. (softmax - onehot) / B.
    """
    logits = np.asarray(logits, dtype=np.float64)
    golds = np.asarray(golds, dtype=np.intp)
    if logits.ndim != 2:
        raise ValueError(f"logits must be (batch, classes), got shape {logits.shape}")
    b = logits.shape[0]
    probs = softmax(logits)
    picked = np.maximum(probs[np.arange(b), golds], PROB_FLOOR)
    loss = float(-np.log(picked).mean())
    dlogits = probs.copy()
    dlogits[np.arange(b), golds] -= 1.0
    dlogits /= b
    return loss, dlogits


def relu(x):
    return np.maximum(x, 0.0)


def relu_grad(pre_activation):
    """Derivative of relu at the cached pre-activation (0 at the kink)."""
    return (pre_activation > 0.0).astype(np.float64)
