"""Central-finite-difference verification of analytic gradients."""

import numpy as np


def max_relative_error(analytic, numeric):
    """max over elements of |a - n| / max(|a|, |n|, 1e-8)."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    if analytic.size == 0:
        return 0.0
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / denom))


def numeric_gradient(loss_fn, value, h=1e-6):
    """Central differences of loss_fn with respect to value, element by element.

    value is perturbed in place and restored exactly afterwards.
    """
    grad = np.zeros_like(value)
    flat = value.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        up = loss_fn()
        flat[i] = orig - h
        down = loss_fn()
        flat[i] = orig
        gflat[i] = (up - down) / (2.0 * h)
    return grad


def gradient_check(run, params, h=1e-6):
    """Compare analytic and numeric gradients for every parameter.

    run() must execute a deterministic forward+backward pass over a fixed
    input and return the scalar loss; analytic gradients land in params.
    Returns the max relative error across all parameters.
    """
    params.zero_grad()
    run()
    analytic = {name: p.grad.copy() for name, p in params.items()}

    def loss_only():
        params.zero_grad()
        return run()

    worst = 0.0
    for name, p in params.items():
        numeric = numeric_gradient(loss_only, p.value, h=h)
        worst = max(worst, max_relative_error(analytic[name], numeric))
    params.zero_grad()
    return worst
