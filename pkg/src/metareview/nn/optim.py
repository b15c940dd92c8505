"""Gradient-descent update rules. step() consumes and zeroes the gradients."""

import numpy as np

from ..errors import ConfigurationError


class SGD:
    kind = "sgd"

    def __init__(self, learning_rate=1e-3):
        self.learning_rate = float(learning_rate)
        self.step_count = 0

    def step(self, params):
        for _, p in params.items():
            p.value -= self.learning_rate * p.grad
        params.zero_grad()
        self.step_count += 1


class Adam:
    kind = "adam"

    def __init__(self, learning_rate=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.learning_rate = float(learning_rate)
        self.beta1 = float(beta1)
        self.beta2 = float(beta2)
        self.eps = float(eps)
        self.step_count = 0
        # per-parameter first/second moment buffers, keyed by name
        self._m = {}
        self._v = {}

    def step(self, params):
        self.step_count += 1
        t = self.step_count
        b1, b2 = self.beta1, self.beta2
        for name, p in params.items():
            m = self._m.get(name)
            if m is None:
                m = self._m[name] = np.zeros_like(p.value)
                self._v[name] = np.zeros_like(p.value)
            v = self._v[name]
            g = p.grad
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            m_hat = m / (1.0 - b1**t)
            v_hat = v / (1.0 - b2**t)
            p.value -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)
        params.zero_grad()


def make_optimizer(kind, learning_rate=1e-3):
    if kind == "sgd":
        return SGD(learning_rate)
    if kind == "adam":
        return Adam(learning_rate)
    raise ConfigurationError(f"unknown optimizer kind: {kind!r} (expected sgd|adam)")
