"""Trainable parameter storage: value + gradient pairs addressed by name."""

import math

import numpy as np


class Parameter:
    """A float64 array with a same-shaped gradient buffer."""

    __slots__ = ("value", "grad")

    def __init__(self, value):
        self.value = np.array(value, dtype=np.float64)
        self.grad = np.zeros_like(self.value)

    @property
    def shape(self):
        return self.value.shape

    def zero_grad(self):
        self.grad[...] = 0.0


class ParameterSet:
    """Ordered, uniquely named collection of Parameters."""

    def __init__(self):
        self._entries = {}

    def add(self, name, value):
        if name in self._entries:
            raise ValueError(f"duplicate parameter name: {name!r}")
        param = value if isinstance(value, Parameter) else Parameter(value)
        self._entries[name] = param
        return param

    def merge(self, other, prefix=""):
        """Absorb another ParameterSet's entries, optionally namespaced."""
        for name, param in other.items():
            self.add(prefix + name, param)
        return self

    def __getitem__(self, name):
        return self._entries[name]

    def __contains__(self, name):
        return name in self._entries

    def __len__(self):
        return len(self._entries)

    def names(self):
        return list(self._entries)

    def items(self):
        return self._entries.items()

    def values(self):
        return self._entries.values()

    def zero_grad(self):
        for param in self._entries.values():
            param.zero_grad()

    def snapshot(self):
        """Deep copy of all parameter values (used for checkpoint/restore)."""
        return {name: p.value.copy() for name, p in self._entries.items()}

    def restore(self, snapshot):
        for name, p in self._entries.items():
            p.value[...] = snapshot[name]


def glorot_uniform(rng, shape, fan_in=None, fan_out=None):
    """Uniform init on +-sqrt(6/(fan_in+fan_out)); fans default to the last/first axis."""
    if fan_in is None:
        fan_in = shape[-1] if len(shape) > 1 else shape[0]
    if fan_out is None:
        fan_out = shape[0]
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)
