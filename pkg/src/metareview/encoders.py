"""Document encoders: token embeddings + mean pooling or convolutional features.

Both encoders operate on batches of padded id sequences and implement an
analytic backward pass that accumulates into the shared embedding table.
"""

import numpy as np

from .errors import DataFormatError
from .nn.ops import relu, relu_grad
from .nn.params import Parameter, ParameterSet, glorot_uniform
from .preprocess import Vocabulary


def dropout_mask(dim, p, rng, training=True):
    """Inverted-dropout mask: kept units scaled by 1/(1-p); identity at inference."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"dropout probability must be in [0, 1), got {p}")
    if not training or p == 0.0:
        return np.ones(dim, dtype=np.float64)
    keep = rng.random(dim) >= p
    return keep.astype(np.float64) / (1.0 - p)


class EmbeddingTable:
    """Trainable token-embedding matrix; the PAD row stays frozen at zero."""

    def __init__(self, vocab_size, dim=128, rng=None, init=None):
        self.vocab_size = vocab_size
        self.dim = dim
        if init is not None:
            values = np.array(init, dtype=np.float64)
            if values.shape != (vocab_size, dim):
                raise ValueError(
                    f"init shape {values.shape} != ({vocab_size}, {dim})"
                )
        else:
            values = glorot_uniform(rng, (vocab_size, dim), fan_in=vocab_size, fan_out=dim)
        values[Vocabulary.PAD_ID] = 0.0
        self.weight = Parameter(values)

    def lookup(self, ids):
        return self.weight.value[ids]

    def accumulate_grad(self, ids, grad):
        np.add.at(self.weight.grad, ids, grad)
        self.weight.grad[Vocabulary.PAD_ID] = 0.0

    def parameters(self):
        ps = ParameterSet()
        ps.add("embeddings", self.weight)
        return ps

    def load_pretrained(self, vocab, path):
        """Initialize rows from a text file of `token v1 ... vdim` lines."""
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != self.dim + 1:
                    raise DataFormatError(
                        f"expected 1 token + {self.dim} values, got {len(parts)} fields",
                        line=lineno,
                    )
                token = parts[0]
                if token not in vocab:
                    continue
                try:
                    row = np.array([float(v) for v in parts[1:]], dtype=np.float64)
                except ValueError as exc:
                    raise DataFormatError(str(exc), line=lineno) from exc
                self.weight.value[vocab.id_of(token)] = row
        self.weight.value[Vocabulary.PAD_ID] = 0.0


class MeanPoolEncoder:
    """Average of the first true_len embedding rows (PAD positions excluded)."""

    def __init__(self, table):
        self.table = table
        self.output_dim = table.dim
        self._cache = None

    def forward(self, ids, true_len, training=False, rng=None):
        emb = self.table.lookup(ids)  # (B, L, E)
        length = np.arange(ids.shape[1])
        mask = length[None, :] < true_len[:, None]  # (B, L)
        denom = np.maximum(true_len, 1).astype(np.float64)
        out = (emb * mask[:, :, None]).sum(axis=1) / denom[:, None]
        self._cache = (ids, mask, denom)
        return out

    def backward(self, dout):
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        ids, mask, denom = self._cache
        demb = mask[:, :, None] * (dout / denom[:, None])[:, None, :]
        self.table.accumulate_grad(ids, demb)
        self._cache = None

    def parameters(self):
        return ParameterSet()


class TextCNNEncoder:
    """Parallel 1-D convolutions over embedding windows, ReLU, max-over-time.

    One branch per filter width; each contributes filters_per_size pooled
    values, concatenated into the document vector. Windows never cross the
    true_len boundary; documents shorter than a filter width fall back to the
    single zero-padded window at position 0. Dropout (inverted scaling) is
    applied to the concatenated vector in training mode only.
    """

    def __init__(self, table, filter_sizes=(2, 3, 5), filters_per_size=32, dropout=0.5, rng=None):
        self.table = table
        self.filter_sizes = tuple(filter_sizes)
        self.filters_per_size = filters_per_size
        self.dropout = dropout
        self.output_dim = filters_per_size * len(self.filter_sizes)
        self.weights = []
        self.biases = []
        for size in self.filter_sizes:
            fan_in = size * table.dim
            w = glorot_uniform(rng, (filters_per_size, fan_in), fan_in=fan_in, fan_out=filters_per_size)
            self.weights.append(Parameter(w))
            self.biases.append(Parameter(np.zeros(filters_per_size)))
        self._cache = None

    def _windows(self, emb, size):
        # (B, L, E) -> (B, L-size+1, size*E)
        b, length, dim = emb.shape
        positions = length - size + 1
        view = np.lib.stride_tricks.sliding_window_view(emb, size, axis=1)
        return view.transpose(0, 1, 3, 2).reshape(b, positions, size * dim)

    def forward(self, ids, true_len, training=False, rng=None):
        if np.any(np.asarray(self.filter_sizes) > ids.shape[1]):
            raise ValueError(
                f"filter sizes {self.filter_sizes} exceed sequence length {ids.shape[1]}"
            )
        emb = self.table.lookup(ids)
        branches = []
        pooled_parts = []
        for size, w, b in zip(self.filter_sizes, self.weights, self.biases):
            windows = self._windows(emb, size)
            pre = windows @ w.value.T + b.value  # (B, P, F)
            act = relu(pre)
            positions = windows.shape[1]
            valid = np.clip(true_len - size + 1, 1, positions)
            pos_mask = np.arange(positions)[None, :] < valid[:, None]
            masked = np.where(pos_mask[:, :, None], act, -np.inf)
            argmax = masked.argmax(axis=1)  # (B, F)
            pooled = np.take_along_axis(masked, argmax[:, None, :], axis=1)[:, 0, :]
            branches.append((windows, pre, argmax))
            pooled_parts.append(pooled)
        out = np.concatenate(pooled_parts, axis=1)
        mask = None
        if training and self.dropout > 0.0:
            mask = np.stack(
                [dropout_mask(self.output_dim, self.dropout, rng) for _ in range(out.shape[0])]
            )
            out = out * mask
        self._cache = (ids, emb.shape, branches, mask)
        return out

    def backward(self, dout):
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        ids, emb_shape, branches, mask = self._cache
        if mask is not None:
            dout = dout * mask
        demb = np.zeros(emb_shape)
        f = self.filters_per_size
        for i, (size, w, b) in enumerate(zip(self.filter_sizes, self.weights, self.biases)):
            windows, pre, argmax = branches[i]
            dpooled = dout[:, i * f : (i + 1) * f]  # (B, F)
            dact = np.zeros_like(pre)
            np.put_along_axis(dact, argmax[:, None, :], dpooled[:, None, :], axis=1)
            dpre = dact * relu_grad(pre)
            positions = windows.shape[1]
            w.grad += dpre.reshape(-1, f).T @ windows.reshape(-1, windows.shape[2])
            b.grad += dpre.sum(axis=(0, 1))
            dwin = dpre @ w.value  # (B, P, size*E)
            dwin = dwin.reshape(dwin.shape[0], positions, size, -1)
            for j in range(size):
                demb[:, j : j + positions, :] += dwin[:, :, j, :]
        self.table.accumulate_grad(ids, demb)
        self._cache = None

    def parameters(self):
        ps = ParameterSet()
        for size, w, b in zip(self.filter_sizes, self.weights, self.biases):
            ps.add(f"conv{size}_weight", w)
            ps.add(f"conv{size}_bias", b)
        return ps


ENCODERS = ("mean_pool", "textcnn")


def build_encoder(name, table, rng=None, filter_sizes=(2, 3, 5), filters_per_size=32, dropout=0.5):
    if name == "mean_pool":
        return MeanPoolEncoder(table)
    if name == "textcnn":
        return TextCNNEncoder(
            table,
            filter_sizes=filter_sizes,
            filters_per_size=filters_per_size,
            dropout=dropout,
            rng=rng,
        )
    raise ValueError(f"unknown encoder: {name!r} (expected one of {ENCODERS})")
