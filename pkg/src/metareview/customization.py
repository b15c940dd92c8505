"""Category-conditioned classifier heads.

Five head modes over a fused document vector d (dim n) and a category index:

  none              logits = W d + b
  bias_cust         logits = W [d ; c] + b          (c: learned category embedding)
  linear_cust       logits = W_cat d + b            (one weight matrix per category)
  bias_basis_cust   logits = W d + v_cat            (v_cat mixed from a bias-space basis)
  linear_basis_cust logits = reshape(v_cat) d + b   (v_cat mixed from a weight-space basis)

Basis modes build v_cat = sum_i gamma_i * basis_i with gamma = softmax of
query-key dot products, the query being the category embedding.
"""

import numpy as np

from .errors import ConfigurationError
from .nn.ops import softmax
from .nn.params import Parameter, ParameterSet, glorot_uniform

HEAD_MODES = ("none", "bias_cust", "bias_basis_cust", "linear_cust", "linear_basis_cust")

UNK_CATEGORY = "<unk-category>"


class CategoryVocabulary:
    """Dense index over canonical category names plus a trailing unknown slot."""

    def __init__(self, names):
        self.names = list(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("category names must be unique")
        self._index = {name: i for i, name in enumerate(self.names)}
        self.unk_index = len(self.names)

    @classmethod
    def from_records(cls, records):
        return cls(sorted({r.category for r in records}))

    def __len__(self):
        # includes the unknown slot
        return len(self.names) + 1

    def index_of(self, name):
        return self._index.get(name, self.unk_index)

    def name_of(self, index):
        if index == self.unk_index:
            return UNK_CATEGORY
        return self.names[index]


def attention_weights(query, keys):
    """softmax over query . key_i dot products; returns one weight per basis entry."""
    query = np.asarray(query, dtype=np.float64)
    keys = np.asarray(keys, dtype=np.float64)
    scores = query @ keys.T
    return softmax(scores)


def combine_basis(weights, basis):
    """Weighted sum of basis vectors: sum_i weights_i * basis_i."""
    weights = np.asarray(weights, dtype=np.float64)
    basis = np.asarray(basis, dtype=np.float64)
    return weights @ basis


class ClassifierHead:
    """Maps (fused vector, category index) batches to class logits.

    Parameters are created according to `mode`; `n_categories` must already
    include the unknown-category slot.
    """

    def __init__(
        self,
        mode,
        in_dim,
        n_classes,
        n_categories=0,
        category_dim=64,
        basis_size=4,
        rng=None,
    ):
        if mode not in HEAD_MODES:
            raise ConfigurationError(
                f"unknown customization mode: {mode!r} (expected one of {HEAD_MODES})"
            )
        if mode != "none" and n_categories < 1:
            raise ConfigurationError(f"mode {mode!r} requires at least one category")
        self.mode = mode
        self.in_dim = in_dim
        self.n_classes = n_classes
        self.n_categories = n_categories
        self.category_dim = category_dim
        self.basis_size = basis_size
        self._cache = None

        k, n, c, d = n_classes, in_dim, n_categories, basis_size
        self.weight = None
        self.bias = None
        self.category_embedding = None
        self.category_weights = None
        self.basis = None
        self.keys = None

        if mode == "none":
            self.weight = Parameter(glorot_uniform(rng, (k, n)))
            self.bias = Parameter(np.zeros(k))
        elif mode == "bias_cust":
            self.weight = Parameter(glorot_uniform(rng, (k, n + category_dim), fan_in=n + category_dim, fan_out=k))
            self.bias = Parameter(np.zeros(k))
            self.category_embedding = Parameter(
                glorot_uniform(rng, (c, category_dim), fan_in=c, fan_out=category_dim)
            )
        elif mode == "linear_cust":
            mats = np.stack([glorot_uniform(rng, (k, n)) for _ in range(c)])
            self.category_weights = Parameter(mats)
            self.bias = Parameter(np.zeros(k))
        elif mode == "bias_basis_cust":
            if d > k:
                raise ConfigurationError(
                    f"basis_size {d} exceeds the customized bias dimension {k}"
                )
            self.weight = Parameter(glorot_uniform(rng, (k, n)))
            self.category_embedding = Parameter(
                glorot_uniform(rng, (c, category_dim), fan_in=c, fan_out=category_dim)
            )
            self.keys = Parameter(
                glorot_uniform(rng, (d, category_dim), fan_in=category_dim, fan_out=d)
            )
            # basis vectors live in bias space; start at zero like a plain bias
            self.basis = Parameter(np.zeros((d, k)))
        elif mode == "linear_basis_cust":
            if d > k * n:
                raise ConfigurationError(
                    f"basis_size {d} exceeds the customized weight dimension {k * n}"
                )
            self.bias = Parameter(np.zeros(k))
            self.category_embedding = Parameter(
                glorot_uniform(rng, (c, category_dim), fan_in=c, fan_out=category_dim)
            )
            self.keys = Parameter(
                glorot_uniform(rng, (d, category_dim), fan_in=category_dim, fan_out=d)
            )
            # each basis vector is a flattened (k, n) weight matrix
            mats = np.stack([glorot_uniform(rng, (k, n)).reshape(-1) for _ in range(d)])
            self.basis = Parameter(mats)

    # -- forward -----------------------------------------------------------

    def forward(self, fused, cats):
        """fused: (B, n) float64; cats: (B,) int indices. Returns (B, k) logits."""
        fused = np.asarray(fused, dtype=np.float64)
        cats = np.asarray(cats, dtype=np.intp)
        if fused.ndim != 2 or fused.shape[1] != self.in_dim:
            raise ValueError(
                f"fused batch shape {fused.shape} incompatible with head input dim {self.in_dim}"
            )
        mode = self.mode
        if mode == "none":
            logits = fused @ self.weight.value.T + self.bias.value
            self._cache = (fused, cats, None)
        elif mode == "bias_cust":
            cat_vecs = self.category_embedding.value[cats]
            x = np.concatenate([fused, cat_vecs], axis=1)
            logits = x @ self.weight.value.T + self.bias.value
            self._cache = (fused, cats, x)
        elif mode == "linear_cust":
            mats = self.category_weights.value[cats]  # (B, k, n)
            logits = np.einsum("bkn,bn->bk", mats, fused) + self.bias.value
            self._cache = (fused, cats, mats)
        elif mode == "bias_basis_cust":
            gamma, extras = self._basis_weights(cats)
            v = gamma @ self.basis.value  # (B, k)
            logits = fused @ self.weight.value.T + v
            self._cache = (fused, cats, (gamma, extras))
        else:  # linear_basis_cust
            gamma, extras = self._basis_weights(cats)
            v = gamma @ self.basis.value  # (B, k*n)
            mats = v.reshape(-1, self.n_classes, self.in_dim)
            logits = np.einsum("bkn,bn->bk", mats, fused) + self.bias.value
            self._cache = (fused, cats, (gamma, extras, mats))
        return logits

    def _basis_weights(self, cats):
        queries = self.category_embedding.value[cats]  # (B, cd)
        scores = queries @ self.keys.value.T  # (B, d)
        gamma = softmax(scores)
        return gamma, queries

    def logits_for(self, fused_vector, cat_index):
        """Single-example convenience wrapper; does not keep the backward cache."""
        out = self.forward(
            np.asarray(fused_vector, dtype=np.float64)[None, :],
            np.array([cat_index], dtype=np.intp),
        )
        self._cache = None
        return out[0]

    # -- backward ----------------------------------------------------------

    def backward(self, dlogits):
        """Accumulate parameter gradients; returns gradient wrt the fused batch."""
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        fused, cats, extra = self._cache
        self._cache = None
        mode = self.mode
        if mode == "none":
            self.weight.grad += dlogits.T @ fused
            self.bias.grad += dlogits.sum(axis=0)
            return dlogits @ self.weight.value
        if mode == "bias_cust":
            x = extra
            self.weight.grad += dlogits.T @ x
            self.bias.grad += dlogits.sum(axis=0)
            dx = dlogits @ self.weight.value
            dfused = dx[:, : self.in_dim]
            dcat = dx[:, self.in_dim :]
            np.add.at(self.category_embedding.grad, cats, dcat)
            return dfused
        if mode == "linear_cust":
            mats = extra
            np.add.at(
                self.category_weights.grad,
                cats,
                dlogits[:, :, None] * fused[:, None, :],
            )
            self.bias.grad += dlogits.sum(axis=0)
            return np.einsum("bkn,bk->bn", mats, dlogits)
        if mode == "bias_basis_cust":
            gamma, queries = extra
            self.weight.grad += dlogits.T @ fused
            dfused = dlogits @ self.weight.value
            dv = dlogits  # (B, k)
            self._basis_backward(cats, gamma, queries, dv)
            return dfused
        # linear_basis_cust
        gamma, queries, mats = extra
        self.bias.grad += dlogits.sum(axis=0)
        dfused = np.einsum("bkn,bk->bn", mats, dlogits)
        dmats = dlogits[:, :, None] * fused[:, None, :]  # (B, k, n)
        dv = dmats.reshape(dmats.shape[0], -1)
        self._basis_backward(cats, gamma, queries, dv)
        return dfused

    def _basis_backward(self, cats, gamma, queries, dv):
        self.basis.grad += gamma.T @ dv
        dgamma = dv @ self.basis.value.T  # (B, d)
        # softmax backward: dz = gamma * (dgamma - sum(dgamma * gamma))
        inner = (dgamma * gamma).sum(axis=1, keepdims=True)
        dscores = gamma * (dgamma - inner)
        self.keys.grad += dscores.T @ queries
        dqueries = dscores @ self.keys.value
        np.add.at(self.category_embedding.grad, cats, dqueries)

    def parameters(self):
        ps = ParameterSet()
        if self.weight is not None:
            ps.add("weight", self.weight)
        if self.bias is not None:
            ps.add("bias", self.bias)
        if self.category_weights is not None:
            ps.add("category_weights", self.category_weights)
        if self.category_embedding is not None:
            ps.add("category_embedding", self.category_embedding)
        if self.keys is not None:
            ps.add("keys", self.keys)
        if self.basis is not None:
            ps.add("basis", self.basis)
        return ps
