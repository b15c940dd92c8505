from .gradcheck import gradient_check, max_relative_error, numeric_gradient
from .ops import (
    PROB_FLOOR,
    cross_entropy,
    linear_forward,
    relu,
    relu_grad,
    softmax,
    softmax_cross_entropy,
)
from .optim import SGD, Adam, make_optimizer
from .params import Parameter, ParameterSet, glorot_uniform

__all__ = [
    "PROB_FLOOR",
    "SGD",
    "Adam",
    "Parameter",
    "ParameterSet",
    "cross_entropy",
    "glorot_uniform",
    "gradient_check",
    "linear_forward",
    "make_optimizer",
    "max_relative_error",
    "numeric_gradient",
    "relu",
    "relu_grad",
    "softmax",
    "softmax_cross_entropy",
]
