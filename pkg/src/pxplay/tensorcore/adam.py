"""Bias-corrected Adam with an L2 penalty folded into the gradient."""

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError

F32 = np.float32


@dataclass
class AdamState:
    """First/second moment estimates for one parameter block."""

    step_count: int
    m: np.ndarray
    v: np.ndarray
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def fresh(cls, shape, beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        return cls(
            step_count=0,
            m=np.zeros(shape, dtype=F32),
            v=np.zeros(shape, dtype=F32),
            beta1=beta1,
            beta2=beta2,
            epsilon=epsilon,
        )


def adam_step(
    param: np.ndarray,
    grad: np.ndarray,
    state: AdamState,
    lr: float,
    l2: float = 0.0,
):
    """One Adam update. Returns (new_param, new_state); inputs are not mutated.

    The L2 penalty enters as grad' = grad + l2 * param before the moment
    updates (loss-penalty formulation, not decoupled weight decay).
    """
    if param.shape != grad.shape or param.shape != state.m.shape:
        raise DimensionError(
            f"param {param.shape}, grad {grad.shape}, state {state.m.shape} disagree"
        )
    g = grad + F32(l2) * param if l2 else grad
    t = state.step_count + 1
    m = F32(state.beta1) * state.m + F32(1.0 - state.beta1) * g
    v = F32(state.beta2) * state.v + F32(1.0 - state.beta2) * (g * g)
    m_hat = m / F32(1.0 - state.beta1**t)
    v_hat = v / F32(1.0 - state.beta2**t)
    new_param = param - F32(lr) * m_hat / (np.sqrt(v_hat) + F32(state.epsilon))
    new_state = AdamState(
        step_count=t,
        m=m,
        v=v,
        beta1=state.beta1,
        beta2=state.beta2,
        epsilon=state.epsilon,
    )
    return new_param, new_state
