import numpy as np

from pxplay.tensorcore import AdamState, adam_step

F32 = np.float32


def test_zero_grad_fresh_state_leaves_param():
    p = np.array([1.5, -0.25], dtype=F32)
    state = AdamState.fresh(p.shape)
    p2, s2 = adam_step(p, np.zeros_like(p), state, lr=1e-3, l2=0.0)
    assert np.array_equal(p2, p)
    assert s2.step_count == 1


def test_first_step_closed_form():
    # m_hat = 1, v_hat = 1 after one step with grad 1, so delta = -lr/(1+eps)
    p = np.zeros(1, dtype=F32)
    p2, _ = adam_step(p, np.ones(1, dtype=F32), AdamState.fresh(1), lr=1e-4)
    assert np.isclose(p2[0], -1e-4, rtol=1e-4)


def test_two_steps_match_hand_recurrence():
    lr, b1, b2, eps = 1e-4, 0.9, 0.999, 1e-8
    # float64 reference recurrence, constant grad 1
    p_ref, m, v = 0.0, 0.0, 0.0
    for t in (1, 2):
        m = b1 * m + (1 - b1) * 1.0
        v = b2 * v + (1 - b2) * 1.0
        p_ref -= lr * (m / (1 - b1**t)) / ((v / (1 - b2**t)) ** 0.5 + eps)

    p = np.zeros(1, dtype=F32)
    state = AdamState.fresh(1)
    for _ in range(2):
        p, state = adam_step(p, np.ones(1, dtype=F32), state, lr=lr)
    assert abs(float(p[0]) - p_ref) < 1e-9
    assert state.step_count == 2


def test_l2_enters_gradient():
    p = np.array([2.0], dtype=F32)
    p_no_l2, _ = adam_step(p, np.zeros(1, dtype=F32), AdamState.fresh(1), lr=1e-3, l2=0.0)
    p_l2, _ = adam_step(p, np.zeros(1, dtype=F32), AdamState.fresh(1), lr=1e-3, l2=0.1)
    assert np.array_equal(p_no_l2, p)
    assert p_l2[0] < p[0]  # l2 pulls toward zero


def test_bitwise_deterministic():
    rng = np.random.default_rng(9)
    p = rng.normal(size=(4, 3)).astype(F32)
    g = rng.normal(size=(4, 3)).astype(F32)

    def run():
        pp, st = p.copy(), AdamState.fresh(p.shape)
        for _ in range(5):
            pp, st = adam_step(pp, g, st, lr=1e-3, l2=1e-4)
        return pp

    assert np.array_equal(run(), run())


def test_inputs_not_mutated():
    p = np.ones(3, dtype=F32)
    g = np.ones(3, dtype=F32)
    state = AdamState.fresh(3)
    adam_step(p, g, state, lr=1e-2, l2=0.5)
    assert np.all(p == 1.0) and np.all(g == 1.0)
    assert state.step_count == 0 and not state.m.any()
