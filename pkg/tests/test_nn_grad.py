"""Central finite-difference checks for every differentiable kernel.

Checks run in float64 at h=1e-3 against relative tolerance 1e-4 (the
verification-build precision); the float32 relaxation 1e-2 is exercised by
the full-model acceptance checks.
"""

import numpy as np

from toxmm.nn import Tape, Tensor, backward, make_rng, ops
from toxmm.nn.ops import BatchNormState

H = 1e-3
RTOL64, ATOL64 = 1e-4, 1e-6


def check_grads(build, arrays, rtol=RTOL64, atol=ATOL64, sample=24, seed=0):
    """Compare tape gradients of build(tensors, tape) against central FD."""
    tensors = [Tensor(a.copy(), requires_grad=True) for a in arrays]
    tape = Tape()
    loss = build(tensors, tape)
    backward(tape, loss)

    def loss_at(ti, fi, delta):
        shifted = [a.copy() for a in arrays]
        shifted[ti].flat[fi] += delta
        return float(build([Tensor(a) for a in shifted], None).data)

    rng = np.random.default_rng(seed)
    for ti, tensor in enumerate(tensors):
        assert tensor.grad is not None, f"input {ti} missing gradient"
        size = tensor.size
        indices = range(size) if size <= sample else \
            sorted(rng.choice(size, size=sample, replace=False).tolist())
        for fi in indices:
            fd = (loss_at(ti, fi, H) - loss_at(ti, fi, -H)) / (2.0 * H)
            ad = float(tensor.grad.flat[fi])
            assert abs(ad - fd) <= atol + rtol * abs(fd), \
                f"input {ti} elem {fi}: autodiff {ad} vs fd {fd}"


def rand(*shape, seed=0, scale=1.0):
    return make_rng(seed).normal(scale=scale, size=shape).astype(np.float64)


def to_scalar(x, tape):
    target = Tensor(np.zeros_like(x.data))
    return ops.mse(x, target, tape)


def test_sum_like_loss_grad_is_uniform():
    # loss = mean(x^2) -> grad 2x/n; with target 0 mse == mean(x^2)
    x = Tensor(rand(4, 3, seed=1), requires_grad=True)
    tape = Tape()
    loss = ops.mse(x, Tensor(np.zeros((4, 3))), tape)
    backward(tape, loss)
    assert np.allclose(x.grad, 2.0 * x.data / x.size)


def test_dense_grads():
    x, w, b = rand(5, 4, seed=2), rand(4, 3, seed=3), rand(3, seed=4)
    check_grads(lambda t, tape: to_scalar(ops.dense(t[0], t[1], t[2], tape), tape),
                [x, w, b])


def test_embedding_grads():
    x, e = rand(3, 6, 5, seed=5), rand(5, 4, seed=6)
    check_grads(lambda t, tape: to_scalar(ops.embedding(t[0], t[1], tape), tape),
                [x, e])


def test_conv2d_grads():
    x, k = rand(2, 6, 7, 3, seed=7), rand(3, 2, 3, 4, seed=8)
    check_grads(
        lambda t, tape: to_scalar(ops.conv2d(t[0], t[1], (2, 2), tape), tape),
        [x, k])


def test_conv1d_grads():
    x, k = rand(2, 9, 3, seed=9), rand(4, 3, 5, seed=10)
    check_grads(lambda t, tape: to_scalar(ops.conv1d(t[0], t[1], tape), tape),
                [x, k])


def test_maxpool_grads():
    x = rand(2, 6, 6, 2, seed=11)
    check_grads(
        lambda t, tape: to_scalar(ops.maxpool2d(t[0], (3, 3), (2, 2), tape), tape),
        [x])


def test_avgpool_grads():
    x = rand(2, 6, 6, 2, seed=12)
    check_grads(
        lambda t, tape: to_scalar(ops.avgpool2d(t[0], (2, 2), None, tape), tape),
        [x])


def test_batchnorm_grads():
    x, gamma, beta = rand(8, 3, seed=13), rand(3, seed=14) + 2.0, rand(3, seed=15)

    def build(t, tape):
        state = BatchNormState(3, dtype=np.float64)
        return to_scalar(ops.batchnorm(t[0], t[1], t[2], state, True, tape), tape)

    check_grads(build, [x, gamma, beta])


def test_batchnorm_eval_grads():
    x, gamma, beta = rand(4, 3, seed=16), rand(3, seed=17) + 2.0, rand(3, seed=18)

    def build(t, tape):
        state = BatchNormState(3, dtype=np.float64)
        state.running_mean[:] = [0.3, -0.2, 1.0]
        state.running_var[:] = [1.5, 0.7, 2.0]
        return to_scalar(ops.batchnorm(t[0], t[1], t[2], state, False, tape), tape)

    check_grads(build, [x, gamma, beta])


def test_relu_grads():
    # keep inputs away from the kink at zero
    x = rand(5, 5, seed=19)
    x[np.abs(x) < 0.05] += 0.1
    check_grads(lambda t, tape: to_scalar(ops.relu(t[0], tape), tape), [x])


def test_sigmoid_grads():
    x = rand(5, 5, seed=20)
    check_grads(lambda t, tape: to_scalar(ops.sigmoid(t[0], tape), tape), [x])


def test_dropout_grads_with_frozen_mask():
    x = rand(6, 6, seed=21)

    def build(t, tape):
        rng = make_rng(99)  # same mask every evaluation
        return to_scalar(ops.dropout(t[0], 0.4, True, rng, tape), tape)

    check_grads(build, [x])


def test_add_and_flatten_grads():
    x, y = rand(3, 4, seed=22), rand(3, 4, seed=23)

    def build(t, tape):
        summed = ops.add(t[0], t[1], tape)
        return to_scalar(ops.flatten(summed, tape), tape)

    check_grads(build, [x, y])


def test_mse_grads_both_sides():
    p, t_ = rand(7, 1, seed=24), rand(7, 1, seed=25)
    check_grads(lambda t, tape: ops.mse(t[0], t[1], tape), [p, t_])


def test_composite_stack_grads():
    # dense -> relu -> dense -> sigmoid -> mse, gradients through the chain
    x = rand(6, 5, seed=26)
    w1, b1 = rand(5, 8, seed=27), rand(8, seed=28)
    w2, b2 = rand(8, 1, seed=29), rand(1, seed=30)
    target = rand(6, 1, seed=31)

    def build(t, tape):
        h = ops.relu(ops.dense(Tensor(x), t[0], t[1], tape), tape)
        out = ops.sigmoid(ops.dense(h, t[2], t[3], tape), tape)
        return ops.mse(out, Tensor(target), tape)

    check_grads(build, [w1, b1, w2, b2])


def test_unreachable_parameter_keeps_zero_grad():
    used = Tensor(rand(2, 2, seed=32), requires_grad=True)
    unused = Tensor(rand(2, 2, seed=33), requires_grad=True)
    unused.zero_grad()
    tape = Tape()
    loss = ops.mse(used, Tensor(np.zeros((2, 2))), tape)
    backward(tape, loss)
    assert used.grad is not None
    assert np.array_equal(unused.grad, np.zeros((2, 2)))
