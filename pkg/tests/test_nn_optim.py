import numpy as np
import pytest

from toxmm.errors import MissingGradient, NonScalarLoss
from toxmm.nn import ParamStore, Tape, Tensor, adam_step, backward, glorot_normal, make_rng, ops
from toxmm.nn.serialize import load_payload, save_payload
from toxmm.errors import CorruptPayload, VersionMismatch


def test_glorot_variance():
    rng = make_rng(42)
    w = glorot_normal((1000, 1000), rng, dtype=np.float64)
    expected = 2.0 / 2000.0
    assert w.var() == pytest.approx(expected, rel=0.05)
    assert abs(w.mean()) < 3.0 * np.sqrt(expected / w.size) * 10


def test_glorot_seed_determinism():
    a = glorot_normal((64, 32), make_rng(7))
    b = glorot_normal((64, 32), make_rng(7))
    assert np.array_equal(a, b)


def test_glorot_conv_fans():
    rng = make_rng(8)
    w = glorot_normal((7, 7, 4, 64), rng, dtype=np.float64)
    expected = 2.0 / (7 * 7 * 4 + 7 * 7 * 64)
    assert w.var() == pytest.approx(expected, rel=0.05)


def test_adam_zero_gradient_keeps_params():
    store = ParamStore()
    p = store.add_param("w", np.array([1.0, -2.0], dtype=np.float32))
    store.zero_grads()
    adam_step(store)
    assert np.array_equal(p.data, [1.0, -2.0])
    assert store.t == 1


def test_adam_first_step_closed_form():
    # constant gradient g: first update is lr * g / (|g| + eps), i.e. nearly
    # lr * sign(g) regardless of |g|
    lr, eps = 1e-3, 1e-8
    for g in (0.5, 3.0, -7.0):
        store = ParamStore()
        p = store.add_param("w", np.array([2.0], dtype=np.float64))
        p.grad = np.array([g])
        adam_step(store, lr=lr)
        step = 2.0 - p.data[0]
        expected = lr * g / (abs(g) + eps)
        assert step == pytest.approx(expected, abs=1e-12)
        assert abs(step) == pytest.approx(lr * (1.0 - 1e-8), abs=1e-6)


def test_adam_determinism():
    def run():
        store = ParamStore()
        p = store.add_param("w", np.arange(6, dtype=np.float32).reshape(2, 3))
        for i in range(5):
            p.grad = (np.ones((2, 3)) * (i + 1)).astype(np.float32)
            adam_step(store)
        return p.data.copy()

    assert np.array_equal(run(), run())


def test_adam_missing_gradient():
    store = ParamStore()
    store.add_param("w", np.ones(3, dtype=np.float32))
    with pytest.raises(MissingGradient):
        adam_step(store)


def test_adam_converges_on_quadratic():
    store = ParamStore()
    p = store.add_param("w", np.array([5.0], dtype=np.float64))
    for _ in range(4000):
        tape = Tape()
        loss = ops.mse(p, Tensor(np.array([1.5])), tape)
        store.zero_grads()
        backward(tape, loss)
        adam_step(store, lr=1e-2)
    assert p.data[0] == pytest.approx(1.5, abs=1e-4)


def test_backward_rejects_nonscalar():
    tape = Tape()
    x = Tensor(np.ones((2, 2)), requires_grad=True)
    y = ops.relu(x, tape)
    with pytest.raises(NonScalarLoss):
        backward(tape, y)


def test_snapshot_restore():
    store = ParamStore()
    p = store.add_param("w", np.array([1.0, 2.0], dtype=np.float32))
    store.add_buffer("bn", np.array([0.5], dtype=np.float32))
    snap = store.snapshot()
    p.data[:] = 99.0
    store.buffers["bn"][:] = -1.0
    store.restore(snap)
    assert np.array_equal(p.data, [1.0, 2.0])
    assert np.array_equal(store.buffers["bn"], [0.5])


def test_payload_round_trip(tmp_path):
    params = {"dense.w": np.arange(12, dtype=np.float32).reshape(3, 4),
              "dense.b": np.zeros(4, dtype=np.float32)}
    buffers = {"bn.mean": np.array([0.25, -0.5], dtype=np.float32)}
    path = tmp_path / "model.toxmm"
    save_payload(path, "fcnn", {"epochs": "400"}, params, buffers)
    kind, config, p2, b2 = load_payload(path)
    assert kind == "fcnn"
    assert config == {"epochs": "400"}
    for k in params:
        assert np.array_equal(params[k], p2[k])
    assert np.array_equal(buffers["bn.mean"], b2["bn.mean"])


def test_payload_corruption(tmp_path):
    path = tmp_path / "model.toxmm"
    save_payload(path, "fcnn", {}, {"w": np.ones(4, dtype=np.float32)}, {})
    blob = path.read_bytes()
    path.write_bytes(blob[:-3])  # truncate
    with pytest.raises(CorruptPayload):
        load_payload(path)
    other = tmp_path / "bad.toxmm"
    other.write_bytes(b"NOTFMT\n" + blob[7:])
    with pytest.raises(VersionMismatch):
        load_payload(other)
