"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``. Quantitative criteria
use the bundled 1792-row benchmark; time-bounded criteria assert their own
wall-clock budgets.
"""

import time

import numpy as np
import pytest

from toxmm.data import packaged_benchmark_path
from toxmm.models import (
    ConvRnn,
    ConvRnnConfig,
    Fcnn,
    FcnnConfig,
    MnnConfig,
    Resnet,
    ResnetConfig,
    TrainConfig,
    load_model,
    predict,
    save_model,
    train_mnn,
    train_model,
)
from toxmm.nn import Tape, Tensor, backward, make_rng, ops
from toxmm.pipeline.dataset import load_dataset
from toxmm.pipeline.experiment import RunConfig, run_experiment
from toxmm.pipeline.metrics import pearson_r2

from test_nn_ops import (
    naive_conv1d,
    naive_conv2d,
    naive_matmul,
    naive_mse,
    naive_pool,
)


def report(number, text):
    print(f"\n[PASS] criterion {number}: {text}")


# --- criterion 1: gradient correctness --------------------------------------

def _model_grad_check(model, x, y, rtol, atol, sample_per_tensor=2, h=1e-3,
                      rng_seed=123, single_precision=False):
    """Central finite differences at the stated h against tape gradients.

    Relu and pooling make the loss only piecewise smooth: when the +/-h
    interval straddles a selection boundary, the h-scale estimate measures
    the kink rather than the derivative. Each sampled element is therefore
    certified first: fd(h) must agree with fd(h/100) (a probe two orders
    finer, so kink bias shrinks by the same factor) within half the
    assertion budget. Channel-wide parameters (batchnorm affines) touch so
    many activations that every element can straddle some kink at the
    nominal h; those fall down a step-size ladder (h, h/10, h/100) and
    assert at the first certifiable level. Candidates with no certifiable
    level are replaced by the next index. Certification never consults the
    tape gradient.
    """
    tape = Tape()
    pred = model.forward(Tensor(x), train=True, tape=tape,
                         rng=make_rng(rng_seed))
    loss = ops.mse(pred, Tensor(y), tape)
    model.store.zero_grads()
    backward(tape, loss)

    def loss_value():
        p = model.forward(Tensor(x), train=True, rng=make_rng(rng_seed))
        return float(np.mean((p.data - y) ** 2))

    rng = np.random.default_rng(0)
    checked = 0
    for name, tensor in model.store.params.items():
        size = tensor.size
        order = list(range(size)) if size <= 4 * sample_per_tensor else \
            rng.permutation(size).tolist()[:40]
        done = 0
        for fi in order:
            if done == sample_per_tensor:
                break
            original = tensor.data.flat[fi]

            def at(delta):
                tensor.data.flat[fi] = original + delta
                value = loss_value()
                tensor.data.flat[fi] = original
                return value

            fd = None
            if single_precision:
                # float32 resolution bounds the probe from below, so the
                # reference uses a larger step and tiny gradients are not
                # measurable at the stated tolerance at all
                candidate = (at(h) - at(-h)) / (2.0 * h)
                reference = (at(3 * h) - at(-3 * h)) / (6.0 * h)
                scale = max(abs(candidate), abs(reference))
                if scale >= 0.02 and \
                        abs(candidate - reference) <= 0.5 * (atol + rtol * scale):
                    fd = candidate
            else:
                for level in (h, h / 10.0, h / 100.0):
                    candidate = (at(level) - at(-level)) / (2.0 * level)
                    tiny = level / 100.0
                    reference = (at(tiny) - at(-tiny)) / (2.0 * tiny)
                    scale = max(abs(candidate), abs(reference), 1e-3)
                    if abs(candidate - reference) <= 0.5 * (atol + rtol * scale):
                        fd = candidate
                        break
            if fd is None:
                continue
            ad = float(tensor.grad.flat[fi])
            assert abs(ad - fd) <= atol + rtol * max(abs(fd), abs(ad)), \
                f"{name}[{fi}]: autodiff {ad} vs fd {fd}"
            checked += 1
            done += 1
        assert done > 0, f"no smooth sample point found for {name}"
    return checked


def test_criterion_1_gradient_correctness():
    start = time.time()
    rng = make_rng(77)

    total = 0
    # 64-bit verification build: rel tol 1e-4
    fcnn = Fcnn(n_features=12, cfg=FcnnConfig(dropout_after_layer1=0.1),
                seed=1, dtype=np.float64)
    total += _model_grad_check(fcnn, rng.normal(size=(8, 12)),
                               rng.normal(size=(8, 1)), rtol=1e-4, atol=1e-6)

    convrnn = ConvRnn(seed=2, dtype=np.float64)
    x_seq = np.zeros((4, 52, 50))
    for n in range(4):
        for i in range(int(rng.integers(5, 52))):
            x_seq[n, i, int(rng.integers(50))] = 1.0
    total += _model_grad_check(convrnn, x_seq, rng.normal(size=(4, 1)),
                               rtol=1e-4, atol=1e-6)

    # full residual wiring at a reduced spatial extent; beta = 0 is the
    # degenerate point where batchnorm centers every channel exactly on the
    # relu kink, so the check runs at a generic point (beta shifted)
    resnet = Resnet(ResnetConfig(input_shape=(16, 16, 4)), seed=3,
                    dtype=np.float64)
    for pname, ptensor in resnet.store.params.items():
        if pname.endswith(".beta"):
            ptensor.data[:] = 0.5
    x_img = (rng.random((2, 16, 16, 4)) > 0.5) * 0.8 + 0.1
    total += _model_grad_check(resnet, x_img, rng.normal(size=(2, 1)),
                               rtol=1e-4, atol=1e-6, sample_per_tensor=1)

    # 32-bit training build: rel tol 1e-2
    fcnn32 = Fcnn(n_features=12, seed=4, dtype=np.float32)
    total += _model_grad_check(fcnn32,
                               rng.normal(size=(8, 12)).astype(np.float32),
                               rng.normal(size=(8, 1)).astype(np.float32),
                               rtol=1e-2, atol=1e-4, single_precision=True)

    elapsed = time.time() - start
    assert elapsed < 60.0, f"gradient suite took {elapsed:.1f}s"
    report(1, f"finite differences match on all model graphs "
              f"({total} parameters checked, {elapsed:.1f}s)")


# --- criterion 2: kernel oracles ---------------------------------------------

def test_criterion_2_kernel_oracles():
    start = time.time()
    rng = make_rng(88)
    for _ in range(100):
        n, f, u = rng.integers(1, 7, size=3)
        x, w, b = rng.normal(size=(n, f)), rng.normal(size=(f, u)), rng.normal(size=u)
        assert np.allclose(ops.dense(Tensor(x), Tensor(w), Tensor(b)).data,
                           naive_matmul(x, w) + b, atol=1e-6)

        h, wd = rng.integers(3, 8, size=2)
        kh, kw = int(rng.integers(1, h + 1)), int(rng.integers(1, wd + 1))
        cin, cout = rng.integers(1, 4, size=2)
        sh, sw = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        xi = rng.normal(size=(2, h, wd, cin))
        k = rng.normal(size=(kh, kw, cin, cout))
        assert np.allclose(ops.conv2d(Tensor(xi), Tensor(k), (sh, sw)).data,
                           naive_conv2d(xi, k, (sh, sw)), atol=1e-6)

        length = int(rng.integers(2, 12))
        width = int(rng.integers(1, length + 1))
        xs = rng.normal(size=(2, length, cin))
        ks = rng.normal(size=(width, cin, cout))
        assert np.allclose(ops.conv1d(Tensor(xs), Tensor(ks)).data,
                           naive_conv1d(xs, ks), atol=1e-6)

        ph, pw = rng.integers(2, 8, size=2)
        wh, ww = int(rng.integers(1, ph + 1)), int(rng.integers(1, pw + 1))
        xp = rng.normal(size=(2, ph, pw, cin))
        strides = (int(rng.integers(1, 3)), int(rng.integers(1, 3)))
        assert np.allclose(ops.maxpool2d(Tensor(xp), (wh, ww), strides).data,
                           naive_pool(xp, (wh, ww), strides, "max"), atol=1e-6)
        assert np.allclose(ops.avgpool2d(Tensor(xp), (wh, ww), strides).data,
                           naive_pool(xp, (wh, ww), strides, "avg"), atol=1e-6)

        pred, tgt = rng.normal(size=(11, 1)), rng.normal(size=(11, 1))
        assert abs(float(ops.mse(Tensor(pred), Tensor(tgt)).data)
                   - naive_mse(pred, tgt)) < 1e-6

    elapsed = time.time() - start
    assert elapsed < 30.0, f"kernel oracles took {elapsed:.1f}s"
    report(2, f"conv2d/conv1d/dense/pools/mse match naive loops on 100 "
              f"random shapes each ({elapsed:.1f}s)")


# --- criterion 3: parser coverage ----------------------------------------------

def test_criterion_3_parser_coverage():
    start = time.time()
    records, rejects = load_dataset(packaged_benchmark_path())
    total = len(records) + len(rejects)
    assert total == 1792
    fraction = len(records) / total
    assert fraction >= 0.99, f"parse coverage {fraction:.4f}"
    for r in rejects:  # itemized, never silent
        assert r.line and r.code
    elapsed = time.time() - start
    assert elapsed < 10.0, f"parsing took {elapsed:.1f}s"
    report(3, f"{len(records)}/{total} benchmark SMILES parse with valence "
              f"invariants satisfied ({100 * fraction:.2f}%, {elapsed:.1f}s)")


# --- criterion 4: shape traces ---------------------------------------------------

def test_criterion_4_shape_traces():
    convrnn = ConvRnn()  # constructor asserts the derived widths
    resnet = Resnet()
    assert convrnn.flatten_width == 3404
    assert resnet.flatten_width == 61952
    assert dict(convrnn.shape_trace)["conv3"] == (37, 92)
    assert dict(resnet.shape_trace)["avgpool"] == (11, 11, 512)
    report(4, "ConvRnn flatten = 3404 and Resnet flatten = 61952 asserted "
              "at build time")


# --- criterion 5: overfit sanity -------------------------------------------------

@pytest.mark.slow
def test_criterion_5_overfit_sanity():
    start = time.time()
    rng = make_rng(50)

    x = rng.normal(size=(64, 8)).astype(np.float32)
    w = rng.normal(size=(8, 1)).astype(np.float32)
    fcnn = Fcnn(n_features=8, seed=1, cfg=FcnnConfig(dropout_after_layer1=0.0))
    h_fcnn = train_model(fcnn, x, x @ w,
                         TrainConfig(epochs=2000, minibatch=1024, seed=1))
    assert min(h_fcnn.train_loss) < 1e-3, min(h_fcnn.train_loss)

    xi = rng.random((32, 100, 100, 4)).astype(np.float32)
    wi = rng.normal(size=(100 * 100 * 4, 1)).astype(np.float32)
    yi = (xi.reshape(32, -1) @ wi * 0.01).astype(np.float32)
    resnet = Resnet(ResnetConfig(bn_momentum=0.8), seed=5)
    h_res = train_model(resnet, xi, yi,
                        TrainConfig(epochs=80, minibatch=32, accum_chunk=32,
                                    lr=5e-4, seed=5))
    assert min(h_res.train_loss) < 1e-2, min(h_res.train_loss)

    xs = np.zeros((32, 52, 50), dtype=np.float32)
    for n in range(32):
        for i in range(int(rng.integers(6, 52))):
            xs[n, i, int(rng.integers(50))] = 1.0
    ys = rng.normal(size=(32, 1)).astype(np.float32)
    convrnn = ConvRnn(seed=6)
    h_rnn = train_model(convrnn, xs, ys,
                        TrainConfig(epochs=200, minibatch=32, seed=6))
    assert min(h_rnn.train_loss) < 1e-2, min(h_rnn.train_loss)

    elapsed = time.time() - start
    assert elapsed < 15 * 60, f"overfit sanity took {elapsed:.0f}s"
    report(5, f"FCNN {min(h_fcnn.train_loss):.2e} < 1e-3; Resnet "
              f"{min(h_res.train_loss):.2e} and ConvRnn {min(h_rnn.train_loss):.2e}"
              f" < 1e-2 ({elapsed / 60:.1f} min)")


# --- criterion 6: end-to-end IGC50 (relaxed quantitative) -------------------------

@pytest.mark.slow
def test_criterion_6_end_to_end_fcnn(tmp_path):
    start = time.time()
    run = RunConfig(dataset=packaged_benchmark_path(),
                    out_dir=tmp_path / "full_fcnn",
                    seed=7, models=("fcnn",), figures=False)
    result = run_experiment(run)
    cv = result.cv_r2["fcnn"]
    test = result.test_r2["fcnn"]
    assert cv >= 0.60, f"FCNN CV R2 {cv:.4f}"
    assert test >= 0.55, f"FCNN test R2 {test:.4f}"
    elapsed = time.time() - start
    assert elapsed < 2 * 3600
    report(6, f"FCNN on the 1792-row benchmark: CV R2 {cv:.4f} >= 0.60, "
              f"test R2 {test:.4f} >= 0.55 (reference with 1422 features: "
              f"0.82/0.81; gap from the 46-descriptor registry) "
              f"({elapsed / 60:.1f} min)")


# --- criteria 7 & 9: ensemble algebra, determinism --------------------------------

@pytest.fixture(scope="module")
def smoke_runs(tmp_path_factory):
    """Two identical small full runs plus their output directories."""
    base = tmp_path_factory.mktemp("accept")
    lines = packaged_benchmark_path().read_text().splitlines()
    dataset = base / "subset.csv"
    dataset.write_text("\n".join([lines[0]] + lines[1:61]) + "\n",
                       encoding="utf-8")

    def make(out_name):
        return RunConfig(
            dataset=dataset, out_dir=base / out_name, seed=9,
            models=("fcnn", "cnn", "rnn"), cnn_subsample=40,
            fcnn=FcnnConfig(epochs=30, minibatch=64),
            cnn=ResnetConfig(epochs=2, minibatch=64, patience=None,
                             bn_momentum=0.9),
            rnn=ConvRnnConfig(epochs=6, minibatch=64, patience=None),
            mnn=MnnConfig(epochs=40, minibatch=64, patience=None),
        )

    run_a, run_b = make("a"), make("b")
    report_a = run_experiment(run_a)
    report_b = run_experiment(run_b)
    return run_a, run_b, report_a, report_b


def read_pred_csv(path):
    lines = path.read_text().splitlines()[1:]
    target = np.array([float(l.split(",")[2]) for l in lines])
    pred = np.array([float(l.split(",")[3]) for l in lines])
    return target, pred


def test_criterion_7_ensemble_algebra(smoke_runs):
    from toxmm.models import ensemble_average

    run_a, _, report_a, _ = smoke_runs
    a, b, c = np.array([0.2]), np.array([0.4]), np.array([0.9])
    assert np.array_equal(ensemble_average(a, b, c), np.array([0.5]))
    v = np.array([1.5, -2.0, 0.25])
    assert np.array_equal(ensemble_average(v, v, v), v)

    target, p_f = read_pred_csv(run_a.out_dir / "pred_test_fcnn.csv")
    _, p_c = read_pred_csv(run_a.out_dir / "pred_test_cnn.csv")
    _, p_r = read_pred_csv(run_a.out_dir / "pred_test_rnn.csv")
    _, p_ea = read_pred_csv(run_a.out_dir / "pred_test_ea.csv")
    offline_mean = (p_f + p_c + p_r) / 3.0
    assert np.array_equal(p_ea, offline_mean)
    assert report_a.test_r2["ea"] == pearson_r2(offline_mean, target)
    report(7, "EA output equals the elementwise mean exactly; report row "
              "equals pearson_r2 recomputed offline from persisted CSVs")


def test_criterion_9_determinism(smoke_runs, tmp_path):
    run_a, run_b, _, _ = smoke_runs
    for name in ("report.txt", "report.csv", "pred_test_fcnn.csv",
                 "pred_cv_cnn.csv", "pred_test_mnn.csv", "fcnn.toxmm",
                 "rnn.toxmm", "cnn.toxmm"):
        assert (run_a.out_dir / name).read_bytes() == \
            (run_b.out_dir / name).read_bytes(), name

    model = load_model(run_a.out_dir / "fcnn.toxmm")
    path = tmp_path / "again.toxmm"
    save_model(path, model)
    reloaded = load_model(path)
    x = make_rng(12).normal(size=(10, model.n_features)).astype(np.float32)
    assert np.array_equal(predict(model, x), predict(reloaded, x))
    report(9, "identical seed/config gives bitwise-identical reports, "
              "predictions, and model payloads; save/load round-trips")


# --- criterion 8: meta-learnability ------------------------------------------------

def test_criterion_8_meta_learnability():
    rng = make_rng(31)
    preds = rng.normal(size=(1000, 3))
    targets = preds[:, :1].copy()
    model, _ = train_mnn(preds[:750], targets[:750],
                         MnnConfig(epochs=600, minibatch=64, dropout=0.0,
                                   lr=2e-3, patience=None), seed=5)
    r2 = pearson_r2(predict(model, preds[750:]), targets[750:])
    assert r2 >= 0.99, f"held-out R2 {r2:.4f}"
    report(8, f"MNN on synthetic components with target = component 1: "
              f"held-out R2 {r2:.4f} >= 0.99")
