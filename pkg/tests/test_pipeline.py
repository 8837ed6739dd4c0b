import numpy as np
import pytest

from toxmm.errors import (
    ConfigInvalid,
    DegenerateInput,
    EmptySpace,
    FileMissing,
    HeaderMismatch,
    KTooLarge,
    TooFewRecords,
)
from toxmm.pipeline import kfold, load_dataset, pearson_r2, split
from toxmm.pipeline.config import parse_config
from toxmm.pipeline.search import SearchSpace, random_search, write_trials_csv


def write_csv(tmp_path, rows, header="smiles,igc50"):
    path = tmp_path / "data.csv"
    path.write_text("\n".join([header] + rows) + "\n", encoding="utf-8")
    return path


# --- load_dataset -----------------------------------------------------------

def test_load_two_valid_rows(tmp_path):
    path = write_csv(tmp_path, ["CC,1.5", "CCO,2.25"])
    records, rejects = load_dataset(path)
    assert len(records) == 2
    assert rejects == []
    assert records[0].smiles == "CC"
    assert records[0].igc50 == 1.5
    assert len(records[1].graph.atoms) == 3


def test_bad_target_rejected_with_line(tmp_path):
    path = write_csv(tmp_path, ["CC,1.5", "CCO,abc", "CCC,2.0"])
    records, rejects = load_dataset(path)
    assert len(records) == 2
    assert len(rejects) == 1
    assert rejects[0].line == 3
    assert rejects[0].code == "BadTarget"


def test_bad_smiles_rejected_with_code(tmp_path):
    path = write_csv(tmp_path, ["C(C,1.0", "CC?,1.0", "CC,1.0"])
    records, rejects = load_dataset(path)
    assert len(records) == 1
    codes = {r.code for r in rejects}
    assert codes == {"UnbalancedBranch", "UnknownCharacter"}


def test_missing_file_and_header(tmp_path):
    with pytest.raises(FileMissing):
        load_dataset(tmp_path / "nope.csv")
    path = write_csv(tmp_path, ["CC,1.0"], header="smiles,value")
    with pytest.raises(HeaderMismatch):
        load_dataset(path)


# --- split / kfold ----------------------------------------------------------

def test_split_ten_records():
    records = list(range(10))
    train, test = split(records, 0.3, seed=1)
    assert len(train) == 7
    assert len(test) == 3
    assert sorted(train + test) == records


def test_split_benchmark_sizes():
    # ceil(0.3 * 1792) = 538 test, remainder 1254 train
    records = list(range(1792))
    train, test = split(records, 0.30, seed=3)
    assert len(train) == 1254
    assert len(test) == 538


def test_split_determinism_and_guard():
    records = list(range(50))
    a = split(records, 0.3, seed=7)
    b = split(records, 0.3, seed=7)
    assert a == b
    c = split(records, 0.3, seed=8)
    assert c != a
    with pytest.raises(TooFewRecords):
        split(list(range(5)), 0.3, seed=0)


def test_kfold_partition():
    folds = kfold(10, 5, seed=2)
    assert [len(f) for f in folds] == [2] * 5
    union = np.concatenate(folds)
    assert sorted(union.tolist()) == list(range(10))


def test_kfold_benchmark_sizes():
    folds = kfold(1254, 5, seed=2)
    assert sorted(len(f) for f in folds) == [250, 251, 251, 251, 251]
    assert sum(len(f) for f in folds) == 1254


def test_kfold_too_large():
    with pytest.raises(KTooLarge):
        kfold(3, 5, seed=0)


# --- pearson_r2 --------------------------------------------------------------

def naive_pearson(pred, target):
    n = len(pred)
    mp = sum(pred) / n
    mt = sum(target) / n
    cov = sum((p - mp) * (t - mt) for p, t in zip(pred, target)) / n
    vp = sum((p - mp) ** 2 for p in pred) / n
    vt = sum((t - mt) ** 2 for t in target) / n
    r = cov / (vp ** 0.5 * vt ** 0.5)
    return r * r


def test_pearson_identity_and_negation():
    x = np.array([1.0, 2.0, 5.0, -3.0])
    assert pearson_r2(x, x) == pytest.approx(1.0)
    assert pearson_r2(-x, x) == pytest.approx(1.0)


def test_pearson_vs_naive_oracle():
    rng = np.random.default_rng(11)
    pred = rng.normal(size=50)
    target = 0.7 * pred + rng.normal(size=50)
    assert pearson_r2(pred, target) == pytest.approx(
        naive_pearson(pred.tolist(), target.tolist()), abs=1e-10)


from hypothesis import given, strategies as st


@given(st.floats(min_value=0.1, max_value=50.0),
       st.floats(min_value=-20.0, max_value=20.0),
       st.booleans())
def test_pearson_affine_invariance(scale, shift, flip):
    x = np.array([0.3, -1.2, 4.5, 2.2, -0.7, 1.1])
    y = np.array([1.0, -0.8, 3.9, 2.0, 0.1, 0.5])
    factor = -scale if flip else scale
    assert pearson_r2(factor * x + shift, y) == pytest.approx(
        pearson_r2(x, y), abs=1e-9)


def test_pearson_degenerate():
    with pytest.raises(DegenerateInput):
        pearson_r2([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    with pytest.raises(DegenerateInput):
        pearson_r2([1.0], [1.0])


# --- random search ------------------------------------------------------------

SPACE_TEXT = """
epochs = 100 | 200 | 400
dropout = 0.0 .. 0.5
minibatch = 128 | 512 | 1024
activation1 = sigmoid | relu
init = glorot_normal
"""


def test_space_parsing():
    space = SearchSpace.parse(SPACE_TEXT)
    assert space.axes["epochs"] == [100, 200, 400]
    assert space.axes["dropout"][0] == "interval"
    assert space.axes["init"] == ["glorot_normal"]


def test_budget_one_returns_single_trial():
    space = SearchSpace.parse(SPACE_TEXT)
    best, trials = random_search(space, 1, lambda p: 0.5, seed=3)
    assert len(trials) == 1
    assert best is trials[0]


def test_table_values_sampleable():
    # a space of singletons pinned to the published configuration
    text = "epochs = 400\ndropout = 0.1\nminibatch = 1024\nactivation1 = sigmoid\n"
    space = SearchSpace.parse(text)
    best, _ = random_search(space, 1, lambda p: 1.0, seed=0)
    assert best.params == {"epochs": 400, "dropout": 0.1, "minibatch": 1024,
                           "activation1": "sigmoid"}


def test_search_determinism_and_tie_break():
    space = SearchSpace.parse(SPACE_TEXT)
    calls = []

    def score(params):
        calls.append(dict(params))
        return 1.0  # all tie: earliest trial must win

    best, trials = random_search(space, 5, score, seed=9)
    assert best.index == 0
    _, trials2 = random_search(space, 5, lambda p: 1.0, seed=9)
    assert [t.params for t in trials] == [t.params for t in trials2]


def test_empty_space():
    with pytest.raises(EmptySpace):
        SearchSpace.parse("   \n# nothing\n")


def test_trials_csv(tmp_path):
    space = SearchSpace.parse("epochs = 100 | 200\n")
    _, trials = random_search(space, 3, lambda p: p["epochs"] / 100.0, seed=1)
    path = tmp_path / "trials.csv"
    write_trials_csv(path, trials)
    lines = path.read_text().splitlines()
    assert lines[0] == "trial,epochs,cv_r2"
    assert len(lines) == 4


# --- config files --------------------------------------------------------------

def test_parse_config_sections():
    run = parse_config("""
run.seed = 11
run.cnn_subsample = 300
fcnn.epochs = 50
rnn.patience = 5
mnn.dropout = 0.2
""")
    assert run.seed == 11
    assert run.cnn_subsample == 300
    assert run.fcnn.epochs == 50
    assert run.rnn.patience == 5
    assert run.mnn.dropout == 0.2


def test_unknown_config_key():
    with pytest.raises(ConfigInvalid):
        parse_config("fcnn.width = 10\n")
    with pytest.raises(ConfigInvalid):
        parse_config("run.unknown = 1\n")
    with pytest.raises(ConfigInvalid):
        parse_config("weird.thing = 1\n")
