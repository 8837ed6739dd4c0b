"""Command-line interface.

Global flags come before the subcommand: ``toxmm --seed 7 --out-dir out
<command> ...``. Heavy imports happen after argument parsing so --threads
can pin the BLAS thread pool before numpy loads.
"""

import argparse
import os
import sys
from pathlib import Path


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toxmm",
        description="Multimodal IGC50 toxicity regression toolkit")
    parser.add_argument("--seed", type=int, default=7, help="run seed")
    parser.add_argument("--out-dir", type=Path, default=Path("toxmm-out"),
                        help="output directory")
    parser.add_argument("--threads", type=int, default=None,
                        help="BLAS/OpenMP thread cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("featurize", help="encode molecules for one modality")
    p.add_argument("--in", dest="input", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--modality", choices=("seq", "image", "desc"), required=True)
    p.add_argument("--debug-pgm", type=int, default=0, metavar="N",
                   help="dump PGM channel files for the first N molecules")

    p = sub.add_parser("train", help="train one model on a dataset")
    p.add_argument("--model", choices=("fcnn", "cnn", "rnn", "mnn"), required=True)
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--in", dest="input", type=Path, default=None)

    p = sub.add_parser("cv", help="k-fold cross-validation for one model")
    p.add_argument("--model", choices=("fcnn", "cnn", "rnn"), default="fcnn")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--in", dest="input", type=Path, default=None)
    p.add_argument("--k", type=int, default=5)

    p = sub.add_parser("predict", help="predict with a saved model")
    p.add_argument("--model", type=Path, required=True)
    p.add_argument("--in", dest="input", type=Path, default=None)
    p.add_argument("--vocab", type=Path, default=None)
    p.add_argument("--standardizer", type=Path, default=None)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("evaluate", help="R^2 between prediction and target CSVs")
    p.add_argument("--pred", type=Path, required=True)
    p.add_argument("--target", type=Path, default=None,
                   help="defaults to targets inside the prediction CSV")

    p = sub.add_parser("ensemble", help="combine component prediction CSVs")
    p.add_argument("--mode", choices=("ea", "mnn"), required=True)
    p.add_argument("--preds", type=Path, nargs=3, required=True,
                   metavar=("FCNN", "CNN", "RNN"))
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--model", type=Path, default=None,
                   help="saved meta model (mnn mode)")

    p = sub.add_parser("search", help="hyperparameter random search (fcnn)")
    p.add_argument("--space", type=Path, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--in", dest="input", type=Path, default=None)
    p.add_argument("--k", type=int, default=5)

    p = sub.add_parser("run", help="full experiment: CV, test, ensembles, report")
    p.add_argument("--config", type=Path, default=None)
    p.add_argument("--in", dest="input", type=Path, default=None)

    p = sub.add_parser("dataset", help="write the bundled synthetic benchmark")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--n", type=int, default=1792)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)

    from .errors import ToxmmError

    try:
        return _dispatch(args)
    except ToxmmError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


def _dataset_path(args):
    from .pipeline.dataset import default_dataset_path

    return args.input if getattr(args, "input", None) else default_dataset_path()


def _load_records(args):
    from .pipeline.dataset import load_dataset

    records, rejects = load_dataset(_dataset_path(args))
    if rejects:
        print(f"{len(rejects)} rows rejected:")
        for r in rejects[:20]:
            print(f"  line {r.line}: [{r.code}] {r.smiles}")
    return records


def _dispatch(args) -> int:
    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.command == "dataset":
        from .data.generate import write_benchmark_csv

        write_benchmark_csv(args.out, n=args.n, seed=args.seed if args.seed != 7
                            else 1792)
        print(f"wrote {args.n} rows to {args.out}")
        return 0

    if args.command == "featurize":
        return _cmd_featurize(args, out_dir)
    if args.command == "train":
        return _cmd_train(args, out_dir)
    if args.command == "cv":
        return _cmd_cv(args, out_dir)
    if args.command == "predict":
        return _cmd_predict(args, out_dir)
    if args.command == "evaluate":
        return _cmd_evaluate(args)
    if args.command == "ensemble":
        return _cmd_ensemble(args, out_dir)
    if args.command == "search":
        return _cmd_search(args, out_dir)
    if args.command == "run":
        return _cmd_run(args, out_dir)
    raise AssertionError(args.command)


def _cmd_featurize(args, out_dir) -> int:
    import numpy as np

    from .depict import write_pgm_channels, image_from_graph
    from .desc.registry import write_descriptor_csv
    from .pipeline import featurize as ft

    records = _load_records(args)
    out = args.out or out_dir
    out.mkdir(parents=True, exist_ok=True)
    if args.modality == "desc":
        matrix = ft.descriptor_matrix(records)
        write_descriptor_csv(out / "descriptors.csv", matrix)
        print(f"wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to "
              f"{out / 'descriptors.csv'}")
    elif args.modality == "seq":
        vocab = ft.fit_vocab(records)
        vocab.save(out / "vocab.tsv")
        encoded = ft.sequence_features(records, vocab)
        np.savez_compressed(out / "sequences.npz", one_hot=encoded)
        print(f"wrote {encoded.shape} one-hot tensor and vocab ({vocab.size} chars)")
    else:
        images = ft.image_features(records)
        np.savez_compressed(out / "images.npz", grids=images)
        for i in range(min(args.debug_pgm, len(records))):
            write_pgm_channels(image_from_graph(records[i].graph),
                               out / f"mol_{i:04d}")
        print(f"wrote {images.shape} image tensor")
    return 0


def _cmd_train(args, out_dir) -> int:
    import numpy as np

    from .models import save_model, train_model
    from .pipeline import featurize as ft
    from .pipeline.config import load_config
    from .pipeline.experiment import RunConfig, _fit_predict, _seed_for

    run = load_config(args.config, seed=args.seed) if args.config \
        else RunConfig(seed=args.seed)
    records = _load_records(args)
    if args.model == "mnn":
        print("the meta network trains inside `toxmm run` from out-of-fold "
              "component predictions; train components first", file=sys.stderr)
        return 1
    vocab = ft.fit_vocab(records)
    vocab.save(out_dir / "vocab.tsv")
    desc = ft.descriptor_matrix(records)
    if args.model == "fcnn":
        std = ft.fit_descriptor_standardizer(desc)
        std.save(out_dir / "standardizer.csv")
    all_idx = np.arange(len(records))
    _, model = _fit_predict(args.model, run, records, all_idx,
                            [all_idx[:1]], vocab, desc,
                            _seed_for(args.seed, args.model, 999),
                            return_model=True)
    path = out_dir / f"{args.model}.toxmm"
    save_model(path, model)
    print(f"saved {args.model} to {path}")
    return 0


def _cmd_cv(args, out_dir) -> int:
    import numpy as np

    from .pipeline import featurize as ft
    from .pipeline.config import load_config
    from .pipeline.dataset import kfold
    from .pipeline.experiment import RunConfig, _fit_predict, _seed_for
    from .pipeline.metrics import pearson_r2

    run = load_config(args.config, seed=args.seed) if args.config \
        else RunConfig(seed=args.seed)
    records = _load_records(args)
    y = ft.targets(records)
    vocab = ft.fit_vocab(records)
    desc = ft.descriptor_matrix(records)
    folds = kfold(len(records), args.k, seed=args.seed)
    scores = []
    for f, held in enumerate(folds):
        train_idx = np.setdiff1d(np.arange(len(records)), held)
        pred = _fit_predict(args.model, run, records, train_idx, [held],
                            vocab, desc, _seed_for(args.seed, args.model, f))[0]
        scores.append(pearson_r2(pred, y[held]))
        print(f"fold {f}: R2 {scores[-1]:.4f}")
    print(f"cv mean R2: {float(np.mean(scores)):.4f}")
    return 0


def _cmd_predict(args, out_dir) -> int:
    import numpy as np

    from .desc import Standardizer
    from .models import load_model
    from .pipeline import featurize as ft
    from .seq import Vocab

    model = load_model(args.model)
    records = _load_records(args)
    if model.kind == "fcnn":
        std_path = args.standardizer or args.model.parent / "standardizer.csv"
        std = Standardizer.load(std_path)
        x = ft.descriptor_features(ft.descriptor_matrix(records), std)
        from .models import predict as predict_fn
        preds = predict_fn(model, x)
    elif model.kind == "convrnn":
        vocab_path = args.vocab or args.model.parent / "vocab.tsv"
        vocab = Vocab.load(vocab_path)
        from .models import predict as predict_fn
        preds = predict_fn(model, ft.sequence_features(records, vocab))
    elif model.kind == "resnet":
        preds = ft.predict_images(model, records)
    else:
        print("meta models predict from component prediction CSVs; "
              "use `toxmm ensemble --mode mnn`", file=sys.stderr)
        return 1
    out = args.out or out_dir / "predictions.csv"
    preds = np.asarray(preds).reshape(-1)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("index,smiles,target,prediction\n")
        for i, (rec, p) in enumerate(zip(records, preds)):
            fh.write(f"{i},{rec.smiles},{rec.igc50:.17g},{p:.17g}\n")
    print(f"wrote {len(preds)} predictions to {out}")
    return 0


def _read_prediction_csv(path, with_folds=False):
    import csv

    targets, preds, folds = [], [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            targets.append(float(row["target"]))
            preds.append(float(row["prediction"]))
            if "fold" in row and row["fold"] is not None:
                folds.append(int(row["fold"]))
    if with_folds:
        return targets, preds, (folds if len(folds) == len(preds) else None)
    return targets, preds


def _cmd_evaluate(args) -> int:
    import numpy as np

    from .pipeline.metrics import pearson_r2

    targets, preds, folds = _read_prediction_csv(args.pred, with_folds=True)
    if args.target:
        targets, _ = _read_prediction_csv(args.target)
    r2 = pearson_r2(preds, targets)
    print(f"pearson_r2: {r2:.6f}")
    if folds is not None:
        targets = np.array(targets)
        preds = np.array(preds)
        folds = np.array(folds)
        per_fold = [pearson_r2(preds[folds == f], targets[folds == f])
                    for f in sorted(set(folds.tolist()))]
        print(f"fold_mean_r2: {float(np.mean(per_fold)):.6f}")
        print("per_fold: " + " ".join(f"{v:.6f}" for v in per_fold))
    return 0


def _cmd_ensemble(args, out_dir) -> int:
    import numpy as np

    from .models import ensemble_average, load_model, predict

    columns = [_read_prediction_csv(p) for p in args.preds]
    targets = np.array(columns[0][0])
    stacked = np.stack([np.array(c[1]) for c in columns], axis=1)
    if args.mode == "ea":
        combined = ensemble_average(stacked[:, 0], stacked[:, 1], stacked[:, 2])
    else:
        if not args.model:
            print("mnn mode needs --model pointing at a saved meta network",
                  file=sys.stderr)
            return 1
        meta = load_model(args.model, expect_kind="mnn")
        combined = predict(meta, stacked.astype(np.float32)).reshape(-1)
    out = args.out or out_dir / f"ensemble_{args.mode}.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("index,target,prediction\n")
        for i, (t, p) in enumerate(zip(targets, combined)):
            fh.write(f"{i},{t:.17g},{p:.17g}\n")
    from .pipeline.metrics import pearson_r2
    print(f"wrote {out}; R2 vs targets: {pearson_r2(combined, targets):.6f}")
    return 0


def _cmd_search(args, out_dir) -> int:
    import numpy as np

    from .models import Fcnn, TrainConfig, predict as predict_fn, train_model
    from .models.configs import FcnnConfig
    from .pipeline import featurize as ft
    from .pipeline.dataset import kfold
    from .pipeline.metrics import pearson_r2
    from .pipeline.search import SearchSpace, random_search, write_trials_csv

    space = SearchSpace.load(args.space)
    records = _load_records(args)
    y = ft.targets(records)
    desc = ft.descriptor_matrix(records)
    folds = kfold(len(records), args.k, seed=args.seed)

    def score(params):
        from .errors import ConfigInvalid

        if params.get("init", "glorot_normal") != "glorot_normal":
            raise ConfigInvalid(f"unsupported init {params['init']!r}")
        cfg_kwargs = {}
        if "epochs" in params:
            cfg_kwargs["epochs"] = int(params["epochs"])
        if "dropout" in params:
            cfg_kwargs["dropout_after_layer1"] = float(params["dropout"])
        if "minibatch" in params:
            cfg_kwargs["minibatch"] = int(params["minibatch"])
        if "activation1" in params or "activation2" in params:
            cfg_kwargs["activations"] = (params.get("activation1", "sigmoid"),
                                         params.get("activation2", "relu"))
        if "lr" in params:
            cfg_kwargs["lr"] = float(params["lr"])
        cfg = FcnnConfig(**cfg_kwargs)
        scores = []
        for f, held in enumerate(folds):
            train_idx = np.setdiff1d(np.arange(len(records)), held)
            std = ft.fit_descriptor_standardizer(desc[train_idx])
            model = Fcnn(n_features=int(std.kept.sum()), cfg=cfg,
                         seed=args.seed * 100 + f)
            train_model(model, ft.descriptor_features(desc[train_idx], std),
                        y[train_idx],
                        TrainConfig(epochs=cfg.epochs, minibatch=cfg.minibatch,
                                    lr=cfg.lr, seed=args.seed * 100 + f))
            pred = predict_fn(model, ft.descriptor_features(desc[held], std))
            scores.append(pearson_r2(pred, y[held]))
        return float(np.mean(scores))

    best, trials = random_search(space, args.budget, score, seed=args.seed)
    write_trials_csv(out_dir / "search_trials.csv", trials)
    print(f"best trial {best.index}: score {best.score:.4f} params {best.params}")
    return 0


def _cmd_run(args, out_dir) -> int:
    from .pipeline.config import load_config
    from .pipeline.experiment import RunConfig, run_experiment
    from .pipeline.report import report_text

    if args.config:
        run = load_config(args.config, seed=args.seed, out_dir=out_dir,
                          **({"dataset": args.input} if args.input else {}))
    else:
        kwargs = {"dataset": args.input} if args.input else {}
        run = RunConfig(seed=args.seed, out_dir=out_dir, **kwargs)
    report = run_experiment(run)
    print(report_text(report))
    print(f"artifacts in {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
