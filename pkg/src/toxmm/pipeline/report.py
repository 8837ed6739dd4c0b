"""Report rendering: plain text, machine-readable CSV, and figures.

The text and CSV forms are byte-deterministic for a given report (no
timestamps, fixed float formatting). Figures are auxiliary: a parity
scatter per model and a bar chart against the reference values.
"""

from pathlib import Path

ROW_ORDER = ("fcnn", "cnn", "rnn", "ea", "mnn")
REFERENCE_ONLY = ("toptox", "admetsar", "hybrid2d")


def _fmt(value) -> str:
    return "NA" if value is None else f"{value:.4f}"


def report_text(report) -> str:
    lines = [
        "IGC50 multimodal regression report",
        f"seed: {report.seed}",
        f"config_hash: {report.config_hash}",
        f"featurizers: {', '.join(report.featurizer_versions)}",
        f"records: {report.n_records} ({report.n_rejected} rejected)",
        f"split: {report.n_train} train / {report.n_test} test",
        "",
        f"{'model':<10}{'cv_r2':>10}{'test_r2':>10}{'ref_cv':>10}{'ref_test':>10}",
    ]
    for kind in ROW_ORDER:
        if kind not in report.cv_r2 and kind not in report.test_r2:
            continue
        ref_cv, ref_test = report.reference.get(kind, (None, None))
        lines.append(f"{kind:<10}{_fmt(report.cv_r2.get(kind)):>10}"
                     f"{_fmt(report.test_r2.get(kind)):>10}"
                     f"{_fmt(ref_cv):>10}{_fmt(ref_test):>10}")
    lines.append("")
    for kind in REFERENCE_ONLY:
        ref_cv, ref_test = report.reference[kind]
        lines.append(f"{kind:<10}{'':>10}{'':>10}{_fmt(ref_cv):>10}{_fmt(ref_test):>10}")
    lines.append("")
    for kind, values in report.cv_per_fold.items():
        folds = " ".join(f"{v:.4f}" for v in values)
        lines.append(f"folds[{kind}]: {folds}")
    return "\n".join(lines) + "\n"


def report_csv(report) -> str:
    rows = ["model,cv_r2,test_r2,ref_cv,ref_test"]
    for kind in ROW_ORDER + REFERENCE_ONLY:
        if kind in REFERENCE_ONLY:
            cv = test = None
        elif kind in report.cv_r2 or kind in report.test_r2:
            cv = report.cv_r2.get(kind)
            test = report.test_r2.get(kind)
        else:
            continue
        ref_cv, ref_test = report.reference.get(kind, (None, None))
        rows.append(f"{kind},{_fmt(cv)},{_fmt(test)},{_fmt(ref_cv)},{_fmt(ref_test)}")
    return "\n".join(rows) + "\n"


def write_report(out_dir, report, figures: bool = True, predictions=None):
    out_dir = Path(out_dir)
    (out_dir / "report.txt").write_text(report_text(report), encoding="utf-8")
    (out_dir / "report.csv").write_text(report_csv(report), encoding="utf-8")
    if figures:
        from .figures import render_figures
        render_figures(out_dir, report, predictions or {})
