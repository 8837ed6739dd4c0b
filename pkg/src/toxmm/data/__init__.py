"""Bundled benchmark data.

The packaged ``igc50_synthetic.csv`` is a deterministic surrogate for the
1792-compound growth-inhibition benchmark: same row count, SMILES lengths
within 2..52, small-organic chemistry, and a structure-driven target in
-log10(mol/L) units. Point TOXMM_DATA at a real ``smiles,igc50`` CSV to run
against measured data instead.
"""

from pathlib import Path


def packaged_benchmark_path() -> Path:
    return Path(__file__).resolve().parent / "igc50_synthetic.csv"
