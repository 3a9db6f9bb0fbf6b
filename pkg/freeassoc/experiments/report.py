"""
Result container shared by the priming and bias-probe experiments, and the
writer that turns it into report.json plus three plot-ready CSV tables.

Dependencies:
    - numpy
    - pandas

"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from freeassoc import FreeAssocException
from freeassoc.config import write_json, write_sidecar
from freeassoc.stats import CorrelationResult, NormalizedMatrix, PairedTestResult, StatsException, wilcoxon_paired

HISTOGRAM_BINS = 20
REPORT_FILE = "report.json"
HEATMAP_FILE = "heatmap.csv"
BOXPLOT_FILE = "boxplot.csv"
HISTOGRAM_FILE = "histogram.csv"
FLOAT_FORMAT = "%.17g"


class ExperimentException(FreeAssocException):
    pass


@dataclass
class ExperimentReport:
    """
    Arguments:
        name:str
            "priming" or "bias_probe"
        primes:List[str]
            activated primes, the columns of the activation matrix
        categories:Dict[str, List[str]]
            target words per category, after dropping missing words
        activation:NormalizedMatrix
            normalized final activation levels
        tests:Dict[str, Optional[PairedTestResult]]
            None where the test was degenerate
        correlations:Dict[str, Optional[CorrelationResult]]
        heatmap:pd.DataFrame
            target, category, one column per prime
        boxplot:pd.DataFrame
        histogram:pd.DataFrame
        dropped:Dict[str, List[str]]
            words left out because the network lacks them
        summary:dict
            experiment specific counts and means
    """
    name: str
    primes: List[str]
    categories: Dict[str, List[str]]
    activation: NormalizedMatrix
    tests: Dict[str, Optional[PairedTestResult]]
    correlations: Dict[str, Optional[CorrelationResult]]
    heatmap: pd.DataFrame
    boxplot: pd.DataFrame
    histogram: pd.DataFrame
    dropped: Dict[str, List[str]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)

    def __repr__(self):
        targets = sum(len(v) for v in self.categories.values())
        return f"ExperimentReport {self.name}: {len(self.primes)} primes, {targets} targets"

    def to_dict(self) -> dict:
        return {
            "experiment": self.name,
            "primes": list(self.primes),
            "categories": {k: list(v) for k, v in self.categories.items()},
            "tests": {k: (v.to_dict() if v is not None else None) for k, v in self.tests.items()},
            "correlations": {k: (v.to_dict() if v is not None else None) for k, v in self.correlations.items()},
            "dropped": {k: list(v) for k, v in self.dropped.items()},
            "summary": self.summary,
        }

    def category_values(self, category: str, primes: Optional[Sequence[str]] = None) -> np.ndarray:
        """Heatmap cells of one category flattened row by row over `primes` (default: sorted primes)"""
        if category not in self.categories:
            raise ExperimentException(f"Unknown target category {category!r}")
        columns = list(primes) if primes is not None else sorted(self.primes)
        rows = self.heatmap[self.heatmap["category"] == category]
        return rows[columns].to_numpy(dtype=np.float64).ravel()


def paired_test(x: Sequence[float], y: Sequence[float], label: str) -> Optional[PairedTestResult]:
    """Wilcoxon test, or None with a warning when the samples are degenerate"""
    try:
        return wilcoxon_paired(x, y)
    except StatsException as e:
        logging.warning(f"No paired test for {label}: {e}")
        return None


def heatmap_table(activation: NormalizedMatrix, categories: Mapping[str, Sequence[str]],
                  primes: Sequence[str]) -> pd.DataFrame:
    """One row per target (categories in order), one column per prime"""
    targets = [t for members in categories.values() for t in members]
    labels = [c for c, members in categories.items() for _ in members]
    rows = [activation.row_index(t) for t in targets]
    columns = [activation.column_index(p) for p in primes]
    cells = activation.values[np.ix_(rows, columns)] if rows else np.zeros((0, len(columns)))
    frame = pd.DataFrame(cells, columns=list(primes))
    frame.insert(0, "category", labels)
    frame.insert(0, "target", targets)
    return frame


def histogram_table(differences: Mapping[str, np.ndarray], bins: int = HISTOGRAM_BINS) -> pd.DataFrame:
    """Equal-width bins per category; a (near) constant sample gets a unit-wide range around its values"""
    records = []
    for category, values in differences.items():
        values = np.asarray(values, dtype=np.float64)
        if len(values) == 0:
            continue
        low, high = float(values.min()), float(values.max())
        if high - low <= np.finfo(np.float64).eps * max(1.0, abs(low), abs(high)) * bins:
            low, high = low - 0.5, high + 0.5
        counts, edges = np.histogram(values, bins=bins, range=(low, high))
        for i, count in enumerate(counts):
            records.append((category, float(edges[i]), float(edges[i + 1]), int(count)))
    return pd.DataFrame(records, columns=["category", "bin_left", "bin_right", "count"])


def _write_table(frame: pd.DataFrame, path: str, metadata: dict) -> None:
    frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n", float_format=FLOAT_FORMAT)
    write_sidecar(path, metadata)


def write_report(report: ExperimentReport, out_dir: str, metadata: dict) -> List[str]:
    """Write report.json, heatmap.csv, boxplot.csv and histogram.csv; returns the paths"""
    os.makedirs(out_dir, exist_ok=True)
    paths = [os.path.join(out_dir, name) for name in (REPORT_FILE, HEATMAP_FILE, BOXPLOT_FILE, HISTOGRAM_FILE)]
    write_json(paths[0], report.to_dict(), metadata)
    _write_table(report.heatmap, paths[1], metadata)
    _write_table(report.boxplot, paths[2], metadata)
    _write_table(report.histogram, paths[3], metadata)
    logging.info(f"Wrote {report} to {out_dir}")
    return paths
