"""
End-to-end checks against the published Haiku norms.  Set
FREEASSOC_HAIKU_CSV to the raw CSV and FREEASSOC_LEXICON_DIR to a lexicon
directory to run them; they take several minutes.
"""
import os

import pytest
from pytest import approx

from freeassoc.activation_configs import DefaultParams
from freeassoc.experiments import default_gender_probe, default_priming_items, run_bias_probe, run_priming
from freeassoc.lexicon import load_lexicon_dir
from freeassoc.networks import build_directed, net_stats, reduce, undirect_max
from freeassoc.norms import PreprocessReport, dataset_stats, parse_norms_csv, preprocess

HAIKU_CSV = os.environ.get("FREEASSOC_HAIKU_CSV")
LEXICON_DIR = os.environ.get("FREEASSOC_LEXICON_DIR")

pytestmark = pytest.mark.skipif(not (HAIKU_CSV and LEXICON_DIR),
                                reason="FREEASSOC_HAIKU_CSV and FREEASSOC_LEXICON_DIR not set")


@pytest.fixture(scope="module")
def haiku():
    lex = load_lexicon_dir(LEXICON_DIR)
    report = PreprocessReport(seed=0, repetitions=100)
    table = preprocess(parse_norms_csv(HAIKU_CSV), lex, 0, 100, report)
    network = reduce(undirect_max(build_directed(table), source=HAIKU_CSV), lex)
    return table, network


def test_dataset_stats(haiku):
    table, _ = haiku
    stats = dataset_stats(table)
    assert(stats.unique_cues == 11545)
    assert(stats.total_responses == approx(3403644, rel=0.02))
    assert(stats.unique_responses == approx(15275, rel=0.02))
    assert(stats.missing_pct == approx(1.7, rel=0.02))


def test_reduced_network(haiku):
    _, network = haiku
    stats = net_stats(network)
    assert(stats.nodes == approx(15596, rel=0.05))
    assert(stats.edges == approx(64599, rel=0.05))


def test_priming(haiku):
    _, network = haiku
    report = run_priming(network, default_priming_items(), DefaultParams.resolve(network))
    assert(report.tests["activation"].effect_r > 0.7)
    assert(report.tests["activation"].p < 0.001)
    assert(report.correlations["activation_vs_rt"].rho < -0.4)


def test_bias_probe_runs(haiku):
    _, network = haiku
    report = run_bias_probe(network, default_gender_probe(), DefaultParams.resolve(network))
    assert(report.summary["prime_target_pairs"] > 0)
