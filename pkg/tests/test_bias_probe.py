import json

from pytest import approx, raises

from freeassoc.activation import ActivationParams
from freeassoc.experiments import (ExperimentException, GenderProbe, cross_model_correlation, default_gender_probe,
                                   load_gender_probe, run_bias_probe)
from freeassoc.networks import SemanticNetwork

PAIRS = [(f"f{i}", f"m{i}") for i in range(1, 6)]

edges = []
for i in range(1, 6):
    edges += [(f"f{i}", "feminine", 10 + i), (f"f{i}", "masculine", 1),
              (f"m{i}", "masculine", 10), (f"m{i}", "feminine", 1)]
g = SemanticNetwork.from_edges(edges)
p = ActivationParams()

probe = GenderProbe(PAIRS, ["feminine"], ["masculine"])
report = run_bias_probe(g, probe, p, threads=1)


def test_stereotype_consistent_effects():
    assert(report.tests["female"].effect_r > 0)
    assert(report.tests["male"].effect_r < 0)
    assert(report.tests["female"].n == 5)
    summary = report.summary
    assert(summary["prime_target_pairs"] == 20)
    assert(summary["stereotype_consistent"]["mean_activation"]
           > summary["stereotype_inconsistent"]["mean_activation"])


def test_swapping_pairs_negates_effects():
    swapped = run_bias_probe(g, probe.swapped(), p, threads=1)
    assert(swapped.activation.primes == report.activation.primes)
    assert((swapped.activation.values == report.activation.values).all())
    for category in ("female", "male"):
        assert(swapped.tests[category].effect_r == -report.tests[category].effect_r)
        assert(swapped.tests[category].p == report.tests[category].p)


def test_tables():
    assert(list(report.heatmap.columns) == ["target", "category"] + list(probe.primes))
    assert(list(report.heatmap["target"]) == ["feminine", "masculine"])
    assert(len(report.boxplot) == 10)
    assert(set(report.boxplot["pair"]) == {f"{f}-{m}" for f, m in PAIRS})
    assert(set(report.histogram["category"]) == {"female", "male"})


def test_cross_model_self_correlation():
    result = cross_model_correlation(report, report)
    assert(set(result) == {"female", "male"})
    assert(result["female"].rho == approx(1.0))
    assert(result["female"].n == 10)


def test_cross_model_ignores_pair_order():
    swapped = run_bias_probe(g, probe.swapped(), p, threads=1)
    assert(cross_model_correlation(report, swapped)["male"].rho == approx(1.0))


def test_cross_model_shape_mismatch():
    smaller = run_bias_probe(g, GenderProbe(PAIRS[:4], ["feminine"], ["masculine"]), p, threads=1)
    with raises(ExperimentException):
        cross_model_correlation(report, smaller)


def test_missing_prime():
    with raises(ExperimentException):
        run_bias_probe(g, GenderProbe([("queen", "king")], ["feminine"], ["masculine"]), p, threads=1)


def test_missing_targets_dropped():
    r = run_bias_probe(g, GenderProbe(PAIRS, ["feminine", "ghost"], ["masculine"]), p, threads=1)
    assert(r.dropped == {"female": ["ghost"], "male": []})
    assert(r.categories["female"] == ["feminine"])
    with raises(ExperimentException):
        run_bias_probe(g, GenderProbe(PAIRS, ["ghost"], ["spook"]), p, threads=1)


def test_probe_validation():
    with raises(ExperimentException):
        GenderProbe([], ["a"], ["b"])
    with raises(ExperimentException):
        GenderProbe([("x", "x")], ["a"], ["b"])
    with raises(ExperimentException):
        GenderProbe([("x", "y")], ["a"], ["a"])
    with raises(ExperimentException):
        GenderProbe([("x", "y")], ["x"], ["b"])
    with raises(ExperimentException):
        GenderProbe([("x", "y")], [], ["b"])


def test_probe_accessors():
    assert(probe.primes == ("f1", "m1", "f2", "m2", "f3", "m3", "f4", "m4", "f5", "m5"))
    assert(probe.female_primes == ("f1", "f2", "f3", "f4", "f5"))
    assert(probe.swapped().female_primes == probe.male_primes)
    assert(probe.swapped().swapped() == probe)
    assert(probe.pair_count() == 20)
    assert(not probe.is_standard())


def test_default_probe():
    default = default_gender_probe()
    assert(default.is_standard())
    assert(default.prime_pairs[0] == ("woman", "man"))
    assert(default.pair_count() == 500)


def test_load_probe_errors(tmp_path):
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"prime_pairs": [["a", "b"]], "female_targets": ["c"]}), encoding="utf-8")
    with raises(ExperimentException):
        load_gender_probe(str(missing))
    bad_pair = tmp_path / "pair.json"
    bad_pair.write_text(json.dumps({"prime_pairs": [["a"]], "female_targets": ["c"], "male_targets": ["d"]}),
                        encoding="utf-8")
    with raises(ExperimentException):
        load_gender_probe(str(bad_pair))
    broken = tmp_path / "broken.json"
    broken.write_text("{\n  \"prime_pairs\": [\n", encoding="utf-8")
    with raises(ExperimentException):
        load_gender_probe(str(broken))
