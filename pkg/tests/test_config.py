import json

from pytest import fixture, raises

from freeassoc import __version__
from freeassoc.activation_configs import DecayParams
from freeassoc.config import (ConfigException, RUN_KEYS, RunConfig, build_metadata, parse_bool, read_kv_file,
                              write_json, write_sidecar)


@fixture
def cfg_file(tmp_path):
    def write(text):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write


def test_read_kv_file(cfg_file):
    path = cfg_file("# activation\n\nretention = 0.25\niterations = auto\nweighted = no\nseed=11\n")
    values = read_kv_file(path, RUN_KEYS)
    assert(values == {"retention": 0.25, "iterations": None, "weighted": False, "seed": 11})


def test_read_kv_file_errors(cfg_file):
    cases = [
        ("retention 0.5\n", ":1:"),
        ("seed = 1\ncolour = red\n", ":2:"),
        ("seed = 1\n\nseed = 2\n", ":3:"),
        ("weighted = maybe\n", ":1:"),
        ("iterations = many\n", ":1:"),
    ]
    for text, location in cases:
        path = cfg_file(text)
        with raises(ConfigException) as e:
            read_kv_file(path, RUN_KEYS)
        assert(f"{path}{location}" in str(e.value))


def test_parse_bool():
    assert(parse_bool("Yes") and parse_bool("1") and parse_bool("on"))
    assert(not parse_bool("false"))
    with raises(ValueError):
        parse_bool("perhaps")


def test_from_file_layers_on_base(cfg_file):
    base = RunConfig(seed=3, decay=0.2)
    cfg = RunConfig.from_file(cfg_file("retention = 0.75\n"), base)
    assert(cfg.retention == 0.75)
    assert(cfg.seed == 3)
    assert(cfg.decay == 0.2)


def test_with_overrides():
    cfg = RunConfig().with_overrides(seed=5, retention=None, unknown=1)
    assert(cfg.seed == 5)
    assert(cfg.retention == 0.5)


def test_validation():
    with raises(ConfigException):
        RunConfig(normalization="softmax")
    with raises(ConfigException):
        RunConfig(threads=0)
    with raises(ConfigException):
        RunConfig(retention=2.0).activation_params()


def test_activation_params():
    p = RunConfig().with_overrides(**DecayParams.to_dict()).activation_params()
    assert(p == DecayParams)
    assert(p.initial_activation is None)


def test_metadata_and_outputs(tmp_path):
    metadata = build_metadata(42, {"command": "net-stats"})
    assert(metadata["tool"] == "freeassoc")
    assert(metadata["version"] == __version__)
    assert(metadata["seed"] == 42)
    assert(set(metadata) == {"tool", "version", "seed", "parameters", "created"})

    path = tmp_path / "out.json"
    write_json(str(path), {"b": 1, "a": 2}, metadata)
    text = path.read_text(encoding="utf-8")
    assert(text.index('"a"') < text.index('"b"'))
    assert(json.loads(text)["metadata"]["parameters"] == {"command": "net-stats"})

    sidecar = write_sidecar(str(tmp_path / "edges.tsv"), metadata)
    assert(sidecar.endswith("edges.tsv.meta.json"))
    with open(sidecar, encoding="utf-8") as f:
        assert(json.load(f) == metadata)
