"""
Command line entry point.

    freeassoc <subcommand> [options]

Subcommands: preprocess, build-net, net-stats, compare-nets, activate,
prime-experiment, bias-probe, generate, pipeline, build-compounds,
export-lexicon.  Settings come from the defaults, then an optional
activation preset, then --config, then explicit flags.

Exit codes: 0 on success, 1 on a processing error, 2 on bad usage.

"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict, replace
from typing import List, Optional, Sequence

from freeassoc import FreeAssocException, __version__
from freeassoc.activation.batch_activate import spread_batch
from freeassoc.activation_configs import PRESETS
from freeassoc.config import ConfigException, RunConfig, _optional, build_metadata, write_json, write_sidecar
from freeassoc.experiments.bias_probe import (cross_model_correlation, default_gender_probe, load_gender_probe,
                                              run_bias_probe)
from freeassoc.experiments.priming import default_priming_items, load_priming_items, run_priming
from freeassoc.experiments.report import write_report
from freeassoc.lexicon import Lexicon, build_compound_map, load_lexicon_dir, read_word_list, write_compound_map
from freeassoc.llmgen.client import ChatClient
from freeassoc.llmgen.generate import GenConfig, generate, resume
from freeassoc.networks.netbuild import build_directed, compare, net_stats, reduce, undirect_max
from freeassoc.networks.semantic_network import read_edge_list, write_edge_list
from freeassoc.norms.norms_table import (HEADER, REPETITIONS, dataset_stats, parse_norms_csv,
                                         write_norms_csv)
from freeassoc.norms.preprocess import PreprocessReport, preprocess
from freeassoc.stats import Normalization, normalize

LOG_FORMAT = "%(asctime)s %(levelname)s %(message)s"
AUTO_FLAGS = ("initial_activation", "iterations")


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


def _run_config(args) -> RunConfig:
    cfg = RunConfig()
    preset = getattr(args, "preset", None)
    if preset:
        cfg = cfg.with_overrides(**PRESETS[preset].to_dict())
    if getattr(args, "run_config", None):
        cfg = RunConfig.from_file(args.run_config, cfg)
    overrides = {name: getattr(args, name, None) for name in (
        "lexicon_dir", "seed", "retention", "decay", "suppress", "normalization", "output_dir", "threads")}
    overrides["verbosity"] = args.verbose or None
    if getattr(args, "unweighted", False):
        overrides["weighted"] = False
    cfg = cfg.with_overrides(**overrides)
    # absent unless given on the command line; an explicit "auto" arrives as None
    explicit = {name: getattr(args, name) for name in AUTO_FLAGS if hasattr(args, name)}
    return replace(cfg, **explicit)


def _lexicon(cfg: RunConfig) -> Lexicon:
    if not cfg.lexicon_dir:
        raise ConfigException("No lexicon directory: pass --lexicon-dir or set lexicon_dir in the config")
    return load_lexicon_dir(cfg.lexicon_dir)


def _metadata(args, cfg: RunConfig, **extra) -> dict:
    parameters = {"command": args.command, **cfg.to_dict(), **extra}
    return build_metadata(cfg.seed, parameters)


def _write_csv_output(path: str, metadata: dict) -> None:
    write_sidecar(path, metadata)
    logging.info(f"Wrote {path}")


def _read_words(path: str) -> List[str]:
    with open(path, "r", encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def cmd_preprocess(args, cfg: RunConfig) -> None:
    lex = _lexicon(cfg)
    report = PreprocessReport(seed=cfg.seed, repetitions=args.repetitions)
    table = preprocess(parse_norms_csv(args.input), lex, cfg.seed, args.repetitions, report)
    metadata = _metadata(args, cfg, input=args.input, repetitions=args.repetitions)
    write_norms_csv(table, args.output)
    _write_csv_output(args.output, metadata)
    if args.report:
        payload = {"report": report.to_dict(), "dataset": dataset_stats(table, args.repetitions).to_dict()}
        write_json(args.report, payload, metadata)


def cmd_build_net(args, cfg: RunConfig) -> None:
    table = parse_norms_csv(args.input)
    full = undirect_max(build_directed(table), source=args.input)
    metadata = _metadata(args, cfg, input=args.input)
    if args.full_output:
        write_edge_list(full, args.full_output)
        _write_csv_output(args.full_output, metadata)
    reduced = reduce(full, _lexicon(cfg))
    write_edge_list(reduced, args.output)
    _write_csv_output(args.output, {**metadata, "network": reduced.metadata})


def cmd_net_stats(args, cfg: RunConfig) -> None:
    stats = net_stats(read_edge_list(args.input))
    payload = stats.display() if args.rounded else stats.to_dict()
    if args.output:
        write_json(args.output, payload, _metadata(args, cfg, input=args.input))
    else:
        print(json.dumps(payload, sort_keys=True))


def cmd_compare_nets(args, cfg: RunConfig) -> None:
    report = compare(read_edge_list(args.a), read_edge_list(args.b))
    payload = report.display() if args.rounded else report.to_dict()
    if args.output:
        write_json(args.output, payload, _metadata(args, cfg, a=args.a, b=args.b))
    else:
        print(json.dumps(payload, sort_keys=True))


def cmd_activate(args, cfg: RunConfig) -> None:
    g = read_edge_list(args.network)
    primes = (_read_words(args.primes) if args.primes else []) + list(args.prime_labels or [])
    if not primes:
        raise ConfigException("No primes: pass --primes or --prime-labels")
    p = cfg.activation_params().resolve(g)
    m = spread_batch(g, primes, p, cfg.threads)
    if args.normalized:
        m = normalize(m, cfg.normalization)
    m.write_csv(args.output)
    _write_csv_output(args.output, _metadata(args, cfg, network=args.network, activation=p.to_dict()))


def _write_experiment(args, cfg: RunConfig, report, p, out_dir: str) -> None:
    metadata = _metadata(args, cfg, network=args.network, activation=p.to_dict())
    write_report(report, out_dir, metadata)


def cmd_prime_experiment(args, cfg: RunConfig) -> None:
    g = read_edge_list(args.network)
    items = load_priming_items(args.items) if args.items else default_priming_items()
    p = cfg.activation_params().resolve(g)
    report = run_priming(g, items, p, cfg.normalization, cfg.threads)
    _write_experiment(args, cfg, report, p, cfg.output_dir)


def cmd_bias_probe(args, cfg: RunConfig) -> None:
    g = read_edge_list(args.network)
    probe = load_gender_probe(args.probe) if args.probe else default_gender_probe()
    p = cfg.activation_params().resolve(g)
    report = run_bias_probe(g, probe, p, cfg.normalization, cfg.threads)
    if args.reference:
        reference_net = read_edge_list(args.reference)
        reference = run_bias_probe(reference_net, probe, cfg.activation_params().resolve(reference_net),
                                   cfg.normalization, cfg.threads)
        for category, result in cross_model_correlation(reference, report).items():
            report.correlations[f"{category}_vs_reference"] = result
    _write_experiment(args, cfg, report, p, cfg.output_dir)


def cmd_generate(args, cfg: RunConfig) -> None:
    gen_cfg = GenConfig.from_file(args.config)
    client = ChatClient(gen_cfg.endpoint, gen_cfg.model, gen_cfg.temperature, gen_cfg.max_tokens)
    if args.resume:
        table, _ = resume(args.log, gen_cfg, client, threads=cfg.threads)
    elif not args.cues:
        raise ConfigException("--cues is required unless --resume is given")
    else:
        table, _ = generate(_read_words(args.cues), gen_cfg, client, args.log, threads=cfg.threads)
    write_norms_csv(table, args.output)
    _write_csv_output(args.output, _metadata(args, cfg, generation=asdict(gen_cfg)))


def cmd_pipeline(args, cfg: RunConfig) -> None:
    lex = _lexicon(cfg)
    out_dir = cfg.output_dir
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, args.name)
    metadata = _metadata(args, cfg, input=args.input, name=args.name)

    report = PreprocessReport(seed=cfg.seed, repetitions=REPETITIONS)
    table = preprocess(parse_norms_csv(args.input), lex, cfg.seed, REPETITIONS, report)
    write_norms_csv(table, f"{base}.preprocessed.csv")
    _write_csv_output(f"{base}.preprocessed.csv", metadata)
    write_json(f"{base}.report.json", {"report": report.to_dict()}, metadata)

    full = undirect_max(build_directed(table), source=args.input)
    reduced = reduce(full, lex)
    write_edge_list(full, f"{base}.full.tsv")
    _write_csv_output(f"{base}.full.tsv", metadata)
    write_edge_list(reduced, f"{base}.reduced.tsv")
    _write_csv_output(f"{base}.reduced.tsv", {**metadata, "network": reduced.metadata})
    write_json(f"{base}.stats.json", {
        "dataset": dataset_stats(table, REPETITIONS).to_dict(),
        "full": net_stats(full).to_dict(),
        "reduced": net_stats(reduced).to_dict(),
    }, metadata)

    if args.skip_experiments:
        return
    p = cfg.activation_params().resolve(reduced)
    experiment_meta = {**metadata, "activation": p.to_dict()}
    priming = run_priming(reduced, default_priming_items(), p, cfg.normalization, cfg.threads)
    write_report(priming, os.path.join(out_dir, "priming"), experiment_meta)
    bias = run_bias_probe(reduced, default_gender_probe(), p, cfg.normalization, cfg.threads)
    write_report(bias, os.path.join(out_dir, "bias"), experiment_meta)


def cmd_build_compounds(args, cfg: RunConfig) -> None:
    compound_map, _ = build_compound_map(read_word_list(args.words))
    write_compound_map(compound_map, args.output)
    logging.info(f"Wrote {len(compound_map)} compound entries to {args.output}")


def cmd_export_lexicon(args, cfg: RunConfig) -> None:
    from freeassoc.lexicon_export import export_wordnet
    vocabulary = set()
    for path in args.norms:
        frame = parse_norms_csv(path).frame
        for column in HEADER:
            vocabulary.update(v.strip().lower() for v in frame[column])
    export_wordnet(args.output_dir, vocabulary, args.spelling)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    common.add_argument("--threads", type=int, help="cap on worker processes / concurrent requests")

    configured = argparse.ArgumentParser(add_help=False)
    configured.add_argument("--config", dest="run_config", help="key = value run configuration file")
    configured.add_argument("--seed", type=int)
    configured.add_argument("--lexicon-dir")

    activation = argparse.ArgumentParser(add_help=False)
    activation.add_argument("--preset", choices=sorted(PRESETS))
    activation.add_argument("--retention", type=float)
    activation.add_argument("--decay", type=float)
    activation.add_argument("--suppress", type=float)
    activation.add_argument("--initial", "--initial-activation", dest="initial_activation", type=_optional(float),
                            default=argparse.SUPPRESS, metavar="auto|FLOAT", help="auto: node count")
    activation.add_argument("--iterations", type=_optional(int), default=argparse.SUPPRESS, metavar="auto|INT",
                            help="auto: 2 x diameter")
    activation.add_argument("--unweighted", action="store_true")
    activation.add_argument("--normalization", choices=[m.value for m in Normalization])

    parser = argparse.ArgumentParser(prog="freeassoc", description="Free association norms and semantic networks")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    s = sub.add_parser("preprocess", parents=[common, configured], help="clean and balance a raw norms CSV")
    s.add_argument("--input", required=True)
    s.add_argument("--output", required=True)
    s.add_argument("--report", help="JSON file for step counts and dataset statistics")
    s.add_argument("--repetitions", type=int, default=REPETITIONS)
    s.set_defaults(handler=cmd_preprocess)

    s = sub.add_parser("build-net", parents=[common, configured], help="build the reduced network")
    s.add_argument("--input", required=True, help="preprocessed norms CSV")
    s.add_argument("--output", required=True, help="reduced network edge list")
    s.add_argument("--full-output", help="edge list of the network before filtering")
    s.set_defaults(handler=cmd_build_net)

    s = sub.add_parser("net-stats", parents=[common, configured], help="nodes, edges, density, average degree")
    s.add_argument("--input", required=True)
    s.add_argument("--output")
    s.add_argument("--rounded", action="store_true")
    s.set_defaults(handler=cmd_net_stats)

    s = sub.add_parser("compare-nets", parents=[common, configured], help="node and edge overlap of two networks")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.add_argument("--output")
    s.add_argument("--rounded", action="store_true")
    s.set_defaults(handler=cmd_compare_nets)

    s = sub.add_parser("activate", parents=[common, configured, activation], help="spreading activation")
    s.add_argument("--network", required=True)
    s.add_argument("--primes", help="file with one prime label per line")
    s.add_argument("--prime-labels", nargs="+", help="prime labels given inline")
    s.add_argument("--output", required=True)
    s.add_argument("--normalized", action="store_true", help="write the normalized matrix")
    s.set_defaults(handler=cmd_activate)

    s = sub.add_parser("prime-experiment", parents=[common, configured, activation],
                       help="semantic priming validation")
    s.add_argument("--network", required=True)
    s.add_argument("--items", help="default: the packaged lexical decision items")
    s.add_argument("--output-dir")
    s.set_defaults(handler=cmd_prime_experiment)

    s = sub.add_parser("bias-probe", parents=[common, configured, activation], help="gender bias probe")
    s.add_argument("--network", required=True)
    s.add_argument("--probe", help="default: the packaged probe")
    s.add_argument("--reference", help="second network to correlate activation levels with")
    s.add_argument("--output-dir")
    s.set_defaults(handler=cmd_bias_probe)

    s = sub.add_parser("generate", parents=[common], help="collect norms from a chat model")
    s.add_argument("--cues", help="one cue per line")
    s.add_argument("--config", required=True, help="key = value generation configuration")
    s.add_argument("--output", required=True)
    s.add_argument("--log", required=True, help="JSON-lines generation log")
    s.add_argument("--resume", action="store_true", help="continue the run recorded in --log")
    s.set_defaults(handler=cmd_generate)

    s = sub.add_parser("pipeline", parents=[common, configured, activation],
                       help="preprocess, build networks and run both experiments")
    s.add_argument("--input", required=True)
    s.add_argument("--output-dir")
    s.add_argument("--name", required=True, help="prefix of the output files")
    s.add_argument("--skip-experiments", action="store_true")
    s.set_defaults(handler=cmd_pipeline)

    s = sub.add_parser("build-compounds", parents=[common], help="compound repair map from a word list")
    s.add_argument("--words", required=True)
    s.add_argument("--output", required=True)
    s.set_defaults(handler=cmd_build_compounds)

    s = sub.add_parser("export-lexicon", parents=[common], help="export WordNet lexicon resources (needs nltk)")
    s.add_argument("--norms", nargs="+", required=True)
    s.add_argument("--output-dir", required=True)
    s.add_argument("--spelling", help="spelling TSV to include")
    s.set_defaults(handler=cmd_export_lexicon)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        cfg = _run_config(args)
        _configure_logging(cfg.verbosity)
        args.handler(args, cfg)
    except FreeAssocException as e:
        print(f"freeassoc {args.command}: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"freeassoc {args.command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
