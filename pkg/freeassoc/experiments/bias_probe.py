"""
Gender bias probe.

Ten primes in five (female, male) pairs are activated; for every target and
pair the difference AL(target | female prime) - AL(target | male prime) is
collected, and the differences of each target category are tested against
zero.  Positive effects for female-related targets and negative effects
for male-related targets mean stereotype-consistent associations dominate.

Dependencies:
    - numpy
    - pandas

"""

from __future__ import annotations

import json
import logging
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from freeassoc.activation.batch_activate import spread_batch
from freeassoc.activation.spreading import ActivationParams
from freeassoc.experiments.report import (ExperimentException, ExperimentReport, heatmap_table, histogram_table,
                                          paired_test)
from freeassoc.networks.semantic_network import SemanticNetwork
from freeassoc.stats import CorrelationResult, Normalization, normalize, spearman

FEMALE = "female"
MALE = "male"
CATEGORIES = (FEMALE, MALE)

STANDARD_PAIRS = 5
STANDARD_TARGETS = 25


class GenderProbe:
    """
    Arguments:
        prime_pairs:Sequence[Tuple[str, str]]
            ordered (female, male) prime pairs
        female_targets:Sequence[str]
        male_targets:Sequence[str]
    """

    def __init__(self, prime_pairs: Sequence[Tuple[str, str]], female_targets: Sequence[str],
                 male_targets: Sequence[str]):
        self._pairs: Tuple[Tuple[str, str], ...] = tuple((f, m) for f, m in prime_pairs)
        self._female: Tuple[str, ...] = tuple(female_targets)
        self._male: Tuple[str, ...] = tuple(male_targets)
        self._validate()

    def _validate(self):
        if not self._pairs:
            raise ExperimentException("A probe needs at least one prime pair")
        primes = self.primes
        if len(set(primes)) != len(primes):
            raise ExperimentException("Probe primes must be distinct")
        targets = self._female + self._male
        if not self._female or not self._male:
            raise ExperimentException("A probe needs female and male targets")
        if len(set(targets)) != len(targets):
            raise ExperimentException("Probe targets must be distinct")
        overlap = set(primes) & set(targets)
        if overlap:
            raise ExperimentException(f"Words used as both prime and target: {sorted(overlap)}")

    def __repr__(self):
        return (f"GenderProbe {len(self._pairs)} pairs, {len(self._female)} female "
                f"and {len(self._male)} male targets")

    def __eq__(self, other):
        return (isinstance(other, GenderProbe) and self._pairs == other._pairs
                and self._female == other._female and self._male == other._male)

    @property
    def prime_pairs(self) -> Tuple[Tuple[str, str], ...]:
        return self._pairs

    @property
    def female_targets(self) -> Tuple[str, ...]:
        return self._female

    @property
    def male_targets(self) -> Tuple[str, ...]:
        return self._male

    @property
    def female_primes(self) -> Tuple[str, ...]:
        return tuple(f for f, _ in self._pairs)

    @property
    def male_primes(self) -> Tuple[str, ...]:
        return tuple(m for _, m in self._pairs)

    @property
    def primes(self) -> Tuple[str, ...]:
        """Primes in probe order: female_1, male_1, female_2, ..."""
        return tuple(w for pair in self._pairs for w in pair)

    def targets(self, category: str) -> Tuple[str, ...]:
        return self._female if category == FEMALE else self._male

    def pair_count(self) -> int:
        return len(self.primes) * (len(self._female) + len(self._male))

    def is_standard(self) -> bool:
        return (len(self._pairs) == STANDARD_PAIRS and len(self._female) == STANDARD_TARGETS
                and len(self._male) == STANDARD_TARGETS and self.pair_count() == 500)

    def swapped(self) -> "GenderProbe":
        """The same probe with the order inside every prime pair reversed"""
        return GenderProbe([(m, f) for f, m in self._pairs], self._female, self._male)


def load_gender_probe(path) -> GenderProbe:
    """
    Read {"prime_pairs": [[female, male], ...], "female_targets": [...], "male_targets": [...]}.

    Raises:
        ExperimentException:
            missing keys, malformed pairs, or an invalid probe
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ExperimentException(f"{path}:{e.lineno}: {e.msg}")
    for key in ("prime_pairs", "female_targets", "male_targets"):
        if key not in doc:
            raise ExperimentException(f"{path}: missing {key!r}")
    pairs = doc["prime_pairs"]
    if any(not isinstance(pair, list) or len(pair) != 2 for pair in pairs):
        raise ExperimentException(f"{path}: every prime pair must be [female, male]")

    def clean(words):
        return [str(w).strip().lower() for w in words]

    return GenderProbe([tuple(clean(pair)) for pair in pairs], clean(doc["female_targets"]),
                       clean(doc["male_targets"]))


def default_gender_probe() -> GenderProbe:
    """The packaged 5 pair, 25 + 25 target probe"""
    source = resources.files("freeassoc.experiments").joinpath("data", "gender_probe.json")
    with resources.as_file(source) as path:
        return load_gender_probe(path)


def run_bias_probe(g: SemanticNetwork, probe: GenderProbe, p: ActivationParams,
                   mode: Union[Normalization, str] = Normalization.L1, threads: Optional[int] = None
                   ) -> ExperimentReport:
    """
    Activate the probe primes and compare female against male prime
    activation of every target.

    Raises:
        ExperimentException:
            a prime is missing from g, or no target is left
    """
    missing_primes = [prime for prime in probe.primes if prime not in g]
    if missing_primes:
        raise ExperimentException(f"Probe primes missing from the network: {missing_primes}")

    categories: Dict[str, List[str]] = {}
    dropped: Dict[str, List[str]] = {}
    for category in CATEGORIES:
        targets = probe.targets(category)
        categories[category] = [t for t in targets if t in g]
        dropped[category] = [t for t in targets if t not in g]
        if dropped[category]:
            logging.warning(f"Dropped {len(dropped[category])} {category} targets missing from the network")
    if not any(categories.values()):
        raise ExperimentException("No probe target is in the network")

    columns = sorted(probe.primes)
    activation = normalize(spread_batch(g, columns, p, threads), mode)

    tests = {}
    differences = {}
    box_records = []
    consistent = []
    inconsistent = []
    for category in CATEGORIES:
        al_female = []
        al_male = []
        for target in categories[category]:
            for f, m in probe.prime_pairs:
                af = activation.value(target, f)
                am = activation.value(target, m)
                al_female.append(af)
                al_male.append(am)
                box_records.append((category, f"{f}-{m}", target, af - am))
        al_female = np.array(al_female)
        al_male = np.array(al_male)
        differences[category] = al_female - al_male
        tests[category] = paired_test(al_female, al_male, f"{category} targets")
        same, other = (al_female, al_male) if category == FEMALE else (al_male, al_female)
        consistent.append(same)
        inconsistent.append(other)

    consistent = np.concatenate(consistent)
    inconsistent = np.concatenate(inconsistent)
    summary = {
        "stereotype_consistent": {"pairs": int(len(consistent)),
                                  "mean_activation": float(consistent.mean()) if len(consistent) else None},
        "stereotype_inconsistent": {"pairs": int(len(inconsistent)),
                                    "mean_activation": float(inconsistent.mean()) if len(inconsistent) else None},
        "prime_target_pairs": int(len(consistent) + len(inconsistent)),
        "normalization": activation.mode.value,
        "correlation_vector": "per category: target x prime cells, primes in sorted order",
    }
    return ExperimentReport(
        name="bias_probe",
        primes=list(probe.primes),
        categories=categories,
        activation=activation,
        tests=tests,
        correlations={},
        heatmap=heatmap_table(activation, categories, probe.primes),
        boxplot=pd.DataFrame(box_records, columns=["category", "pair", "target", "difference"]),
        histogram=histogram_table(differences),
        dropped=dropped,
        summary=summary,
    )


def cross_model_correlation(a: ExperimentReport, b: ExperimentReport) -> Dict[str, CorrelationResult]:
    """
    Spearman correlation of the normalized activation levels of two probe
    runs, per target category, over the flattened target x prime cells.

    Raises:
        ExperimentException:
            the reports do not cover the same targets and primes
    """
    if sorted(a.primes) != sorted(b.primes) or a.categories != b.categories:
        raise ExperimentException("Reports cover different primes or targets")
    result = {}
    for category in a.categories:
        x = a.category_values(category)
        y = b.category_values(category)
        if x.shape != y.shape:
            raise ExperimentException(f"Shape mismatch for {category}: {x.shape} vs {y.shape}")
        result[category] = spearman(x, y)
    return result
