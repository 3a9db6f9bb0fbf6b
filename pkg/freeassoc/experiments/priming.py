"""
Semantic priming validation.

Every related and unrelated prime is activated in turn, the activation
matrix is normalized, and each target's activation after its related prime
is compared with its activation after the unrelated prime.  Higher
activation should go with lower lexical decision reaction times.

Dependencies:
    - numpy
    - pandas

"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from freeassoc.activation.batch_activate import spread_batch
from freeassoc.activation.spreading import ActivationParams
from freeassoc.experiments.report import (ExperimentException, ExperimentReport, heatmap_table, histogram_table,
                                          paired_test)
from freeassoc.networks.semantic_network import SemanticNetwork
from freeassoc.stats import Normalization, StatsException, normalize, spearman

ITEM_COLUMNS = ["target", "related_prime", "unrelated_prime", "rt_related", "rt_unrelated"]
CATEGORY = "ldt"
MIN_ITEMS = 5


@dataclass(frozen=True)
class PrimingItem:
    target: str
    related_prime: str
    unrelated_prime: str
    rt_related: float
    rt_unrelated: float

    def __post_init__(self):
        for name in ("target", "related_prime", "unrelated_prime"):
            if not getattr(self, name):
                raise ExperimentException(f"Priming item has an empty {name}")
        if self.target in (self.related_prime, self.unrelated_prime):
            raise ExperimentException(f"Target {self.target!r} is also one of its primes")

    def words(self) -> tuple:
        return self.target, self.related_prime, self.unrelated_prime


def load_priming_items(path) -> List[PrimingItem]:
    """
    Read target,related_prime,unrelated_prime,rt_related,rt_unrelated rows.

    Raises:
        ExperimentException:
            missing columns, or a row whose reaction times are not numbers
    """
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    if list(frame.columns) != ITEM_COLUMNS:
        raise ExperimentException(f"{path}: expected header {','.join(ITEM_COLUMNS)}")
    items = []
    for i, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            items.append(PrimingItem(row.target.strip().lower(), row.related_prime.strip().lower(),
                                     row.unrelated_prime.strip().lower(),
                                     float(row.rt_related), float(row.rt_unrelated)))
        except ValueError as e:
            raise ExperimentException(f"{path}:{i}: {e}")
        except ExperimentException as e:
            raise ExperimentException(f"{path}:{i}: {e}")
    return items


def default_priming_items() -> List[PrimingItem]:
    """The 50 packaged lexical decision items"""
    source = resources.files("freeassoc.experiments").joinpath("data", "ldt_items.csv")
    with resources.as_file(source) as path:
        return load_priming_items(path)


def run_priming(g: SemanticNetwork, items: Sequence[PrimingItem], p: ActivationParams,
                mode: Union[Normalization, str] = Normalization.L1, threads: Optional[int] = None
                ) -> ExperimentReport:
    """
    Arguments:
        g:SemanticNetwork
            network to activate
        items:Sequence[PrimingItem]
            items whose words are not all in g are dropped
        p:ActivationParams
        mode:Normalization
            Default: l1
        threads:Optional[int]
            worker cap for the activation batch

    Raises:
        ExperimentException:
            fewer than 5 usable items
    """
    usable = [item for item in items if all(word in g for word in item.words())]
    dropped = [item.target for item in items if item not in usable]
    if dropped:
        logging.warning(f"Dropped {len(dropped)} priming items with words missing from the network")
    if len(usable) < MIN_ITEMS:
        raise ExperimentException(f"Only {len(usable)} usable priming items, need at least {MIN_ITEMS}")

    primes = sorted({item.related_prime for item in usable} | {item.unrelated_prime for item in usable})
    activation = normalize(spread_batch(g, primes, p, threads), mode)

    al_related = np.array([activation.value(i.target, i.related_prime) for i in usable])
    al_unrelated = np.array([activation.value(i.target, i.unrelated_prime) for i in usable])
    rt_related = np.array([i.rt_related for i in usable])
    rt_unrelated = np.array([i.rt_unrelated for i in usable])

    tests = {
        "activation": paired_test(al_related, al_unrelated, "activation related vs unrelated"),
        "reaction_time": paired_test(rt_related, rt_unrelated, "reaction time related vs unrelated"),
    }
    try:
        correlation = spearman(np.concatenate([al_related, al_unrelated]),
                               np.concatenate([rt_related, rt_unrelated]))
    except StatsException as e:
        logging.warning(f"No activation/reaction time correlation: {e}")
        correlation = None

    targets = [i.target for i in usable]
    categories = {CATEGORY: targets}
    boxplot = pd.DataFrame({
        "target": targets + targets,
        "prime_type": ["related"] * len(usable) + ["unrelated"] * len(usable),
        "prime": [i.related_prime for i in usable] + [i.unrelated_prime for i in usable],
        "activation": np.concatenate([al_related, al_unrelated]),
        "rt": np.concatenate([rt_related, rt_unrelated]),
    })
    summary = {
        "items_total": len(items),
        "items_used": len(usable),
        "mean_activation_related": float(al_related.mean()),
        "mean_activation_unrelated": float(al_unrelated.mean()),
        "normalization": activation.mode.value,
    }
    return ExperimentReport(
        name="priming",
        primes=primes,
        categories=categories,
        activation=activation,
        tests=tests,
        correlations={"activation_vs_rt": correlation},
        heatmap=heatmap_table(activation, categories, primes),
        boxplot=boxplot,
        histogram=histogram_table({"related_minus_unrelated": al_related - al_unrelated}),
        dropped={CATEGORY: dropped},
        summary=summary,
    )
