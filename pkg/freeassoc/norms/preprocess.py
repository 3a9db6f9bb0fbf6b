"""
Norms preprocessing pipeline.

The steps run in a fixed order on cues and responses:

    1. lowercase, strip and collapse runs of whitespace
    2. strip leading "a ", "an ", "the ", "to " from responses, unless the
       response is itself one of the (lowercased) original cues
    3. underscores -> spaces, whitespace collapsed again
    4. compound repair of responses (throwout -> throw out)
    5. spelling correction of cues and responses
    6. noun lemmatization of cues and responses
    7. balance to exactly REPETITIONS rows per cue (pad with blank rows,
       or sample without replacement with a seeded generator)
    8. blank responses equal to their cue
    9. blank responses repeating an earlier response of the same row

Every map is applied once per distinct string and then broadcast over the
column.

Dependencies:
    - numpy
    - pandas

"""

from __future__ import annotations

import logging
import re
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Mapping

import numpy as np
import pandas as pd

from freeassoc.lexicon import Lexicon
from freeassoc.norms.norms_table import HEADER, REPETITIONS, RESPONSE_COLUMNS, NormsTable

LEADING_ARTICLE = re.compile(r"^(?:a|an|the|to) (.+)$")

STEP_ORDER = [
    "lowercase",
    "strip_articles",
    "underscores",
    "compounds",
    "spelling",
    "lemmas",
    "balance",
    "cue_echo",
    "row_duplicates",
]


@dataclass
class PreprocessReport:
    seed: int
    repetitions: int
    rows_in: int = 0
    rows_out: int = 0
    cues_in: int = 0
    cues_out: int = 0
    rows_dropped_empty_cue: int = 0
    rows_padded: int = 0
    rows_sampled_out: int = 0
    cells_changed: Dict[str, int] = field(default_factory=dict)
    step_order: List[str] = field(default_factory=lambda: list(STEP_ORDER))
    notes: List[str] = field(default_factory=lambda: [
        "spelling correction runs after compound repair",
        "cue echo removal runs after lemmatization",
    ])

    def to_dict(self) -> dict:
        return asdict(self)


def strip_articles(response: str, original_cues: Iterable[str]) -> str:
    """
    "the dog" -> "dog", but "a lot" stays when "a lot" is a cue.  Repeats
    while a leading article is left ("the a car" -> "car").
    """
    while response not in original_cues:
        m = LEADING_ARTICLE.match(response)
        if m is None:
            break
        response = m.group(1)
    return response


def _map_unique(column: pd.Series, fn: Callable[[str], str]) -> pd.Series:
    mapping = {v: fn(v) for v in column.unique()}
    return column.map(mapping)


def _apply(frame: pd.DataFrame, columns: List[str], fn: Callable[[str], str]) -> int:
    """Apply `fn` to `columns` in place, returning the number of cells it changed"""
    changed = 0
    for col in columns:
        before = frame[col]
        after = _map_unique(before, fn)
        changed += int((before != after).sum())
        frame[col] = after
    return changed


def _lookup(mapping: Mapping[str, str]) -> Callable[[str], str]:
    return lambda v: mapping.get(v, v) if v else v


def balance(frame: pd.DataFrame, seed: int, repetitions: int = REPETITIONS):
    """
    Return (balanced frame, padded, sampled_out).  Cues are visited in
    sorted order so the generator is consumed deterministically; kept rows
    retain their original order, padding rows follow them.
    """
    rng = np.random.default_rng(seed)
    keep = []
    pad_cues = []
    sampled_out = 0
    for cue, idx in sorted(frame.groupby("cue", sort=True).indices.items()):
        if len(idx) > repetitions:
            keep.append(np.sort(rng.choice(idx, size=repetitions, replace=False)))
            sampled_out += len(idx) - repetitions
        else:
            keep.append(idx)
            pad_cues.extend([cue] * (repetitions - len(idx)))

    kept = frame.iloc[np.concatenate(keep)] if keep else frame.iloc[[]]
    pads = pd.DataFrame({"cue": pad_cues, "R1": "", "R2": "", "R3": ""}, columns=HEADER, dtype=object)
    out = pd.concat([kept, pads], ignore_index=True)
    out = out.sort_values("cue", kind="stable").reset_index(drop=True)
    return out, len(pad_cues), sampled_out


def preprocess(raw: NormsTable, lex: Lexicon, seed: int, repetitions: int = REPETITIONS,
               report: PreprocessReport = None) -> NormsTable:
    """
    Run the full preprocessing pipeline on a raw table.

    Arguments:
        raw:NormsTable
            table as parsed from disk
        lex:Lexicon
            compound, spelling and lemma maps
        seed:int
            seed of the down-sampling generator
        repetitions:int
            rows per cue after balancing
            Default: 100
        report:Optional[PreprocessReport]
            filled in with per-step counts if supplied

    Returns:
        the balanced table, sorted by cue then original row order
    """
    if report is None:
        report = PreprocessReport(seed=seed, repetitions=repetitions)
    frame = raw.frame.copy()
    report.rows_in = len(frame)
    changed = report.cells_changed

    changed["lowercase"] = _apply(frame, HEADER, lambda v: " ".join(v.lower().split()))
    original_cues = frozenset(frame["cue"].unique())
    report.cues_in = len(original_cues)

    changed["strip_articles"] = _apply(frame, RESPONSE_COLUMNS, lambda v: strip_articles(v, original_cues))
    changed["underscores"] = _apply(frame, HEADER, lambda v: " ".join(v.replace("_", " ").split()))
    changed["compounds"] = _apply(frame, RESPONSE_COLUMNS, _lookup(lex.compound_map))
    changed["spelling"] = _apply(frame, HEADER, _lookup(lex.spelling_map))
    changed["lemmas"] = _apply(frame, HEADER, _lookup(lex.lemma_map))

    empty_cue = frame["cue"] == ""
    report.rows_dropped_empty_cue = int(empty_cue.sum())
    if report.rows_dropped_empty_cue:
        logging.warning(f"Dropping {report.rows_dropped_empty_cue} rows with an empty cue")
        frame = frame[~empty_cue]

    frame, report.rows_padded, report.rows_sampled_out = balance(frame, seed, repetitions)
    changed["balance"] = report.rows_padded + report.rows_sampled_out

    echo = 0
    for col in RESPONSE_COLUMNS:
        mask = (frame[col] != "") & (frame[col] == frame["cue"])
        echo += int(mask.sum())
        frame.loc[mask, col] = ""
    changed["cue_echo"] = echo

    r1, r2, r3 = (frame[c].copy() for c in RESPONSE_COLUMNS)
    dup2 = (r2 != "") & (r2 == r1)
    dup3 = (r3 != "") & ((r3 == r1) | (r3 == r2))
    frame.loc[dup2, "R2"] = ""
    frame.loc[dup3, "R3"] = ""
    changed["row_duplicates"] = int(dup2.sum() + dup3.sum())

    report.rows_out = len(frame)
    report.cues_out = int(frame["cue"].nunique())
    for step in STEP_ORDER:
        logging.info(f"preprocess {step}: {changed.get(step, 0)} changes")
    return NormsTable(frame)
