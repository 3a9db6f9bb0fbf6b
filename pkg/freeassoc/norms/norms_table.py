"""
Free-association norms tables.

A norms file is a UTF-8 CSV with the header "cue,R1,R2,R3"; each data row
is one participant (or one generation) answering one cue with up to three
responses.  Blank responses are empty fields and are kept as "" in memory.

Dependencies:
    - pandas

"""

from __future__ import annotations

import csv
import os
from dataclasses import asdict, dataclass
from typing import Dict, Iterator, List, NamedTuple, Tuple

import pandas as pd

from freeassoc import FreeAssocException

HEADER = ["cue", "R1", "R2", "R3"]
RESPONSE_COLUMNS = HEADER[1:]
REPETITIONS = 100


class NormsException(FreeAssocException):
    pass


class NormRow(NamedTuple):
    cue: str
    responses: Tuple[str, str, str]


class NormsTable:
    """
    Rows of (cue, R1, R2, R3) backed by a pandas DataFrame of strings.

    Arguments:
        frame: pd.DataFrame
            columns exactly cue, R1, R2, R3; every cell a string, "" for
            a blank response
    """

    def __init__(self, frame: pd.DataFrame):
        if list(frame.columns) != HEADER:
            raise NormsException(f"Expected columns {HEADER}, found {list(frame.columns)}")
        self._frame = frame.reset_index(drop=True)

    def __repr__(self):
        return f"NormsTable with {len(self)} rows over {self._frame['cue'].nunique()} cues"

    def __len__(self) -> int:
        return len(self._frame)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormsTable):
            return NotImplemented
        return self._frame.equals(other._frame)

    @classmethod
    def from_rows(cls, rows: List[Tuple[str, str, str, str]]) -> "NormsTable":
        return cls(pd.DataFrame(list(rows), columns=HEADER, dtype=object).astype(str))

    @property
    def frame(self) -> pd.DataFrame:
        return self._frame

    @property
    def rows(self) -> Iterator[NormRow]:
        for cue, r1, r2, r3 in self._frame.itertuples(index=False, name=None):
            yield NormRow(cue, (r1, r2, r3))

    @property
    def cue_index(self) -> Dict[str, List[int]]:
        """cue -> positions of its rows, in table order"""
        return {cue: list(idx) for cue, idx in self._frame.groupby("cue", sort=True).indices.items()}

    @property
    def cues(self) -> List[str]:
        return sorted(self._frame["cue"].unique())

    def rows_per_cue(self) -> pd.Series:
        return self._frame.groupby("cue", sort=True).size()

    def is_balanced(self, repetitions: int = REPETITIONS) -> bool:
        return len(self) > 0 and bool((self.rows_per_cue() == repetitions).all())


@dataclass(frozen=True)
class DatasetStats:
    unique_cues: int
    total_responses: int
    unique_responses: int
    blank_cells: int
    missing_pct: float

    def to_dict(self) -> dict:
        return asdict(self)


def parse_norms_csv(path: str) -> NormsTable:
    """
    Read a norms CSV without transforming anything.

    Raises:
        NormsException:
            unreadable file, missing header, or a row with other than 4
            fields
    """
    if not os.path.isfile(path):
        raise NormsException(f"{path}: file not found")
    rows = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as infile:
            reader = csv.reader(infile)
            header = next(reader, None)
            if header != HEADER:
                raise NormsException(f"{path}: header must be {','.join(HEADER)}, found {header}")
            for fields in reader:
                if len(fields) != len(HEADER):
                    raise NormsException(f"{path}:{reader.line_num}: expected 4 fields, found {len(fields)}")
                rows.append(fields)
    except (UnicodeDecodeError, csv.Error, OSError) as e:
        raise NormsException(f"{path}: {e}")
    return NormsTable(pd.DataFrame(rows, columns=HEADER, dtype=object))


def write_norms_csv(table: NormsTable, path: str) -> None:
    table.frame.to_csv(path, index=False, encoding="utf-8", lineterminator="\n")


def dataset_stats(t: NormsTable, repetitions: int = REPETITIONS) -> DatasetStats:
    """
    Cue and response statistics of a balanced table.

    Raises:
        NormsException:
            if some cue does not have exactly `repetitions` rows
    """
    if not t.is_balanced(repetitions):
        counts = t.rows_per_cue()
        bad = counts[counts != repetitions]
        example = f"{bad.index[0]!r} has {bad.iloc[0]} rows" if len(bad) else "table is empty"
        raise NormsException(f"dataset_stats needs {repetitions} rows per cue: {example}")

    responses = t.frame[RESPONSE_COLUMNS].to_numpy().ravel()
    filled = responses[responses != ""]
    unique_cues = t.frame["cue"].nunique()
    cells = unique_cues * repetitions * len(RESPONSE_COLUMNS)
    blanks = cells - len(filled)
    return DatasetStats(
        unique_cues=int(unique_cues),
        total_responses=int(len(filled)),
        unique_responses=int(len(set(filled))),
        blank_cells=int(blanks),
        missing_pct=100.0 * blanks / cells
    )
