"""
Dictionary resources that parameterize norms preprocessing and network
filtering.

A lexicon is four plain files exported once from WordNet (or any other
source) so that nothing downstream depends on an NLP library at runtime:

    words.txt      one valid entry per line (may contain spaces / hyphens)
    lemmas.tsv     word<TAB>lemma      (noun plural -> singular)
    spelling.tsv   variant<TAB>correct (misspelling / British -> American)
    compounds.tsv  joined<TAB>spaced   (e.g. throwout -> throw out)

An optional provenance.json sidecar in the same directory records where the
files came from.

"""

from __future__ import annotations

import json
import logging
import os
import re
from collections import Counter
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from freeassoc import FreeAssocException

WORDS_FILE = "words.txt"
LEMMAS_FILE = "lemmas.tsv"
SPELLING_FILE = "spelling.tsv"
COMPOUNDS_FILE = "compounds.tsv"
PROVENANCE_FILE = "provenance.json"

SEPARATORS = re.compile(r"[ \-]")


class LexiconException(FreeAssocException):
    pass


def remove_separators(entry: str) -> str:
    """ "check-in" -> "checkin", "throw out" -> "throwout" """
    return SEPARATORS.sub("", entry)


class Lexicon:
    """
    Immutable bundle of the valid-word set and the three lookup maps.

    Arguments:
        valid_words: Iterable[str]
            entries accepted by the network lexicon filter
        lemma_map: Mapping[str, str]
            noun plural -> singular
        spelling_map: Mapping[str, str]
            misspelled or British form -> American form
        compound_map: Mapping[str, str]
            concatenated form -> spaced / hyphenated form, one-to-one
        provenance: Optional[Mapping]
            free-form description of the source of the resources

    Raises:
        LexiconException:
            if any invariant (lowercase, stripped, non-empty lemmas,
            injective compound map) does not hold
    """

    def __init__(self, valid_words: Iterable[str], lemma_map: Mapping[str, str], spelling_map: Mapping[str, str],
                 compound_map: Mapping[str, str], provenance: Optional[Mapping] = None):
        self._valid_words: FrozenSet[str] = frozenset(valid_words)
        self._lemma_map = MappingProxyType(dict(lemma_map))
        self._spelling_map = MappingProxyType(dict(spelling_map))
        self._compound_map = MappingProxyType(dict(compound_map))
        self._provenance = MappingProxyType(dict(provenance or {}))
        self._validate()

    def __repr__(self):
        return (f"Lexicon with {len(self._valid_words)} words, {len(self._lemma_map)} lemmas, "
                f"{len(self._spelling_map)} spellings, {len(self._compound_map)} compounds")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return (self._valid_words == other._valid_words
                and dict(self._lemma_map) == dict(other._lemma_map)
                and dict(self._spelling_map) == dict(other._spelling_map)
                and dict(self._compound_map) == dict(other._compound_map))

    @property
    def valid_words(self) -> FrozenSet[str]:
        return self._valid_words

    @property
    def lemma_map(self) -> Mapping[str, str]:
        return self._lemma_map

    @property
    def spelling_map(self) -> Mapping[str, str]:
        return self._spelling_map

    @property
    def compound_map(self) -> Mapping[str, str]:
        return self._compound_map

    @property
    def provenance(self) -> Mapping:
        return self._provenance

    def _validate(self):
        for name, entries in (("valid_words", self._valid_words),
                              ("lemma_map", self._lemma_map.items()),
                              ("spelling_map", self._spelling_map.items()),
                              ("compound_map", self._compound_map.items())):
            for entry in entries:
                for s in (entry if isinstance(entry, tuple) else (entry,)):
                    if s != s.strip().lower():
                        raise LexiconException(f"{name}: entry {s!r} is not lowercase and stripped")

        for word, lemma in self._lemma_map.items():
            if lemma == "":
                raise LexiconException(f"lemma_map: {word!r} maps to the empty string")

        values = Counter(self._compound_map.values())
        collisions = sorted(v for v, c in values.items() if c > 1)
        if collisions:
            raise LexiconException(f"compound_map is not one-to-one, e.g. {collisions[0]!r}")
        for joined, spaced in self._compound_map.items():
            if remove_separators(spaced) != joined:
                raise LexiconException(f"compound_map: {joined!r} is not {spaced!r} without separators")


def build_compound_map(multiword_entries: Iterable[str]) -> Tuple[Dict[str, str], int]:
    """
    Build the joined -> spaced map from entries containing spaces or
    hyphens.  Entries whose joined forms collide are all discarded.

    Returns:
        (compound_map, dropped) where dropped counts the discarded entries
    """
    by_key: Dict[str, set] = {}
    for entry in multiword_entries:
        entry = entry.strip().lower()
        if not SEPARATORS.search(entry):
            continue
        by_key.setdefault(remove_separators(entry), set()).add(entry)

    compound_map = {}
    dropped = 0
    for key, entries in by_key.items():
        if len(entries) == 1:
            compound_map[key] = next(iter(entries))
        else:
            dropped += len(entries)
    if dropped:
        logging.info(f"Dropped {dropped} colliding compound entries")
    return compound_map, dropped


def write_compound_map(compound_map: Mapping[str, str], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as outf:
        for key in sorted(compound_map):
            outf.write(f"{key}\t{compound_map[key]}\n")


def read_word_list(path: str) -> List[str]:
    if not os.path.isfile(path):
        raise LexiconException(f"{path}: file not found")
    words = []
    with open(path, "r", encoding="utf-8") as infile:
        for line in infile:
            word = line.strip().lower()
            if word:
                words.append(word)
    return words


def read_tsv_map(path: str) -> Dict[str, str]:
    """
    Read a two column key<TAB>value file.

    Raises:
        LexiconException:
            missing file, wrong column count or duplicate key; the message
            names the file and the 1-based line number
    """
    if not os.path.isfile(path):
        raise LexiconException(f"{path}: file not found")
    mapping: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as infile:
        for lineno, line in enumerate(infile, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise LexiconException(f"{path}:{lineno}: expected 2 tab separated columns, found {len(fields)}")
            key, value = fields[0].strip().lower(), fields[1].strip().lower()
            if key in mapping:
                raise LexiconException(f"{path}:{lineno}: duplicate key {key!r}")
            mapping[key] = value
    return mapping


def load_lexicon(word_list_path: str, lemma_path: str, spelling_path: str, compound_path: str,
                 provenance_path: Optional[str] = None) -> Lexicon:
    provenance = None
    if provenance_path is not None and os.path.isfile(provenance_path):
        with open(provenance_path, "r", encoding="utf-8") as infile:
            provenance = json.load(infile)
    lex = Lexicon(
        valid_words=read_word_list(word_list_path),
        lemma_map=read_tsv_map(lemma_path),
        spelling_map=read_tsv_map(spelling_path),
        compound_map=read_tsv_map(compound_path),
        provenance=provenance
    )
    logging.info(f"Loaded {lex}")
    return lex


def load_lexicon_dir(lexicon_dir: str) -> Lexicon:
    """Load the four resource files (and provenance.json, if any) from one directory"""
    return load_lexicon(
        word_list_path=os.path.join(lexicon_dir, WORDS_FILE),
        lemma_path=os.path.join(lexicon_dir, LEMMAS_FILE),
        spelling_path=os.path.join(lexicon_dir, SPELLING_FILE),
        compound_path=os.path.join(lexicon_dir, COMPOUNDS_FILE),
        provenance_path=os.path.join(lexicon_dir, PROVENANCE_FILE)
    )
