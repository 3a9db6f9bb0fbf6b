"""
One-off export of lexicon resources from WordNet.

This is the only place nltk is used; the pipeline itself only reads the
exported files.  Install with the `export` extra and download the corpus
first:

    pip install freeassoc-networks-python[export]
    python -m nltk.downloader wordnet

Dependencies:
    - nltk

"""

from __future__ import annotations

import json
import logging
import os
from typing import Iterable, Optional

from freeassoc.lexicon import (COMPOUNDS_FILE, LEMMAS_FILE, PROVENANCE_FILE, SPELLING_FILE, WORDS_FILE,
                               build_compound_map, write_compound_map)


def export_wordnet(out_dir: str, vocabulary: Iterable[str], spelling_path: Optional[str] = None) -> None:
    """
    Write words.txt, lemmas.tsv, compounds.tsv, spelling.tsv and
    provenance.json into `out_dir`.

    Arguments:
        out_dir:str
            target directory, created if needed
        vocabulary:Iterable[str]
            the cue / response strings the lemma map has to cover; only
            entries whose noun lemma differs are written
        spelling_path:Optional[str]
            existing spelling TSV to copy in; an empty file is written
            otherwise
    """
    import nltk
    from nltk.corpus import wordnet
    from nltk.stem import WordNetLemmatizer

    os.makedirs(out_dir, exist_ok=True)

    words = sorted({name.replace("_", " ").lower() for name in wordnet.all_lemma_names()})
    with open(os.path.join(out_dir, WORDS_FILE), "w", encoding="utf-8", newline="\n") as outf:
        for w in words:
            outf.write(w + "\n")

    lemmatizer = WordNetLemmatizer()
    lemmas = {}
    for w in sorted(set(vocabulary)):
        if not w:
            continue
        lemma = lemmatizer.lemmatize(w, pos="n").lower()
        if lemma and lemma != w:
            lemmas[w] = lemma
    with open(os.path.join(out_dir, LEMMAS_FILE), "w", encoding="utf-8", newline="\n") as outf:
        for w in sorted(lemmas):
            outf.write(f"{w}\t{lemmas[w]}\n")

    compounds, dropped = build_compound_map(words)
    write_compound_map(compounds, os.path.join(out_dir, COMPOUNDS_FILE))

    target = os.path.join(out_dir, SPELLING_FILE)
    if spelling_path is not None:
        with open(spelling_path, "r", encoding="utf-8") as infile, \
                open(target, "w", encoding="utf-8", newline="\n") as outf:
            outf.write(infile.read())
    elif not os.path.exists(target):
        open(target, "w").close()

    with open(os.path.join(out_dir, PROVENANCE_FILE), "w", encoding="utf-8") as outf:
        json.dump({
            "source": "WordNet via nltk",
            "nltk_version": nltk.__version__,
            "wordnet_version": wordnet.get_version(),
            "lemma_pos": ["n"],
            "words": len(words),
            "lemmas": len(lemmas),
            "compounds": len(compounds),
            "compound_collisions_dropped": dropped,
            "spelling_source": spelling_path,
        }, outf, indent=2, sort_keys=True)
    logging.info(f"Exported {len(words)} words, {len(lemmas)} lemmas, {len(compounds)} compounds to {out_dir}")
