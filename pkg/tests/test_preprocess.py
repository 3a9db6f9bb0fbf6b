import os

from freeassoc.lexicon import Lexicon, load_lexicon_dir
from freeassoc.norms import NormsTable, PreprocessReport, parse_norms_csv, preprocess
from freeassoc.norms.preprocess import STEP_ORDER, balance, strip_articles

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
SEED = 7
REPS = 3

lex = load_lexicon_dir(os.path.join(DATA_DIR, "lexicon"))
raw = parse_norms_csv(os.path.join(DATA_DIR, "raw_norms.csv"))
report = PreprocessReport(seed=SEED, repetitions=REPS)
clean = preprocess(raw, lex, SEED, REPS, report)

empty_lex = Lexicon([], {}, {}, {})


def test_balanced():
    assert(clean.is_balanced(REPS))
    assert(clean.cues == ["a lot", "cat", "color", "dog"])
    assert(len(clean) == 12)


def test_report_counts():
    assert(report.rows_in == 7)
    assert(report.rows_out == 12)
    assert(report.cues_in == 5)
    assert(report.cues_out == 4)
    assert(report.rows_padded == 6)
    assert(report.rows_sampled_out == 1)
    assert(report.cells_changed["lowercase"] == 4)
    assert(report.cells_changed["strip_articles"] == 1)
    assert(report.cells_changed["underscores"] == 1)
    assert(report.cells_changed["compounds"] == 1)
    assert(report.cells_changed["spelling"] == 2)
    assert(report.cells_changed["lemmas"] == 2)
    assert(report.step_order == STEP_ORDER)


def test_all_lowercase():
    values = clean.frame.to_numpy().ravel()
    assert(all(v == v.lower() for v in values))


def test_row_invariants():
    for row in clean.rows:
        assert(row.cue != "")
        filled = [r for r in row.responses if r]
        assert(len(filled) == len(set(filled)))
        assert(row.cue not in filled)


def test_maps_applied():
    color = [row.responses for row in clean.rows if row.cue == "color"]
    assert(("red", "blue sky", "blue") in color)
    dog_responses = {r for row in clean.rows if row.cue == "dog" for r in row.responses}
    assert("cats" not in dog_responses)
    assert("throwout" not in dog_responses)
    assert("colour" not in dog_responses)


def test_deterministic():
    again = preprocess(raw, lex, SEED, REPS)
    assert(again == clean)


def test_idempotent():
    assert(preprocess(clean, lex, SEED, REPS) == clean)


def test_strip_articles():
    assert(strip_articles("the dog", {"dog"}) == "dog")
    assert(strip_articles("a lot", {"a lot"}) == "a lot")
    assert(strip_articles("another", set()) == "another")
    assert(strip_articles("to go", set()) == "go")
    assert(strip_articles("the a car", set()) == "car")


def test_cue_echo_and_duplicates():
    t = NormsTable.from_rows([("dog", "dog", "cat", "cat")])
    out = preprocess(t, empty_lex, SEED, 1)
    assert(list(out.rows)[0].responses == ("", "cat", ""))


def test_lemma_then_echo():
    lemmas = Lexicon([], {"dogs": "dog", "men": "man"}, {}, {})
    t = NormsTable.from_rows([("dog", "dogs", "men", "cooking")])
    out = preprocess(t, lemmas, SEED, 1)
    assert(list(out.rows)[0].responses == ("", "man", "cooking"))


def test_empty_cue_dropped():
    t = NormsTable.from_rows([("", "x", "", ""), ("dog", "cat", "", "")])
    r = PreprocessReport(seed=SEED, repetitions=1)
    out = preprocess(t, empty_lex, SEED, 1, r)
    assert(out.cues == ["dog"])
    assert(r.rows_dropped_empty_cue == 1)


def test_balance_sampling():
    t = NormsTable.from_rows([("dog", f"r{i}", "", "") for i in range(10)] + [("cat", "x", "", "")])
    frame, padded, sampled_out = balance(t.frame, seed=1, repetitions=4)
    assert(padded == 3)
    assert(sampled_out == 6)
    dog = frame[frame["cue"] == "dog"]
    assert(len(dog) == 4)
    assert(dog["R1"].is_unique)
    other, _, _ = balance(t.frame, seed=1, repetitions=4)
    assert(frame.equals(other))


def test_whitespace_collapsed():
    t = NormsTable.from_rows([("dog ", "a  bone", "cat_", " big   _tail "), ("cat", "x", "", "")])
    once = preprocess(t, empty_lex, SEED, 1)
    dog = [row for row in once.rows if row.cue == "dog"][0]
    assert(dog.responses == ("bone", "cat", "big tail"))
    assert(preprocess(once, empty_lex, SEED, 1) == once)
