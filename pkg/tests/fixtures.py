"""Shared hand-written fixtures: CoNLL-U blocks and a toy corpus."""

import json

from storyplan.corpus import ParsedToken


def tok(index, surface, upos, head, dep, lemma=None):
    return ParsedToken(
        index=index,
        surface=surface,
        lemma=lemma if lemma is not None else surface,
        upos=upos,
        head=head,
        dep_label=dep,
    )


def conllu_row(index, form, upos, head, dep, lemma=None):
    lemma = lemma if lemma is not None else form
    return "\t".join([str(index), form, lemma, upos, "_", "_", str(head), dep, "_", "_"])


def conllu_block(sent_id, rows):
    return "\n".join([f"# sent_id = {sent_id}"] + [conllu_row(*r) for r in rows]) + "\n"


# The three extraction cases anchored to known phrasal patterns:
# a particle verb, a negated verb, and a verb with a direct object.
SHUT_DOWN_ROWS = [
    (1, "the", "DET", 2, "det"),
    (2, "store", "NOUN", 3, "nsubj"),
    (3, "shut", "VERB", 0, "root"),
    (4, "down", "ADP", 3, "prt"),
]
NOT_DRIVE_ROWS = [
    (1, "bill", "PROPN", 4, "nsubj"),
    (2, "does", "AUX", 4, "aux", "do"),
    (3, "not", "PART", 4, "neg"),
    (4, "drive", "VERB", 0, "root"),
]
HAD_TEST_ROWS = [
    (1, "i", "PRON", 2, "nsubj"),
    (2, "had", "VERB", 0, "root", "have"),
    (3, "a", "DET", 4, "det"),
    (4, "test", "NOUN", 2, "dobj"),
    (5, "today", "NOUN", 2, "npadvmod"),
]
VERBLESS_ROWS = [
    (1, "what", "PRON", 3, "det"),
    (2, "a", "DET", 3, "det"),
    (3, "day", "NOUN", 0, "root"),
    (4, "!", "PUNCT", 3, "punct"),
]

PAPER_CASES_CONLLU = "\n".join(
    [
        conllu_block("shut:sent:0", SHUT_DOWN_ROWS),
        conllu_block("drive:sent:0", NOT_DRIVE_ROWS),
        conllu_block("test:sent:0", HAD_TEST_ROWS),
        conllu_block("day:sent:0", VERBLESS_ROWS),
    ]
)

STUDIED_ROWS = [
    (1, "i", "PRON", 2, "nsubj"),
    (2, "studied", "VERB", 0, "root", "study"),
    (3, "hard", "ADV", 2, "advmod"),
    (4, ".", "PUNCT", 2, "punct"),
]
PASSED_ROWS = [
    (1, "i", "PRON", 2, "nsubj"),
    (2, "passed", "VERB", 0, "root", "pass"),
    (3, "the", "DET", 4, "det"),
    (4, "test", "NOUN", 2, "dobj"),
    (5, ".", "PUNCT", 2, "punct"),
]
CELEBRATED_ROWS = [
    (1, "i", "PRON", 2, "nsubj"),
    (2, "celebrated", "VERB", 0, "root", "celebrate"),
    (3, ".", "PUNCT", 2, "punct"),
]
FAILED_ROWS = [
    (1, "i", "PRON", 2, "nsubj"),
    (2, "failed", "VERB", 0, "root", "fail"),
    (3, "it", "PRON", 2, "dobj"),
    (4, ".", "PUNCT", 2, "punct"),
]

TOY_STORIES = [
    {
        "story_id": "s1",
        "leading_context": "I had a test today",
        "sentences": ["I studied hard .", "I passed the test ."],
    },
    {
        "story_id": "s2",
        "leading_context": "I had a test today",
        "sentences": ["I studied hard .", "I celebrated ."],
    },
    {
        "story_id": "s3",
        "leading_context": "What a day !",
        "sentences": ["I studied hard .", "I failed it ."],
    },
]

_SENTENCE_ROWS = {
    "I studied hard .": STUDIED_ROWS,
    "I passed the test .": PASSED_ROWS,
    "I celebrated .": CELEBRATED_ROWS,
    "I failed it .": FAILED_ROWS,
    "I had a test today": HAD_TEST_ROWS,
    "What a day !": VERBLESS_ROWS,
}


def toy_corpus_jsonl():
    return "".join(json.dumps(rec) + "\n" for rec in TOY_STORIES)


def toy_parses_conllu():
    blocks = []
    for rec in TOY_STORIES:
        sid = rec["story_id"]
        blocks.append(conllu_block(f"{sid}:ctx:0", _SENTENCE_ROWS[rec["leading_context"]]))
        for i, sent in enumerate(rec["sentences"]):
            blocks.append(conllu_block(f"{sid}:sent:{i}", _SENTENCE_ROWS[sent]))
    return "\n".join(blocks)


def write_toy_inputs(tmp_path):
    corpus = tmp_path / "corpus.jsonl"
    parses = tmp_path / "parses.conllu"
    corpus.write_text(toy_corpus_jsonl(), encoding="utf-8")
    parses.write_text(toy_parses_conllu(), encoding="utf-8")
    return str(corpus), str(parses)
