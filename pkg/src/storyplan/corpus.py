"""Story corpus and dependency-parse ingestion.

Stories arrive as line-delimited JSON records; parses arrive as CoNLL-U
blocks keyed by a ``# sent_id = storyid:role:index`` comment where role is
``ctx`` for the leading context and ``sent`` for reference sentences
(0-based index). Tokens are lowercased on ingestion. Parsing itself is out
of scope: any external dependency parser that emits CoNLL-U will do.
"""

import json
from dataclasses import dataclass

from .errors import DataFormatError

SENT_ROLES = ("ctx", "sent")


@dataclass(frozen=True)
class StoryRecord:
    """One story: leading context plus its reference sentences (may be empty)."""

    story_id: str
    leading_context: str
    sentences: tuple


@dataclass(frozen=True)
class ParsedToken:
    """One token row of a dependency parse.

    index is the 1-based position in the sentence; head is the index of the
    governing token, 0 for the root.
    """

    index: int
    surface: str
    lemma: str
    upos: str
    head: int
    dep_label: str


@dataclass(frozen=True)
class ParsedStory:
    story_id: str
    context_parse: tuple
    sentence_parses: tuple


def context_key(story_id):
    return f"{story_id}:ctx:0"


def sentence_key(story_id, i):
    return f"{story_id}:sent:{i}"


def load_story_corpus(path):
    """Read a line-delimited JSON corpus into StoryRecords, preserving file order.

    Args:
        path: corpus file; one JSON object per line with fields story_id,
            leading_context, sentences.
    Returns:
        list of StoryRecord.
    Raises:
        DataFormatError: malformed line (reported with its line number) or
            duplicate story_id.
    """
    records = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise DataFormatError(f"{path}: line {lineno}: invalid JSON ({e.msg})")
            if not isinstance(obj, dict):
                raise DataFormatError(f"{path}: line {lineno}: record is not an object")
            for fieldname in ("story_id", "leading_context", "sentences"):
                if fieldname not in obj:
                    raise DataFormatError(
                        f"{path}: line {lineno}: missing field '{fieldname}'"
                    )
            story_id = obj["story_id"]
            if not isinstance(story_id, str) or not story_id:
                raise DataFormatError(f"{path}: line {lineno}: story_id must be a nonempty string")
            if not isinstance(obj["leading_context"], str):
                raise DataFormatError(f"{path}: line {lineno}: leading_context must be a string")
            sentences = obj["sentences"]
            if not isinstance(sentences, list) or any(not isinstance(s, str) for s in sentences):
                raise DataFormatError(f"{path}: line {lineno}: sentences must be an array of strings")
            if story_id in seen:
                raise DataFormatError(f"{path}: line {lineno}: duplicate story_id '{story_id}'")
            seen.add(story_id)
            records.append(StoryRecord(story_id, obj["leading_context"], tuple(sentences)))
    return records


def _parse_sent_id(value, path, lineno):
    parts = value.rsplit(":", 2)
    if len(parts) != 3 or parts[1] not in SENT_ROLES:
        raise DataFormatError(
            f"{path}: line {lineno}: sent_id '{value}' does not match 'storyid:role:index' "
            f"with role in {SENT_ROLES}"
        )
    try:
        int(parts[2])
    except ValueError:
        raise DataFormatError(f"{path}: line {lineno}: sent_id '{value}' has a non-integer index")
    return value


def _finish_block(sent_id, tokens, path, lineno):
    if sent_id is None:
        raise DataFormatError(f"{path}: block ending at line {lineno}: missing '# sent_id' comment")
    if not tokens:
        raise DataFormatError(f"{path}: block '{sent_id}': no token rows")
    n = len(tokens)
    roots = 0
    for t in tokens:
        if t.head < 0 or t.head > n:
            raise DataFormatError(
                f"{path}: block '{sent_id}': token {t.index} head {t.head} out of range [0, {n}]"
            )
        if t.head == 0:
            roots += 1
    if roots == 0:
        raise DataFormatError(f"{path}: block '{sent_id}': no root token (head 0)")
    if roots > 1:
        raise DataFormatError(f"{path}: block '{sent_id}': {roots} root tokens, expected exactly 1")
    return sent_id, tuple(tokens)


def load_parses(path):
    """Read a CoNLL-U file into a map from sent_id to its token list.

    Only the ID, FORM, LEMMA, UPOS, HEAD, and DEPREL columns are kept;
    multiword-token and empty-node rows (ranged or decimal IDs) are skipped.
    FORM and LEMMA are lowercased.

    Raises:
        DataFormatError: missing sent_id, bad column count, non-integer head,
            out-of-range head, or zero/multiple roots in a block.
    """
    parses = {}
    sent_id = None
    tokens = []
    last_line = 0

    def flush(lineno):
        nonlocal sent_id, tokens
        if sent_id is None and not tokens:
            return
        key, toks = _finish_block(sent_id, tokens, path, lineno)
        if key in parses:
            raise DataFormatError(f"{path}: duplicate sent_id '{key}'")
        parses[key] = toks
        sent_id = None
        tokens = []

    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            last_line = lineno
            line = raw.rstrip("\n")
            if not line.strip():
                flush(lineno)
                continue
            if line.startswith("#"):
                if line.startswith("# sent_id"):
                    value = line.split("=", 1)[1].strip() if "=" in line else ""
                    sent_id = _parse_sent_id(value, path, lineno)
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise DataFormatError(
                    f"{path}: line {lineno}: expected 10 tab-separated columns, got {len(cols)}"
                )
            if "-" in cols[0] or "." in cols[0]:
                continue
            try:
                index = int(cols[0])
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: non-integer token ID '{cols[0]}'")
            try:
                head = int(cols[6])
            except ValueError:
                raise DataFormatError(f"{path}: line {lineno}: non-integer head '{cols[6]}'")
            tokens.append(
                ParsedToken(
                    index=index,
                    surface=cols[1].lower(),
                    lemma=cols[2].lower(),
                    upos=cols[3],
                    head=head,
                    dep_label=cols[7],
                )
            )
    flush(last_line + 1)
    return parses


def to_conllu(tokens, sent_id=None):
    """Render a token list back to a CoNLL-U block (unused columns become '_')."""
    lines = []
    if sent_id is not None:
        lines.append(f"# sent_id = {sent_id}")
    for t in tokens:
        lines.append(
            "\t".join(
                [str(t.index), t.surface, t.lemma, t.upos, "_", "_", str(t.head), t.dep_label, "_", "_"]
            )
        )
    return "\n".join(lines) + "\n"


def align(stories, parses):
    """Join StoryRecords with their parses into ParsedStories, order preserved.

    Raises:
        DataFormatError: any story whose context or sentence lacks a parse
            entry, named by story_id and position.
    """
    out = []
    for story in stories:
        ckey = context_key(story.story_id)
        if ckey not in parses:
            raise DataFormatError(f"story '{story.story_id}': missing context parse '{ckey}'")
        sent_parses = []
        for i in range(len(story.sentences)):
            skey = sentence_key(story.story_id, i)
            if skey not in parses:
                raise DataFormatError(
                    f"story '{story.story_id}': missing parse for sentence {i} ('{skey}')"
                )
            sent_parses.append(parses[skey])
        out.append(ParsedStory(story.story_id, parses[ckey], tuple(sent_parses)))
    return out
