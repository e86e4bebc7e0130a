"""Verb-phrase event extraction and the event-line text format.

Each sentence contributes at most one event: the trigger verb plus the
dependents whose labels the DependencyLabelMap selects (particles,
negations, agents, direct objects, complements). Subjects are deliberately
excluded; keeping them would tie events to particular characters and ruin
reuse across stories. A sentence without a verb yields a gap marker so
that neighbouring events are never treated as adjacent across it.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import DataFormatError

ROLE_MODIFIER = "modifier"
ROLE_AGENT = "agent"
ROLE_COMPLEMENT = "complement"
ROLES = (ROLE_MODIFIER, ROLE_AGENT, ROLE_COMPLEMENT)

# Classic dependency labels plus their UD near-equivalents (compound:prt,
# obj). Edit via a label-map file: one "label role" pair per line.
DEFAULT_LABEL_ROLES = {
    "prt": ROLE_MODIFIER,
    "compound:prt": ROLE_MODIFIER,
    "neg": ROLE_MODIFIER,
    "agent": ROLE_AGENT,
    "dobj": ROLE_AGENT,
    "obj": ROLE_AGENT,
    "acomp": ROLE_COMPLEMENT,
    "ccomp": ROLE_COMPLEMENT,
    "xcomp": ROLE_COMPLEMENT,
}

# UPOS tags that may anchor an event. AUX is included so copular sentences
# ("that is nice") still anchor on the auxiliary instead of vanishing.
VERB_UPOS = ("VERB", "AUX")

START_TOKEN = "<s>"
SEP_TOKEN = "<sep>"
END_TOKEN = "<e>"
GAP_TOKEN = "<gap>"
_RESERVED = (START_TOKEN, SEP_TOKEN, END_TOKEN)


class _Gap:
    """Placeholder for a sentence that produced no event."""

    __slots__ = ()

    def __repr__(self):
        return "GAP"


GAP = _Gap()


class Argument(NamedTuple):
    role: str
    token: str
    position: int


@dataclass(frozen=True, eq=False)
class DependencyLabelMap:
    """Assigns each dependency label to exactly one argument role."""

    roles: dict

    def __post_init__(self):
        for label, role in self.roles.items():
            if role not in ROLES:
                raise DataFormatError(f"label '{label}': unknown role '{role}' (expected one of {ROLES})")

    def role_of(self, label):
        return self.roles.get(label)

    @classmethod
    def default(cls):
        return cls(dict(DEFAULT_LABEL_ROLES))

    @classmethod
    def from_file(cls, path):
        """Read a label map: one "label role" pair per line, '#' comments."""
        roles = {}
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise DataFormatError(f"{path}: line {lineno}: expected 'label role'")
                if parts[0] in roles:
                    raise DataFormatError(f"{path}: line {lineno}: duplicate label '{parts[0]}'")
                roles[parts[0]] = parts[1]
        return cls(roles)


@dataclass(frozen=True, eq=False)
class Event:
    """A verb-phrase event; identity (equality, hashing) is its string_form."""

    trigger: str
    trigger_pos: int
    arguments: tuple = ()
    string_form: str = field(init=False)

    def __post_init__(self):
        if not self.trigger:
            raise ValueError("Event requires a nonempty trigger")
        object.__setattr__(self, "arguments", tuple(Argument(*a) for a in self.arguments))
        parts = [(self.trigger_pos, self.trigger)]
        parts += [(a.position, a.token) for a in self.arguments]
        positions = [p for p, _ in parts]
        if len(set(positions)) != len(positions):
            raise ValueError("Event tokens must occupy distinct positions")
        parts.sort()
        object.__setattr__(self, "string_form", " ".join(tok for _, tok in parts))

    def __eq__(self, other):
        if isinstance(other, Event):
            return self.string_form == other.string_form
        return NotImplemented

    def __hash__(self):
        return hash(self.string_form)


def is_gap(item):
    return isinstance(item, _Gap) or item == GAP_TOKEN


def extract_event(sentence, label_map=None, verb_tags=VERB_UPOS, use_lemma=False):
    """Extract the event of one parsed sentence, or None if it has no verb.

    The trigger is the root token when the root is a verb, else the leftmost
    verb. Arguments are the direct dependents of the trigger whose label the
    map covers, kept in sentence order.

    Args:
        sentence: sequence of ParsedToken (single root).
        label_map: DependencyLabelMap; defaults to DependencyLabelMap.default().
        verb_tags: UPOS values treated as verbs.
        use_lemma: build token strings from lemmas instead of surface forms.
    """
    if label_map is None:
        label_map = DependencyLabelMap.default()
    roots = [t for t in sentence if t.head == 0]
    if len(roots) != 1:
        raise ValueError(f"sentence has {len(roots)} roots, expected exactly 1")
    root = roots[0]
    if root.upos in verb_tags:
        trigger = root
    else:
        verbs = [t for t in sentence if t.upos in verb_tags]
        if not verbs:
            return None
        trigger = min(verbs, key=lambda t: t.index)

    def text(tok):
        return tok.lemma if use_lemma else tok.surface

    args = []
    for t in sentence:
        if t.head != trigger.index:
            continue
        role = label_map.role_of(t.dep_label)
        if role is not None:
            args.append(Argument(role, text(t), t.index))
    args.sort(key=lambda a: a.position)
    return Event(trigger=text(trigger), trigger_pos=trigger.index, arguments=tuple(args))


def extract_story_events(story, label_map=None, verb_tags=VERB_UPOS, use_lemma=False):
    """Extract one entry per story sentence, in order.

    Verbless sentences contribute the GAP marker instead of an event so
    that graph building never fabricates adjacency across them.
    """
    out = []
    for sentence in story.sentence_parses:
        event = extract_event(sentence, label_map, verb_tags, use_lemma)
        out.append(GAP if event is None else event)
    return out


def _string_form(item):
    if isinstance(item, _Gap):
        return GAP_TOKEN
    if isinstance(item, Event):
        return item.string_form
    if isinstance(item, str):
        return item
    raise ValueError(f"expected Event, GAP, or string, got {type(item).__name__}")


def serialize_events(events):
    """Join events into one line: "<s> form [<sep> form ...] <e>".

    Gap markers serialize as the "<gap>" token so gap semantics survive the
    round trip through files.

    Raises:
        ValueError: empty event list.
    """
    if not events:
        raise ValueError("cannot serialize an empty event list")
    forms = [_string_form(e) for e in events]
    return f"{START_TOKEN} " + f" {SEP_TOKEN} ".join(forms) + f" {END_TOKEN}"


def parse_event_line(line):
    """Invert serialize_events: return the list of event string_forms.

    Gap entries come back as the "<gap>" token string.

    Raises:
        DataFormatError: the line does not match the serialization grammar.
    """
    s = line.strip()
    if not s.startswith(START_TOKEN):
        raise DataFormatError(f"event line must start with '{START_TOKEN}': {line!r}")
    if not s.endswith(END_TOKEN):
        raise DataFormatError(f"event line must end with '{END_TOKEN}': {line!r}")
    inner = s[len(START_TOKEN) : len(s) - len(END_TOKEN)].strip()
    if not inner:
        raise DataFormatError(f"event line holds no events: {line!r}")
    forms = []
    for part in inner.split(f" {SEP_TOKEN} "):
        form = " ".join(part.split())
        if not form:
            raise DataFormatError(f"empty event between separators: {line!r}")
        if any(tok in _RESERVED for tok in form.split()):
            raise DataFormatError(f"reserved token inside event '{form}': {line!r}")
        forms.append(form)
    return forms
