"""Training data from the planner's extracted-events files.

An events file holds one line per story: story_id, a tab, then
"<s> event [<sep> event ...] <e>" with "<gap>" marking verbless
sentences. The first element of each line acts as the context segment
(extraction with --include-context puts the leading context's event
there), and every later event becomes one training target conditioned on
the context plus the events before it. At serve time the raw context
string occupies the same slot.
"""

START, SEP, END, GAP = "<s>", "<sep>", "<e>", "<gap>"


def parse_event_line(line):
    s = line.strip()
    if not s.startswith(START) or not s.endswith(END):
        raise ValueError(f"not an event line: {line!r}")
    inner = s[len(START) : len(s) - len(END)].strip()
    if not inner:
        raise ValueError(f"event line holds no events: {line!r}")
    return [" ".join(p.split()) for p in inner.split(f" {SEP} ")]


def load_event_corpus(path):
    """[(story_id, [event string, ...])] with gap entries dropped."""
    stories = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise ValueError(f"{path}: line {lineno}: expected 'story_id<TAB>event line'")
            story_id, event_line = line.split("\t", 1)
            events = [e for e in parse_event_line(event_line) if e != GAP]
            stories.append((story_id, events))
    return stories


def serialize_input(context, history):
    """One source string: the context segment, then the history events
    joined with the event-line separators."""
    parts = [context, START]
    for i, event in enumerate(history):
        if i:
            parts.append(SEP)
        parts.append(event)
    parts.append(END)
    return " ".join(p for p in parts if p)


def make_training_pairs(stories):
    """(source, target) pairs: (context + events[:i]) -> events[i]."""
    pairs = []
    for _, events in stories:
        if len(events) < 2:
            continue
        context, rest = events[0], events[1:]
        for i, target in enumerate(rest):
            pairs.append((serialize_input(context, rest[:i]), target))
    return pairs
