"""Weighted directed event graph: construction, queries, persistence.

Nodes are event string forms; an edge head->tail with weight w records that
the tail event immediately followed the head event w times in the corpus.
Gap markers break adjacency, so no edge ever spans a verbless sentence.
The graph is immutable once built and safe to share across planner threads
(the lazy query caches are idempotent).
"""

import hashlib

import numpy as np

from .errors import DataFormatError
from .events import Event, is_gap
from .fileio import atomic_write_text

FORMAT_HEADER = "storyplan-graph-v1"

DEGREE_MODES = ("in", "out", "total")


def _key(item):
    return item.string_form if isinstance(item, Event) else str(item)


class EventGraph:
    """Immutable weighted directed graph over event string forms.

    node_triggers maps each node to its trigger token (used by
    find_by_verb); edges maps (head, tail) pairs to positive integer
    weights.
    """

    def __init__(self, node_triggers, edges):
        for (h, t), w in edges.items():
            if h not in node_triggers or t not in node_triggers:
                raise DataFormatError(f"edge ({h!r} -> {t!r}) references a missing node")
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise DataFormatError(f"edge ({h!r} -> {t!r}) weight {w!r} must be an integer >= 1")
        self._triggers = dict(node_triggers)
        self._forms = tuple(sorted(self._triggers))
        self._edges = dict(edges)
        self._in_deg = {f: 0 for f in self._forms}
        self._out_deg = {f: 0 for f in self._forms}
        succ = {f: [] for f in self._forms}
        for (h, t), w in self._edges.items():
            succ[h].append((t, w))
            self._out_deg[h] += w
            self._in_deg[t] += w
        for pairs in succ.values():
            pairs.sort(key=lambda tw: (-tw[1], tw[0]))
        self._succ = succ
        self._succ_arrays = {}
        self._token_index = None

    def __eq__(self, other):
        if not isinstance(other, EventGraph):
            return NotImplemented
        return self._triggers == other._triggers and self._edges == other._edges

    def __contains__(self, item):
        return _key(item) in self._triggers

    def __repr__(self):
        return f"EventGraph(nodes={self.node_count}, edges={self.edge_count}, weight={self.weight_sum})"

    @property
    def node_count(self):
        return len(self._forms)

    @property
    def edge_count(self):
        return len(self._edges)

    @property
    def weight_sum(self):
        return sum(self._edges.values())

    def nodes(self):
        """All node string forms, lexicographically sorted."""
        return self._forms

    def edges(self):
        """Copy of the (head, tail) -> weight map."""
        return dict(self._edges)

    def trigger_of(self, event):
        return self._triggers.get(_key(event))

    def edge_weight(self, head, tail):
        return self._edges.get((_key(head), _key(tail)), 0)

    def successors(self, event):
        """Tails of edges out of event as (form, weight), heaviest first,
        ties broken lexicographically; empty for sinks and unknown nodes."""
        return list(self._succ.get(_key(event), ()))

    def degree(self, event, mode="total"):
        """Weighted degree of a node; 0 for absent or isolated nodes."""
        if mode not in DEGREE_MODES:
            raise ValueError(f"degree mode must be one of {DEGREE_MODES}, got {mode!r}")
        form = _key(event)
        if form not in self._triggers:
            return 0
        if mode == "in":
            return self._in_deg[form]
        if mode == "out":
            return self._out_deg[form]
        return self._in_deg[form] + self._out_deg[form]

    def find_by_verb(self, verb_token):
        """Nodes whose trigger equals verb_token, highest total degree first,
        ties broken lexicographically."""
        matches = [f for f in self._forms if self._triggers[f] == verb_token]
        matches.sort(key=lambda f: (-(self._in_deg[f] + self._out_deg[f]), f))
        return matches

    # -- cached layouts for the hot kernels ------------------------------

    def successor_arrays(self, event):
        """(tails, edge_weights, in_degrees, total_degrees) for the planner.

        Arrays follow the deterministic successors() order and are cached
        per node; building twice under concurrent reads is harmless.
        """
        form = _key(event)
        cached = self._succ_arrays.get(form)
        if cached is None:
            pairs = self._succ.get(form, ())
            tails = [t for t, _ in pairs]
            weights = np.array([w for _, w in pairs], dtype=np.float64)
            in_degs = np.array([self._in_deg[t] for t in tails], dtype=np.float64)
            totals = np.array(
                [self._in_deg[t] + self._out_deg[t] for t in tails], dtype=np.float64
            )
            cached = (tails, weights, in_degs, totals)
            self._succ_arrays[form] = cached
        return cached

    def token_index(self):
        """(vocab, token_ids, offsets, degrees) CSR layout for Jaccard snapping.

        token_ids holds the sorted unique token ids of each node, node order
        matching nodes(); degrees are total degrees for tie-breaking.
        """
        if self._token_index is None:
            vocab = {}
            ids = []
            offsets = [0]
            for form in self._forms:
                node_ids = sorted({vocab.setdefault(tok, len(vocab)) for tok in form.split()})
                ids.extend(node_ids)
                offsets.append(len(ids))
            degrees = np.array(
                [self._in_deg[f] + self._out_deg[f] for f in self._forms], dtype=np.int64
            )
            self._token_index = (
                vocab,
                np.array(ids, dtype=np.int64),
                np.array(offsets, dtype=np.int64),
                degrees,
            )
        return self._token_index


def build_graph(event_sequences):
    """Build the graph from event sequences (items: Event, string form, or gap).

    Every consecutive pair not separated by a gap marker increments the
    corresponding edge weight by 1; all events become nodes, including
    isolated ones. The result is invariant under permutation of the input
    sequences. Node triggers come from Event objects when available
    (lexicographically smallest on conflict), else the leftmost token of
    the string form.
    """
    provided_triggers = {}
    forms = set()
    edges = {}
    for seq in event_sequences:
        prev = None
        for item in seq:
            if is_gap(item):
                prev = None
                continue
            form = _key(item)
            if not form.split():
                raise DataFormatError("blank event string form")
            forms.add(form)
            if isinstance(item, Event):
                known = provided_triggers.get(form)
                if known is None or item.trigger < known:
                    provided_triggers[form] = item.trigger
            if prev is not None:
                pair = (prev, form)
                edges[pair] = edges.get(pair, 0) + 1
            prev = form
    node_triggers = {
        form: provided_triggers.get(form, form.split()[0]) for form in forms
    }
    return EventGraph(node_triggers, edges)


def _render_body(g):
    lines = [f"nodes {g.node_count}"]
    for form in g.nodes():
        lines.append(f"{form}\t{g.trigger_of(form)}")
    lines.append(f"edges {g.edge_count}")
    for (h, t), w in sorted(g.edges().items()):
        lines.append(f"{h}\t{t}\t{w}")
    return "\n".join(lines) + "\n"


def save_graph(g, path):
    """Write the graph as sorted, versioned, checksummed text (diff-friendly,
    byte-reproducible for equal graphs)."""
    body = _render_body(g)
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    atomic_write_text(path, f"{FORMAT_HEADER}\nchecksum {digest}\n{body}")


def _expect_count(line, section, path):
    parts = line.split()
    if len(parts) != 2 or parts[0] != section:
        raise DataFormatError(f"{path}: expected '{section} <count>' line, got {line!r}")
    try:
        return int(parts[1])
    except ValueError:
        raise DataFormatError(f"{path}: non-integer {section} count {parts[1]!r}")


def load_graph(path):
    """Load a graph written by save_graph, verifying version and checksum."""
    with open(path, encoding="utf-8") as f:
        content = f.read()
    lines = content.split("\n")
    if not lines or lines[0] != FORMAT_HEADER:
        raise DataFormatError(f"{path}: not a {FORMAT_HEADER} file")
    if len(lines) < 3 or not lines[1].startswith("checksum "):
        raise DataFormatError(f"{path}: missing checksum line")
    stated = lines[1][len("checksum "):].strip()
    body = "\n".join(lines[2:])
    actual = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if stated != actual:
        raise DataFormatError(f"{path}: checksum mismatch (file corrupted or truncated)")

    rows = body.split("\n")
    if rows and rows[-1] == "":
        rows.pop()
    pos = 0
    if pos >= len(rows):
        raise DataFormatError(f"{path}: missing nodes section")
    n_nodes = _expect_count(rows[pos], "nodes", path)
    pos += 1
    node_triggers = {}
    for _ in range(n_nodes):
        if pos >= len(rows):
            raise DataFormatError(f"{path}: truncated nodes section")
        parts = rows[pos].split("\t")
        if len(parts) != 2:
            raise DataFormatError(f"{path}: bad node line {rows[pos]!r}")
        if parts[0] in node_triggers:
            raise DataFormatError(f"{path}: duplicate node {parts[0]!r}")
        node_triggers[parts[0]] = parts[1]
        pos += 1
    if pos >= len(rows):
        raise DataFormatError(f"{path}: missing edges section")
    n_edges = _expect_count(rows[pos], "edges", path)
    pos += 1
    edges = {}
    for _ in range(n_edges):
        if pos >= len(rows):
            raise DataFormatError(f"{path}: truncated edges section")
        parts = rows[pos].split("\t")
        if len(parts) != 3:
            raise DataFormatError(f"{path}: bad edge line {rows[pos]!r}")
        try:
            w = int(parts[2])
        except ValueError:
            raise DataFormatError(f"{path}: non-integer edge weight in {rows[pos]!r}")
        if (parts[0], parts[1]) in edges:
            raise DataFormatError(f"{path}: duplicate edge {parts[0]!r} -> {parts[1]!r}")
        edges[(parts[0], parts[1])] = w
        pos += 1
    if pos != len(rows):
        raise DataFormatError(f"{path}: {len(rows) - pos} unexpected trailing lines")
    return EventGraph(node_triggers, edges)


def graph_stats(g, top_k=10):
    """Human-readable stats: sizes, total-degree histogram, top hub events."""
    histogram = {}
    for form in g.nodes():
        d = g.degree(form, "total")
        histogram[d] = histogram.get(d, 0) + 1
    hubs = sorted(g.nodes(), key=lambda f: (-g.degree(f, "total"), f))[:top_k]
    lines = [
        f"nodes {g.node_count}",
        f"edges {g.edge_count}",
        f"weight-sum {g.weight_sum}",
        "degree-histogram (total-degree node-count):",
    ]
    for d in sorted(histogram):
        lines.append(f"  {d} {histogram[d]}")
    lines.append(f"top-hubs (by total degree, top {len(hubs)}):")
    for form in hubs:
        lines.append(
            f"  {form}\ttotal={g.degree(form, 'total')}"
            f" in={g.degree(form, 'in')} out={g.degree(form, 'out')}"
        )
    return "\n".join(lines) + "\n"
