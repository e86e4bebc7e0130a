"""Advisors: fallback event suggestion when graph inference has no candidates.

An advisor receives the leading-context tokens and the plan history and
must return an event that is a node of the supplied graph. Free-text
suggestions (e.g. from the remote generation service) are snapped onto the
closest graph node by Jaccard similarity over token sets.
"""

import threading
from collections import Counter
from dataclasses import dataclass

import numpy as np
import requests

from . import _kernels as kernels
from .errors import AdvisorUnavailable

DEFAULT_TIMEOUT = 5.0


@dataclass
class AdvisorRequest:
    context_tokens: list
    history: list

    def __post_init__(self):
        if not self.history and not self.context_tokens:
            raise ValueError("context_tokens must be nonempty when history is empty")


@dataclass
class AdvisorResponse:
    event: str
    raw_text: str
    source: str = "lexical"
    fallback: bool = False


def tokenize(text):
    return text.lower().split()


def jaccard(a, b):
    """|a & b| / |a | b| over token sets; 0 (not 1) when both sets are empty."""
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


def snap_to_graph(raw_text, g):
    """Graph node most Jaccard-similar to raw_text's token set.

    Ties break toward higher total degree, then the lexicographically
    smaller string form; snapping a string equal to a node returns it.
    """
    if g.node_count == 0:
        raise ValueError("cannot snap onto an empty graph")
    vocab, token_ids, offsets, degrees = g.token_index()
    qtokens = set(tokenize(raw_text))
    known = sorted(vocab[t] for t in qtokens if t in vocab)
    n_extra = sum(1 for t in qtokens if t not in vocab)
    query = np.array(known, dtype=np.int64)
    idx = kernels.jaccard_best(query, n_extra, token_ids, offsets, degrees)
    return g.nodes()[idx]


class LexicalAdvisor:
    """Deterministic advisor: Jaccard of the query (context plus history
    tokens) against each node, weighted by a (1 + total degree) frequency
    prior; nodes already repeated rept_m times in the history are skipped
    unless that empties the candidate set."""

    def __init__(self, rept_m=2):
        self.rept_m = rept_m

    def advise(self, request, g):
        if g.node_count == 0:
            raise ValueError("lexical advisor requires a nonempty graph")
        qtokens = set(request.context_tokens)
        for form in request.history:
            qtokens.update(form.split())
        hist_counts = Counter(request.history)
        best = self._best(qtokens, g, hist_counts)
        if best is None:
            best = self._best(qtokens, g, None)
        return AdvisorResponse(event=best, raw_text=" ".join(sorted(qtokens)))

    def _best(self, qtokens, g, hist_counts):
        # score = jaccard * (1 + degree); compared exactly via integer
        # cross-multiplication, iterating nodes in sorted order so ties
        # fall to the lexicographically smaller form.
        best = None
        for form in g.nodes():
            if hist_counts is not None and hist_counts.get(form, 0) >= self.rept_m:
                continue
            ntokens = set(form.split())
            inter = len(qtokens & ntokens)
            union = len(qtokens | ntokens) or 1
            deg = g.degree(form, "total")
            if best is None:
                best = (inter, union, deg, form)
                continue
            lhs = inter * (1 + deg) * best[1]
            rhs = best[0] * (1 + best[2]) * union
            if lhs > rhs or (lhs == rhs and deg > best[2]):
                best = (inter, union, deg, form)
        return best[3] if best else None


class RemoteAdvisor:
    """Client for the /advise generation service; falls back to the lexical
    advisor on timeout or protocol error unless fallback is disabled."""

    def __init__(self, endpoint, timeout=DEFAULT_TIMEOUT, rept_m=2, fallback=True, session=None):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.fallback = fallback
        self._lexical = LexicalAdvisor(rept_m)
        self._session = session if session is not None else requests.Session()

    def advise(self, request, g):
        try:
            raw = self._fetch(request)
        except AdvisorUnavailable:
            if not self.fallback:
                raise
            resp = self._lexical.advise(request, g)
            return AdvisorResponse(resp.event, resp.raw_text, source="lexical", fallback=True)
        return AdvisorResponse(event=snap_to_graph(raw, g), raw_text=raw, source="remote")

    def _fetch(self, request):
        body = {"context": " ".join(request.context_tokens), "history": list(request.history)}
        try:
            r = self._session.post(f"{self.endpoint}/advise", json=body, timeout=self.timeout)
        except requests.RequestException as e:
            raise AdvisorUnavailable(f"advise request failed: {e}")
        if not 200 <= r.status_code < 300:
            raise AdvisorUnavailable(f"advise endpoint returned HTTP {r.status_code}")
        try:
            payload = r.json()
        except ValueError:
            raise AdvisorUnavailable("advise response is not valid JSON")
        text = payload.get("event_text") if isinstance(payload, dict) else None
        if not isinstance(text, str) or not text.strip():
            raise AdvisorUnavailable("advise response carries no event_text")
        return text


class SerializingAdvisor:
    """Lock adapter for advisors that are not safe for concurrent calls."""

    def __init__(self, inner):
        self._inner = inner
        self._lock = threading.Lock()

    def advise(self, request, g):
        with self._lock:
            return self._inner.advise(request, g)


def lexical_advise(request, g, rept_m=2):
    """One-shot LexicalAdvisor call."""
    return LexicalAdvisor(rept_m=rept_m).advise(request, g)


def remote_advise(request, g, endpoint, timeout=DEFAULT_TIMEOUT, rept_m=2, fallback=True):
    """One-shot RemoteAdvisor call (prefer the class to reuse the session)."""
    return RemoteAdvisor(endpoint, timeout=timeout, rept_m=rept_m, fallback=fallback).advise(
        request, g
    )
