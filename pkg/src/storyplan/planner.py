"""Event-sequence planning over the event graph.

Candidates for the next event are the successors of the previous one; each
is scored by edge strength times a repetition penalty, normalized into a
distribution, and sampled. When no candidate carries positive mass (sink
node, unseen start, or everything repetition-exhausted) the step is
delegated to the advisor. The target length is drawn once, up front, from
[l_min, l_max]; randomness comes from a single seeded PCG64 generator per
plan call, so plans are reproducible bit-for-bit.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .advisor import AdvisorRequest
from .errors import PlanError
from .events import Event, extract_event

DEGREE_MODES = ("edge_weight", "node_in", "node_total")

SOURCE_GRAPH = "graph"
SOURCE_ADVISOR = "advisor"
SOURCE_START = "start-reselect"


def _key(item):
    return item.string_form if isinstance(item, Event) else str(item)


@dataclass(frozen=True)
class PlanConfig:
    """Planning knobs.

    rept_m caps how often a candidate may recur before its penalty hits 0;
    degree_mode selects the candidate-degree interpretation in the score
    (edge transition count, node in-degree, or node total degree).
    """

    rept_m: int = 2
    l_min: int = 4
    l_max: int = 4
    degree_mode: str = "edge_weight"
    seed: int = 0
    edge_weight_omega: float = 1.0

    def __post_init__(self):
        if self.rept_m < 1:
            raise ValueError("rept_m must be >= 1")
        if self.l_min < 1:
            raise ValueError("l_min must be >= 1")
        if self.l_min > self.l_max:
            raise ValueError("l_min must not exceed l_max")
        if self.degree_mode not in DEGREE_MODES:
            raise ValueError(f"degree_mode must be one of {DEGREE_MODES}, got {self.degree_mode!r}")


@dataclass
class PlanStep:
    event: str
    source: str
    distribution: dict = field(default_factory=dict)
    detail: str = ""


@dataclass
class PlanResult:
    """Planned events plus provenance.

    steps[0] records how the start event was resolved (source
    "start-reselect", detail in-graph/verb-match/advisor); steps[1:] hold
    one record per planned event with the candidate distribution snapshot
    for graph-sampled steps.
    """

    events: list
    steps: list
    start_event: str
    target_length: int


def repetition_penalty(candidate, history, rept_m, g):
    """Penalty in [0, 1]: (rept_m - min(c, rept_m)) / (rept_m * in_degree).

    c counts occurrences of the candidate in the history (which includes
    the start event). The count is clamped at rept_m so over-repeated
    candidates stay at 0 instead of rebounding.
    """
    if rept_m < 1:
        raise ValueError("rept_m must be >= 1")
    form = _key(candidate)
    in_deg = g.degree(form, "in")
    if in_deg < 1:
        raise ValueError(
            f"candidate {form!r} has weighted in-degree 0; it cannot have been proposed as a successor"
        )
    c = min(sum(1 for h in history if _key(h) == form), rept_m)
    return (rept_m - c) / (rept_m * in_deg)


def _degree_value(prev_form, cand_form, edge_w, cfg, g):
    if cfg.degree_mode == "edge_weight":
        return edge_w
    if cfg.degree_mode == "node_in":
        return g.degree(cand_form, "in")
    return g.degree(cand_form, "total")


def event_score(prev, candidate, history, cfg, g):
    """Unnormalized candidate score: omega * degree * repetition penalty."""
    prev_form, cand_form = _key(prev), _key(candidate)
    w = g.edge_weight(prev_form, cand_form)
    if w == 0:
        raise ValueError(f"no edge {prev_form!r} -> {cand_form!r} in graph")
    d = _degree_value(prev_form, cand_form, w, cfg, g)
    return cfg.edge_weight_omega * d * repetition_penalty(cand_form, history, cfg.rept_m, g)


def candidate_distribution(prev, history, cfg, g):
    """Normalized next-event distribution over the successors of prev.

    Returns [] when prev has no successors or every score is zero (the
    advisor handles the step in either case); otherwise pairs in the
    deterministic successors order with probabilities summing to 1.
    """
    tails, weights, in_degs, totals = g.successor_arrays(prev)
    if not tails:
        return []
    if cfg.degree_mode == "edge_weight":
        degree_values = weights
    elif cfg.degree_mode == "node_in":
        degree_values = in_degs
    else:
        degree_values = totals
    counter = Counter(_key(h) for h in history)
    counts = np.fromiter((counter.get(t, 0) for t in tails), dtype=np.int64, count=len(tails))
    scores = np.empty(len(tails), dtype=np.float64)
    total = kernels.score_candidates(
        degree_values, in_degs, counts, cfg.rept_m, cfg.edge_weight_omega, scores
    )
    if total <= 0.0:
        return []
    return [(t, float(s) / total) for t, s in zip(tails, scores)]


def sample_next(dist, rng):
    """Inverse-CDF categorical draw over dist in its given order.

    dist must be nonempty with nonnegative probabilities summing to 1
    within 1e-9; rng is a numpy Generator, one uniform draw per call.
    """
    if not dist:
        raise ValueError("cannot sample from an empty distribution")
    total = 0.0
    for _, p in dist:
        if p < 0:
            raise ValueError("negative probability in distribution")
        total += p
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"distribution sums to {total!r}, expected 1 within 1e-9")
    u = rng.random()
    acc = 0.0
    for event, p in dist:
        acc += p
        if u < acc:
            return event
    return dist[-1][0]


def _resolve_start(context_event, context_tokens, g, advisor):
    if g.node_count == 0:
        raise ValueError("cannot plan against an empty graph")
    if context_event is not None:
        form = _key(context_event)
        if form in g:
            return form, "in-graph"
        if isinstance(context_event, Event):
            verb = context_event.trigger
        else:
            verb = form.split()[0]
        matches = g.find_by_verb(verb)
        if matches:
            return matches[0], "verb-match"
    response = advisor.advise(AdvisorRequest(list(context_tokens), []), g)
    return response.event, "advisor"


def resolve_start(context_event, context_tokens, g, advisor):
    """Start event for planning: the context event itself if it is a node,
    else the strongest node sharing its trigger verb, else the advisor's
    suggestion."""
    return _resolve_start(context_event, context_tokens, g, advisor)[0]


def plan(parsed_context, g, cfg, advisor, label_map=None):
    """Plan an event sequence from a parsed leading context.

    Draws the target length L from [l_min, l_max] (single draw), resolves
    the start event, then samples L events stepwise with advisor fallback
    whenever the graph offers no candidate. Returns a PlanResult with full
    per-step provenance.

    Raises:
        PlanError: the advisor itself failed; carries the partial plan.
    """
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    target = int(rng.integers(cfg.l_min, cfg.l_max + 1))

    context_tokens = [t.surface for t in parsed_context] if parsed_context else []
    context_event = extract_event(parsed_context, label_map) if parsed_context else None

    try:
        start, detail = _resolve_start(context_event, context_tokens, g, advisor)
    except Exception as e:
        raise PlanError(f"start resolution failed: {e}", partial=None) from e

    steps = [PlanStep(event=start, source=SOURCE_START, detail=detail)]
    events = []
    history = [start]
    prev = start
    for _ in range(target):
        dist = candidate_distribution(prev, history, cfg, g)
        if dist:
            event = sample_next(dist, rng)
            steps.append(PlanStep(event=event, source=SOURCE_GRAPH, distribution=dict(dist)))
        else:
            try:
                response = advisor.advise(
                    AdvisorRequest(list(context_tokens), list(history)), g
                )
            except Exception as e:
                partial = PlanResult(events, steps, start, target)
                raise PlanError(
                    f"advisor failed at step {len(events) + 1}: {e}", partial=partial
                ) from e
            event = response.event
            detail = response.source + ("+fallback" if response.fallback else "")
            steps.append(PlanStep(event=event, source=SOURCE_ADVISOR, detail=detail))
        events.append(event)
        history.append(event)
        prev = event
    return PlanResult(events=events, steps=steps, start_event=start, target_length=target)
