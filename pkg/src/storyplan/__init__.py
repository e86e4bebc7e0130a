"""storyplan: corpus-to-storyline event planning toolkit.

Extracts verb-phrase events from dependency-parsed stories, builds a
weighted directed event graph, plans event sequences by repetition-
penalized sampling over the graph with advisor fallback, and scores the
results with the usual generation metrics.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .advisor import (
    AdvisorRequest,
    AdvisorResponse,
    LexicalAdvisor,
    RemoteAdvisor,
    SerializingAdvisor,
    jaccard,
    lexical_advise,
    remote_advise,
    snap_to_graph,
)
from .corpus import ParsedStory, ParsedToken, StoryRecord, align, load_parses, load_story_corpus
from .errors import AdvisorUnavailable, DataFormatError, PlanError
from .events import (
    GAP,
    GAP_TOKEN,
    DependencyLabelMap,
    Event,
    extract_event,
    extract_story_events,
    parse_event_line,
    serialize_events,
)
from .graph import EventGraph, build_graph, graph_stats, load_graph, save_graph
from .metrics import (
    MetricReport,
    bleu_n,
    distinct_n,
    evaluate_events,
    evaluate_stories,
    intra_story_repetition,
    ir_aggregate,
    rouge_l,
    rouge_n,
)
from .planner import (
    PlanConfig,
    PlanResult,
    PlanStep,
    candidate_distribution,
    event_score,
    plan,
    repetition_penalty,
    resolve_start,
    sample_next,
)

__version__ = "0.1.0"
