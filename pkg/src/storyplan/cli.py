"""Command-line pipeline: extract, build-graph, graph-stats, plan, eval.

All commands are deterministic given fixed inputs, config, and seed; plan
randomness flows from the single --seed value (each story's generator is
seeded from a hash of seed and story_id). Options resolve with precedence
flags > config file > defaults; config files are plain "key = value" lines
(keys match flag names with underscores, '#' starts a comment).

Exit codes: 0 success, 1 usage error, 2 data error, 3 environment error.
"""

import argparse
import hashlib
import json
import sys

from .advisor import LexicalAdvisor, RemoteAdvisor
from .corpus import align, context_key, load_parses, load_story_corpus
from .errors import AdvisorUnavailable, DataFormatError, PlanError
from .events import (
    GAP,
    GAP_TOKEN,
    DependencyLabelMap,
    extract_event,
    extract_story_events,
    parse_event_line,
    serialize_events,
)
from .fileio import atomic_write_text
from .graph import build_graph, graph_stats, load_graph, save_graph
from .metrics import evaluate_events, evaluate_stories
from .planner import PlanConfig, plan

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_ENV = 3

DEFAULTS = {
    "seed": 0,
    "rept_m": 2,
    "l_min": 4,
    "l_max": 4,
    "degree_mode": "edge_weight",
    "omega": 1.0,
    "advisor": "lexical",
    "timeout": 5.0,
    "top": 10,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def load_config(path):
    """Read a flat "key = value" config file."""
    config = {}
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataFormatError(f"{path}: line {lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            config[key.strip()] = value.strip()
    return config


def _resolve(args, name, convert=None):
    """Option value with precedence: flag > config file > default."""
    value = getattr(args, name)
    if value is not None:
        return value
    config = getattr(args, "_config", {})
    if name in config:
        raw = config[name]
        if convert is None:
            return raw
        try:
            return convert(raw)
        except ValueError:
            raise DataFormatError(f"config: bad value for '{name}': {raw!r}")
    return DEFAULTS.get(name)


def _require(args, name, convert=None):
    value = _resolve(args, name, convert)
    if value is None:
        raise _UsageError(f"missing required option --{name.replace('_', '-')} (or config key '{name}')")
    return value


def _label_map(args):
    path = _resolve(args, "label_map")
    return DependencyLabelMap.from_file(path) if path else DependencyLabelMap.default()


def _story_seed(seed, story_id):
    digest = hashlib.sha256(f"{seed}:{story_id}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def cmd_extract(args):
    label_map = _label_map(args)
    stories = load_story_corpus(_require(args, "corpus"))
    parses = load_parses(_require(args, "parses"))
    aligned = align(stories, parses)
    lines = []
    for story in aligned:
        sequence = extract_story_events(story, label_map)
        if args.include_context:
            context_event = extract_event(story.context_parse, label_map)
            sequence = [GAP if context_event is None else context_event] + sequence
        if not sequence:
            sys.stderr.write(f"warning: story '{story.story_id}' has no sentences; skipped\n")
            continue
        lines.append(f"{story.story_id}\t{serialize_events(sequence)}")
    atomic_write_text(_require(args, "out"), "".join(line + "\n" for line in lines))
    return EXIT_OK


def _read_event_sequences(path):
    sequences = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if "\t" not in line:
                raise DataFormatError(f"{path}: line {lineno}: expected 'story_id<TAB>event line'")
            story_id, event_line = line.split("\t", 1)
            try:
                forms = parse_event_line(event_line)
            except DataFormatError as e:
                raise DataFormatError(f"{path}: line {lineno}: {e}")
            sequences.append((story_id, forms))
    return sequences


def cmd_build_graph(args):
    path = _require(args, "events")
    sequences = _read_event_sequences(path)
    if not sequences:
        sys.stderr.write(f"warning: '{path}' holds no event lines; writing an empty graph\n")
    g = build_graph(forms for _, forms in sequences)
    save_graph(g, _require(args, "out"))
    return EXIT_OK


def cmd_graph_stats(args):
    g = load_graph(_require(args, "graph"))
    sys.stdout.write(graph_stats(g, top_k=_resolve(args, "top", int)))
    return EXIT_OK


def _make_advisor(args, rept_m):
    kind = _resolve(args, "advisor")
    if kind == "lexical":
        return LexicalAdvisor(rept_m=rept_m)
    if kind == "remote":
        endpoint = _resolve(args, "endpoint")
        if not endpoint:
            raise _UsageError("--endpoint is required with --advisor remote")
        return RemoteAdvisor(
            endpoint,
            timeout=_resolve(args, "timeout", float),
            rept_m=rept_m,
            fallback=not args.no_advisor_fallback,
        )
    raise _UsageError(f"unknown advisor '{kind}' (expected lexical or remote)")


def cmd_plan(args):
    g = load_graph(_require(args, "graph"))
    if g.node_count == 0:
        raise DataFormatError("cannot plan against an empty graph")
    stories = load_story_corpus(_require(args, "corpus"))
    parses = load_parses(_require(args, "parses"))
    label_map = _label_map(args)
    seed = _resolve(args, "seed", int)
    rept_m = _resolve(args, "rept_m", int)
    base = dict(
        rept_m=rept_m,
        l_min=_resolve(args, "l_min", int),
        l_max=_resolve(args, "l_max", int),
        degree_mode=_resolve(args, "degree_mode"),
        edge_weight_omega=_resolve(args, "omega", float),
    )
    adviser = _make_advisor(args, rept_m)

    plan_lines = []
    provenance = [
        json.dumps(
            {"seed": seed, "advisor": _resolve(args, "advisor"), **base},
            sort_keys=True,
        )
    ]
    for story in stories:
        ckey = context_key(story.story_id)
        if ckey not in parses:
            raise DataFormatError(f"story '{story.story_id}': missing context parse '{ckey}'")
        cfg = PlanConfig(seed=_story_seed(seed, story.story_id), **base)
        result = plan(parses[ckey], g, cfg, adviser, label_map)
        plan_lines.append(f"{story.story_id}\t{serialize_events(result.events)}")
        provenance.append(
            json.dumps(
                {
                    "story_id": story.story_id,
                    "seed": cfg.seed,
                    "target_length": result.target_length,
                    "steps": [
                        {
                            "event": s.event,
                            "source": s.source,
                            "detail": s.detail,
                            "distribution": s.distribution,
                        }
                        for s in result.steps
                    ],
                },
                sort_keys=True,
            )
        )
    out = _require(args, "out")
    atomic_write_text(out, "".join(line + "\n" for line in plan_lines))
    if not args.no_provenance:
        atomic_write_text(out + ".prov.jsonl", "".join(line + "\n" for line in provenance))
    return EXIT_OK


def _read_event_tokens(path):
    tokens = {}
    for story_id, forms in _read_event_sequences(path):
        if story_id in tokens:
            raise DataFormatError(f"{path}: duplicate story_id '{story_id}'")
        tokens[story_id] = [
            tok for form in forms if form != GAP_TOKEN for tok in form.split()
        ]
    return tokens


def cmd_eval(args):
    mode = _require(args, "mode")
    out = _require(args, "out")
    if mode == "events":
        hyp = _read_event_tokens(_require(args, "hyp"))
        ref = _read_event_tokens(_require(args, "ref"))
        try:
            report = evaluate_events(hyp, ref)
        except ValueError as e:
            raise DataFormatError(str(e))
    elif mode == "stories":
        records = load_story_corpus(_require(args, "hyp"))
        stories = [[sent.lower().split() for sent in r.sentences] for r in records]
        report = evaluate_stories(stories)
    else:
        raise _UsageError(f"unknown eval mode '{mode}' (expected events or stories)")
    text = report.to_text()
    sys.stdout.write(text)
    atomic_write_text(out + ".txt", text)
    atomic_write_text(out + ".json", json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="storyplan", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--config", help="key = value config file")
        return p

    p = add("extract", cmd_extract, help="extract event sequences from a parsed corpus")
    p.add_argument("--corpus")
    p.add_argument("--parses")
    p.add_argument("--out")
    p.add_argument("--label-map", dest="label_map")
    p.add_argument("--include-context", action="store_true",
                   help="prepend the leading context's event to each sequence")

    p = add("build-graph", cmd_build_graph, help="build the event graph from an events file")
    p.add_argument("--events")
    p.add_argument("--out")

    p = add("graph-stats", cmd_graph_stats, help="print node/edge/degree statistics")
    p.add_argument("--graph")
    p.add_argument("--top", type=int)

    p = add("plan", cmd_plan, help="plan event sequences for each story's leading context")
    p.add_argument("--graph")
    p.add_argument("--corpus")
    p.add_argument("--parses")
    p.add_argument("--out")
    p.add_argument("--label-map", dest="label_map")
    p.add_argument("--seed", type=int)
    p.add_argument("--rept-m", dest="rept_m", type=int)
    p.add_argument("--l-min", dest="l_min", type=int)
    p.add_argument("--l-max", dest="l_max", type=int)
    p.add_argument("--degree-mode", dest="degree_mode",
                   choices=["edge_weight", "node_in", "node_total"])
    p.add_argument("--omega", type=float)
    p.add_argument("--advisor", choices=["lexical", "remote"])
    p.add_argument("--endpoint")
    p.add_argument("--timeout", type=float)
    p.add_argument("--no-provenance", action="store_true",
                   help="skip the .prov.jsonl sidecar")
    p.add_argument("--no-advisor-fallback", action="store_true",
                   help="fail (exit 3) instead of falling back when the remote advisor is down")

    p = add("eval", cmd_eval, help="score planned events or stories")
    p.add_argument("--mode", choices=["events", "stories"])
    p.add_argument("--hyp")
    p.add_argument("--ref")
    p.add_argument("--out")

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    try:
        args._config = load_config(config_path) if config_path else {}
        return args.func(args)
    except _UsageError as e:
        sys.stderr.write(f"storyplan: usage error: {e}\n")
        return EXIT_USAGE
    except AdvisorUnavailable as e:
        sys.stderr.write(f"storyplan: environment error: {e}\n")
        return EXIT_ENV
    except PlanError as e:
        sys.stderr.write(f"storyplan: {e}\n")
        return EXIT_ENV if isinstance(e.__cause__, AdvisorUnavailable) else EXIT_DATA
    except (DataFormatError, ValueError) as e:
        sys.stderr.write(f"storyplan: data error: {e}\n")
        return EXIT_DATA
    except OSError as e:
        sys.stderr.write(f"storyplan: {e}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
