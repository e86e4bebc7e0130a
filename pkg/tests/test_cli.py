import json

import pytest

from storyplan import cli
from storyplan.events import parse_event_line
from storyplan.graph import load_graph

from .fixtures import write_toy_inputs
from .oracles import pair_count


def run(*argv):
    return cli.main(list(argv))


def read(path):
    return open(path, encoding="utf-8").read()


@pytest.fixture
def toy(tmp_path):
    corpus, parses = write_toy_inputs(tmp_path)
    return {"dir": tmp_path, "corpus": corpus, "parses": parses}


def extract(toy, out="events.txt", *extra):
    path = str(toy["dir"] / out)
    code = run("extract", "--corpus", toy["corpus"], "--parses", toy["parses"], "--out", path, *extra)
    assert code == 0
    return path


def build(toy, events, out="graph.txt"):
    path = str(toy["dir"] / out)
    assert run("build-graph", "--events", events, "--out", path) == 0
    return path


class TestExtract:
    def test_line_per_story(self, toy):
        path = extract(toy)
        lines = read(path).splitlines()
        assert len(lines) == 3
        assert lines[0] == "s1\t<s> studied <sep> passed test <e>"

    def test_rerun_byte_identical(self, toy):
        p1 = extract(toy, "e1.txt")
        p2 = extract(toy, "e2.txt")
        assert read(p1) == read(p2)

    def test_include_context_prepends_event(self, toy):
        path = extract(toy, "ectx.txt", "--include-context")
        lines = dict(l.split("\t", 1) for l in read(path).splitlines())
        assert parse_event_line(lines["s1"])[0] == "had test"
        # verbless context becomes a gap, not a fake event
        assert parse_event_line(lines["s3"])[0] == "<gap>"

    def test_missing_parse_file_exits_2(self, toy, capsys):
        code = run(
            "extract", "--corpus", toy["corpus"], "--parses",
            str(toy["dir"] / "nope.conllu"), "--out", str(toy["dir"] / "x.txt"),
        )
        assert code == 2
        assert capsys.readouterr().err

    def test_missing_required_flag_exits_1(self, toy):
        assert run("extract", "--corpus", toy["corpus"]) == 1


class TestBuildGraphAndStats:
    def test_weight_sum_matches_pair_count(self, toy):
        events = extract(toy)
        graph_path = build(toy, events)
        g = load_graph(graph_path)
        sequences = [parse_event_line(l.split("\t", 1)[1]) for l in read(events).splitlines()]
        assert g.weight_sum == sum(pair_count(sequences).values())

    def test_empty_events_file_warns_and_writes_empty_graph(self, toy, capsys):
        empty = toy["dir"] / "empty.txt"
        empty.write_text("", encoding="utf-8")
        path = build(toy, str(empty))
        assert load_graph(path).node_count == 0
        assert "empty graph" in capsys.readouterr().err

    def test_malformed_events_file_exits_2(self, toy):
        bad = toy["dir"] / "bad.txt"
        bad.write_text("s1\tno markers here\n", encoding="utf-8")
        assert run("build-graph", "--events", str(bad), "--out", str(toy["dir"] / "g.txt")) == 2

    def test_stats_reports_counts(self, toy, capsys):
        graph_path = build(toy, extract(toy, "e.txt", "--include-context"))
        assert run("graph-stats", "--graph", graph_path) == 0
        out = capsys.readouterr().out
        assert "nodes 5" in out
        assert "weight-sum" in out


class TestPlan:
    def plan(self, toy, graph_path, out="plans.txt", *extra):
        path = str(toy["dir"] / out)
        code = run(
            "plan", "--graph", graph_path, "--corpus", toy["corpus"], "--parses", toy["parses"],
            "--out", path, "--l-min", "2", "--l-max", "2", "--seed", "7", *extra,
        )
        assert code == 0
        return path

    def test_plans_and_sidecar(self, toy):
        graph_path = build(toy, extract(toy, "e.txt", "--include-context"))
        plans = self.plan(toy, graph_path)
        lines = read(plans).splitlines()
        assert len(lines) == 3
        for line in lines:
            assert len(parse_event_line(line.split("\t", 1)[1])) == 2
        sidecar = [json.loads(l) for l in read(plans + ".prov.jsonl").splitlines()]
        assert sidecar[0]["seed"] == 7
        assert len(sidecar) == 4
        s1 = sidecar[1]
        assert s1["steps"][0]["source"] == "start-reselect"
        assert s1["steps"][0]["event"] == "had test"
        assert s1["steps"][1]["source"] == "graph"

    def test_seed_determinism(self, toy):
        graph_path = build(toy, extract(toy, "e.txt", "--include-context"))
        p1 = self.plan(toy, graph_path, "p1.txt")
        p2 = self.plan(toy, graph_path, "p2.txt")
        assert read(p1) == read(p2)
        assert read(p1 + ".prov.jsonl") == read(p2 + ".prov.jsonl")

    def test_empty_graph_exits_2(self, toy):
        empty = toy["dir"] / "empty.txt"
        empty.write_text("", encoding="utf-8")
        graph_path = build(toy, str(empty))
        code = run(
            "plan", "--graph", graph_path, "--corpus", toy["corpus"],
            "--parses", toy["parses"], "--out", str(toy["dir"] / "p.txt"),
        )
        assert code == 2

    def test_remote_down_falls_back_and_marks_sidecar(self, toy):
        graph_path = build(toy, extract(toy, "e.txt"))
        plans = self.plan(
            toy, graph_path, "pr.txt",
            "--advisor", "remote", "--endpoint", "http://127.0.0.1:1", "--timeout", "0.2",
        )
        sidecar = read(plans + ".prov.jsonl")
        assert "lexical+fallback" in sidecar

    def test_remote_down_without_fallback_exits_3(self, toy):
        graph_path = build(toy, extract(toy, "e.txt"))
        code = run(
            "plan", "--graph", graph_path, "--corpus", toy["corpus"], "--parses", toy["parses"],
            "--out", str(toy["dir"] / "p.txt"), "--advisor", "remote",
            "--endpoint", "http://127.0.0.1:1", "--timeout", "0.2", "--no-advisor-fallback",
        )
        assert code == 3

    def test_no_provenance_flag(self, toy):
        graph_path = build(toy, extract(toy, "e.txt", "--include-context"))
        plans = self.plan(toy, graph_path, "pq.txt", "--no-provenance")
        assert not (toy["dir"] / "pq.txt.prov.jsonl").exists()
        assert read(plans)

    def test_config_file_and_flag_precedence(self, toy):
        graph_path = build(toy, extract(toy, "e.txt", "--include-context"))
        config = toy["dir"] / "run.cfg"
        config.write_text(
            f"graph = {graph_path}\ncorpus = {toy['corpus']}\nparses = {toy['parses']}\n"
            "l_min = 3\nl_max = 3\nseed = 1\n",
            encoding="utf-8",
        )
        out = str(toy["dir"] / "pc.txt")
        assert run("plan", "--config", str(config), "--out", out) == 0
        first = read(out).splitlines()[0]
        assert len(parse_event_line(first.split("\t", 1)[1])) == 3
        # a flag overrides the config file
        assert run("plan", "--config", str(config), "--out", out, "--l-min", "1", "--l-max", "1") == 0
        first = read(out).splitlines()[0]
        assert len(parse_event_line(first.split("\t", 1)[1])) == 1


class TestEval:
    def test_events_self_evaluation(self, toy, capsys):
        events = extract(toy)
        out = str(toy["dir"] / "report")
        assert run("eval", "--mode", "events", "--hyp", events, "--ref", events, "--out", out) == 0
        report = json.loads(read(out + ".json"))
        for name in ("R-1", "R-2", "R-L", "B-1"):
            assert report["metrics"][name] == pytest.approx(1.0)
        assert "R-L" in read(out + ".txt")

    def test_events_id_mismatch_exits_2(self, toy, capsys):
        events = extract(toy)
        other = toy["dir"] / "other.txt"
        other.write_text("zz\t<s> a <e>\n", encoding="utf-8")
        code = run(
            "eval", "--mode", "events", "--hyp", events, "--ref", str(other),
            "--out", str(toy["dir"] / "r"),
        )
        assert code == 2
        assert "zz" in capsys.readouterr().err

    def test_stories_mode(self, toy):
        out = str(toy["dir"] / "stories-report")
        assert run("eval", "--mode", "stories", "--hyp", toy["corpus"], "--out", out) == 0
        report = json.loads(read(out + ".json"))
        assert "IR-A" in report["metrics"]
        assert report["labels"]["ir_variant"]
        assert report["repetition_curve"]

    def test_gap_tokens_excluded_from_eval(self, toy):
        events = extract(toy, "e.txt", "--include-context")
        out = str(toy["dir"] / "r2")
        assert run("eval", "--mode", "events", "--hyp", events, "--ref", events, "--out", out) == 0
        report = json.loads(read(out + ".json"))
        assert report["metrics"]["R-1"] == pytest.approx(1.0)


class TestUsage:
    def test_unknown_subcommand_exits_1(self):
        with pytest.raises(SystemExit) as exc:
            run("frobnicate")
        assert exc.value.code == 1

    def test_unknown_flag_exits_1(self):
        with pytest.raises(SystemExit) as exc:
            run("extract", "--bogus")
        assert exc.value.code == 1

    def test_remote_requires_endpoint(self, toy):
        graph_path = build(toy, extract(toy))
        code = run(
            "plan", "--graph", graph_path, "--corpus", toy["corpus"], "--parses", toy["parses"],
            "--out", str(toy["dir"] / "p.txt"), "--advisor", "remote",
        )
        assert code == 1
