import random

import pytest

from storyplan.corpus import ParsedStory
from storyplan.errors import DataFormatError
from storyplan.events import (
    GAP,
    GAP_TOKEN,
    DependencyLabelMap,
    Event,
    extract_event,
    extract_story_events,
    is_gap,
    parse_event_line,
    serialize_events,
)

from .fixtures import (
    HAD_TEST_ROWS,
    NOT_DRIVE_ROWS,
    SHUT_DOWN_ROWS,
    VERBLESS_ROWS,
    tok,
)


def sentence(rows):
    return [tok(*r) for r in rows]


class TestExtractEvent:
    def test_particle_verb(self):
        event = extract_event(sentence(SHUT_DOWN_ROWS))
        assert event.string_form == "shut down"
        assert event.trigger == "shut"

    def test_negation(self):
        event = extract_event(sentence(NOT_DRIVE_ROWS))
        assert event.string_form == "not drive"
        assert event.trigger == "drive"

    def test_direct_object(self):
        event = extract_event(sentence(HAD_TEST_ROWS))
        assert event.string_form == "had test"
        # determiner and adjunct are not mapped, subject is excluded
        assert [a.token for a in event.arguments] == ["test"]

    def test_verbless_sentence_is_none(self):
        assert extract_event(sentence(VERBLESS_ROWS)) is None

    def test_leftmost_verb_when_root_not_verbal(self):
        rows = [
            (1, "plan", "NOUN", 0, "root"),
            (2, "running", "VERB", 1, "acl"),
            (3, "jumping", "VERB", 1, "acl"),
        ]
        event = extract_event(sentence(rows))
        assert event.trigger == "running"

    def test_lemma_mode(self):
        event = extract_event(sentence(HAD_TEST_ROWS), use_lemma=True)
        assert event.string_form == "have test"

    def test_deterministic(self):
        a = extract_event(sentence(HAD_TEST_ROWS))
        b = extract_event(sentence(HAD_TEST_ROWS))
        assert a.string_form == b.string_form
        assert a == b and hash(a) == hash(b)

    def test_multiple_roots_rejected(self):
        rows = [(1, "a", "VERB", 0, "root"), (2, "b", "VERB", 0, "root")]
        with pytest.raises(ValueError, match="roots"):
            extract_event(sentence(rows))

    def test_custom_label_map(self):
        label_map = DependencyLabelMap({"dobj": "agent"})
        event = extract_event(sentence(SHUT_DOWN_ROWS), label_map)
        # prt is no longer mapped, so only the trigger remains
        assert event.string_form == "shut"

    def test_label_map_rejects_unknown_role(self):
        with pytest.raises(DataFormatError, match="unknown role"):
            DependencyLabelMap({"dobj": "object"})

    def test_label_map_from_file(self, tmp_path):
        path = tmp_path / "labels.txt"
        path.write_text("# custom\nprt modifier\ndobj agent\n", encoding="utf-8")
        label_map = DependencyLabelMap.from_file(str(path))
        assert label_map.role_of("prt") == "modifier"
        assert label_map.role_of("neg") is None


class TestExtractStoryEvents:
    def story(self, *sentence_rows):
        return ParsedStory("s", (), tuple(tuple(tok(*r) for r in rows) for rows in sentence_rows))

    def test_all_verbal(self):
        events = extract_story_events(self.story(SHUT_DOWN_ROWS, HAD_TEST_ROWS))
        assert [e.string_form for e in events] == ["shut down", "had test"]

    def test_gap_marks_verbless_sentence(self):
        events = extract_story_events(self.story(SHUT_DOWN_ROWS, VERBLESS_ROWS, HAD_TEST_ROWS))
        assert len(events) == 3
        assert is_gap(events[1])
        assert events[0].string_form == "shut down"
        assert events[2].string_form == "had test"

    def test_empty_story(self):
        assert extract_story_events(self.story()) == []


class TestEventLineFormat:
    def test_single_event(self):
        assert serialize_events([Event("needed", 1, (("agent", "get", 2),))]) == "<s> needed get <e>"

    def test_two_events(self):
        needed = Event("needed", 1, (("agent", "get", 2),))
        studied = Event("studied", 1)
        assert serialize_events([needed, studied]) == "<s> needed get <sep> studied <e>"

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            serialize_events([])

    def test_gap_serialization(self):
        line = serialize_events([Event("a", 1), GAP, Event("b", 1)])
        assert line == "<s> a <sep> <gap> <sep> b <e>"
        assert parse_event_line(line) == ["a", GAP_TOKEN, "b"]

    def test_parse_two_events(self):
        assert parse_event_line("<s> a b <sep> c <e>") == ["a b", "c"]

    def test_parse_single_event(self):
        assert parse_event_line("<s> a b <e>") == ["a b"]

    def test_parse_missing_start(self):
        with pytest.raises(DataFormatError):
            parse_event_line("a b <e>")

    def test_parse_missing_end(self):
        with pytest.raises(DataFormatError):
            parse_event_line("<s> a b")

    def test_parse_empty_payload(self):
        with pytest.raises(DataFormatError):
            parse_event_line("<s> <e>")

    def test_roundtrip_random_sequences(self):
        rng = random.Random(13)
        words = ["ran", "home", "ate", "cake", "slept", "not", "shut", "down"]
        for _ in range(200):
            events = []
            for _ in range(rng.randint(1, 6)):
                if rng.random() < 0.2:
                    events.append(GAP)
                else:
                    n = rng.randint(1, 3)
                    toks = rng.sample(words, n)
                    events.append(
                        Event(toks[0], 1, tuple(("agent", t, i + 2) for i, t in enumerate(toks[1:])))
                    )
            line = serialize_events(events)
            expected = [GAP_TOKEN if is_gap(e) else e.string_form for e in events]
            assert parse_event_line(line) == expected


class TestEventType:
    def test_string_form_orders_by_position(self):
        event = Event("drive", 4, (("modifier", "not", 3),))
        assert event.string_form == "not drive"

    def test_equality_by_string_form(self):
        a = Event("had", 2, (("agent", "test", 4),))
        b = Event("had", 1, (("agent", "test", 3),))
        assert a == b

    def test_empty_trigger_rejected(self):
        with pytest.raises(ValueError):
            Event("", 1)

    def test_duplicate_positions_rejected(self):
        with pytest.raises(ValueError):
            Event("a", 1, (("agent", "b", 1),))
