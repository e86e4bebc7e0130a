import pytest

EVENT_CHAINS = [
    ["had test", "studied", "passed test"],
    ["had test", "studied", "celebrated"],
    ["had test", "worried", "studied"],
    ["woke late", "missed bus", "ran home"],
    ["woke late", "skipped class", "regretted it"],
    ["had test", "studied", "passed test"],
    ["woke late", "missed bus", "walked"],
    ["had test", "panicked", "failed it"],
    ["had test", "studied", "passed test"],
    ["woke late", "missed bus", "ran home"],
]


def events_line(events):
    return "<s> " + " <sep> ".join(events) + " <e>"


@pytest.fixture(scope="session")
def toy_events_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "events.txt"
    lines = [f"s{i}\t{events_line(chain)}" for i, chain in enumerate(EVENT_CHAINS)]
    path.write_text("".join(l + "\n" for l in lines), encoding="utf-8")
    return str(path)


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory, toy_events_file):
    from advisor_service.train import train

    out = str(tmp_path_factory.mktemp("model") / "artifact")
    train(
        toy_events_file,
        out,
        epochs=2,
        batch_size=2,
        lr=1e-3,
        d_model=32,
        nhead=2,
        num_layers=1,
        ffn_dim=64,
        dropout=0.0,
    )
    return out
