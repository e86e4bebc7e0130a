"""Service entry points: train a model, or serve one over HTTP.

Every serve option falls back to an ADVISOR_* environment variable
(ADVISOR_MODEL, ADVISOR_BIND, ADVISOR_PORT, ADVISOR_MAX_INPUT_LEN,
ADVISOR_BEAM_SIZE, ADVISOR_SAMPLE) before its default.
"""

import argparse
import os
import sys


def _env(name, default, convert=str):
    value = os.environ.get(name)
    return convert(value) if value is not None else default


def cmd_train(args):
    from .train import train

    history = train(
        args.corpus,
        args.out,
        epochs=args.epochs,
        batch_size=args.batch_size,
        lr=args.lr,
        adam_eps=args.adam_eps,
        seed=args.seed,
        max_source_len=args.max_source_len,
        d_model=args.d_model,
        num_layers=args.num_layers,
        log=lambda msg: print(msg, file=sys.stderr),
    )
    print(
        f"trained on {history['pairs']} pairs; best epoch {history['best_epoch'] + 1} "
        f"(mean loss {min(history['epoch_losses']):.4f}); artifact at {args.out}"
    )
    return 0


def cmd_serve(args):
    import uvicorn

    from .server import Engine, create_app

    if not args.model:
        print("advisor-service: --model (or ADVISOR_MODEL) is required", file=sys.stderr)
        return 1
    try:
        engine = Engine.load(
            args.model,
            max_input_len=args.max_input_len,
            beam_size=args.beam_size,
            sample=args.sample,
        )
    except (OSError, ValueError, KeyError) as e:
        print(f"advisor-service: cannot load model from {args.model}: {e}", file=sys.stderr)
        return 1
    uvicorn.run(create_app(engine), host=args.bind, port=args.port, log_level="warning")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="advisor-service", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a generator on an extracted-events file")
    p.set_defaults(func=cmd_train)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--adam-eps", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-source-len", type=int, default=1024)
    p.add_argument("--d-model", type=int, default=128)
    p.add_argument("--num-layers", type=int, default=2)

    p = sub.add_parser("serve", help="serve a trained model over HTTP")
    p.set_defaults(func=cmd_serve)
    p.add_argument("--model", default=_env("ADVISOR_MODEL", None))
    p.add_argument("--bind", default=_env("ADVISOR_BIND", "127.0.0.1"))
    p.add_argument("--port", type=int, default=_env("ADVISOR_PORT", 8321, int))
    p.add_argument("--max-input-len", type=int, default=_env("ADVISOR_MAX_INPUT_LEN", 1024, int))
    p.add_argument("--beam-size", type=int, default=_env("ADVISOR_BEAM_SIZE", 1, int))
    p.add_argument("--sample", action="store_true",
                   default=_env("ADVISOR_SAMPLE", "0", lambda v: v not in ("0", "", "false")))

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as e:
        print(f"advisor-service: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
