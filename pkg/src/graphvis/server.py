"""Server entry point.

Precedence for every option: built-in default < GRAPHVIS_* environment
variable < command-line flag.
"""

from __future__ import annotations

import argparse
import os

from .service import ServiceState, create_app

ENV_PREFIX = "GRAPHVIS_"
DEFAULT_PORT = 8472
DEFAULT_EXACT_THRESHOLD = 10_000


def _env(name: str, cast=str):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return None
    try:
        return cast(raw)
    except ValueError:
        raise SystemExit(f"{ENV_PREFIX}{name}={raw!r} is not a valid {cast.__name__}")


def build_config(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="graphvis-server",
        description="Interactive graph analytics service")
    parser.add_argument("--port", type=int,
                        default=_env("PORT", int) or DEFAULT_PORT)
    parser.add_argument("--host",
                        default=_env("HOST") or "127.0.0.1")
    parser.add_argument("--workspace", metavar="PATH",
                        default=_env("WORKSPACE"),
                        help="workspace file loaded at startup and saved on exit")
    parser.add_argument("--exact-threshold", type=int, metavar="N",
                        default=_env("EXACT_THRESHOLD", int)
                        or DEFAULT_EXACT_THRESHOLD,
                        help="node count above which sampleable measures "
                             "switch to sampling")
    args = parser.parse_args(argv)
    if args.port < 1 or args.port > 65535:
        parser.error("--port must be in 1..65535")
    if args.exact_threshold < 1:
        parser.error("--exact-threshold must be positive")
    return args


def main(argv=None) -> None:
    args = build_config(argv)
    state = ServiceState(exact_threshold=args.exact_threshold,
                         workspace_path=args.workspace)
    app = create_app(state)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


if __name__ == "__main__":
    main()
