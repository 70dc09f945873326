"""``evanesim`` command line.

    evanesim <scenario> [--param value ...] [--sweep param:start:stop:steps]
             [--outputs list] [--format csv|json] [--out path] [--workers N]
             [--config file.yaml]

Exit codes: 0 success, 2 config error, 3 numeric-domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..errors import ConfigError, DomainError
from .config import SCENARIOS, build_config, parse_config, dump_config, RunConfig
from .emit import emit
from .run import run

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4


def _parser():
    p = argparse.ArgumentParser(prog="evanesim", description="Evanescent-mode tunneling simulations.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--config", help="YAML config file; command-line values override it")
    p.add_argument("--sweep", help="param:start:stop:steps, e.g. gap:0mm:98.4mm:64")
    p.add_argument("--outputs", help="comma list of scatter,timing,hartman,gh,pulse,virtuality")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output directory")
    p.add_argument("--workers", type=int, help="worker processes (overrides EVANESIM_WORKERS)")
    p.add_argument("--dump-config", action="store_true", help="print the resolved config and exit")
    return p


def _scenario_params(extra: list[str]) -> dict:
    params = {}
    i = 0
    while i < len(extra):
        token = extra[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument {token!r}", code="syntax", key=token)
        name = token[2:]
        if "=" in name:
            name, value = name.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for --{name}", code="syntax", key=name)
            value = extra[i + 1]
            i += 2
        params[name.replace("-", "_")] = value
    return params


def make_config(argv) -> tuple[RunConfig, argparse.Namespace]:
    args, extra = _parser().parse_known_args(argv)
    base = {}
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
        cfg = parse_config(text, scenario=args.scenario)
        base = {
            "params": {},
            "sweep": None,
            "pulse": None,
            "outputs": cfg.outputs,
            "fmt": cfg.format,
            "out": cfg.output_path,
        }
        import yaml

        doc = yaml.safe_load(text) or {}
        base["params"] = dict(doc.get("params") or {})
        base["sweep"] = doc.get("sweep")
        base["pulse"] = doc.get("pulse")
    params = {**base.get("params", {}), **_scenario_params(extra)}
    config = build_config(
        args.scenario,
        params,
        sweep=args.sweep if args.sweep is not None else base.get("sweep"),
        pulse=base.get("pulse"),
        outputs=args.outputs if args.outputs is not None else base.get("outputs"),
        fmt=args.format if args.format is not None else base.get("fmt"),
        out=args.out if args.out is not None else base.get("out"),
    )
    return config, args


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        config, args = make_config(argv)
        if args.dump_config:
            sys.stdout.write(dump_config(config))
            return EXIT_OK
        bundle = run(config, workers=args.workers)
        for path in emit(bundle):
            print(path)
        return EXIT_OK
    except ConfigError as exc:
        print(json.dumps(exc.as_dict()), file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(json.dumps({"error": "domain", "message": str(exc)}), file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc), "path": getattr(exc, "filename", None)}), file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # e.g. a negative --workers
        print(json.dumps({"error": "bad_value", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
