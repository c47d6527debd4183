"""Command-line entry point: generate, moments, run, spectrum, degrees.

Exit codes: 0 success / converged, 1 usage or IO error, 2 iteration cap hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .controller import (DisconnectedGraphError, RunConfig, SpectralTarget, run_design)
from .generators import FAMILIES, GenSpec
from .graph import Graph, GraphError, format_edge_list, read_edge_list, write_edge_list
from .local_moments import local_moments
from .spectra import (csv_row, empirical_cdf, fmt, graph_moments, moments_from_spectrum,
                      spectrum)

log = logging.getLogger("specnet")

EXIT_OK, EXIT_ERROR, EXIT_CAP = 0, 1, 2

_GEN = {
    "type": "object",
    "required": ["family", "n"],
    "properties": {
        "family": {"enum": list(FAMILIES)},
        "n": {"type": "integer", "minimum": 1},
        "seed": {"type": ["integer", "null"]},
        "k": {"type": "integer", "minimum": 1},
        "p": {"type": "number", "minimum": 0, "maximum": 1},
        "m": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}

RUN_SCHEMA = {
    "type": "object",
    "required": ["initial", "target"],
    "properties": {
        "initial": {"oneOf": [
            {"type": "object", "required": ["generator"], "additionalProperties": False,
             "properties": {"generator": _GEN}},
            {"type": "object", "required": ["graph_file"], "additionalProperties": False,
             "properties": {"graph_file": {"type": "string"}}},
        ]},
        "target": {"oneOf": [
            {"type": "object", "required": ["generator"], "additionalProperties": False,
             "properties": {"generator": _GEN}},
            {"type": "object", "required": ["graph_file"], "additionalProperties": False,
             "properties": {"graph_file": {"type": "string"}}},
            {"type": "object", "required": ["moments"], "additionalProperties": False,
             "properties": {"moments": {"type": "array", "items": {"type": "number"},
                                        "minItems": 1}}},
            {"type": "object", "required": ["eigenvalues_file"], "additionalProperties": False,
             "properties": {"eigenvalues_file": {"type": "string"}}},
        ]},
        "r": {"type": "integer", "minimum": 1},
        "K": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "max_iters": {"type": ["integer", "null"], "minimum": 0},
        "safety_rule": {"enum": ["paper", "subgraph-reachability"]},
        "consensus": {"enum": ["exact", "protocol"]},
        "output_dir": {"type": "string"},
        "transcript": {"type": "boolean"},
    },
    "additionalProperties": False,
}


class UsageError(Exception):
    pass


def _env_seed() -> int | None:
    raw = os.environ.get("SPECNET_SEED")
    if raw in (None, ""):
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"SPECNET_SEED must be an integer, got {raw!r}") from None


def read_eigenvalues(path) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                vals.extend(float(x) for x in line.replace(",", " ").split())
    return np.array(vals)


def _graph_from(spec: dict[str, Any], base: Path, seed: int) -> Graph:
    if "graph_file" in spec:
        return read_edge_list(base / spec["graph_file"])
    gen = dict(spec["generator"])
    gen.setdefault("seed", seed)
    if gen["seed"] is None:
        gen["seed"] = seed
    return GenSpec.from_dict(gen).build()


def _target_from(spec: dict[str, Any], base: Path, seed: int, K: int) -> SpectralTarget:
    if "moments" in spec:
        return SpectralTarget.from_moments(spec["moments"])
    if "eigenvalues_file" in spec:
        return SpectralTarget.from_eigenvalues(read_eigenvalues(base / spec["eigenvalues_file"]), K)
    return SpectralTarget.from_moments(graph_moments(_graph_from(spec, base, seed), K))


@dataclass
class RunPlan:
    raw: dict[str, Any]
    base: Path
    seed: int

    def with_seed(self, seed: int) -> "RunPlan":
        return RunPlan(self.raw, self.base, seed)

    def build(self) -> tuple[Graph, RunConfig, Path, bool]:
        raw = self.raw
        r = int(raw.get("r", 2))
        K = int(raw.get("K", 2 * r + 1))
        g0 = _graph_from(raw["initial"], self.base, self.seed)
        target = _target_from(raw["target"], self.base, self.seed, K)
        cfg = RunConfig(target=target, r=r, order=raw.get("K"), max_iters=raw.get("max_iters"), seed=self.seed,
                        safety_rule=raw.get("safety_rule", "subgraph-reachability"),
                        consensus=raw.get("consensus", "exact"))
        out = self.base / raw.get("output_dir", "out")
        return g0, cfg, out, bool(raw.get("transcript", False))


def load_plan(raw: dict[str, Any], base: Path, seed: int | None) -> RunPlan:
    try:
        jsonschema.validate(raw, RUN_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise UsageError(f"config invalid at {path}: {exc.message}") from None
    if seed is None:
        seed = raw.get("seed")
    if seed is None:
        seed = _env_seed()
    return RunPlan(raw, base, 0 if seed is None else int(seed))


def execute(plan: RunPlan, out: Path | None = None) -> dict[str, Any]:
    g0, cfg, default_out, want_transcript = plan.build()
    out = default_out if out is None else out
    out.mkdir(parents=True, exist_ok=True)
    transcript: list[dict[str, Any]] | None = [] if want_transcript else None
    res = run_design(g0, cfg, transcript=transcript)
    (out / "trace.csv").write_text(res.trace_csv(cfg.K))
    write_edge_list(res.graph, out / "final.txt")
    if transcript is not None:
        with open(out / "transcript.jsonl", "w") as fh:
            for rec in transcript:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    summary = {
        "seed": plan.seed,
        "n": g0.n,
        "r": cfg.r,
        "K": cfg.K,
        "initial_d_K": res.initial_sd,
        "final_d_K": res.final_sd,
        "iterations": len(res.trace),
        "converged": res.converged,
        "final_moments": [float(x) for x in res.world.agents[0].moments],
        "target_moments": [float(x) for x in cfg.target.moments],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


def _parse_seeds(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --seeds {text!r}; use a..b or a,b,c") from None


def _gen_from_args(family: str, n: int, params: list[str], seed: int | None) -> dict[str, Any]:
    gen: dict[str, Any] = {"family": family, "n": n}
    for item in params or []:
        if "=" not in item:
            raise UsageError(f"bad parameter {item!r}; use key=value")
        key, val = item.split("=", 1)
        gen[key] = float(val) if key == "p" else int(val)
    if seed is not None:
        gen["seed"] = seed
    return gen


def _config_from_args(args) -> tuple[dict[str, Any], Path]:
    if args.config:
        path = Path(args.config)
        try:
            raw = json.loads(path.read_text())
        except OSError as exc:
            raise UsageError(f"{path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from None
        base = path.resolve().parent
    else:
        raw, base = {}, Path.cwd()
    if args.g0:
        raw["initial"] = {"graph_file": str(Path(args.g0).resolve())}
    elif args.g0_family:
        raw["initial"] = {"generator": _gen_from_args(args.g0_family, args.g0_n, args.g0_param, None)}
    if args.target_moments:
        raw["target"] = {"moments": [float(x) for x in args.target_moments.split(",")]}
    elif args.target_eigenvalues:
        raw["target"] = {"eigenvalues_file": str(Path(args.target_eigenvalues).resolve())}
    elif args.target_graph:
        raw["target"] = {"graph_file": str(Path(args.target_graph).resolve())}
    elif args.target_family:
        raw["target"] = {"generator": _gen_from_args(args.target_family, args.target_n,
                                                     args.target_param, None)}
    for key in ("r", "K", "max_iters", "safety_rule", "consensus"):
        val = getattr(args, key)
        if val is not None:
            raw[key] = val
    if args.out:
        raw["output_dir"] = str(Path(args.out).resolve())
    if args.transcript:
        raw["transcript"] = True
    return raw, base


# -- subcommands -------------------------------------------------------------------

def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    spec = GenSpec.from_dict(_gen_from_args(args.family, args.n, args.param, seed))
    text = format_edge_list(spec.build())
    if args.output:
        try:
            Path(args.output).write_text(text)
        except OSError as exc:
            raise UsageError(f"{args.output}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def compute_moments(g: Graph, K: int, mode: str) -> np.ndarray:
    if K < 1:
        raise UsageError("K must be >= 1")
    if mode == "eig":
        return moments_from_spectrum(spectrum(g), K)
    if mode == "trace":
        return graph_moments(g, K)
    if mode.startswith("local:"):
        try:
            r = int(mode.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad mode {mode!r}; use local:<r>") from None
        if r < 1:
            raise UsageError("local radius must be >= 1")
        if K > 2 * r + 1:
            raise UsageError(f"K exceeds 2r+1 ({K} > {2 * r + 1}): r-ball views "
                             "only determine moments up to order 2r+1")
        return local_moments(g, r, K)
    raise UsageError(f"unknown mode {mode!r}; use eig, trace or local:<r>")


def cmd_moments(args) -> int:
    g = read_edge_list(args.graph)
    print(csv_row(compute_moments(g, args.K, args.mode)))
    return EXIT_OK


def spectrum_csv(g: Graph) -> str:
    rows = ["lambda,cdf"] + [f"{fmt(lam)},{fmt(c)}" for lam, c in empirical_cdf(spectrum(g))]
    return "\n".join(rows) + "\n"


def degrees_csv(g: Graph) -> str:
    return "".join(f"{d}\n" for d in sorted(g.degrees(), reverse=True))


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            raise UsageError(f"{output}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def cmd_spectrum(args) -> int:
    _emit(spectrum_csv(read_edge_list(args.graph)), args.output)
    return EXIT_OK


def cmd_degrees(args) -> int:
    _emit(degrees_csv(read_edge_list(args.graph)), args.output)
    return EXIT_OK


def cmd_run(args) -> int:
    raw, base = _config_from_args(args)
    if "initial" not in raw or "target" not in raw:
        raise UsageError("run needs an initial graph and a target (use --config or flags)")
    plan = load_plan(raw, base, args.seed)
    if args.seeds:
        seeds = _parse_seeds(args.seeds)
        _, _, out_root, _ = plan.build()

        def one(s: int) -> dict[str, Any]:
            return execute(plan.with_seed(s), out_root / f"seed_{s}")

        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            summaries = list(pool.map(one, seeds))
        for s in summaries:
            print(json.dumps({k: s[k] for k in ("seed", "final_d_K", "iterations", "converged")}))
        return EXIT_OK if all(s["converged"] for s in summaries) else EXIT_CAP
    summary = execute(plan)
    print(json.dumps(summary, indent=2))
    return EXIT_OK if summary["converged"] else EXIT_CAP


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="specnet", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated graph as an edge list")
    g.add_argument("family", choices=FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="family parameter, e.g. k=2, p=0.075, m=4")
    g.add_argument("--seed", type=int)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("moments", help="print Laplacian moments as one CSV row")
    m.add_argument("graph")
    m.add_argument("--K", type=int, default=5)
    m.add_argument("--mode", default="trace", help="eig | trace | local:<r>")
    m.set_defaults(func=cmd_moments)

    r = sub.add_parser("run", help="run the decentralized design loop")
    r.add_argument("--config")
    r.add_argument("--g0", help="initial graph edge list")
    r.add_argument("--g0-family", choices=FAMILIES)
    r.add_argument("--g0-n", type=int)
    r.add_argument("--g0-param", action="append", metavar="KEY=VALUE")
    r.add_argument("--target-moments", help="comma-separated m_1..m_K")
    r.add_argument("--target-eigenvalues", help="file of eigenvalues")
    r.add_argument("--target-graph", help="edge list whose moments are the target")
    r.add_argument("--target-family", choices=FAMILIES)
    r.add_argument("--target-n", type=int)
    r.add_argument("--target-param", action="append", metavar="KEY=VALUE")
    r.add_argument("--r", type=int)
    r.add_argument("--K", type=int, help="moments to match (default 2r+1, at most 2r+1)")
    r.add_argument("--seed", type=int)
    r.add_argument("--seeds", help="sweep a..b (inclusive) or a,b,c")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--max-iters", dest="max_iters", type=int)
    r.add_argument("--safety-rule", dest="safety_rule",
                   choices=["paper", "subgraph-reachability"])
    r.add_argument("--consensus", choices=["exact", "protocol"])
    r.add_argument("--transcript", action="store_true",
                   help="also dump protocol messages as JSON lines")
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("spectrum", help="eigenvalues and empirical CDF as CSV")
    s.add_argument("graph")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("degrees", help="degree sequence, descending")
    d.add_argument("graph")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_degrees)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, GraphError, DisconnectedGraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        name = getattr(exc, "filename", None)
        print(f"error: {name + ': ' if name else ''}{exc.strerror or exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
