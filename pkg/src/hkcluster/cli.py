"""Command line client for the diffusion service.

Every subcommand builds a JSON request, sends it to the HTTP API (in
process by default, or to a remote server with --server), and renders the
response as CSV or an edge list. Output is byte-identical across reruns
with the same arguments; pass --timing to append a wall-clock column at
the cost of that guarantee.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

ENV_SEED = "HKPR_RNG_SEED"


def _post(args: argparse.Namespace, route: str, payload: dict) -> dict:
    if getattr(args, "server", None):
        import httpx

        with httpx.Client(base_url=args.server, timeout=None) as client:
            resp = client.post(route, json=payload)
    else:
        import warnings

        with warnings.catch_warnings():
            # starlette 1.3 warns about its own test client's httpx backend
            warnings.simplefilter("ignore")
            from starlette.testclient import TestClient

        from .service import create_app

        with TestClient(create_app()) as client:
            resp = client.post(route, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(2)
    return resp.json()


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _emit(args: argparse.Namespace, command: str, payload: dict, comment_rows: list[str],
          columns: list[str], rows: list[dict]) -> None:
    # workers is an execution knob with no effect on results, so it stays
    # out of the reproducibility echo
    echo = {k: v for k, v in payload.items() if k != "workers"}
    lines = [f"# hkcluster {command}"]
    lines.append("# config " + json.dumps(echo, sort_keys=True, separators=(",", ":")))
    lines.extend(f"# {extra}" for extra in comment_rows)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(row.get(col)) for col in columns))
    text = "\n".join(lines) + "\n"
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report_failures(failures: list[dict]) -> None:
    if not failures:
        return
    indices = ",".join(str(f["trial"]) for f in failures)
    print(f"error: trials failed: {indices}", file=sys.stderr)
    for f in failures:
        print(f"  trial {f['trial']}: {f['error']}", file=sys.stderr)
    raise SystemExit(1)


def _graph_payload(args: argparse.Namespace) -> dict:
    if (args.graph is None) == (args.model is None):
        raise SystemExit("error: give exactly one of --graph or --model")
    if args.graph is not None:
        return {"path": args.graph}
    return {"model": args.model, "n": args.n, "d": args.d, "p": args.p}


def _seed_payload(args: argparse.Namespace) -> dict:
    if (args.seed_vertex is None) == (args.seed_select is None):
        raise SystemExit("error: give exactly one of --seed-vertex or --seed-select")
    if args.seed_vertex is not None:
        return {"vertex": args.seed_vertex}
    return {"select": args.seed_select}


def _master_seed(args: argparse.Namespace) -> int:
    if args.rng_seed is not None:
        return args.rng_seed
    return int(os.environ.get(ENV_SEED, "0"))


def cmd_hkpr(args: argparse.Namespace) -> None:
    payload = {
        "graph": _graph_payload(args),
        "seed": _seed_payload(args),
        "t": args.t,
        "mode": "exact" if args.exact else "approx",
        "eps": args.eps,
        "r": args.r,
        "K": args.K,
        "tol": args.tol,
        "rng_seed": _master_seed(args),
    }
    data = _post(args, "/v1/hkpr", payload)
    comments = [
        f"n={data['n']} m={data['m']} seed_vertex={data['seed_vertex']} "
        f"mode={data['mode']} t={_fmt(data['t'])} r={_fmt(data['r'])} K={_fmt(data['K'])}"
    ]
    rows = [{"vertex": e["vertex"], "value": e["value"]} for e in data["entries"]]
    _emit(args, "hkpr", payload, comments, ["vertex", "value"], rows)


def cmd_rank_experiment(args: argparse.Namespace) -> None:
    payload = {
        "graph": _graph_payload(args),
        "seed": _seed_payload(args),
        "t": args.t,
        "eps": args.eps,
        "k_values": args.k_values,
        "r": args.r,
        "trials": args.trials,
        "topk": args.topk,
        "rng_seed": _master_seed(args),
        "workers": args.workers,
        "tol": args.tol,
    }
    data = _post(args, "/v1/rank-experiment", payload)
    dist_col = f"dist_{data['topk']}"
    columns = ["trial", "seed_vertex", "K", "avg_l1", "eps_error", "dist", dist_col, "work"]
    if args.timing:
        columns.append("wall_ms")
    rows = [{**row, dist_col: row["dist_topk"]} for row in data["rows"]]
    _emit(args, "rank-experiment", payload, [], columns, rows)
    _report_failures(data["failures"])


def cmd_cluster(args: argparse.Namespace) -> None:
    payload = {
        "graph": _graph_payload(args),
        "seed": _seed_payload(args),
        "phi": args.phi,
        "target_size": args.target_size,
        "target_volume": args.target_volume,
        "eps": args.eps,
        "r": args.r,
        "K": args.K,
        "trials": args.trials,
        "sweep_mode": args.sweep_mode,
        "rng_seed": _master_seed(args),
        "workers": args.workers,
    }
    data = _post(args, "/v1/cluster", payload)
    columns = ["trial", "seed_vertex", "verdict", "ratio", "volume", "size", "t", "work"]
    if args.timing:
        columns.append("wall_ms")
    comments = [f"ratio_bound={_fmt(data['ratio_bound'])}"]
    _emit(args, "cluster", payload, comments, columns, data["rows"])
    _report_failures(data["failures"])


def cmd_compare(args: argparse.Namespace) -> None:
    payload = {
        "graph": _graph_payload(args),
        "seed": _seed_payload(args),
        "phi": args.phi,
        "target_size": args.target_size,
        "target_volume": args.target_volume,
        "eps": args.eps,
        "r": args.r,
        "K": args.K,
        "trials": args.trials,
        "rng_seed": _master_seed(args),
        "workers": args.workers,
        "tol": args.tol,
    }
    data = _post(args, "/v1/compare", payload)
    columns = ["trial", "seed_vertex", "algorithm", "setting", "ratio", "volume", "size"]
    if args.timing:
        columns.append("wall_ms")
    _emit(args, "compare", payload, [], columns, data["rows"])
    _report_failures(data["failures"])


def cmd_gen(args: argparse.Namespace) -> None:
    payload = {
        "model": args.model,
        "n": args.n,
        "d": args.d,
        "p": args.p,
        "rng_seed": _master_seed(args),
    }
    data = _post(args, "/v1/gen", payload)
    header = (
        "# hkcluster gen\n"
        "# config " + json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
        f"# n={data['n']} m={data['m']}\n"
    )
    text = header + data["edges"]
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")


def cmd_serve(args: argparse.Namespace) -> None:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hkcluster",
        description="Heat kernel pagerank diffusion and local clustering experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    graph_args = argparse.ArgumentParser(add_help=False)
    graph_args.add_argument("--graph", help="edge-list file, one 'u v' pair per line")
    graph_args.add_argument("--model", choices=["ws", "ba", "plc"], help="generator model")
    graph_args.add_argument("--n", type=int, help="generator vertex count")
    graph_args.add_argument("--d", type=int, help="generator degree parameter")
    graph_args.add_argument("--p", type=float, default=0.0, help="generator probability parameter")

    seed_args = argparse.ArgumentParser(add_help=False)
    seed_args.add_argument("--seed-vertex", help="explicit seed vertex (label or id)")
    seed_args.add_argument(
        "--seed-select", choices=["degree"], help="pick the seed at random, degree-proportional"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--rng-seed", type=int, default=None,
        help=f"master seed (default: ${ENV_SEED} or 0)",
    )
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--server", help="base URL of a running service (default: in-process)")
    common.add_argument("--workers", type=int, default=1, help="threads for trials")
    common.add_argument(
        "--timing", action="store_true",
        help="append a wall_ms column (breaks byte-identical reruns)",
    )

    p = sub.add_parser("hkpr", parents=[graph_args, seed_args, common],
                       help="one diffusion vector, exact or sampled")
    p.add_argument("--t", type=float, required=True, help="diffusion time")
    p.add_argument("--eps", type=float, default=0.1, help="approximation accuracy")
    p.add_argument("--r", type=int, help="walk count (default from eps and n)")
    p.add_argument("--K", type=int, help="walk-length cap (default from eps)")
    p.add_argument("--tol", type=float, default=1e-9, help="exact-mode truncation tolerance")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact series evaluation")
    mode.add_argument("--approx", action="store_true", help="Monte-Carlo sampling (default)")
    p.set_defaults(func=cmd_hkpr)

    p = sub.add_parser("rank-experiment", parents=[graph_args, seed_args, common],
                       help="exact-vs-sampled error measures across walk caps")
    p.add_argument("--t", type=float, required=True, help="diffusion time")
    p.add_argument("--eps", type=float, default=0.1, help="approximation accuracy")
    p.add_argument("--k-values", type=_int_list,
                   help="comma-separated walk caps (default: log-spaced 1..ceil(t))")
    p.add_argument("--r", type=int, help="walk count (default from eps and n)")
    p.add_argument("--trials", type=int, default=1, help="independent trials")
    p.add_argument("--topk", type=int, default=10, help="prefix depth for the dist_k column")
    p.add_argument("--tol", type=float, default=1e-9, help="exact-vector truncation tolerance")
    p.set_defaults(func=cmd_rank_experiment)

    p = sub.add_parser("cluster", parents=[graph_args, seed_args, common],
                       help="local cluster from a seed vertex")
    p.add_argument("--phi", type=float, required=True, help="target conductance")
    p.add_argument("--target-size", type=int, required=True, help="believed cluster size s")
    p.add_argument("--target-volume", type=int, required=True, help="believed cluster volume")
    p.add_argument("--eps", type=float, default=0.1, help="approximation accuracy")
    p.add_argument("--r", type=int, help="walk count override")
    p.add_argument("--K", type=int, help="walk-length cap override")
    p.add_argument("--trials", type=int, default=1, help="independent trials")
    p.add_argument("--sweep-mode", choices=["window", "half"], default="window",
                   help="stop at the volume window, or scan to half volume and take the best")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("compare", parents=[graph_args, seed_args, common],
                       help="sampled vs exact heat kernel vs pagerank clusters")
    p.add_argument("--phi", type=float, required=True, help="target conductance")
    p.add_argument("--target-size", type=int, required=True, help="believed cluster size s")
    p.add_argument("--target-volume", type=int, required=True, help="believed cluster volume")
    p.add_argument("--eps", type=float, default=0.1, help="approximation accuracy")
    p.add_argument("--r", type=int, help="walk count override")
    p.add_argument("--K", type=int, help="walk-length cap override")
    p.add_argument("--trials", type=int, default=1, help="independent trials")
    p.add_argument("--tol", type=float, default=1e-9, help="exact-vector truncation tolerance")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", parents=[common], help="write a generated graph as an edge list")
    p.add_argument("--model", choices=["ws", "ba", "plc"], required=True)
    p.add_argument("--n", type=int, required=True, help="vertex count")
    p.add_argument("--d", type=int, required=True, help="degree parameter")
    p.add_argument("--p", type=float, default=0.0, help="rewire or triangle probability")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
