"""Command line surface: encode/decode deltas, corpus generation, rate
bounds, benchmarks, analysis experiments, and the TCP sync pair."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import bounds, codec, lab, sim, sync
from .core import Alphabet, Sequence
from .errors import AlphabetMismatch, DigestMismatch, IndelSyncError

EXIT_IO = 2
EXIT_ALPHABET = 3
EXIT_DIGEST = 4
EXIT_OTHER = 5


def _read_sequence(path: str, a: int) -> Sequence:
    data = Path(path).read_bytes()
    if a == 256:
        return Sequence.from_bytes(data)
    if a > 256:
        return Sequence(Alphabet(a), np.frombuffer(data, dtype="<u2"))
    arr = np.frombuffer(data, dtype=np.uint8)
    return Sequence(Alphabet(a), arr)


def _cmd_encode(args) -> int:
    x = _read_sequence(args.old, args.alphabet)
    y = _read_sequence(args.new, args.alphabet)
    transmission = codec.encode(x, y, oracle_dp=args.oracle_dp)
    Path(args.out).write_bytes(transmission.to_bytes())
    report = codec.measure_rate(transmission)
    print(
        json.dumps(
            {
                "n": transmission.n,
                "m": transmission.m,
                "k_ins": transmission.k_ins,
                "k_del": transmission.k_del,
                "total_bits": report.total_bits,
                "bits_per_source_symbol": report.bits_per_source_symbol,
                "terms": report.terms,
            }
        )
    )
    return 0


def _cmd_decode(args) -> int:
    x = _read_sequence(args.old, args.alphabet)
    transmission = codec.Transmission.from_bytes(Path(args.delta).read_bytes())
    y = codec.decode(x, transmission)
    Path(args.out).write_bytes(y.to_bytes())
    return 0


def _cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i in range(args.count):
        seed = args.seed + i
        x = sim.gen_pre_ess(args.n, args.alphabet, seed)
        if args.model == "rpes":
            params = sim.RpesParams(args.n, args.alphabet, args.eps, args.delta, seed)
            pattern, y = sim.gen_ltrrid(x, params)
            extra = {"k_ins": pattern.k_ins, "k_del": pattern.k_del}
        else:
            params = sim.ApesParams.from_rates(
                args.n, args.alphabet, args.eps, args.delta, seed=seed
            )
            edits, y = sim.gen_apes(x, params)
            extra = {"edits": len(edits)}
        meta = {
            "model": args.model,
            "n": args.n,
            "a": args.alphabet,
            "eps": args.eps,
            "del": args.delta,
            "seed": seed,
            **extra,
        }
        sim.write_pair(out / f"{args.model}-{seed:08d}", x, y, meta)
    print(f"wrote {args.count} pairs under {out}")
    return 0


def _cmd_bounds(args) -> int:
    out = {
        "rpes_lower": vars(
            bounds.rpes_lower_bound(args.eps, args.delta, args.alphabet, args.tau)
        ),
        "achievable_rpes": vars(
            bounds.achievable_upper(args.eps, args.delta, args.alphabet, "rpes", args.tau)
        ),
        "achievable_apes": vars(
            bounds.achievable_upper(args.eps, args.delta, args.alphabet, "apes")
        ),
    }
    if args.alphabet >= 3 and 2 * args.delta < 1.0:
        out["apes_lower"] = vars(bounds.apes_lower_bound(args.eps, args.delta, args.alphabet))
    print(json.dumps(out, indent=1))
    return 0


def _cmd_bench(args) -> int:
    rows = []
    for pair_path in sorted(Path(args.corpus).glob("*.pair")):
        x, y, meta = sim.read_pair(pair_path)
        transmission = codec.encode(x, y)
        assert codec.decode(x, transmission) == y
        report = codec.measure_rate(transmission)
        eps = float(meta.get("eps", 0.0))
        delta = float(meta.get("del", 0.0))
        a = x.alphabet.size
        lower = bounds.rpes_lower_bound(eps, delta, a).value if a >= 2 else 0.0
        upper = bounds.achievable_upper(eps, delta, a, "apes").value
        rows.append(
            {
                "pair": pair_path.name,
                "n": len(x),
                "a": a,
                "eps": eps,
                "del": delta,
                "measured_rate": report.bits_per_source_symbol,
                "lower_bound": lower,
                "achievable_upper": upper,
            }
        )
    with open(args.csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.csv}")
    return 0


def _cmd_lab(args) -> int:
    if args.experiment == "typicalize":
        x = sim.gen_pre_ess(args.n, args.alphabet, args.seed)
        params = sim.RpesParams(args.n, args.alphabet, args.eps, args.delta, args.seed)
        pattern, _ = sim.gen_ltrrid(x, params)
        tp = lab.typicalize(x, pattern)
        print(
            json.dumps(
                {
                    "k_ins": pattern.k_ins,
                    "k_del": pattern.k_del,
                    "kept_ins": tp.k_ins,
                    "kept_del": tp.k_del,
                    "eliminated": tp.eliminated,
                }
            )
        )
        return 0
    if args.experiment == "align":
        x = sim.gen_pre_ess(args.n, args.alphabet, args.seed)
        params = sim.RpesParams(args.n, args.alphabet, args.eps, args.delta, args.seed)
        pattern, _ = sim.gen_ltrrid(x, params)
        tp = lab.typicalize(x, pattern)
        y_hat = lab.typicalized_posess(x, tp)
        tree = lab.align(x, y_hat)
        print(
            json.dumps(
                {
                    "leaves": len(tree.leaves()),
                    "splits": tree.split_count(),
                    "gamma": tree.gamma_nodes(),
                }
            )
        )
        return 0
    if args.experiment == "enumerate":
        x = sim.make_construction(args.construction, args.n, args.alphabet)
        family = lab.enumerate_post_edit_set(x, args.max_ins, args.max_del)
        print(json.dumps({"count": len(family)}))
        return 0
    if args.experiment == "natures-secret":
        est = lab.estimate_natures_secret(
            args.n, args.alphabet, args.eps, args.delta, args.trials, args.seed
        )
        bound_c, _ = bounds.c_constant(args.alphabet)
        row = {
            "n": args.n,
            "a": args.alphabet,
            "eps": args.eps,
            "del": args.delta,
            "estimate": est.bits_per_symbol,
            "stderr": est.stderr,
            "bound": (args.eps + args.delta) * bound_c,
        }
        if args.csv:
            with open(args.csv, "a", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=list(row.keys()))
                if fh.tell() == 0:
                    writer.writeheader()
                writer.writerow(row)
        print(json.dumps(row))
        return 0
    raise IndelSyncError(f"unknown experiment {args.experiment}")


def _cmd_serve(args) -> int:
    server = sync.UpdateServer((args.host, args.port), args.store)
    print(f"serving updates on {args.host}:{args.port}, store {args.store}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def _cmd_push(args) -> int:
    report = sync.sync_push((args.host, args.port), args.old, args.new)
    print(json.dumps({"total_bits": report.total_bits}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="indelsync")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="encode a delta container")
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--oracle-dp", action="store_true")
    p.add_argument("--alphabet", type=int, default=256)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", help="apply a delta container")
    p.add_argument("--old", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--alphabet", type=int, default=256)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("gen", help="generate a corpus of (old, new) pairs")
    p.add_argument("--model", choices=["rpes", "apes"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--eps", type=float, default=0.01)
    p.add_argument("--del", dest="delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--alphabet", type=int, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bounds", help="evaluate rate bounds")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--del", dest="delta", type=float, required=True)
    p.add_argument("--alphabet", type=int, default=256)
    p.add_argument("--tau", type=float, default=0.1)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("bench", help="measure rates over a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("lab", help="analysis experiments")
    p.add_argument(
        "--experiment",
        choices=["typicalize", "align", "enumerate", "natures-secret"],
        required=True,
    )
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--del", dest="delta", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-ins", type=int, default=1)
    p.add_argument("--max-del", type=int, default=1)
    p.add_argument("--construction", default="alternating")
    p.add_argument("--csv", default="")
    p.set_defaults(func=_cmd_lab)

    p = sub.add_parser("serve", help="run the one-way update server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--store", default=str(sync.default_store_dir()))
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("push", help="push one update to a server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, required=True)
    p.add_argument("--old", required=True)
    p.add_argument("--new", required=True)
    p.set_defaults(func=_cmd_push)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, FileNotFoundError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AlphabetMismatch as exc:
        print(f"alphabet mismatch: {exc}", file=sys.stderr)
        return EXIT_ALPHABET
    except DigestMismatch as exc:
        print(f"digest mismatch: {exc}", file=sys.stderr)
        return EXIT_DIGEST
    except IndelSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
