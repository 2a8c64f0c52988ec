"""Command-line interface.

One subcommand per library operation, with stable file formats so output
can be scripted against. Exit codes: 0 success, 2 validation/usage error,
1 internal error. Data goes to stdout (or --out files), diagnostics to
stderr. Seeded commands read a default seed from REE_SEED, overridden by
--seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import partitions, qstate, ree as ree_mod, sentences, separability

_SEED_ENV = "REE_SEED"


def _default_seed() -> int:
    raw = os.environ.get(_SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{_SEED_ENV} must be an integer, got {raw!r}") from None


def _load_state(path: str) -> qstate.DensityMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fp:
            payload = json.load(fp)
    except OSError as exc:
        raise ValueError(f"cannot read state file {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path} is not valid JSON: {exc}") from None
    try:
        return qstate.DensityMatrix.from_json_dict(payload)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None


def _write_state(rho: qstate.DensityMatrix, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(rho.to_json_dict(), fp)
        fp.write("\n")


def _parse_cut(raw: str) -> tuple:
    try:
        return tuple(int(part) for part in raw.split(","))
    except ValueError:
        raise ValueError(f"--cut expects comma-separated integers, got {raw!r}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)


def cmd_count(args) -> int:
    if not 2 <= args.n <= partitions.COUNT_LIMIT:
        raise ValueError(f"--n must lie in 2..{partitions.COUNT_LIMIT}")
    bell = partitions.bell_number(args.n)
    data = {"n": args.n, "bell": bell, "term_count": bell - 1}
    if args.compare_2n:
        data["two_pow_n"] = 1 << args.n
        data["exceeds"] = data["term_count"] > data["two_pow_n"]
    if args.json:
        print(json.dumps(data))
    else:
        line = f"n={data['n']} bell={data['bell']} term_count={data['term_count']}"
        if args.compare_2n:
            line += (
                f" two_pow_n={data['two_pow_n']}"
                f" exceeds={'true' if data['exceeds'] else 'false'}"
            )
        print(line)
    return 0


def cmd_enumerate(args) -> int:
    if not 2 <= args.n <= partitions.ENUMERATION_LIMIT:
        raise ValueError(f"--n must lie in 2..{partitions.ENUMERATION_LIMIT}")

    def write_terms(fp):
        # one JSON object per line so large enumerations stream
        for term in partitions.iter_terms(args.n):
            fp.write(json.dumps(term.to_json_dict()))
            fp.write("\n")

    if args.out is None:
        write_terms(sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            write_terms(fp)
    return 0


def cmd_sentence(args) -> int:
    if not 2 <= args.n <= partitions.ENUMERATION_LIMIT:
        raise ValueError(f"--n must lie in 2..{partitions.ENUMERATION_LIMIT}")
    encoder = sentences.Lz78Encoder() if args.metrics else None
    raw_bytes = 0
    term_count = partitions.term_count(args.n)

    def write_sentence(fp):
        nonlocal raw_bytes
        for chunk in sentences.iter_sentence_chunks(args.n):
            fp.write(chunk)
            raw_bytes += len(chunk)
            if encoder is not None:
                encoder.update(chunk.encode("ascii"))
        fp.write("\n")

    if args.out is None:
        write_sentence(sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8") as fp:
            write_sentence(fp)

    if encoder is not None:
        enc = encoder.finish()
        metrics = {
            "raw_bytes": raw_bytes,
            "term_count": term_count,
            "phrase_count": enc.phrase_count,
            "coded_bits": enc.coded_bits,
            "ratio": enc.coded_bits / (8 * raw_bytes),
        }
        print(json.dumps(metrics))
    return 0


def cmd_growth(args) -> int:
    rows = partitions.growth_report(args.max)
    if args.out is None:
        partitions.write_growth_csv(rows, sys.stdout)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fp:
            partitions.write_growth_csv(rows, fp)
    return 0


def cmd_ppt(args) -> int:
    rho = _load_state(args.state)
    verdict = separability.ppt(rho, _parse_cut(args.cut))
    print(json.dumps(verdict.to_json_dict()))
    return 0


def cmd_concurrence(args) -> int:
    rho = _load_state(args.state)
    print(json.dumps({"concurrence": separability.concurrence(rho)}))
    return 0


def cmd_ree(args) -> int:
    rho = _load_state(args.state)
    seed = args.seed if args.seed is not None else _default_seed()
    result = ree_mod.ree(
        rho,
        tol=args.tol,
        max_iters=args.max_iters,
        restarts=args.restarts,
        seed=seed,
    )
    payload = {
        "value_nats": result.value,
        "value_bits": result.value / ree_mod.LN2,
        "gap": result.gap,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if args.sigma_out is not None:
        _write_state(result.sigma_star, args.sigma_out)
        payload["sigma_star_file"] = args.sigma_out
    print(json.dumps(payload))
    return 0


def cmd_sample(args) -> int:
    try:
        rgs = [int(ch) for ch in args.term]
    except ValueError:
        raise ValueError(f"--term expects a digit string, got {args.term!r}") from None
    term = partitions.PartitionTerm(rgs)
    if args.n is not None and args.n != term.n:
        raise ValueError(f"--n {args.n} does not match term length {term.n}")
    seed = args.seed if args.seed is not None else _default_seed()
    rho, ensemble = separability.sample_term_state(term, args.components, seed)
    _write_state(rho, args.out)
    ensemble_json = json.dumps(ensemble.to_json_dict())
    if args.ensemble_out is None:
        print(ensemble_json)
    else:
        with open(args.ensemble_out, "w", encoding="utf-8") as fp:
            fp.write(ensemble_json)
            fp.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entkit",
        description="Separable-decomposition enumeration, sentences, and witnesses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="term count for n parties")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--compare-2n", action="store_true", help="also compare against 2^n")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="all terms for n parties, one JSON per line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sentence", help="canonical sentence for n parties")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--metrics", action="store_true", help="print metrics JSON after the sentence")
    p.add_argument("--out", help="write the sentence to a file (metrics stay on stdout)")
    p.set_defaults(func=cmd_sentence)

    p = sub.add_parser("growth", help="term-count growth table as CSV")
    p.add_argument("--max", type=int, required=True, help="largest n (2..64)")
    p.add_argument("--out", help="output CSV file (default stdout)")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("ppt", help="partial-transpose verdict across a cut")
    p.add_argument("--state", required=True, help="density-matrix JSON file")
    p.add_argument("--cut", required=True, help="comma-separated party indices")
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("concurrence", help="two-qubit concurrence")
    p.add_argument("--state", required=True, help="density-matrix JSON file")
    p.set_defaults(func=cmd_concurrence)

    p = sub.add_parser("ree", help="relative entropy of entanglement (2 qubits)")
    p.add_argument("--state", required=True, help="density-matrix JSON file")
    p.add_argument("--tol", type=float, default=1e-6, help="gap tolerance")
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--restarts", type=int, default=16, help="vertex-search restarts")
    p.add_argument("--seed", type=int, default=None, help=f"overrides {_SEED_ENV}")
    p.add_argument("--sigma-out", help="write the separable minimizer to this file")
    p.set_defaults(func=cmd_ree)

    p = sub.add_parser("sample", help="sample a state realizing one term")
    p.add_argument("--term", required=True, help="restricted growth string, e.g. 001")
    p.add_argument("--n", type=int, default=None, help="party count (checked against --term)")
    p.add_argument("--components", type=int, default=1, help="mixture components")
    p.add_argument("--seed", type=int, default=None, help=f"overrides {_SEED_ENV}")
    p.add_argument("--out", required=True, help="state JSON output file")
    p.add_argument("--ensemble-out", help="ensemble JSON file (default stdout)")
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as exc:  # internal failure
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
