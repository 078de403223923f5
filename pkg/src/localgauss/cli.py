"""Command-line front end.

Exit codes: 0 on success, 1 on unreadable or malformed input, 2 on domain
errors (singular lattices, bad subsets, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import building, gaussian_stats, io, tropicalization
from .errors import LocalFieldError, ParseError
from .lattice_algebra import measure_log
from .valued_field import FieldConfig


@dataclass(frozen=True)
class CliConfig:
    prime: Optional[int]
    precision: int = 64
    seed: int = 0
    format: str = "json"
    threads: int = 1
    box_radius: int = 6
    output: Optional[str] = None

    def __post_init__(self):
        if self.prime is not None:
            FieldConfig(self.prime)
        if self.precision < 1:
            raise LocalFieldError(f"precision must be >= 1, got {self.precision}")


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def _subset_arg(text: str) -> List[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"expected comma-separated indices, got {text!r}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _lattice_report(L, extra=None) -> dict:
    out = io.lattice_to_json(L)
    out["rank"] = L.rank
    out["measure_log"] = measure_log(L) if L.is_full_rank else None
    if extra:
        out.update(extra)
    return out


def _lattice_text(L) -> str:
    lines = [io.matrix_to_text(L.matrix), f"p: {L.p}", f"rank: {L.rank}"]
    if L.is_full_rank:
        lines.append(f"measure_log: {measure_log(L)}")
    return "\n".join(lines) + "\n"


def cmd_hnf(args, cfg: CliConfig) -> str:
    L = io.parse_lattice(_read(args.file), cfg.prime)
    if cfg.format == "text":
        return _lattice_text(L)
    return _dump(_lattice_report(L))


def cmd_mle(args, cfg: CliConfig) -> str:
    if cfg.prime is None:
        raise ParseError("mle needs --prime")
    data = io.parse_vectors(_read(args.file))
    L = gaussian_stats.mle(data, cfg.prime)
    if cfg.format == "text":
        return _lattice_text(L)
    extra = {"points": len(data)}
    if L.is_full_rank:
        extra["log_likelihood"] = gaussian_stats.log_likelihood(gaussian_stats.GaussianDist(L), data)
    return _dump(_lattice_report(L, extra))


def cmd_ci(args, cfg: CliConfig) -> str:
    L = io.parse_lattice(_read(args.file), cfg.prime)
    G = gaussian_stats.GaussianDist(L)
    M = gaussian_stats.ci_matroid(G, _subset_arg(args.given))
    report = {
        "p": L.p,
        "given": list(M.given),
        "order": list(M.order),
        "ground": list(M.ground),
        "C": [list(r) for r in M.matrix],
        "rank": gaussian_stats.matroid_rank(M, M.ground),
        "bases": [list(b) for b in gaussian_stats.matroid_bases(M)],
        "statements": gaussian_stats.ci_statements(M),
    }
    if args.query:
        J = _subset_arg(args.query)
        report["query"] = {"J": J, "independent": gaussian_stats.is_ci(G, M.given, J)}
    if cfg.format == "text":
        lines = [f"ground: {report['ground']}", "C:", io.matrix_to_text(M.matrix)]
        lines += [f"basis: {b}" for b in report["bases"]]
        lines += report["statements"]
        if "query" in report:
            lines.append(f"query {report['query']['J']}: {report['query']['independent']}")
        return "\n".join(lines) + "\n"
    return _dump(report)


def cmd_sample(args, cfg: CliConfig) -> str:
    L = io.parse_lattice(_read(args.file), cfg.prime)
    draws = gaussian_stats.samples(
        gaussian_stats.GaussianDist(L), args.n, cfg.precision, cfg.seed, threads=cfg.threads
    )
    if cfg.format == "text":
        return "".join(
            " ".join(str(x) for x in s.point)
            + "  val="
            + ",".join(f"{v}{'+' if c else ''}" for v, c in zip(s.valuations, s.censored))
            + "\n"
            for s in draws
        )
    return _dump(
        {
            "p": L.p,
            "precision": cfg.precision,
            "seed": cfg.seed,
            "samples": [
                {
                    "point": [str(x) for x in s.point],
                    "valuations": list(s.valuations),
                    "censored": list(s.censored),
                }
                for s in draws
            ],
        }
    )


def cmd_trop(args, cfg: CliConfig) -> str:
    L = io.parse_lattice(_read(args.file), cfg.prime)
    report = tropicalization.verify_conjecture(L, cfg.box_radius, threads=cfg.threads)
    out = report.to_json()
    if L.dim == 2:
        out["trop2d"] = tropicalization.trop2d(L).coefficient_list()
    if cfg.format == "text":
        lines = [
            f"P(v) = {report.fitted}",
            "coefficients: " + " ".join(map(str, report.fitted.coefficient_list())),
            f"supermodular: {str(report.supermodular).lower()}",
            f"points checked: {report.points_checked} (box radius {cfg.box_radius})",
            f"mismatches: {len(report.mismatches)}",
        ]
        lines += [f"  v={list(v)} phi={phi} P={pv}" for v, phi, pv in report.mismatches]
        return "\n".join(lines) + "\n"
    return _dump(out)


def cmd_building(args, cfg: CliConfig) -> str:
    L = io.parse_lattice(_read(args.file), cfg.prime)
    center = building.canonicalize(L)
    if args.action == "neighbors":
        nbrs = building.neighbors(center)
        if cfg.format == "dot":
            g = building.BallGraph(center, 1, [center] + nbrs, [(0, i) for i in range(1, len(nbrs) + 1)], [0] + [1] * len(nbrs))
            return g.to_dot()
        if cfg.format == "text":
            return "".join(n.key + "\n" for n in nbrs)
        return _dump({"p": L.p, "center": center.key, "degree": len(nbrs), "neighbors": [n.key for n in nbrs]})
    if args.action == "adjacent":
        if not args.other:
            raise ParseError("adjacent needs a second lattice file")
        other = building.canonicalize(io.parse_lattice(_read(args.other), L.p))
        res = {
            "first": center.key,
            "second": other.key,
            "equivalent": center == other,
            "adjacent": building.is_adjacent(center, other),
        }
        if cfg.format == "text":
            return f"equivalent: {str(res['equivalent']).lower()}\nadjacent: {str(res['adjacent']).lower()}\n"
        return _dump(res)
    g = building.ball(center, args.radius)
    if cfg.format == "dot":
        return g.to_dot()
    if cfg.format == "text":
        lines = [f"{i} d={g.distances[i]} {v.key}" for i, v in enumerate(g.vertices)]
        lines += [f"{i} -- {j}" for i, j in g.edges]
        return "\n".join(lines) + "\n"
    return _dump(g.to_json())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", "-p", type=int, default=None, help="residue characteristic p")
    common.add_argument("--precision", type=int, default=64, help="sampled p-adic digits (default 64)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--box-radius", type=int, default=6)
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="localgauss", description="Gaussian measures over Q_p: lattices, MLE, CI, tropicalization, buildings."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hnf", parents=[common], help="Hermite normal form of a generator matrix")
    p.add_argument("file")
    p.set_defaults(func=cmd_hnf)

    p = sub.add_parser("mle", parents=[common], help="maximum likelihood lattice of a dataset")
    p.add_argument("file")
    p.set_defaults(func=cmd_mle)

    p = sub.add_parser("ci", parents=[common], help="conditional independence matroid")
    p.add_argument("file")
    p.add_argument("--given", "-I", default="", help="conditioning set, e.g. 1,3 (1-based)")
    p.add_argument("--query", "-J", default="", help="test mutual independence of these indices")
    p.set_defaults(func=cmd_ci)

    p = sub.add_parser("sample", parents=[common], help="draw from the Gaussian on a lattice")
    p.add_argument("file")
    p.add_argument("-n", type=int, default=10)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("trop", parents=[common], help="tropical tail polynomial and box verification")
    p.add_argument("file")
    p.set_defaults(func=cmd_trop)

    p = sub.add_parser("building", parents=[common], help="Bruhat-Tits building queries")
    p.add_argument("action", choices=("neighbors", "adjacent", "ball"))
    p.add_argument("file")
    p.add_argument("other", nargs="?", help="second lattice file for 'adjacent'")
    p.add_argument("--radius", "-r", type=int, default=1)
    p.set_defaults(func=cmd_building)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = CliConfig(
            prime=args.prime,
            precision=args.precision,
            seed=args.seed,
            format=args.format,
            threads=args.threads,
            box_radius=args.box_radius,
            output=args.output,
        )
        text = args.func(args, cfg)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 1
    except LocalFieldError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        for path in (getattr(args, "file", None), getattr(args, "other", None)):
            if path and path != "-":
                try:
                    echoed = " ".join(_read(path).split())
                except ParseError:
                    continue
                print(f"input {path}: {echoed[:2000]}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
