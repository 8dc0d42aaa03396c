"""Batch command-line front end: ``taut-gm <command> [flags]``.

Every command writes one JSON (or CSV) report and exits with
0 when all asserted checks pass, 1 on a failed check, 2 on a bad
configuration and 3 when a request exceeds engine capacity.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import __version__, gmmodel, mck, relations, schubert, tautring
from .gmmodel import ModelParams
from .qlinalg import rank, rat_str
from .tautring import CapacityError

SCHEMA = "taut-gm/1"
COMMANDS = ("constants", "betti", "verify-relations", "injectivity", "gram", "mck-check", "kimura")
CSV_COMMANDS = ("betti", "gram", "injectivity")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    m: int | None = None
    codim: int | None = None
    b_prim: int = 22
    method: str = "gram"
    output_path: str | None = None
    format: str = "json"

    def validate(self) -> RunConfig:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.b_prim < 0:
            raise UsageError("--bprim must be non-negative")
        if self.method not in ("model", "gram"):
            raise UsageError("--method must be 'model' or 'gram'")
        if self.format not in ("json", "csv"):
            raise UsageError("--format must be 'json' or 'csv'")
        if self.format == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"CSV output is only available for {', '.join(CSV_COMMANDS)}")
        if self.command in ("injectivity", "gram"):
            if self.m is None or self.m < 1:
                raise UsageError(f"{self.command} requires --m >= 1")
            if self.codim is not None and not 0 <= self.codim <= 6 * self.m:
                raise UsageError(f"--codim must lie in 0..{6 * self.m}")
        if self.command == "gram" and self.codim is None:
            raise UsageError("gram requires --codim")
        if self.command == "kimura" and self.b_prim > tautring.MAX_KIMURA_B:
            raise UsageError(f"kimura requires --bprim <= {tautring.MAX_KIMURA_B}")
        return self

    @property
    def params(self) -> ModelParams:
        return ModelParams(b_prim=self.b_prim)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "codim": self.codim,
            "b_prim": self.b_prim,
            "method": self.method,
            "format": self.format,
        }


def _threads() -> int:
    raw = os.environ.get("TAUT_GM_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"TAUT_GM_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise UsageError("TAUT_GM_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _injectivity_job(args):
    m, d, method, b_prim = args
    return tautring.check_injectivity(m, d, method, ModelParams(b_prim=b_prim))


def cmd_constants(cfg: RunConfig):
    t = schubert.derive_constants()
    return t.to_json(), True


def cmd_betti(cfg: RunConfig):
    p = cfg.params
    ranks = gmmodel.graded_dimensions(p)
    delta = gmmodel.diagonal(p)
    euler = gmmodel.integrate(gmmodel.mult_model(delta, delta))
    res = {
        "ranks_by_degree": ranks,
        "algebraic_ranks_by_codim": list(schubert.rank_table(p.box)),
        "b_prim": p.b_prim,
        "total_betti": sum(ranks),
        "euler_characteristic": rat_str(euler),
    }
    ok = euler == sum(ranks) and all(r == 0 for r in ranks[1::2])
    return res, ok


def cmd_verify_relations(cfg: RunConfig):
    rep = relations.verify_relations(cfg.params)
    return rep.to_json(verbose=True), rep.passed


def cmd_injectivity(cfg: RunConfig):
    p = cfg.params
    codims = [cfg.codim] if cfg.codim is not None else list(range(6 * cfg.m + 1))
    jobs = [(cfg.m, d, cfg.method, p.b_prim) for d in codims]
    n = _threads()
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_injectivity_job, jobs))
    else:
        results = [_injectivity_job(j) for j in jobs]
    ok = all(r.injective for r in results)
    if cfg.codim is not None:
        r = results[0]
        return {"monomials": r.monomials, "rank": r.rank, "injective": r.injective}, ok
    return {
        "per_codim": [r.to_json() for r in results],
        "monomials": sum(r.monomials for r in results),
        "rank": sum(r.rank for r in results),
        "injective": ok,
    }, ok


def cmd_gram(cfg: RunConfig):
    p = cfg.params
    G = tautring.gram(cfg.m, cfg.codim, p)
    rows = tautring.enumerate_basis(cfg.m, cfg.codim, p)
    cols = tautring.enumerate_basis(cfg.m, 6 * cfg.m - cfg.codim, p)
    r = rank(G)
    dense = [[rat_str(v) for v in row] for row in G.to_dense()]
    res = {
        "rows": [str(x) for x in rows],
        "cols": [str(y) for y in cols],
        "matrix": dense,
        "rank": r,
        "full_rank": r == len(rows) == len(cols),
    }
    return res, res["full_rank"]


def cmd_mck_check(cfg: RunConfig):
    d = mck.build_ck(cfg.params)
    reports = [mck.verify_ck(d), mck.verify_mck(d), mck.verify_involution_splitting(d)]
    return {
        "reports": [rep.to_json() for rep in reports],
        "passed": all(rep.passed for rep in reports),
    }, all(rep.passed for rep in reports)


def cmd_kimura(cfg: RunConfig):
    b = cfg.b_prim
    rel = tautring.kimura_relation(b)
    at_b = tautring.evaluate(rel, ModelParams(b_prim=b))
    at_b1 = tautring.evaluate(rel, ModelParams(b_prim=b + 1))
    res = {
        "b": b,
        "m": rel.m,
        "terms": len(rel.terms),
        "evaluates_to_zero": at_b.is_zero(),
        "nonzero_with_bprim_plus_one": not at_b1.is_zero(),
    }
    return res, res["evaluates_to_zero"] and res["nonzero_with_bprim_plus_one"]


DISPATCH = {
    "constants": cmd_constants,
    "betti": cmd_betti,
    "verify-relations": cmd_verify_relations,
    "injectivity": cmd_injectivity,
    "gram": cmd_gram,
    "mck-check": cmd_mck_check,
    "kimura": cmd_kimura,
}


def run(cfg: RunConfig) -> tuple[dict, int]:
    """Execute a validated config; returns (report, exit code)."""
    cfg.validate()
    start = time.perf_counter()
    results, ok = DISPATCH[cfg.command](cfg)
    report = {
        "schema": SCHEMA,
        "command": cfg.command,
        "params": {**cfg.to_json(), "model": cfg.params.to_json()},
        "results": results,
        "passed": bool(ok),
        "engine_version": __version__,
        "convention": schubert.CHERN_CONVENTION,
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }
    return report, EXIT_OK if ok else EXIT_FAIL


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    res = report["results"]
    cmd = report["command"]
    if cmd == "gram":
        w.writerow([""] + res["cols"])
        for name, row in zip(res["rows"], res["matrix"]):
            w.writerow([name] + row)
    elif cmd == "betti":
        w.writerow(["degree", "rank"])
        for d, r in enumerate(res["ranks_by_degree"]):
            w.writerow([d, r])
    else:
        w.writerow(["m", "codim", "method", "monomials", "rank", "injective"])
        rows = res.get("per_codim") or [{**res, "m": report["params"]["m"], "codim": report["params"]["codim"],
                                          "method": report["params"]["method"]}]
        for r in rows:
            w.writerow([r["m"], r["codim"], r["method"], r["monomials"], r["rank"], str(r["injective"]).lower()])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".taut-gm-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taut-gm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--m", type=int, default=None, help="number of factors of X^m")
    parser.add_argument("--codim", type=int, default=None, help="codimension (default: all)")
    parser.add_argument("--bprim", type=int, default=22, help="rank of the primitive part (default 22)")
    parser.add_argument("--method", choices=("model", "gram"), default="gram")
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(args.command, args.m, args.codim, args.bprim, args.method, args.out, args.format)
    try:
        report, code = run(cfg)
    except UsageError as exc:
        print(f"taut-gm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"taut-gm: capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    text = render(report, cfg.format)
    if cfg.output_path:
        write_atomic(cfg.output_path, text)
    else:
        sys.stdout.write(text)
    if code == EXIT_FAIL:
        failing = _failing_identities(report)
        print("taut-gm: checks failed: " + ("; ".join(failing) or cfg.command), file=sys.stderr)
    return code


def _failing_identities(report: dict) -> list[str]:
    res = report["results"]
    out = list(res.get("failures", []))
    for rep in res.get("reports", []):
        out += rep.get("failures", [])
    return out


if __name__ == "__main__":
    sys.exit(main())
