"""Command-line front end: ranks, sweeps, complexity tables, entropy-pair verdicts and the full pipeline.

Exit codes: 0 clean, 2 flagged (undecided verdicts), 3 assertion violation,
4 budget exceeded, 5 parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .closeup.circle import (CircleRelation, CircleSample, MalformedAlpha, circle_relation, circle_sample,
                             symbolic_trace)
from .closeup.fixtures import circle_odd_fixture
from .closeup.odd import BudgetExceeded, default_budget, odd_condition_check
from .closeup.process import ProcessBudgetExceeded, ProcessTrace, rank_table_csv, run_process
from .closeup.relations import FiniteRelation
from .closeup.spaces import FiniteTopSpace
from .entropy.cover import (CoverBudgetExceeded, cover_csv, entropy_pair_verdict, parse_cover_csv, unrelated_fixture,
                            yn_fixture)
from .entropy.eqrels import (OrdinalEncoding, eqrels_membership, sample_eqrels_words,
                             successor_friendship_oracle)
from .ordinal import ONE, Ordinal, OrdinalError, OrdinalParseError, decompose, format_ordinal, parse
from .quotient import find_non_open_violation, sweep_records
from .toeplitz.checks import build_x_membership, complexity_csv, complexity_rows, openness_probe, parse_complexity_csv
from .toeplitz.words import read_language, write_language, xprime_language
from .toeplitz.ztree import circle_tree, read_prefixes, write_prefixes
from .verdict import Verdict

EXIT_OK, EXIT_FLAGGED, EXIT_VIOLATION, EXIT_BUDGET, EXIT_PARSE = 0, 2, 3, 4, 5


class ConfigError(ValueError):
    pass


class ArtifactError(AssertionError):
    pass


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _horizons(text) -> list[int]:
    if isinstance(text, (list, tuple)):
        hs = [int(h) for h in text]
    else:
        try:
            hs = [int(h) for h in str(text).replace(" ", "").split(",") if h]
        except ValueError as exc:
            raise ConfigError(f"horizons must be a comma list of integers, got {text!r}") from exc
    if not hs or any(h <= 0 for h in hs) or any(b <= a for a, b in zip(hs, hs[1:])):
        raise ConfigError(f"horizons must be positive and strictly increasing, got {hs}")
    return hs


def _budget(args) -> int:
    b = default_budget() if getattr(args, "budget", None) is None else args.budget
    if b <= 0:
        raise ConfigError("budget must be positive")
    return b


# rank


def cmd_rank(args) -> int:
    text = args.alpha_pos if args.alpha_pos is not None else args.alpha
    if text is None:
        raise ConfigError("rank needs an ordinal")
    alpha = parse(text)
    if alpha == ONE:
        # alpha = 1: the full relation on a one-point space
        space = FiniteTopSpace.discrete(1)
        trace = run_process(FiniteRelation.full(space))
    else:
        trace = symbolic_trace(alpha)
    if args.format == "csv":
        sys.stdout.write(rank_table_csv([(alpha, trace.rank, trace.equalizing)]))
    else:
        print(f"rank {format_ordinal(trace.rank)}")
        print(f"equalizing {str(trace.equalizing).lower()}")
        for s in trace.steps:
            rel = s.relation
            desc = (f"bound {format_ordinal(rel.bound)} {'inclusive' if rel.inclusive else 'strict'}"
                    if isinstance(rel, CircleRelation) else f"pairs {len(rel)}")
            print(f"step {format_ordinal(s.index)} {s.kind.value} {desc}")
    if args.out_dir:
        out = Path(args.out_dir)
        atomic_write(out / "rank_trace.json", _dump({"alpha": format_ordinal(alpha), **trace.to_json()}))
    return EXIT_OK


# sweep


def cmd_sweep(args) -> int:
    n = args.max_points
    if n < 1:
        raise ConfigError("max-points must be at least 1")
    target = args.max_target if args.max_target is not None else min(n, 3)
    budget = _budget(args)
    lines, violations, count = [], 0, 0
    for rec in sweep_records(n, target, open_only=True):
        count += 1
        if count > budget:
            raise BudgetExceeded(count, budget)
        violations += not rec["holds"]
        lines.append(json.dumps(rec, sort_keys=True))
    injected = None
    if args.inject_non_open:
        found = find_non_open_violation(max(n, 3), max(target, 2))
        if found is not None:
            m, e, rep = found
            injected = {"map": m.to_json(), "open": False, "relation": e.to_json(), **rep.to_json(), "injected": True}
            lines.append(json.dumps(injected, sort_keys=True))
            violations += 1
    summary = {"max_source": n, "max_target": target, "records": count, "violations": violations,
               "injected": injected is not None}
    if args.out_dir:
        atomic_write(Path(args.out_dir) / "sweep.jsonl", "\n".join(lines) + ("\n" if lines else ""))
    print(json.dumps(summary, sort_keys=True))
    return EXIT_VIOLATION if violations else EXIT_OK


# complexity


def cmd_complexity(args) -> int:
    rows = complexity_rows(args.n_max)
    text = complexity_csv(rows)
    if args.out_dir:
        path = Path(args.out_dir) / f"complexity_{args.n_max}.csv"
        atomic_write(path, text)
        parse_complexity_csv(path.read_text())
    sys.stdout.write(text)
    return EXIT_OK


# entropy pairs

FIXTURES = {"yn": yn_fixture, "unrelated": unrelated_fixture}


def _pair_report(name, hs, exact_m, budget):
    fx = FIXTURES[name]()
    return entropy_pair_verdict(fx["u"], fx["v"], fx["family"], hs, period=2 * fx["n"] + 2,
                                exact_m=exact_m, budget=budget)


def cmd_entropy_pairs(args) -> int:
    hs = _horizons(args.horizons)
    budget = _budget(args)
    names = list(FIXTURES) if args.fixture == "all" else [args.fixture]
    exact_m = hs[len(hs) // 2] if args.exact_cover else None
    reports = {name: _pair_report(name, hs, exact_m, budget) for name in names}
    flagged = any(r.verdict == "inconclusive" for r in reports.values())
    out = {name: r.to_json() for name, r in reports.items()}
    if args.format == "csv":
        for name, r in reports.items():
            sys.stdout.write(f"# {name} {r.verdict}\n")
            sys.stdout.write(cover_csv(r))
    else:
        print(_dump(out), end="")
    if args.out_dir:
        for name, r in reports.items():
            path = Path(args.out_dir) / f"entropy_{name}.csv"
            atomic_write(path, cover_csv(r))
            parse_cover_csv(path.read_text())
        atomic_write(Path(args.out_dir) / "entropy_pairs.json", _dump(out))
    return EXIT_FLAGGED if flagged else EXIT_OK


# pipeline


@dataclass
class PipelineConfig:
    alpha: str = "w^2+1"
    truncation: str = "w*4"
    horizons: list = field(default_factory=lambda: [12, 24, 48])
    out_dir: str = "pipeline_out"
    seed: int = 0
    budget: int = 10**7
    samples: int = 12
    odd_k: int = 2

    def validate(self):
        parse(self.alpha)
        t = parse(self.truncation)
        self.horizons = _horizons(self.horizons)
        if self.budget <= 0 or self.samples <= 0 or self.odd_k <= 0:
            raise ConfigError("budgets, sample counts and k must be positive")
        if len(t.terms) != 1 or t.terms[0][0] != ONE:
            raise ConfigError("truncation must have the form w*J")
        return self


def _verify(path: Path, kind: str):
    """Re-parse one emitted artifact with the owning module's reader."""
    text = path.read_text()
    if kind == "trace":
        ProcessTrace.from_json(json.loads(text), CircleRelation.from_json)
    elif kind == "sample":
        CircleSample.from_json(json.loads(text))
    elif kind == "ztree":
        read_prefixes(text)
    elif kind == "language":
        read_language(text)
    elif kind == "json":
        json.loads(text)
    else:
        raise ValueError(kind)


def run_pipeline(cfg: PipelineConfig):
    """Returns ``(bundle, exit_code)``; all artifacts are written under ``cfg.out_dir``."""
    cfg.validate()
    out = Path(cfg.out_dir)
    alpha, truncation = parse(cfg.alpha), parse(cfg.truncation)
    files = {}

    def emit(name, text, kind):
        atomic_write(out / name, text)
        files[name] = kind

    trace = symbolic_trace(alpha)
    emit("trace.json", _dump(trace.to_json()), "trace")
    sample = circle_sample(alpha, truncation)
    emit("sample.json", _dump(sample.to_json()), "sample")

    odd = None
    if decompose(trace.rank).b:
        _, e, prev = circle_odd_fixture(alpha, truncation)
        res = odd_condition_check(e, prev, cfg.odd_k, budget=cfg.budget, max_witnesses=5)
        odd = {"k": cfg.odd_k, "holds": res.holds, "checked": res.checked,
               "witnesses": [[format_ordinal(sample.points[i]) for i in t] for t in res.witnesses]}
        emit("odd_condition.json", _dump(odd), "json")

    blocks = truncation.terms[0][1]
    tree = circle_tree(truncation)
    emit("ztree.txt", write_prefixes(tree, depth=2 * (blocks + 3)), "ztree")
    enc = OrdinalEncoding(blocks)
    oracle = successor_friendship_oracle(circle_relation(alpha), enc)

    # one window of X over the top ordinal, with membership and an openness certificate
    probe_word = enc.window(enc.top, 0, 27)
    probe = {"window": probe_word.to_json(),
             "membership": build_x_membership(tree, probe_word).value,
             "openness": openness_probe(tree, probe_word).to_json()}
    emit("x_probe.json", _dump(probe), "json")
    emit("xprime_9.txt", write_language(xprime_language(9), 9), "language")

    horizons, flagged, violated = [], False, False
    pos_pairs = [(Ordinal.nat(0), Ordinal.nat(1)), (parse("w+2"), parse("w+3"))]
    neg_pairs = [(Ordinal.nat(0), parse("w+1")), (Ordinal.nat(1), Ordinal.nat(3))]
    for h, m in enumerate(cfg.horizons):
        pos, neg = [], []
        for i, pair in enumerate(pos_pairs):
            pos += sample_eqrels_words(enc, pair, m, cfg.samples, seed=cfg.seed * 1000 + 10 * h + i)
        for i, pair in enumerate(neg_pairs):
            neg += sample_eqrels_words(enc, pair, m, cfg.samples, seed=cfg.seed * 1000 + 10 * h + 5 + i)
        pv = [eqrels_membership(w, oracle) for w in pos]
        nv = [eqrels_membership(w, oracle) for w in neg]
        row = {
            "m": m,
            "positive": len(pos),
            "positive_accepted": sum(v is Verdict.TRUE for v in pv),
            "negative": len(neg),
            "negative_rejected": sum(v is Verdict.FALSE for v in nv),
            "undecided": sum(v is Verdict.UNDECIDED for v in pv + nv),
        }
        # words built from related points are in the supershift by construction
        if row["positive_accepted"] + sum(v is Verdict.UNDECIDED for v in pv) != len(pos):
            violated = True
        flagged |= row["undecided"] > 0
        horizons.append(row)
        emit(f"eqrels_{m}.txt", write_language(sorted(set(pos)), m), "language")

    status = "violation" if violated else "flagged" if flagged else "clean"
    bundle = {
        "config": asdict(cfg),
        "alpha": format_ordinal(alpha),
        "rank": format_ordinal(trace.rank),
        "equalizing": trace.equalizing,
        "odd_condition": odd,
        "oracle": {"provenance": oracle.provenance},
        "horizons": horizons,
        "status": status,
        "files": dict(sorted(files.items())),
    }
    emit("bundle.json", _dump(bundle), "json")
    for name, kind in files.items():
        try:
            _verify(out / name, kind)
        except Exception as exc:
            raise ArtifactError(f"{name} does not re-parse: {exc}") from exc
    code = EXIT_VIOLATION if violated else EXIT_FLAGGED if flagged else EXIT_OK
    return bundle, code


def cmd_pipeline(args) -> int:
    cfg = PipelineConfig(alpha=args.alpha or "w^2+1", truncation=args.truncation or "w*4",
                         horizons=_horizons(args.horizons or "12,24,48"), out_dir=args.out_dir or "pipeline_out",
                         seed=args.seed, budget=_budget(args))
    bundle, code = run_pipeline(cfg)
    print(f"rank {bundle['rank']}")
    print(f"equalizing {str(bundle['equalizing']).lower()}")
    for row in bundle["horizons"]:
        print(f"horizon {row['m']}: positives {row['positive_accepted']}/{row['positive']} accepted, "
              f"negatives {row['negative_rejected']}/{row['negative']} rejected, undecided {row['undecided']}")
    print(f"status {bundle['status']}; bundle at {Path(cfg.out_dir) / 'bundle.json'}")
    return code


# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cperank", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None, help="tuple/record budget (default: $CPE_BUDGET or 10^7)")
    common.add_argument("--out-dir", default=None)
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rank", parents=[common], help="symbolic close-up rank of the circle relation")
    r.add_argument("alpha_pos", nargs="?", metavar="ALPHA")
    r.add_argument("--alpha", default=None)
    r.set_defaults(func=cmd_rank)

    s = sub.add_parser("sweep", parents=[common], help="exhaustive open-quotient transfer sweep")
    s.add_argument("max_points", nargs="?", type=int, default=3)
    s.add_argument("--max-target", type=int, default=None)
    s.add_argument("--inject-non-open", action="store_true", help="append a non-open counterexample")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("complexity", parents=[common], help="word counts of the #-progression subshift")
    c.add_argument("n_max", nargs="?", type=int, default=60)
    c.set_defaults(func=cmd_complexity)

    e = sub.add_parser("entropy-pairs", parents=[common], help="cover-growth verdicts on the block fixtures")
    e.add_argument("--fixture", choices=["yn", "unrelated", "all"], default="all")
    e.add_argument("--horizons", default="8,16,24,32")
    e.add_argument("--exact-cover", action="store_true", help="check greedy against exact at the middle horizon")
    e.set_defaults(func=cmd_entropy_pairs)

    q = sub.add_parser("pipeline", parents=[common], help="alpha to rank to encoding to supershift words")
    q.add_argument("--alpha", default=None)
    q.add_argument("--truncation", default=None)
    q.add_argument("--horizons", default=None)
    q.set_defaults(func=cmd_pipeline)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, CoverBudgetExceeded, ProcessBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OrdinalParseError, MalformedAlpha, ConfigError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ArtifactError, AssertionError) as exc:
        print(f"assertion violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except OrdinalError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
