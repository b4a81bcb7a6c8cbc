"""Command-line entry point: ``linkmoments <subcommand> [options]``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analytic import lattice_corrected_moment, moment_upper_bound, predicted_moment, semicircle_moment
from .circuits import DEFAULT_LADDERS, FitError, count_circuits, fit_extrapolation
from .experiment import ExperimentConfig, RawRun, load_config, run_experiment, summarize
from .links import delta_L, parse_link
from .report import emit_report, write_rows
from .words import PairWord, dihedral_classes, enumerate_pair_words, is_catalan
from .zones import NonlinearLinkError, all_zone_cases, contribution_volume

log = logging.getLogger("linkmoments")

_DEFAULT_LINK = {"kind": "generalized_toeplitz", "alpha": 1, "beta": 1}


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = ExperimentConfig.from_dict({"ensemble": {"link": _DEFAULT_LINK}})
    if args.link:
        cfg = replace(cfg, ensemble=replace(cfg.ensemble, link=parse_link(args.link)))
    if args.moments:
        cfg = replace(cfg, moments=_int_list(args.moments))
    return cfg.with_overrides(seed=args.seed, n=args.n, trials=args.trials, out=args.out, fmt=args.format)


def _destination(args, cfg: ExperimentConfig, suffix: str = ""):
    prefix = cfg.output.prefix
    if not prefix:
        return None
    Path(prefix).parent.mkdir(parents=True, exist_ok=True)
    ext = ".csv" if cfg.output.format == "csv" else ".txt"
    return f"{prefix}{suffix}{ext}"


def cmd_simulate(args) -> int:
    cfg = _config(args)
    if args.words:
        cfg = replace(cfg, word_analysis=True)
    reports = run_experiment(cfg)
    if not cfg.output.prefix:
        emit_report(reports, cfg.output.format)
    else:
        print(f"wrote {cfg.output.prefix}.* ({len(reports)} moments, {cfg.ensemble.trials} trials)", file=sys.stderr)
    return 0


def cmd_moments(args) -> int:
    cfg = _config(args)
    link = cfg.ensemble.link
    delta = delta_L(link, min(cfg.ensemble.n, 256))
    rows = []
    for k in cfg.moments:
        pred = predicted_moment(link, k)
        corrected = lattice_corrected_moment(link, k) if link.is_linear_family else pred
        bound = moment_upper_bound(k, delta) if k % 2 == 0 else ""
        rows.append(
            [
                link.label,
                k,
                "" if pred is None else float(pred),
                "" if pred is None else str(pred),
                "" if corrected is None else float(corrected),
                semicircle_moment(k),
                bound,
            ]
        )
    header = ("ensemble", "k", "analytic", "analytic_exact", "lattice_corrected", "semicircle", "upper_bound")
    write_rows(header, rows, cfg.output.format, _destination(args, cfg))
    return 0


def _words_for(args) -> list[PairWord]:
    if args.word:
        return [PairWord.parse(w) for w in args.word]
    k = args.length // 2
    if args.length % 2 or k < 1:
        raise ValueError("--length must be a positive even number")
    return sorted(dihedral_classes(k)) if not args.all else enumerate_pair_words(k)


def cmd_words(args) -> int:
    cfg = _config(args)
    link = cfg.ensemble.link
    header = ["word", "catalan", "class_size", "contributing", "degree_loss", "obstructed"]
    rows = []
    classes = {}
    for words in dihedral_classes(args.length // 2).values() if not args.word else []:
        for w in words:
            classes[w] = len(words)
    for w in _words_for(args):
        row = [str(w), int(is_catalan(w)), classes.get(w, "")]
        try:
            cases = all_zone_cases(w, link)
            kinds = [c.kind.value for c in cases]
            row += [kinds.count("contributing"), kinds.count("degree_loss"), kinds.count("obstructed")]
        except (NonlinearLinkError, ValueError):
            row += ["", "", ""]
        rows.append(row)
    write_rows(header, rows, cfg.output.format, _destination(args, cfg))
    return 0


def cmd_count_circuits(args) -> int:
    cfg = _config(args)
    link = cfg.ensemble.link
    words = _words_for(args)
    rows, limits = [], []
    for w in words:
        if args.n is not None:
            ns = (args.n,)
        elif cfg.n_ladder:
            ns = cfg.n_ladder
        else:
            ns = DEFAULT_LADDERS.get(w.k, (4, 6, 8, 10))
        counts = [count_circuits(w, link, n) for n in ns]
        rows += [[str(w), c.n, c.count, c.normalized] for c in counts]
        degree = min(2, len(ns) - 2)
        if degree >= 1:
            try:
                ext = fit_extrapolation(ns, [c.normalized for c in counts], degree)
                limits.append([str(w), ext.value, ext.uncertainty, degree])
            except FitError as exc:
                log.warning("no limit for %s: %s", w, exc)
    write_rows(("word", "n", "count", "normalized"), rows, cfg.output.format, _destination(args, cfg))
    if limits:
        dest = _destination(args, cfg, "_limits")
        if dest is None:
            print()
        write_rows(("word", "limit", "uncertainty", "fit_degree"), limits, cfg.output.format, dest)
    return 0


def cmd_volumes(args) -> int:
    cfg = _config(args)
    link = cfg.ensemble.link
    seed = cfg.ensemble.seed
    rows = []
    for i, w in enumerate(_words_for(args)):
        for j, case in enumerate(all_zone_cases(w, link)):
            if case.contributing:
                p, se = contribution_volume(case, args.samples, seed=seed + 7919 * i + j)
            elif args.contributing_only:
                continue
            else:
                p, se = "", ""
            zones = "".join(str(int(z)) for z in case.zones)
            rows.append([str(w), zones, case.kind.value, p, se])
    header = ("word", "zone_case", "classification", "volume", "std_error")
    write_rows(header, rows, cfg.output.format, _destination(args, cfg))
    return 0


def cmd_report(args) -> int:
    path = args.raw or args.config
    if not path:
        raise ValueError("report needs a raw data file (positional or --config)")
    raw = RawRun.load(path)
    fmt = args.format or raw.config.output.format
    reports = summarize(raw, with_words=args.words)
    dest = None
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        dest = args.out + (".csv" if fmt == "csv" else ".txt")
    emit_report(reports, fmt, dest)
    return 0


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON experiment config")
    common.add_argument("--seed", type=_u64, help="override the config seed")
    common.add_argument("--n", type=_positive, help="matrix size (count-circuits: a single n)")
    common.add_argument("--trials", type=_positive, help="number of random matrices")
    common.add_argument("--out", help="output path prefix (default: stdout)")
    common.add_argument("--format", choices=("csv", "table"), help="output format")
    common.add_argument("--link", help="link override, e.g. T:1:2, H:1:3, PT:1,0,0:1,0")
    common.add_argument("--moments", help="comma-separated moment orders, e.g. 2,4,6")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="linkmoments", description="Spectral moments of link-function random matrices.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo moments")
    s.add_argument("--words", action="store_true", help="also fill the combinatorial route")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("moments", parents=[common], help="closed-form moments only")
    s.set_defaults(func=cmd_moments)

    def word_opts(sp):
        sp.add_argument("--length", type=int, default=6, help="word length 2k (default 6)")
        sp.add_argument("--word", action="append", help="a specific word such as abab (repeatable)")
        sp.add_argument("--all", action="store_true", help="every word, not one per rotation/reversal class")

    s = sub.add_parser("words", parents=[common], help="list words and classify their zone cases")
    word_opts(s)
    s.set_defaults(func=cmd_words)

    s = sub.add_parser("count-circuits", parents=[common], help="exact circuit counts and limits")
    word_opts(s)
    s.set_defaults(func=cmd_count_circuits)

    s = sub.add_parser("volumes", parents=[common], help="Monte Carlo zone-case volumes")
    word_opts(s)
    s.add_argument("--samples", type=_positive, default=200_000)
    s.add_argument("--contributing-only", action="store_true")
    s.set_defaults(func=cmd_volumes)

    s = sub.add_parser("report", parents=[common], help="re-emit a report from saved raw data")
    s.add_argument("raw", nargs="?", help="a *_raw.json file written by simulate")
    s.add_argument("--words", action="store_true", help="recompute the combinatorial route")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except KeyboardInterrupt:
        print("error: interrupted", file=sys.stderr)
        return 130
    except Exception as exc:  # one diagnostic line, nonzero exit
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if args.verbose:
            raise
        return 1


if __name__ == "__main__":
    sys.exit(main())
