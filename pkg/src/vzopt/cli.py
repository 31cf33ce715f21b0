"""Command-line entry point: ``vzopt {bench,analyze,necgen,necparse,optimize}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import antenna, benchmarks, nec, report
from .cfo import RETRIEVAL_ORDERS, DecisionSpace, sweep
from .errors import EngineError, EvaluationError, ParseError, ValidationError, VzoptError
from .objectives import BowtieObjective, YagiObjective

log = logging.getLogger("vzopt")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ENGINE = 3
EXIT_PARSE = 4
EXIT_INTERNAL = 5
ENGINE_ENV = "VZOPT_NEC_ENGINE"


def _add_cfo_flags(p):
    p.add_argument("--nt", type=int, help="time steps per run")
    p.add_argument("--n-gamma", type=int, help="points on the gamma grid")
    p.add_argument("--max-np", type=int, dest="max_np_per_dim", help="largest probes per line")
    p.add_argument("--retrieval-order", choices=RETRIEVAL_ORDERS)


def _cfo_overrides(args):
    keys = {"nt": "nt", "n_gamma": "n_gamma", "max_np_per_dim": "max_np_per_dim",
            "retrieval_order": "retrieval_order"}
    return {k: getattr(args, a) for a, k in keys.items() if getattr(args, a, None) is not None}


def build_parser():
    ap = argparse.ArgumentParser(prog="vzopt", description="CFO optimizer, VSWR analysis and NEC deck tools.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("bench", help="run the default sweep on a benchmark")
    p.add_argument("name")
    p.add_argument("--dims", type=int, help="dimension for scalable functions")
    p.add_argument("--out", default=None, help="output directory (default vzopt_out/<NAME>)")
    _add_cfo_flags(p)

    p = sub.add_parser("list", help="list benchmark names")

    p = sub.add_parser("analyze", help="VSWR bands and min/max summary of a sweep table")
    p.add_argument("table", help="table file, or builtin:bowtie-loaded / builtin:bowtie-unloaded")
    p.add_argument("--z0", type=float, help="feed impedance (default: the table's VSWR//Z0 header)")
    p.add_argument("--threshold", type=float, default=2.0)
    p.add_argument("--window", type=float, nargs=2, default=(800.0, 12000.0), metavar=("LO", "HI"))
    p.add_argument("--layout", choices=sorted(antenna.LAYOUTS), default="max-min-fwd")
    p.add_argument("--out", help="write bands.csv and summary.csv here instead of stdout")

    p = sub.add_parser("necgen", help="write a NEC deck from a design file")
    p.add_argument("design")
    p.add_argument("-o", "--output", help="deck path (default: stdout)")

    p = sub.add_parser("necparse", help="parse a NEC output listing")
    p.add_argument("listing")
    p.add_argument("--z0", type=float, required=True)
    p.add_argument("--file-id", help="expected file ID token")
    p.add_argument("--forward", type=float, nargs=2, metavar=("THETA", "PHI"),
                   help="pattern row for forward gain (default: first row)")
    p.add_argument("--window", type=float, nargs=2, metavar=("LO", "HI"))

    p = sub.add_parser("optimize", help="run a configured optimization")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (overrides the config)")
    p.add_argument("--engine", help=f"engine path (overrides the config and ${ENGINE_ENV})")
    return ap


def run_config(config, out_dir):
    """Sweep the configured objective, write the record and series; return the RunRecord."""
    space = DecisionSpace(config.lower, config.upper)
    params = config.params()
    out = Path(out_dir)
    if config.is_antenna:
        if not config.engine:
            raise ValidationError(
                f"objective {config.objective!r} needs a NEC engine: set 'engine' in the config, "
                f"pass --engine or set ${ENGINE_ENV}"
            )
        work = out / "engine_work"
        if config.objective == "bowtie":
            objective = BowtieObjective(config.engine, work, config.timeout_s, config.freq, config.window_mhz)
        else:
            objective = YagiObjective(config.engine, work, config.yagi_coeffs, config.band_mhz, config.timeout_s)
    else:
        objective = benchmarks.get(config.objective)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    res = sweep(objective, space, params)
    wall = time.perf_counter() - t0
    series = report.write_series(res.history, out)
    rec = report.RunRecord(report.make_run_id(), config, res.best, res.evaluations, res.runs, wall, series)
    (out / "record.txt").write_text(rec.to_text(), encoding="utf-8")
    return rec


def _print_record(rec, out_dir):
    b = rec.best
    print(f"{rec.config.objective}: best {b.fitness!r} (probe {b.probe}, step {b.step}, "
          f"Np/Nd {b.np_per_dim}, gamma {b.gamma:g})")
    print(f"  at {', '.join(f'{v:.6g}' for v in b.best_positions)}")
    print(f"  {rec.evaluations} evaluations in {rec.runs} runs, {rec.wall_time_s:.2f} s; wrote {out_dir}")


def cmd_bench(args):
    cfg = report.RunConfig(objective=args.name, dims=args.dims, cfo=_cfo_overrides(args))
    out = args.out or str(Path("vzopt_out") / cfg.objective)
    cfg.output_dir = out
    _print_record(run_config(cfg, out), out)
    return EXIT_OK


def cmd_list(args):
    for s in benchmarks.catalog(include_f7=True):
        best = "" if s.known_best is None else f"  max {s.known_best.value:g}"
        print(f"{s.name:18s} {s.dims:3d}-D{best}")
    return EXIT_OK


def _load_table(spec, z0, layout):
    if spec.startswith("builtin:"):
        return antenna.load_reference_table(spec.split(":", 1)[1], z0=z0)
    return antenna.read_table(spec, z0=z0, layout=layout)


def cmd_analyze(args):
    table = _load_table(args.table, args.z0, args.layout)
    bands = antenna.extract_bands(table, args.threshold)
    summary = antenna.summarize(table, *args.window)
    b_csv, s_csv = report.bands_csv(bands), report.summary_csv(summary)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bands.csv").write_text(b_csv)
        (out / "summary.csv").write_text(s_csv)
        print(f"{len(bands)} bands, {summary.n_rows} rows in window; wrote {out}")
    else:
        sys.stdout.write(b_csv + "\n" + s_csv)
    return EXIT_OK


def design_from_kv(kv):
    """BowtieDesign or YagiDesign plus frequency spec from design-file keys."""
    kv = dict(kv)
    kind = kv.pop("type", "").lower()
    freq = None
    if "freq" in kv:
        start, step, count = (float(v) for v in kv.pop("freq").split(","))
        freq = (start, step, int(count))

    def num(key, cast=float):
        try:
            return cast(kv.pop(key))
        except KeyError:
            raise ValidationError(f"design file lacks {key!r}") from None
        except ValueError:
            raise ValidationError(f"{key}: not a number") from None

    def nums(key):
        try:
            return tuple(float(v) for v in kv.pop(key).split(","))
        except KeyError:
            raise ValidationError(f"design file lacks {key!r}") from None
        except ValueError:
            raise ValidationError(f"{key}: not a list of numbers") from None

    if kind == "bowtie":
        d = nec.BowtieDesign(num("arm_len_m"), num("half_angle_deg"), num("load_seg", int),
                             num("r_load_ohm"), num("z0_ohm"))
    elif kind == "yagi":
        lengths, z0 = nums("lengths_wl"), num("z0_ohm")
        if "boom_wl" in kv:
            d = nec.YagiDesign.from_boom_positions(lengths, nums("boom_wl"), z0)
        else:
            d = nec.YagiDesign(lengths, nums("spacings_wl"), z0)
    else:
        raise ValidationError("design file needs type = bowtie or type = yagi")
    if kv:
        raise ValidationError(f"unknown design keys {sorted(kv)}")
    return d, freq


def cmd_necgen(args):
    design, freq = design_from_kv(report.parse_kv(Path(args.design).read_text(encoding="utf-8")))
    if isinstance(design, nec.BowtieDesign):
        deck = nec.gen_bowtie_deck(design, freq=freq or (200.0, 15.0, 1001))
    else:
        deck = nec.gen_yagi_deck(design, freq=freq or (200.0, 0.1, 1501))
    if args.output:
        Path(args.output).write_text(deck.text(), encoding="ascii")
        print(f"wrote {args.output} (file ID {deck.file_id})")
    else:
        sys.stdout.write(deck.text())
    return EXIT_OK


def cmd_necparse(args):
    text = Path(args.listing).read_text(encoding="ascii", errors="replace")
    res = nec.parse_nec_output(text, args.z0, expected_file_id=args.file_id,
                               forward=tuple(args.forward) if args.forward else None)
    if not res.run_ok:
        raise nec.EngineFailure(f"{args.listing}: no RUN TIME marker")
    t = res.table
    print("f_mhz,eff_pct,gmax_dbi,gmin_dbi,gfwd_dbi,rin_ohm,xin_ohm,vswr")
    for k in range(len(t)):
        print(",".join(f"{v:.2f}" for v in (t.f[k], t.eff[k], t.gmax[k], t.gmin[k], t.gfwd[k],
                                               t.rin[k], t.xin[k], t.vswr[k])))
    if args.window:
        sys.stdout.write("\n" + report.summary_csv(antenna.summarize(t, *args.window)))
    return EXIT_OK


def cmd_optimize(args):
    cfg = report.read_config(args.config)
    if args.engine:
        cfg.engine = args.engine
    elif not cfg.engine:
        cfg.engine = os.environ.get(ENGINE_ENV) or None
    out = args.out or cfg.output_dir
    cfg.output_dir = out
    _print_record(run_config(cfg, out), out)
    return EXIT_OK


COMMANDS = {
    "bench": cmd_bench,
    "list": cmd_list,
    "analyze": cmd_analyze,
    "necgen": cmd_necgen,
    "necparse": cmd_necparse,
    "optimize": cmd_optimize,
}


def exit_code(exc):
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, ValidationError):
        return EXIT_VALIDATION
    if isinstance(exc, EngineError):
        return EXIT_ENGINE
    return EXIT_INTERNAL


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.cmd](args)
    except (VzoptError, OSError) as exc:
        kind = "evaluation" if isinstance(exc, EvaluationError) else type(exc).__name__
        print(f"vzopt: {kind}: {exc}", file=sys.stderr)
        if args.verbose:
            log.exception("details")
        return exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
