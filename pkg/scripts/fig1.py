"""Straggler sweep: SBACC and BACC error against S, written as CSV and plot data."""

import argparse
from pathlib import Path

from sbacc import harness as H
from sbacc.config import load_config
from sbacc.protocol import Scheme

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=HERE / "configs" / "fig1.cfg")
    ap.add_argument("--values", default="0,5,10,15,20")
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="fig1")
    args = ap.parse_args()
    cfg = load_config(args.config, trials=args.trials)
    csv_path = Path(f"{args.out}.csv")
    rows = H.run_sweep(H.SweepSpec(cfg, "S", H._int_list(args.values), (Scheme.SBACC, Scheme.BACC),
                                   str(csv_path), args.workers))
    H.emit_figure_data(csv_path, "fig1", f"{args.out}.dat")
    db = {(r["axis_value"], r["scheme"], r["function"]): r["avg_rel_error_db"] for r in rows}
    print(f"{'S':>3} {'function':>8} {'SBACC dB':>10} {'BACC dB':>10} {'gap':>6}")
    for s in H._int_list(args.values):
        for fn in cfg.function_list:
            a, b = db[(s, "sbacc", fn)], db[(s, "bacc", fn)]
            print(f"{s:>3} {fn:>8} {a:>10.2f} {b:>10.2f} {a - b:>6.2f}")


if __name__ == "__main__":
    main()
