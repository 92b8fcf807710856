"""Adversary sweep: SBACC, BACC and localize-and-discard error against A."""

import argparse
from pathlib import Path

from sbacc import harness as H
from sbacc.config import load_config

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=HERE / "configs" / "fig2.cfg")
    ap.add_argument("--values", default="0,1,2,3,4,5")
    ap.add_argument("--trials", type=int, default=None)
    ap.add_argument("--functions", default=None, help="comma-separated subset")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="fig2")
    args = ap.parse_args()
    functions = tuple(args.functions.split(",")) if args.functions else None
    cfg = load_config(args.config, trials=args.trials, functions=functions)
    csv_path = Path(f"{args.out}.csv")
    rows = H.run_sweep(H.SweepSpec(cfg, "A", H._int_list(args.values), output_path=str(csv_path),
                                   workers=args.workers))
    H.emit_figure_data(csv_path, "fig2", f"{args.out}.dat")
    print(f"{'A':>2} {'function':>8} {'SBACC':>8} {'DISCARD':>8} {'BACC':>8} {'p_loc':>6} {'bound':>9}")
    by = {(r["axis_value"], r["scheme"], r["function"]): r for r in rows}
    for a in H._int_list(args.values):
        for fn in cfg.function_list:
            s, d, b = (by[(a, k, fn)] for k in ("sbacc", "discard", "bacc"))
            print(f"{a:>2} {fn:>8} {s['avg_rel_error_db']:>8.2f} {d['avg_rel_error_db']:>8.2f} "
                  f"{b['avg_rel_error_db']:>8.2f} {s['p_loc_hat']:>6.3f} {s['bound_total']:>9.2e}")


if __name__ == "__main__":
    main()
