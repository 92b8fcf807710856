"""Run the TCP master and five local worker processes with scripted faults."""

import argparse
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
FAULTS = ["honest", "adversary:1e4", "honest", "straggler", "honest"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--port", type=int, default=7070)
    ap.add_argument("--config", default=HERE / "configs" / "net5.cfg")
    ap.add_argument("--deadline", type=float, default=3.0)
    args = ap.parse_args()
    addr = f"127.0.0.1:{args.port}"
    master = subprocess.Popen([sys.executable, "-c", "from sbacc.net_runner import master_main; "
                               "raise SystemExit(master_main())", "--listen", addr,
                               "--config", str(args.config), "--deadline", str(args.deadline)])
    workers = [subprocess.Popen([sys.executable, "-c", "from sbacc.net_runner import worker_main; "
                                 "raise SystemExit(worker_main())", "--connect", addr,
                                 "--index", str(i), "--fault", fault, "--seed", "5"])
               for i, fault in enumerate(FAULTS)]
    codes = [w.wait() for w in workers]
    print(f"worker exit codes: {codes}")
    sys.exit(master.wait())


if __name__ == "__main__":
    main()
