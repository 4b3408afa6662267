"""Run the checked analysis on every fixture and print a one-line summary each."""

import sys
import time
from pathlib import Path

from latmax.analysis import analyze_checked, failed_verdicts
from latmax.config import parse_spec
from latmax.errors import LatmaxError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def main() -> int:
    bad = 0
    for path in sorted(FIXTURES.glob("*.json")):
        t = time.perf_counter()
        try:
            rep = analyze_checked(parse_spec(path)).report
        except LatmaxError as exc:
            print(f"{path.name:38s} exit {exc.exit_code}: {exc}")
            continue
        cx = rep["complex"]
        failed = failed_verdicts(rep)
        bad += bool(failed)
        names = ",".join(f["name"] for f in rep["ribet"]["factors"])
        print(f"{path.name:38s} vertices={len(cx['vertices']):2d} maximal={cx['maximal_count']} "
              f"dim={cx['dimension']} factors={names} "
              f"{'FAIL ' + ','.join(failed) if failed else 'all PASS'} ({time.perf_counter() - t:.2f}s)")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
