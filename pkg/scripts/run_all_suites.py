"""Run every registered suite with its default settings and write one JSON
report per suite plus a summary table.

    python3 scripts/run_all_suites.py --out-dir reports --seed 0
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from quatlab.runner import SuiteConfig, list_suites, run_suite


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="reports")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--only", nargs="*", help="subset of suite names")
    a = p.parse_args()
    out = Path(a.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = a.only or [n for n, _, _ in list_suites()]
    summary, total = [], 0.0
    for name in names:
        rep = run_suite(SuiteConfig(name, seed=a.seed, workers=a.workers))
        rep.write_json(out / f"{name}.json")
        total += rep.wall_time
        summary.append({"suite": name, "passed": rep.passed, "n_cases": len(rep.cases),
                        "n_failed": rep.n_failed, "wall_time": rep.wall_time})
        print(f"{'PASS' if rep.passed else 'FAIL'}  {name:<26s} {len(rep.cases):3d} cases  {rep.wall_time:7.1f}s",
              flush=True)
    (out / "summary.json").write_text(json.dumps({"seed": a.seed, "total_time": total, "suites": summary},
                                                 indent=2) + "\n")
    print(f"total {total:.1f}s, {sum(not s['passed'] for s in summary)} suite(s) failed")
    return 0 if all(s["passed"] for s in summary) else 1


if __name__ == "__main__":
    sys.exit(main())
