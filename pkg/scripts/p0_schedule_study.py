"""Error of the regularised projector P0 under different limit schedules.

For each schedule, evaluates P0 on Zh basis functions at random points of
U(2)_R and reports the worst error against the exact projection (f itself
for Zh0 functions, 0 otherwise) together with the extrapolation estimate.

    python3 scripts/p0_schedule_study.py --points 5 --out p0_study.json
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from quatlab.algebra import random_u2_point
from quatlab.errors import QuatlabError
from quatlab.projectors import HALVING_SCHEDULE, LimitSchedule, P_zero_eval
from quatlab.spaces import basis_field, classify, zh_indices


@dataclass
class StudyConfig:
    points: int = 5
    R: float = 1.0
    max_two_l: int = 1
    seed: int = 0


SCHEDULES = {
    "default": LimitSchedule(),
    "halving": HALVING_SCHEDULE,
    "default-order1": LimitSchedule(order=1),
    "tight": LimitSchedule(s_values=(0.9995, 0.99975, 0.999875), theta_values=(0.2, 0.1, 0.05)),
}


def study(cfg: StudyConfig) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    pts = [random_u2_point(rng, cfg.R) for _ in range(cfg.points)]
    ktypes = [(k, tl) for tl in range(cfg.max_two_l + 1) for k in range(-tl - 3, 2)]
    rows = []
    for name, sched in SCHEDULES.items():
        worst, worst_est, failures = 0.0, 0.0, 0
        for i in zh_indices(ktypes):
            f = basis_field("Zh", i)
            keep = classify(i.k, i.idx.two_l) == "zero"
            for Z in pts:
                try:
                    v, info = P_zero_eval(f, Z, cfg.R, sched, return_info=True)
                except QuatlabError:
                    failures += 1
                    continue
                ref = complex(f(Z)) if keep else 0.0
                worst = max(worst, abs(v - ref) / max(1.0, abs(ref)))
                worst_est = max(worst_est, info["error_estimate"])
        rows.append({"schedule": name, "worst_error": worst, "worst_estimate": worst_est,
                     "failures": failures})
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f, v in asdict(StudyConfig()).items():
        p.add_argument(f"--{f.replace('_', '-')}", type=type(v), default=v)
    p.add_argument("--out", help="write the table as JSON")
    a = vars(p.parse_args())
    out = a.pop("out")
    cfg = StudyConfig(**a)
    rows = study(cfg)
    print(f"{'schedule':<16s} {'worst error':>12s} {'estimate':>10s} {'failures':>9s}")
    for r in rows:
        print(f"{r['schedule']:<16s} {r['worst_error']:12.2e} {r['worst_estimate']:10.2e} {r['failures']:9d}")
    if out:
        with open(out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
