"""Accuracy of the deformed Zh_mu orthogonality table as a function of the
cycle radius R (in units of 1/mu).

The pairing does not depend on R in exact arithmetic, but the basis values
on U(2)_R span many orders of magnitude when mu R is small, so the computed
table loses digits there.

    python3 scripts/zh_mu_conditioning.py --mu 0.5 1.0 --radii 0.2 0.3 0.5 0.7 0.9
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from quatlab.quadrature import build_u2_rule
from quatlab.zh_mu import zh_indices, zh_mu_basis_field


@dataclass
class StudyConfig:
    mu: list[float] = field(default_factory=lambda: [0.5, 1.0])
    radii: list[float] = field(default_factory=lambda: [0.2, 0.3, 0.5, 0.7, 0.9])
    two_l_max: int = 2
    k_range: int = 2


def orthogonality_error(mu: float, R: float, cfg: StudyConfig) -> tuple[float, float]:
    ktypes = [(k, tl) for k in range(-cfg.k_range, cfg.k_range + 1) for tl in range(cfg.two_l_max + 1)]
    zidx = zh_indices(ktypes)
    rule = build_u2_rule(R, cfg.two_l_max / 2, cfg.k_range, mu=mu)
    Z = rule.nodes
    F = np.stack([np.asarray(zh_mu_basis_field(i, "f", mu)(Z)).reshape(-1) for i in zidx], 1)
    G = np.stack([np.asarray(zh_mu_basis_field(i, "f'", mu)(Z)).reshape(-1) for i in zidx], 1)
    M = 1j / (2 * np.pi ** 3) * (F * rule.weights[:, None]).T @ G
    e = np.array([mu ** (-2 * i.idx.two_l - 4) / (i.idx.two_l + 1) for i in zidx])
    err = float(np.max(np.abs(M - np.diag(e)) / e[:, None]))
    spread = float(np.max(np.abs(F)) * np.max(np.abs(G)) / np.max(e))
    return err, spread


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--mu", type=float, nargs="+", default=StudyConfig().mu)
    p.add_argument("--radii", type=float, nargs="+", default=StudyConfig().radii, help="values of mu R")
    p.add_argument("--two-l-max", type=int, default=2)
    p.add_argument("--k-range", type=int, default=2)
    p.add_argument("--out", help="write the table as JSON")
    a = p.parse_args()
    cfg = StudyConfig(a.mu, a.radii, a.two_l_max, a.k_range)
    rows = []
    print(f"{'mu':>6s} {'mu R':>6s} {'max rel error':>14s} {'value spread':>13s}")
    for mu in cfg.mu:
        for r in cfg.radii:
            err, spread = orthogonality_error(mu, r / mu, cfg)
            rows.append({"mu": mu, "mu_R": r, "error": err, "spread": spread})
            print(f"{mu:6.2f} {r:6.2f} {err:14.2e} {spread:13.2e}")
    if a.out:
        with open(a.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
