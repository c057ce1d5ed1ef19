"""Recompute the worked examples for fibres with an involution, then the
sigma = -1 semi-stable cases. Prints one line per case."""

import argparse
from dataclasses import dataclass

from neron.fibre import make_cycle_fixture, make_hyperelliptic_fixture
from neron.jacobian import theorem_pipeline
from neron.semistable import UniformizationDatum, semistable_report


@dataclass
class Config:
    max_cycle_half: int = 5
    max_genus: int = 7


def fibre_line(name, f):
    r = theorem_pipeline(f)
    return (
        f"{name:10s} phi(k^s) = {str(r.phi_geometric):6s} phi(k) = {str(r.phi_rational_oracle):4s} "
        f"Ker/Im = {str(r.sub_kernel_mod_image):4s} d={r.d} d'={r.dprime} n={r.n} q={r.q} "
        f"quotient={r.quotient_order} consistent={r.consistent}"
    )


def main(cfg: Config):
    for half in range(2, cfg.max_cycle_half + 1):
        print(fibre_line(f"cycle {2 * half}", make_cycle_fixture(2 * half, involution=True)))
    for g in range(1, cfg.max_genus + 1):
        print(fibre_line(f"hyp g={g}", make_hyperelliptic_fixture(g)))
    for p in (3, 4, 8):
        r = semistable_report(UniformizationDatum.from_data(1, [[-1]], [[-1]], [[p]]))
        print(
            f"sigma=-1 P=({p})  phi_A = {r.phi_A}  phi_A(k) = {r.phi_A_rational}  "
            f"Sigma = {r.sigma_subgroup}  H^1 = {r.h1_M}  image = {r.obstruction_image}"
        )


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-cycle-half", type=int, default=Config.max_cycle_half)
    ap.add_argument("--max-genus", type=int, default=Config.max_genus)
    a = ap.parse_args()
    main(Config(a.max_cycle_half, a.max_genus))
