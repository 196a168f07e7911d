#!/usr/bin/env python3
"""Scan the renormalized vacuum-polarization susceptibility over k^2.

Prints a table of Re/Im R_obs together with the low-momentum slope and the
Kramers-Kronig reconstruction error, and optionally writes a CSV.
"""
import argparse

import numpy as np

from keldrot.diracsea import DiracSeaSpec, R_obs, kramers_kronig_real_part
from keldrot.serialization import momentum_table_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--mu0", type=float, default=1.0)
    ap.add_argument("--alpha", type=float, default=7.2973525693e-3)
    ap.add_argument("--k2-min", type=float, default=-20.0)
    ap.add_argument("--k2-max", type=float, default=20.0)
    ap.add_argument("--n", type=int, default=21)
    ap.add_argument("--out", help="optional CSV path")
    args = ap.parse_args()

    spec = DiracSeaSpec(mu0=args.mu0, alpha=args.alpha)
    k2 = np.linspace(args.k2_min, args.k2_max, args.n)
    vals = np.array([R_obs(s, spec) for s in k2])
    kk = np.array([kramers_kronig_real_part(s, spec) for s in k2])

    slope = R_obs(1e-4 * args.mu0 ** 2, spec).real / (1e-4 * args.mu0 ** 2)
    print(f"low-k slope R/k^2 = {slope:.6e}  "
          f"(alpha/(15 pi mu0^2) = {args.alpha / (15 * np.pi * args.mu0 ** 2):.6e})")
    print(f"{'k^2':>10s} {'Re R':>14s} {'Im R':>14s} {'KK resid':>10s}")
    for s, v, r in zip(k2, vals, kk):
        print(f"{s:10.3f} {v.real:14.6e} {v.imag:14.6e} {abs(r - v.real):10.2e}")

    if args.out:
        with open(args.out, "w") as fh:
            fh.write(momentum_table_to_csv(
                {"k2": k2, "R_obs": vals, "kk_real": kk},
                header_comment="renormalized vacuum polarization scan"))
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
