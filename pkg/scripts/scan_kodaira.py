"""Scan torsion vectors on the Kodaira example and compare duality conventions.

For each sign case, checks a grid of integer torsion vectors against the
verdict. Then recomputes the horizontal system at a1=a2=0 with the
alternative conventions "Lee vector -2*epsilon1*A3" and "tau dual to the
torsion 3-form in the frame orientation", which yields the system
{(1-epsilon1)*a4^2, (1-epsilon1)*(2-a3)*a4}.

Usage: python3 scripts/scan_kodaira.py [--radius N]
"""

from __future__ import annotations

import argparse
from fractions import Fraction
from itertools import product

from twistorharm.config import builtin
from twistorharm.exterior import DIM
from twistorharm.harmonicity import HARMONIC, ConstraintSystem, Equation, check_candidate, verdict
from twistorharm.scalars import format_scalar, substitute
from twistorharm.torsion import curvature_data, make_connection, make_torsion

SIGNS = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def grid_scan(radius: int) -> None:
    cfg = builtin("kodaira")
    h = cfg.hermitian()
    v = verdict(h, cfg.tau, cfg.params)
    values = range(-radius, radius + 1)
    for e1, e2 in SIGNS:
        total = harmonic = 0
        off_locus = 0
        for a in product(values, repeat=4):
            assignment = dict(zip(("a1", "a2", "a3", "a4"), a), epsilon1=e1, epsilon2=e2)
            ok = check_candidate(v, assignment).status == HARMONIC
            total += 1
            harmonic += ok
            off_locus += ok and (a[0] != 0 or a[1] != 0)
        print(f"epsilon1={e1:+d}, epsilon2={e2:+d}: {harmonic}/{total} harmonic, {off_locus} off a1=a2=0")


def alternative_conventions() -> None:
    cfg = builtin("kodaira")
    h = cfg.hermitian()
    conn = make_connection(h.algebra, make_torsion(cfg.tau), h.levi_civita)
    curv, _ = curvature_data(conn, h, check=False)
    red = {"a1": 0, "a2": 0}
    params = cfg.params
    e1 = params.var("epsilon1")
    B_alt = [0, 0, -2 * e1, 0]
    tau = [params.var(f"a{k}") for k in range(1, 5)]
    polys = []
    for z in range(DIM):
        total = Fraction(0)
        for k in range(DIM):
            total = total + (curv.ricci[z][k] - curv.star_ricci[z][k]) * (B_alt[k] - tau[k])
        polys.append(substitute(total, red))
    for s in (1, -1):
        eqs = [Equation(substitute(p, {"epsilon1": s, "epsilon2": 1}), f"Z=A{z + 1}") for z, p in enumerate(polys)]
        system = ConstraintSystem.build(eqs)
        shown = ", ".join(format_scalar(p) for p in system.polynomials) or "no equations"
        print(f"alternative conventions, epsilon1={s:+d}: {shown}")
    print("unsimplified:", "; ".join(format_scalar(p) for p in polys))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--radius", type=int, default=2, help="grid radius for each torsion component")
    args = parser.parse_args()
    grid_scan(args.radius)
    alternative_conventions()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
