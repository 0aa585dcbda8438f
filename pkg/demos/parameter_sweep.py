"""Sweep parameters, export the grid, and locate the epidemic threshold.

A one-dimensional sweep over the infection rate shows r0 crossing 1 and the
infected equilibrium appearing; bisection then pins the crossing down to
machine precision.  A two-dimensional sweep over infection rate and cure
rate is written as CSV into demos/out/.
"""

from dataclasses import replace
from pathlib import Path

from hcvdyn import (
    SCENARIO_S1,
    Axis,
    SweepSpec,
    run_sweep,
    threshold_locate,
    write_sweep_csv,
)

OUT = Path(__file__).parent / "out"


def main():
    OUT.mkdir(exist_ok=True)
    base = SCENARIO_S1

    axis = Axis(name="beta", lo=1e-8, hi=1e-6, n=9, scale="log")
    spec = SweepSpec(base=base, axis1=axis, outputs=("r0", "regime", "estar_T"))
    result = run_sweep(spec)

    print("=== 1D sweep over the infection rate ===")
    print(f"{'beta':>12}  {'r0':>10}  {'regime':<22}  {'estar_T':>14}")
    for cell in result.cells:
        beta = cell.axis_values[0]
        r0_val = cell.values["r0"]
        estar_T = cell.values["estar_T"]
        estar = f"{estar_T:.6g}" if estar_T == estar_T else "-"
        print(f"{beta:12.3e}  {r0_val:10.5f}  {cell.values['regime']:<22}  {estar:>14}")

    crossing = threshold_locate(base, axis, target="r0_eq_1")
    print(f"\nthreshold r0 = 1 at beta = {crossing.axis_value}")
    print(f"r0 at the located value     : {crossing.r0_at_value}")

    grid = SweepSpec(
        base=replace(base, beta=1e-7),
        axis1=Axis(name="beta", lo=1e-8, hi=1e-6, n=7, scale="log"),
        axis2=Axis(name="q", lo=0.0, hi=0.5, n=5, scale="linear"),
        outputs=("r0", "regime"),
    )
    table = run_sweep(grid)
    csv_path = OUT / "beta_q_sweep.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        write_sweep_csv(table, fh)
    statuses = {}
    for cell in table.cells:
        statuses[cell.status] = statuses.get(cell.status, 0) + 1
    print(f"\n=== 2D sweep written to {csv_path} ===")
    print(f"cells by status: {statuses}")


if __name__ == "__main__":
    main()
