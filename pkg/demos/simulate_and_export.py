"""Integrate both bundled scenarios and export CSV trajectories plus SVG plots.

Runs the adaptive integrator from a small inoculum, reports the invariant
monitor and the convergence verdict against the predicted attractor, and
writes one CSV and three single-series SVG files per scenario into
demos/out/.
"""

from pathlib import Path

from hcvdyn import (
    SCENARIO_S1,
    SCENARIO_S2,
    IntegratorConfig,
    State,
    check_invariants,
    convergence_report,
    integrate,
    render_line_svg,
    write_trajectory_csv,
)

OUT = Path(__file__).parent / "out"
START = State(1e3, 2.0, 1.0)


def run(name, params):
    config = IntegratorConfig(t_end=1000.0)
    trajectory = integrate(params, START, config)

    print(f"=== scenario {name} ===")
    final = trajectory.final_state
    print(f"steps taken / rejected : {trajectory.steps_taken} / {trajectory.steps_rejected}")
    print(f"final state            : T={final.T}  I={final.I}  V={final.V}")

    summary = check_invariants(trajectory)
    print(f"invariant violations   : {summary.counts}")
    print(f"benign dips clipped    : {summary.benign_dips}")
    if trajectory.bounds.applicable:
        print(f"ceiling on T + I       : {trajectory.bounds.t_tilde0}")
        print(f"ceiling on V           : {trajectory.bounds.lambda0}")
    else:
        print("ceilings               : not applicable (infected cells proliferate faster)")

    verdict = convergence_report(params, trajectory)
    print(f"attractor              : {verdict.attractor}")
    print(f"relative distance      : {verdict.rel_distance:.3e}")
    print(f"converged              : {verdict.converged}")

    csv_path = OUT / f"{name}.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        write_trajectory_csv(trajectory, fh)
    print(f"wrote {csv_path}")

    for column, label in ((0, "T"), (1, "I"), (2, "V")):
        svg = render_line_svg(trajectory.times, trajectory.states[:, column], label)
        svg_path = OUT / f"{name}_{label}.svg"
        svg_path.write_text(svg, encoding="utf-8")
        print(f"wrote {svg_path}")
    print()


def main():
    OUT.mkdir(exist_ok=True)
    run("s1", SCENARIO_S1)
    run("s2", SCENARIO_S2)


if __name__ == "__main__":
    main()
