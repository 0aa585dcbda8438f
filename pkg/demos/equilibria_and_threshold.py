"""Walk through the steady-state analysis for both bundled scenarios.

For each scenario this prints the derived constants, the uninfected level
found by the quadratic solver, the basic reproduction number computed by the
closed form and by the next-generation spectral route, and the infected
equilibrium (when one exists) together with its vector-field residual.
"""

from hcvdyn import (
    bundled_scenarios,
    derive_constants,
    infected_equilibrium,
    parse_scenario,
    r0,
    r0_spectral,
    uninfected_equilibrium,
)


def describe(name, params):
    constants = derive_constants(params)
    uninfected = uninfected_equilibrium(params)
    closed = r0(params)
    spectral = r0_spectral(params).rho

    print(f"=== scenario {name} ===")
    print(f"effective loss rate delta      : {constants.delta}")
    print(f"logistic pressure constant A   : {constants.A}")
    print(f"uninfected level T0            : {uninfected.state.T}")
    print(f"residual at E0                 : {uninfected.residual_norm:.3e}")
    print(f"r0 (closed form)               : {closed}")
    print(f"r0 (spectral radius)           : {spectral}")
    print(f"agreement                      : {abs(closed - spectral):.3e}")

    report = infected_equilibrium(params)
    print(f"regime                         : {report.regime}")
    for flag in report.disagreements:
        print(f"flagged criterion disagreement : {flag}")
    for point in report.candidates:
        T, I, V = point.state
        print(f"infected equilibrium           : T={T}  I={I}  V={V}")
        print(f"residual at E*                 : {point.residual_norm:.3e}")
        print(f"radical vs root (relative)     : {report.closed_form_rel_diff:.3e}")
    if not report.candidates:
        print("infected equilibrium           : none (subthreshold)")
    print()


def main():
    for name, text in sorted(bundled_scenarios().items()):
        describe(name, parse_scenario(text, source=name).params)


if __name__ == "__main__":
    main()
