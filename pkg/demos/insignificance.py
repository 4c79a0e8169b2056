"""Local versus global insignificance of choice, and what the local check reports.

    python demos/insignificance.py
"""
import json

from icasm import (
    FULL, InputStructure, brute_force_global_ic, builtin_matching, builtin_order_and_simulate,
    builtin_red_choice, check_run_local_ic, default_bounds, even_ones_tm, order_bounds,
)

order = builtin_order_and_simulate(even_ones_tm())
rep = check_run_local_ic(order, InputStructure.naked(4), order_bounds(even_ones_tm()))
print(f"order machine, 4 atoms: {rep.verdict} ({rep.states_checked} states)")

red = builtin_red_choice()
inp = InputStructure(3, {"Red": {(0,)}}, {"Red": 1})
rep = check_run_local_ic(red, inp, default_bounds("red_choice"))
print("\nred choice, one red atom of three:")
print(json.dumps(rep.to_json(), indent=2))
print("global:", brute_force_global_ic(red, inp, default_bounds("red_choice"), with_reason=True))

# choice is globally insignificant here, but the root choices a0 / a1 are only
# related by the double swap (a0 a1)(a2 a3)
m, b = builtin_matching(), default_bounds("matching")
k = InputStructure(4, {"Boys": {(0,), (1,)}, "Girls": {(2,), (3,)}, "E": {(0, 3), (1, 2)}},
                   {"Boys": 1, "Girls": 1, "E": 2})
print("\nmatching a0-a3, a1-a2:")
print("  transpositions:", check_run_local_ic(m, k, b).verdict)
print("  full search:   ", check_run_local_ic(m, k, b, FULL).verdict)
print("  global:        ", brute_force_global_ic(m, k, b))
