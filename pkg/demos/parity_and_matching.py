"""Run the two built-in example machines and look at their run trees.

    python demos/parity_and_matching.py
"""
from icasm import (
    InputStructure, SchedulingMode, builtin_matching, builtin_parity, default_bounds, run,
)


def parity():
    p, b = builtin_parity(), default_bounds("parity")
    print("parity: accept iff the number of atoms is odd")
    for n in range(7):
        res = run(p, InputStructure.naked(n), b)
        tree = run(p, InputStructure.naked(n), b, SchedulingMode.EXHAUSTIVE)
        verdicts = {str(k): v for k, v in tree.verdicts.items()}
        print(f"  n={n}: {res.outcome}  steps={res.verdict.steps}  active={res.verdict.active_total}"
              f"  tree: {len(tree.nodes)} states, leaves {verdicts}")


def matching():
    m, b = builtin_matching(), default_bounds("matching")
    # a0,a1 boys; a2,a3 girls; a0 likes both, a1 only a2
    inp = InputStructure(4, {"Boys": {(0,), (1,)}, "Girls": {(2,), (3,)},
                             "E": {(0, 2), (0, 3), (1, 2)}}, {"Boys": 1, "Girls": 1, "E": 2})
    res = run(m, inp, b)
    print(f"\nmatching on a path a3-a0-a2-a1: {res.outcome} after {res.verdict.steps} steps")
    print("  final matching:", res.final.universe.format(res.final.get("partial_match")))
    tree = run(m, inp, b, SchedulingMode.EXHAUSTIVE)
    print(f"  every run: {dict((str(k), v) for k, v in tree.verdicts.items())}")


if __name__ == "__main__":
    parity()
    matching()
