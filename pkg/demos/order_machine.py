"""Order the atoms by choice, encode the ordered structure, simulate a TM.

    python demos/order_machine.py
"""
from icasm import (
    InputStructure, builtin_order_and_simulate, constructed_order, encode_ordered, even_ones_tm,
    explore, order_bounds, run, tape_contents, tm_run,
)

tm = even_ones_tm()
sig = (("R", 1),)
machine = builtin_order_and_simulate(tm, sig)
bounds = order_bounds(tm, sig)
inp = InputStructure(3, {"R": {(0,), (2,)}}, {"R": 1})

res = run(machine, inp, bounds)
order = constructed_order(res.final)
print("order chosen by the least-atom run:", " < ".join(f"a{i}" for i in order))
print("encoding:", encode_ordered(inp, order), " tape at halt:", tape_contents(res.final))
print("machine verdict:", res.outcome, " direct TM run:", tm_run(tm, encode_ordered(inp, order)))
print("steps", res.verdict.steps, "of", bounds.steps(inp.n), "; active", res.verdict.active_total,
      "of", bounds.active(inp.n))

# the encoding depends on the order, its number of ones does not
tree = explore(machine, inp, bounds)
for leaf in tree.leaves():
    o = constructed_order(leaf.state)
    print(f"  {' < '.join(f'a{i}' for i in o)}: {encode_ordered(inp, o)} -> {leaf.outcome}")
