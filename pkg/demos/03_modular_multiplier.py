#!/usr/bin/env python3
"""The CRT-based modular multiplier: exact counts and an oracle sweep.

The multiplier splits |f,g,h> -> |f,g,h + f*g mod p> into residue products
modulo small coprime factors, recombines them through PLU-decomposed linear
maps, and (when the factor degrees do not cover the product) restores the
top coefficients with a small correction circuit.
"""

from binshor.circuit import pack_planes, simulate_planes, unpack_planes
from binshor.gf2 import BinaryPoly, poly_mul_mod
from binshor.pipeline import field_for, modmult_plan
from binshor.synth import synth_crt_modmult

print("== exact gate counts for the standardized fields ==")
print(f"{'n':>4} {'Toffoli':>9} {'CNOT':>9} {'swap':>6}")
for n in (163, 233, 283, 571):
    c = modmult_plan(n).counts()
    print(f"{n:>4} {c.toffoli:>9} {c.cnot:>9} {c.swap:>6}")

print("\n== exhaustive oracle check on GF(2^4) ==")
n = 4
field = field_for(n)
circ = synth_crt_modmult(modmult_plan(n))
inputs = list(range(1 << (3 * n)))
outs = unpack_planes(simulate_planes(circ, pack_planes(inputs, 3 * n)),
                     len(inputs))
mask = (1 << n) - 1
bad = 0
for v, o in zip(inputs, outs):
    f, g, h = v & mask, (v >> n) & mask, v >> (2 * n)
    want = h ^ poly_mul_mod(BinaryPoly(f), BinaryPoly(g), field.p).bits
    if o != f | (g << n) | (want << (2 * n)):
        bad += 1
print(f"all {len(inputs)} input triples "
      + ("reproduce the oracle" if bad == 0 else f"-> {bad} FAILURES"))
print(f"circuit: {circ}")
