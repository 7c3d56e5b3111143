#!/usr/bin/env python3
"""The circuit intermediate representation and its bitstring simulator.

Every gate in scope permutes computational basis states, so correctness is
checked by exact simulation rather than amplitude tracking.
"""

from binshor.circuit import (
    Circuit,
    Register,
    counts,
    lower_mcx,
    parse,
    serialize,
    simulate,
)

print("== build, simulate, reverse ==")
c = Circuit([Register("a", 2), Register("b", 1, "flag")])
c.cnot(0, 1)
c.mcx([(0, True), (1, False)], 2)    # closed and open controls
print(serialize(c))
print("simulate '100' ->", simulate(c, "100"))
print("round trip:", simulate(c.reversed(), simulate(c, "100")))

print("== multi-controlled lowering ==")
big = Circuit([Register("q", 6)])
big.mcx([(i, True) for i in range(5)], 5)
low = lower_mcx(big)
cc = counts(low)
print(f"5-control NOT lowers to {cc.toffoli} Toffolis, "
      f"{cc.ccx_uncompute} measurement-based uncomputations, "
      f"{cc.ancilla_clean} clean ancillas")

print("\n== text format round trip ==")
text = serialize(low)
again = parse(text)
print("parsed equals lowered:", again == low)
print("\nfirst lines:")
print("\n".join(text.splitlines()[:6]))
