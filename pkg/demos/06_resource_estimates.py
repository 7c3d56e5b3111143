#!/usr/bin/env python3
"""End-to-end resource estimation: window optimization to hardware footprint.

The full phase-estimation circuit replaces each window of s controlled point
additions by a 2^s-item table lookup, one uncontrolled point addition and a
measurement-based unlookup.  The window size is optimized per field and
metric, then the logical totals are converted to code distance, device size
and runtime for both architectures.
"""

from binshor.physical import AVParams, BaselineParams, av_estimate, baseline_estimate
from binshor.pipeline import pointadd_plan
from binshor.shor import AVWeights, optimize_window, pointadd_cost, round_sig

weights = AVWeights.load_default()

print("== windowed phase-estimation totals ==")
print(f"{'n':>4} {'s':>3} {'Toffoli':>9} {'s*':>3} {'Toffoli*':>9} "
      f"{'qubits':>7}  (* = 48 bits precomputed classically)")
for n in (163, 233, 283, 571):
    pa = pointadd_cost(pointadd_plan(n), weights)
    s, cost, _ = optimize_window(n, pa, "toffoli")
    s48, cost48, _ = optimize_window(n, pa, "toffoli", precomputed_bits=48)
    print(f"{n:>4} {s:>3} {round_sig(cost.toffoli):>9.3g} "
          f"{s48:>3} {round_sig(cost48.toffoli):>9.3g} {cost.qubits:>7}")

print("\n== baseline architecture (superconducting at 1 us, "
      "trapped-ion at 1 ms) ==")
print(f"{'n':>4} {'d':>3} {'phys qubits':>12} {'1 us':>9} {'1 ms':>10}")
for n in (163, 233, 283, 571):
    pa = pointadd_cost(pointadd_plan(n), weights)
    _, cost, _ = optimize_window(n, pa, "toffoli")
    fast = baseline_estimate(cost.qubits, cost.toffoli)
    slow = baseline_estimate(cost.qubits, cost.toffoli,
                             BaselineParams(code_cycle_time=1e-3))
    print(f"{n:>4} {fast.distance:>3} {round_sig(fast.device_size):>12.3g} "
          f"{fast.runtime_display:>9} {slow.runtime_display:>10}")

print("\n== photonic active-volume architecture ==")
print(f"{'n':>4} {'d':>3} {'modules 1us':>12} {'runtime':>9} "
      f"{'modules 10us':>13} {'runtime':>9}")
for n in (163, 233, 283, 571):
    pa = pointadd_cost(pointadd_plan(n), weights)
    _, cost, _ = optimize_window(n, pa, "active_volume", weights=weights)
    one = av_estimate(cost.active_volume, cost.qubits)
    ten = av_estimate(cost.active_volume, cost.qubits, AVParams(delay=1e-5))
    print(f"{n:>4} {one.distance:>3} {one.device_size:>12} "
          f"{one.runtime_display:>9} {ten.device_size:>13} "
          f"{ten.runtime_display:>9}")
