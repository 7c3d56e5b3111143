#!/usr/bin/env python3
"""Classical ground truth: binary polynomials, fields, and CRT constants.

Everything the circuit synthesizers consume is precomputed here: irreducible
polynomials, modulus sets with their correction counts, and the CRT
recombination constants.
"""

from binshor.gf2 import (
    BinaryPoly,
    FieldSpec,
    crt_constants,
    enumerate_irreducibles,
    field_inv,
    poly_mul_mod,
    validate_modulus_set,
)
from binshor.pipeline import modulus_set_for

print("== polynomials over F2 ==")
a = BinaryPoly.from_terms(1, 0)       # x + 1
b = BinaryPoly.from_terms(2, 0)       # x^2 + 1
m = BinaryPoly.from_terms(3, 1, 0)    # x^3 + x + 1
print(f"({a}) * ({b}) mod ({m}) = {poly_mul_mod(a, b, m)}")

f8 = FieldSpec(3, m)
x = BinaryPoly.from_terms(1)
print(f"inverse of {x} in GF(2^3): {field_inv(x, f8)}")

print("\n== irreducible polynomial counts by degree ==")
for d in range(1, 11):
    polys = enumerate_irreducibles(d)
    print(f"degree {d}: {len(polys)}  (first: {polys[0]})")

print("\n== modulus sets for the standardized fields ==")
for n in (163, 233, 283, 571):
    ms = modulus_set_for(n)
    omega = validate_modulus_set(ms, n)
    print(f"n={n}: {len(ms.factors)} factors, deg(m) = {ms.m.degree}, "
          f"correction coefficients = {omega}")

print("\n== CRT constants for a toy set ==")
ms = modulus_set_for(4)
for mi, qi in zip(ms.moduli, crt_constants(ms)):
    print(f"  m_i = {mi}:  q_i = {qi}")
