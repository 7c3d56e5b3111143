"""Convenience builders wiring configs into synthesis plans.

Used by the CLI, the demos and the test suite so everything resolves the
same data files the same way.
"""

from __future__ import annotations

from functools import lru_cache

from .datafiles import (
    data_dir,
    load_chain,
    load_formula,
    load_inner_modulus_set,
)
from .ecc import CurveSpec, PointAddPlan
from .gf2 import BinaryPoly, FieldSpec, GF2Error, parse_modulus_set
from .synth import InversionPlan, ModmultPlan


def load_formulas() -> dict:
    return {d: load_formula(d) for d in range(1, 9)}


def clear_caches():
    for fn in (_cached_formulas, modmult_plan, field_for, inversion_plan,
               pointadd_plan):
        fn.cache_clear()


@lru_cache(maxsize=None)
def _cached_formulas():
    return load_formulas()


def modulus_set_for(n: int):
    """Standard sets for the named fields, toy sets for small test fields."""
    path = data_dir() / f"modsets/{n}.txt"
    if path.exists():
        return parse_modulus_set(path.read_text())
    toy = data_dir() / f"modsets/toy{n}.txt"
    if toy.exists():
        return parse_modulus_set(toy.read_text())
    raise FileNotFoundError(f"no modulus set for n = {n}: tried {path} and {toy}")


@lru_cache(maxsize=None)
def modmult_plan(n: int, poly_bits: int | None = None) -> ModmultPlan:
    field = field_for(n, poly_bits)
    return ModmultPlan(n, field.p, modulus_set_for(n), _cached_formulas(),
                       inner_sets=load_inner_modulus_set)


@lru_cache(maxsize=None)
def field_for(n: int, poly_bits: int | None = None) -> FieldSpec:
    if poly_bits is not None:
        return FieldSpec(n, BinaryPoly(poly_bits))
    try:
        return FieldSpec.standard(n)
    except GF2Error:
        from .gf2 import enumerate_irreducibles

        return FieldSpec(n, enumerate_irreducibles(n)[0])


@lru_cache(maxsize=None)
def inversion_plan(n: int, clearing: bool = True,
                   poly_bits: int | None = None) -> InversionPlan:
    return InversionPlan(field_for(n, poly_bits), load_chain(n),
                         modmult_plan(n, poly_bits), clearing=clearing)


@lru_cache(maxsize=None)
def pointadd_plan(n: int, a_bits: int = 1, b_bits: int = 1,
                  poly_bits: int | None = None) -> PointAddPlan:
    field = field_for(n, poly_bits)
    curve = CurveSpec(field, BinaryPoly(a_bits), BinaryPoly(b_bits))
    return PointAddPlan(curve, modmult_plan(n, poly_bits),
                        inversion_plan(n, True, poly_bits))
