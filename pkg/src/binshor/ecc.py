"""Binary elliptic curve group law (classical oracle) and the in-place,
exception-complete reversible point-addition circuit.

The classical side implements the curve group law with all exceptional
cases and the window tables consumed by the phase-estimation structure.
The circuit side synthesizes the six-stage point addition: flag logic,
slope computation, coordinate updates, slope uncomputation, and the
exceptional-case repairs, using the arithmetic plans from
:mod:`binshor.synth`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Register
from .gf2 import BinaryPoly, FieldSpec, GF2Error, field_inv
from .synth import (
    CountSink,
    InversionPlan,
    ModmultPlan,
    emit_addition,
    emit_block,
    emit_controlled_addition,
    emit_controlled_constants,
    emit_inplace_linear,
    _single_square_plu,
)


class CurveError(GF2Error):
    pass


@dataclass(frozen=True)
class CurveSpec:
    """Ordinary binary curve y^2 + xy = x^3 + a x^2 + b over GF(2^n)."""

    field: FieldSpec
    a: BinaryPoly
    b: BinaryPoly

    def __post_init__(self):
        if self.b.is_zero():
            raise CurveError("b must be nonzero (ordinary curve)")

    def contains(self, pt: "ECPoint") -> bool:
        if pt.is_infinity():
            return True
        f = self.field
        x, y = pt.x, pt.y
        lhs = f.mul(y, y) + f.mul(x, y)
        rhs = f.mul(f.mul(x, x), x) + f.mul(self.a, f.mul(x, x)) + self.b
        return lhs == rhs

    def points(self) -> list["ECPoint"]:
        """All affine points plus the point at infinity (brute force)."""
        pts = [INFINITY]
        for xv in range(1 << self.field.n):
            for yv in range(1 << self.field.n):
                pt = ECPoint(BinaryPoly(xv), BinaryPoly(yv))
                if not pt.is_infinity() and self.contains(pt):
                    pts.append(pt)
        return pts


@dataclass(frozen=True)
class ECPoint:
    """Affine point; (0, 0) represents the point at infinity."""

    x: BinaryPoly
    y: BinaryPoly

    def is_infinity(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def neg(self) -> "ECPoint":
        if self.is_infinity():
            return self
        return ECPoint(self.x, self.y + self.x)


INFINITY = ECPoint(BinaryPoly(0), BinaryPoly(0))


def ec_add_classical(p1: ECPoint, p2: ECPoint, curve: CurveSpec) -> ECPoint:
    """Group law with all exceptional branches."""
    for p in (p1, p2):
        if not curve.contains(p):
            raise CurveError(f"point ({p.x}, {p.y}) is not on the curve")
    if p2.is_infinity():
        return p1
    if p1.is_infinity():
        return p2
    f = curve.field
    if p1 == p2.neg():
        return INFINITY
    if p1 == p2:
        # doubling; x2 != 0 here since x2 = 0 would be the self-inverse case
        lam = p2.x + f.mul(p2.y, f.inv(p2.x))
        x3 = f.mul(lam, lam) + lam + curve.a
        y3 = f.mul(p2.x, p2.x) + f.mul(lam + BinaryPoly(1), x3)
        return ECPoint(x3, y3)
    lam = f.mul(p1.y + p2.y, f.inv(p1.x + p2.x))
    x3 = f.mul(lam, lam) + lam + p1.x + p2.x + curve.a
    y3 = f.mul(p2.x + x3, lam) + x3 + p2.y
    return ECPoint(x3, y3)


def ec_scalar_mul(k: int, p: ECPoint, curve: CurveSpec) -> ECPoint:
    """Double-and-add; [0]P is the point at infinity."""
    if k < 0:
        raise CurveError("scalar must be non-negative")
    acc = INFINITY
    base = p
    while k:
        if k & 1:
            acc = ec_add_classical(acc, base, curve)
        base = ec_add_classical(base, base, curve)
        k >>= 1
    return acc


def slope_for(pt: ECPoint, field: FieldSpec) -> BinaryPoly:
    """Doubling slope stored with a table entry: x + y/x, and 0 when x = 0
    (the flag logic makes the value irrelevant there)."""
    if pt.x.is_zero():
        return BinaryPoly(0)
    return pt.x + field.mul(pt.y, field_inv(pt.x, field))


@dataclass(frozen=True)
class WindowTable:
    s: int
    entries: tuple[tuple[ECPoint, BinaryPoly], ...]


def build_window_table(r: ECPoint, s: int, curve: CurveSpec) -> WindowTable:
    """Entries ([q]R, slope) for q in [0, 2^s)."""
    if s < 1:
        raise CurveError("window size must be >= 1")
    entries = []
    acc = INFINITY
    for q in range(1 << s):
        entries.append((acc, slope_for(acc, curve.field)))
        acc = ec_add_classical(acc, r, curve)
    return WindowTable(s, tuple(entries))


# -- equality-test circuit -----------------------------------------------------

def emit_equality_test(sink, aw, bw, target, extra_controls=(),
                       open_target_value=True):
    """Flip ``target`` iff registers a and b are equal (under any extra
    closed/open controls): bitwise-CNOT conjugated open-control MCX."""
    for a, b in zip(aw, bw):
        sink.cnot(a, b)
    controls = [(b, False) for b in bw] + list(extra_controls)
    sink.mcx(controls, target)
    for a, b in zip(aw, bw):
        sink.cnot(a, b)


def synth_equality_test(n: int, extra_controls: int = 0) -> Circuit:
    circ = Circuit()
    aw = circ.add_register(Register("a", n))
    bw = circ.add_register(Register("b", n))
    extras = (circ.add_register(Register("c", extra_controls, "flag"))
              if extra_controls else [])
    t = circ.add_register(Register("flag", 1, "flag"))[0]
    emit_equality_test(circ, aw, bw, t,
                       extra_controls=[(c, True) for c in extras])
    return circ


# -- the point-addition circuit -------------------------------------------------

class PointAddPlan:
    """Precomputed data for one field's point-addition circuit."""

    def __init__(self, curve: CurveSpec, modmult: ModmultPlan,
                 inversion: InversionPlan):
        if not inversion.clearing:
            raise CurveError("point addition expects the clearing inverter")
        if inversion.free_slots_at_end is None or not inversion.free_slots_at_end:
            raise CurveError("inverter leaves no clean workspace register")
        self.curve = curve
        self.n = curve.field.n
        self.modmult = modmult
        self.inversion = inversion
        self.sq_plu = _single_square_plu(curve.field)


class RealBlocks:
    """Arithmetic blocks emitted as real gate streams."""

    def __init__(self, plan: PointAddPlan, A, W):
        self.plan = plan
        self.A = A
        self.W = W

    def inv(self, sink, rev: bool):
        if rev:
            emit_block(sink, lambda s: self.plan.inversion.emit(s, self.A, self.W),
                       rev=True)
        else:
            self.plan.inversion.emit(sink, self.A, self.W)

    def mult(self, sink, fw, gw, hw):
        self.plan.modmult.emit(sink, fw, gw, hw)


class CountBlocks:
    """Arithmetic blocks injected as cached counts (for large fields)."""

    def __init__(self, plan: PointAddPlan):
        self.inv_counts = plan.inversion.counts()
        self.mm_counts = plan.modmult.counts()

    def inv(self, sink, rev: bool):
        sink.add_counts(self.inv_counts)

    def mult(self, sink, fw, gw, hw):
        sink.add_counts(self.mm_counts)


def emit_pointadd(sink, plan: PointAddPlan, A, B, C, D, L, flags, LAM, W, S,
                  blocks=None):
    """Six-stage in-place point addition.

    Registers: A,B = x1,y1 (become x3,y3), C,D = x2,y2 (restored), L = the
    table slope (restored), flags = [f1, f2, f3, f4, ctrl] (end at 0),
    LAM = slope workspace (ends 0), W = inverter workspace (ends 0),
    S = one scratch bit (ends 0).
    """
    n = plan.n
    f1, f2, f3, f4, ctrl = flags
    inv = plan.inversion
    nreg = inv.num_registers - 1
    if len(W) < nreg * n:
        raise CurveError("inversion workspace too small")
    if blocks is None:
        blocks = RealBlocks(plan, A, W)
    wslot = lambda i: W[(i - 1) * n: i * n]
    Wout = wslot(inv.result_slot)
    T = wslot(inv.temp_slot)

    def census(label, units=1):
        sink.begin_group(f"census:{label}", units)

    def done():
        sink.end_group()

    def inv_fwd():
        census("inversion")
        blocks.inv(sink, rev=False)
        done()

    def inv_rev():
        census("inversion")
        blocks.inv(sink, rev=True)
        done()

    def mult(fw, gw, hw):
        census("multiplication")
        blocks.mult(sink, fw, gw, hw)
        done()

    def eq(aw, bw, target, extras, units=1):
        census("equality-test", units)
        emit_equality_test(sink, aw, bw, target, extras)
        done()

    def zero_test(regs, target, extras, label="n-toffoli", units=None):
        qs = [q for r in regs for q in r]
        census(label, len(regs) if units is None else units)
        sink.mcx([(q, False) for q in qs] + list(extras), target)
        done()

    def add(src, dst):
        census("addition")
        emit_addition(sink, src, dst)
        done()

    def cadd(c, src, dst):
        census("controlled-addition")
        emit_controlled_addition(sink, c, src, dst)
        done()

    def gated_add(c, src, dst):
        census("n-toffoli")
        emit_controlled_addition(sink, c, src, dst)
        done()

    # ---- stage 1: exceptional-case flags --------------------------------
    sink.begin_group("stage1")
    eq(A, C, f1, [])                                  # f1 = [x1 == x2]
    add(C, D)                                         # D = x2 + y2
    eq(B, D, f2, [(f1, True)], units=2)               # f2 = f1 & [y1 == x2+y2]
    add(C, D)                                         # restore D
    zero_test([A, B], f3, [])                         # f3 = [P1 == O]
    zero_test([C, D], f4, [])                         # f4 = [P2 == O]
    census("n-toffoli", 2)
    sink.mcx([(f2, False), (f3, False), (f4, False)], ctrl)
    done()
    sink.end_group()

    # ---- stage 2: compute the slope -------------------------------------
    sink.begin_group("stage2")
    add(C, A)                                         # A = x1 + x2
    cadd(ctrl, D, B)                                  # B = y1 (+ y2 if ctrl)
    inv_fwd()                                         # Wout = (x1+x2)^-1
    mult(B, Wout, T)
    census("n-toffoli", 1)                            # gate bit ctrl & !f1
    sink.mcx([(ctrl, True), (f1, False)], S)
    done()
    cadd(S, T, LAM)                                   # LAM = lambda (generic)
    census("n-toffoli", 0)
    sink.mcx([(ctrl, True), (f1, False)], S)
    done()
    mult(B, Wout, T)                                  # T back to 0
    census("n-toffoli", 1)                            # lambda_r copy path
    sink.mcx([(ctrl, True), (f1, True)], S)
    done()
    gated_add(S, L, LAM)                              # LAM = lambda_r (doubling)
    census("n-toffoli", 0)
    sink.mcx([(ctrl, True), (f1, True)], S)
    done()
    eq(LAM, L, S, [(ctrl, True)])                     # S = ctrl & [lam == lam_r]
    census("n-toffoli")                               # controlled swap f1 <-> S
    sink.cnot(S, f1)
    sink.ccx(ctrl, f1, S)
    sink.cnot(S, f1)
    done()
    zero_test([A], S, [(ctrl, True)])                 # clears S (= [x1==x2])
    inv_rev()
    sink.end_group()

    # ---- stage 3: toward x2 + x3 ----------------------------------------
    sink.begin_group("stage3")
    mult(LAM, A, T)
    add(T, B)                                         # B = 0 if ctrl else y1
    mult(LAM, A, T)
    cadd(ctrl, C, A)                                  # A = x1 + a if ctrl
    census("controlled-const-addition")
    emit_controlled_constants(sink, ctrl, plan.curve.a, A)
    done()
    sink.end_group()

    # ---- stage 4: A -> x2+x3, B -> y2+y3+x3 ------------------------------
    sink.begin_group("stage4")
    add(LAM, A)
    census("squaring")
    emit_inplace_linear(sink, plan.sq_plu, LAM)
    done()
    add(LAM, A)                                       # A += lam + lam^2
    census("squaring")
    emit_inplace_linear(sink, plan.sq_plu, LAM, rev=True)
    done()
    mult(LAM, A, T)
    add(T, B)                                         # B = lam (x2+x3) + prior
    mult(LAM, A, T)
    sink.end_group()

    # ---- stage 5: uncompute the slope, produce x3, y3 ---------------------
    sink.begin_group("stage5")
    eq(LAM, L, f1, [(ctrl, True)])                    # clears the stage-2 flag
    inv_fwd()                                         # Wout = (x2+x3)^-1
    mult(B, Wout, T)
    cadd(ctrl, T, LAM)                                # LAM -> 0 when x2+x3 != 0
    mult(B, Wout, T)
    zero_test([A], S, [(ctrl, True)])                 # S = ctrl & [x2+x3 == 0]
    gated_add(S, L, LAM)                              # doubling with x3 = x2
    zero_test([A], S, [(ctrl, True)])
    inv_rev()
    add(C, A)                                         # A = x3 / x1
    cadd(ctrl, D, B)
    cadd(ctrl, A, B)                                  # B = y3 / y1
    sink.end_group()

    # ---- stage 6: reset ctrl, repair exceptional cases --------------------
    sink.begin_group("stage6")
    census("n-toffoli", 2)
    sink.mcx([(f2, False), (f3, False), (f4, False)], ctrl)
    done()
    # spurious f1 from the O representation
    census("n-toffoli")
    sink.mcx([(q, False) for q in A] + [(f4, True), (f3, False)], f1)
    done()
    census("n-toffoli")
    sink.mcx([(q, False) for q in C] + [(f3, True), (f4, False)], f1)
    done()
    census("n-toffoli", 2)                            # both points at O
    sink.ccx(f3, f4, f1)
    sink.ccx(f3, f4, f2)
    done()
    census("n-toffoli", 1)                            # P1 = -P2: output O
    sink.ccx(f1, f2, S)
    done()
    gated_add(S, C, A)
    gated_add(S, C, B)
    gated_add(S, D, B)
    census("n-toffoli", 0)
    sink.ccx(f1, f2, S)
    done()
    census("equality-test", 2)                        # clear f2 (output == O)
    sink.mcx([(q, False) for q in A] + [(q, False) for q in B]
             + [(f1, True)], f2)
    done()
    census("n-toffoli", 2)                            # clear f1 likewise
    sink.mcx([(q, False) for q in A] + [(q, False) for q in B]
             + [(f3, False), (f4, False)], f1)
    done()
    gated_add(f3, C, A)                               # P1 = O: copy P2
    gated_add(f3, D, B)
    census("equality-test", 2)                        # reset f3: (A,B) == (C,D)
    for a, c in zip(A, C):
        sink.cnot(a, c)
    for b, d in zip(B, D):
        sink.cnot(b, d)
    sink.mcx([(q, False) for q in C] + [(q, False) for q in D], f3)
    for a, c in zip(A, C):
        sink.cnot(a, c)
    for b, d in zip(B, D):
        sink.cnot(b, d)
    done()
    census("n-toffoli", 2)                            # reset f4
    zero = [(q, False) for q in C] + [(q, False) for q in D]
    sink.mcx(zero, f4)
    done()
    sink.end_group()


TABLE_CENSUS = {
    "equality-test": 9,
    "n-toffoli": 30,
    "addition": 8,
    "controlled-addition": 6,
    "inversion": 4,
    "multiplication": 8,
    "controlled-const-addition": 1,
    "squaring": 2,
}


def synth_ecpointadd(plan: PointAddPlan) -> Circuit:
    """Full point addition over named registers.

    Output (x3, y3) lands in the x1/y1 registers; x2, y2 and the slope input
    are restored; flags and all clean ancillas return to zero.
    """
    n = plan.n
    circ = Circuit()
    A = circ.add_register(Register("x1", n))
    B = circ.add_register(Register("y1", n))
    C = circ.add_register(Register("x2", n))
    D = circ.add_register(Register("y2", n))
    L = circ.add_register(Register("lr", n))
    flags = circ.add_register(Register("flags", 5, "flag"))
    LAM = circ.add_register(Register("lam", n, "ancilla-clean"))
    W = circ.add_register(Register(
        "w", (plan.inversion.num_registers - 1) * n, "ancilla-clean"))
    S = circ.add_register(Register("s", 1, "ancilla-clean"))[0]
    emit_pointadd(circ, plan, A, B, C, D, L, flags, LAM, W, S)
    return circ


def pointadd_census(source) -> dict[str, int]:
    """Subroutine census from group metadata (circuit or count sink)."""
    raw = source.census if isinstance(source, CountSink) else None
    if raw is None:
        raw = source.census("census:")
        items = raw.items()
    else:
        items = [(k, v) for k, v in raw.items() if k.startswith("census:")]
    out: dict[str, int] = {}
    for label, units in items:
        name = label.split(":", 1)[1]
        out[name] = out.get(name, 0) + units
    return out
