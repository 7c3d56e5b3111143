"""Reversible-circuit synthesis for the binary-field arithmetic primitives.

Everything is emitted through a sink object so the same code path can
either materialize a :class:`~binshor.circuit.Circuit` (for simulation at
small field sizes) or stream into counters (for exact resource counts at
cryptographic sizes).  Gate totals always come from the emitted gate
stream, never from closed-form shortcuts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, GateCounts, Register
from .gf2 import (
    BinaryPoly,
    FieldSpec,
    GF2Error,
    ModulusSet,
    clmod,
    crt_constants,
    validate_modulus_set,
)
from .linalg import (
    BitMatrix,
    PLUFactors,
    plu_decompose,
    reduction_matrix,
    crt_recombination_matrix,
    correction_matrix,
)
from .formulas import KaratsubaFormula


# -- sinks -------------------------------------------------------------------

class CountSink:
    """Gate-stream consumer that tallies counts and census groups."""

    def __init__(self):
        self.counts = GateCounts()
        self.census: dict[str, int] = {}

    def x(self, t):
        self.counts.not_ += 1

    def cnot(self, c, t):
        self.counts.cnot += 1

    def swap(self, a, b):
        self.counts.swap += 1

    def ccx(self, a, b, t):
        self.counts.toffoli += 1

    def ccxu(self, a, b, t):
        self.counts.ccx_uncompute += 1

    def mcx(self, controls, t):
        # mirrors the clean-ancilla lowering in circuit.lower_mcx
        k = len(controls)
        self.counts.not_ += 2 * sum(1 for _, closed in controls if not closed)
        if k == 0:
            self.counts.not_ += 1
        elif k == 1:
            self.counts.cnot += 1
        elif k == 2:
            self.counts.toffoli += 1
        else:
            self.counts.toffoli += k - 1
            self.counts.ccx_uncompute += k - 2

    def add_counts(self, other: GateCounts):
        c = self.counts
        c.not_ += other.not_
        c.cnot += other.cnot
        c.swap += other.swap
        c.toffoli += other.toffoli
        c.ccx_uncompute += other.ccx_uncompute

    def begin_group(self, label, units=1):
        self.census[label] = self.census.get(label, 0) + units

    def end_group(self):
        pass


class BufferSink:
    """Records raw gate calls so a block can be replayed forwards or
    reversed (every emitted kind is self-inverse on basis states)."""

    def __init__(self):
        self.ops: list[tuple] = []

    def x(self, t):
        self.ops.append(("x", t))

    def cnot(self, c, t):
        self.ops.append(("cnot", c, t))

    def swap(self, a, b):
        self.ops.append(("swap", a, b))

    def ccx(self, a, b, t):
        self.ops.append(("ccx", a, b, t))

    def ccxu(self, a, b, t):
        self.ops.append(("ccxu", a, b, t))

    def mcx(self, controls, t):
        self.ops.append(("mcx", controls, t))

    def begin_group(self, label, units=1):
        pass

    def end_group(self):
        pass

    def play(self, sink, rev: bool = False):
        ops = reversed(self.ops) if rev else self.ops
        for op in ops:
            getattr(sink, op[0])(*op[1:])


def emit_block(sink, build, rev: bool = False):
    """Emit ``build(sink)`` forwards, or reversed via a buffer."""
    if not rev:
        build(sink)
    else:
        buf = BufferSink()
        build(buf)
        buf.play(sink, rev=True)


# -- leaf emitters -----------------------------------------------------------

def emit_cnot_matrix(sink, M: BitMatrix, src, dst):
    """|s, d> -> |s, d + M s>: one CNOT per set entry (row = target)."""
    for i, row in enumerate(M.rows):
        r = row
        while r:
            low = r & -r
            sink.cnot(src[low.bit_length() - 1], dst[i])
            r ^= low


def emit_constants(sink, c: BinaryPoly, dst):
    b = c.bits
    while b:
        low = b & -b
        sink.x(dst[low.bit_length() - 1])
        b ^= low


def emit_addition(sink, src, dst):
    for s, d in zip(src, dst):
        sink.cnot(s, d)


def emit_controlled_addition(sink, ctrl, src, dst):
    for s, d in zip(src, dst):
        sink.ccx(ctrl, s, d)


def emit_controlled_constants(sink, ctrl, c: BinaryPoly, dst):
    b = c.bits
    while b:
        low = b & -b
        sink.cnot(ctrl, dst[low.bit_length() - 1])
        b ^= low


def emit_swaps(sink, transpositions, wires):
    for a, b in transpositions:
        sink.swap(wires[a], wires[b])


def emit_inplace_linear(sink, plu: PLUFactors, wires, rev: bool = False):
    """In-place |f> -> |M f> with M = P L U, as CNOT stages plus swaps."""

    def build(s):
        n = len(plu.perm)
        d = plu.U.ncols
        # U stage: ascending rows, f_i += sum_{j>i} U_ij f_j
        for i in range(d):
            r = plu.U.rows[i] & ~((1 << (i + 1)) - 1)
            while r:
                low = r & -r
                s.cnot(wires[low.bit_length() - 1], wires[i])
                r ^= low
        # L stage: descending rows, f_i += sum_{j<i, j<d} L_ij f_j
        for i in range(n - 1, -1, -1):
            r = plu.L.rows[i] & (((1 << min(i, d)) - 1))
            while r:
                low = r & -r
                s.cnot(wires[low.bit_length() - 1], wires[i])
                r ^= low
        emit_swaps(s, plu.transpositions(), wires)

    emit_block(sink, build, rev=rev)


def merged_cnot_lists(Ma: BitMatrix | None, da: int,
                      Mb: BitMatrix | None, db: int):
    """CNOT lists for two stacked reduction applications with shared pairs
    cancelled; emission order keeps reads of the overlap region correct."""

    def pairs(M, d):
        out = []
        if M is None:
            return out
        for i, row in enumerate(M.rows):
            r = row
            while r:
                low = r & -r
                out.append((d + low.bit_length() - 1, i))
                r ^= low
        return out

    a = pairs(Ma, da)
    b = pairs(Mb, db)
    bset = set(b)
    common = [p for p in a if p in bset]
    cset = set(common)
    return ([p for p in a if p not in cset], [p for p in b if p not in cset])


def emit_reduction_step(sink, Ma, da, Mb, db, wires):
    """Un-apply reduction A then apply reduction B on one register, with the
    shared CNOTs of the padded matrices cancelled."""
    la, lb = merged_cnot_lists(Ma, da, Mb, db)
    for c, t in la:
        sink.cnot(wires[c], wires[t])
    for c, t in lb:
        sink.cnot(wires[c], wires[t])


def emit_kmult(sink, formula: KaratsubaFormula, m_i: BinaryPoly,
               fw, gw, hw, rev: bool = False):
    """Out-of-place residue product |f,g,h> -> |f,g,h + f g mod m_i>.

    Per product: CNOT fan-in of the mask onto a pivot in each input
    register, output fan-out around a single Toffoli, then uncompute.
    Products whose recombination column vanishes after reduction mod m_i
    are emitted without the Toffoli (nothing to target).
    """
    d = formula.d
    if m_i.degree != d:
        raise GF2Error("formula degree does not match the factor")
    # reduce R modulo m_i: column r becomes coeffs of (col poly mod m_i)
    rcols = []
    for r in range(formula.v):
        poly = 0
        for l, row in enumerate(formula.R.rows):
            if (row >> r) & 1:
                poly ^= 1 << l
        rcols.append(clmod(poly, m_i.bits))

    def build(s):
        for r in range(formula.v):
            mask = formula.T.rows[r]
            out = rcols[r]
            if not out:
                continue  # product vanishes after reduction mod m_i
            piv = (mask & -mask).bit_length() - 1
            rest = mask ^ (1 << piv)
            hpiv = (out & -out).bit_length() - 1
            hrest = out ^ (1 << hpiv)

            def fanin(reg):
                m = rest
                while m:
                    low = m & -m
                    s.cnot(reg[low.bit_length() - 1], reg[piv])
                    m ^= low

            def fanout():
                m = hrest
                while m:
                    low = m & -m
                    s.cnot(hw[hpiv], hw[low.bit_length() - 1])
                    m ^= low

            fanin(fw)
            fanin(gw)
            fanout()
            s.ccx(fw[piv], gw[piv], hw[hpiv])
            fanout()
            fanin(gw)
            fanin(fw)

    emit_block(sink, build, rev=rev)


def emit_correction(sink, omega: int, n: int, fw, gw, tw):
    """Add the high-degree correction coefficients into the omega-bit target,
    preserving prior target contents.

    Phase 1 (diagonal products s_i) nests the running sums with one CNOT
    cascade on each side of the Toffolis; phase 2 (pair products s_{i,j})
    keeps running partial sums in the input registers, deferring slot
    restoration to a single cleanup pass.  Gate totals: omega + floor(w^2/4)
    Toffolis and 4(omega-1) + floor(w^2/2) CNOTs.
    """
    if not 1 <= omega <= n:
        raise GF2Error("omega out of range")
    # phase 1: t[w-1-k] += sum_{m<=k} s_{n-1-m}
    for j in range(omega - 1):
        sink.cnot(tw[j + 1], tw[j])
    for m in range(omega):
        sink.ccx(fw[n - 1 - m], gw[n - 1 - m], tw[omega - 1 - m])
    for j in range(omega - 2, -1, -1):
        sink.cnot(tw[j + 1], tw[j])
    if omega < 2:
        return
    # phase 2: pairs (u, v), u < v, u+v <= omega-1, target t[omega-1-u-v];
    # slot(v) = wires[n-1-v] accumulates f'_v + f'_u across runs
    def fslot(m):
        return fw[n - 1 - m]

    def gslot(m):
        return gw[n - 1 - m]

    u = 0
    while True:
        J = list(range(u + 1, omega - u))
        if not J:
            break
        for v in J:
            sink.cnot(fslot(u), fslot(v))
            sink.cnot(gslot(u), gslot(v))
        for v in J:
            sink.ccx(fslot(v), gslot(v), tw[omega - 1 - u - v])
        u += 1
    # cleanup: slot v is dirty by f'_src with src = min(v-1, omega-1-v)
    for v in range(1, omega):
        src = min(v - 1, omega - 1 - v)
        if src < 0:
            continue
        sink.cnot(fslot(src), fslot(v))
        sink.cnot(gslot(src), gslot(v))


# -- modular multiplication plan ---------------------------------------------

@dataclass
class _Factor:
    m: BinaryPoly
    d: int
    reduction: BitMatrix | None
    q_plu: PLUFactors          # of the in-place d x d block of Q_i
    q_out: BitMatrix | None    # (n-d) x d out-of-place block
    q_perm: tuple               # transpositions of the n x n permutation
    formula: KaratsubaFormula | None
    inner: "ModmultPlan | None"


class ModmultPlan:
    """Precomputed CRT modular-multiplication circuit for one modulus.

    Maps |f, g, h> to |f, g, h + f g mod p>; p need not be irreducible when
    the plan is an inner stage of a recursive multiplier.
    """

    def __init__(self, n: int, p: BinaryPoly, modset: ModulusSet,
                 formulas: dict[int, KaratsubaFormula],
                 inner_sets=None, max_omega: int = 8, _depth: int = 0):
        if p.degree != n:
            raise GF2Error("modulus degree mismatch")
        if _depth > 2:
            raise GF2Error("recursive multiplication nested too deeply")
        self.n = n
        self.p = p
        self.modset = modset
        self.omega = validate_modulus_set(modset, n, max_omega=max_omega)
        qs = crt_constants(modset)
        m = modset.m
        self.factors: list[_Factor] = []
        for (mi, qi) in zip(modset.moduli, qs):
            d = mi.degree
            red = reduction_matrix(mi, n) if d < n else None
            Q = crt_recombination_matrix(qi, m, d, n, p)
            plu = plu_decompose(Q)
            LU = plu.L @ plu.U
            q_in = BitMatrix(LU.rows[:d], d)
            q_out = BitMatrix(LU.rows[d:], d) if n > d else None
            inner = None
            formula = None
            if d <= 8:
                formula = formulas[d]
            else:
                if inner_sets is None:
                    raise GF2Error(
                        f"degree-{d} factor needs an inner modulus set")
                inner = ModmultPlan(d, mi, inner_sets(d), formulas,
                                    inner_sets=inner_sets,
                                    max_omega=max_omega, _depth=_depth + 1)
            self.factors.append(_Factor(
                m=mi, d=d, reduction=red, q_plu=plu_decompose(q_in),
                q_out=q_out, q_perm=plu.transpositions(),
                formula=formula, inner=inner))
        if self.omega:
            H = correction_matrix(modset, FieldLike(n, p))
            plu = plu_decompose(H)
            LU = plu.L @ plu.U
            self.h_plu = plu_decompose(BitMatrix(LU.rows[:self.omega],
                                                 self.omega))
            self.h_out = (BitMatrix(LU.rows[self.omega:], self.omega)
                          if n > self.omega else None)
            self.h_perm = plu.transpositions()
        self._counts: GateCounts | None = None

    # Q_i sandwich: the inverse is applied before the residue product so the
    # product is added under the recombination map rather than mixed with
    # prior target contents.
    def _emit_q(self, sink, fac: _Factor, hw, rev: bool):
        def build(s):
            if fac.q_out is not None:
                emit_cnot_matrix(s, fac.q_out, hw[:fac.d], hw[fac.d:])
            emit_inplace_linear(s, fac.q_plu, hw[:fac.d])
            emit_swaps(s, fac.q_perm, hw)

        emit_block(sink, build, rev=rev)

    def _emit_h(self, sink, hw, rev: bool):
        def build(s):
            if self.h_out is not None:
                emit_cnot_matrix(s, self.h_out, hw[:self.omega],
                                 hw[self.omega:])
            emit_inplace_linear(s, self.h_plu, hw[:self.omega])
            emit_swaps(s, self.h_perm, hw)

        emit_block(sink, build, rev=rev)

    def emit(self, sink, fw, gw, hw):
        n = self.n
        if not (len(fw) == len(gw) == len(hw) == n):
            raise GF2Error("register widths must equal n")
        facs = self.factors
        for i, fac in enumerate(facs):
            prev = facs[i - 1] if i else None
            sink.begin_group(f"modred[{i}]")
            for wires in (fw, gw):
                emit_reduction_step(
                    sink,
                    prev.reduction if prev else None, prev.d if prev else 0,
                    fac.reduction, fac.d, wires)
            sink.end_group()
            sink.begin_group(f"recombine_inv[{i}]")
            self._emit_q(sink, fac, hw, rev=True)
            sink.end_group()
            if fac.inner is None:
                sink.begin_group(f"kmult[{i}] d={fac.d}")
                emit_kmult(sink, fac.formula, fac.m,
                           fw[:fac.d], gw[:fac.d], hw[:fac.d])
                sink.end_group()
            else:
                sink.begin_group(f"inner_crt[{i}] d={fac.d}")
                fac.inner.emit(sink, fw[:fac.d], gw[:fac.d], hw[:fac.d])
                sink.end_group()
            sink.begin_group(f"recombine[{i}]")
            self._emit_q(sink, fac, hw, rev=False)
            sink.end_group()
        last = facs[-1]
        sink.begin_group("modred[final]")
        for wires in (fw, gw):
            emit_reduction_step(sink, last.reduction, last.d, None, 0, wires)
        sink.end_group()
        if self.omega:
            sink.begin_group("correction_inv")
            self._emit_h(sink, hw, rev=True)
            sink.end_group()
            sink.begin_group("correction_coeffs")
            emit_correction(sink, self.omega, n, fw, gw, hw[:self.omega])
            sink.end_group()
            sink.begin_group("correction")
            self._emit_h(sink, hw, rev=False)
            sink.end_group()

    def counts(self) -> GateCounts:
        if self._counts is None:
            cs = CountSink()
            self.emit(cs, list(range(self.n)), list(range(self.n, 2 * self.n)),
                      list(range(2 * self.n, 3 * self.n)))
            cs.counts.qubits_total = 3 * self.n
            self._counts = cs.counts
        return self._counts


class FieldLike:
    """Duck-typed stand-in for FieldSpec when p need not be irreducible."""

    def __init__(self, n: int, p: BinaryPoly):
        self.n = n
        self.p = p


# -- addition chains and inversion -------------------------------------------

@dataclass(frozen=True)
class AdditionChain:
    """Chain from 1 to n-1; decreasing entries mark register-clearing steps.

    ``l`` counts compute (strictly increasing) steps, ``l_tilde`` all steps
    after the leading 1; the workspace multiplier is R = 2l - l_tilde + 1.
    """

    terms: tuple[int, ...]

    def __post_init__(self):
        t = self.terms
        if not t or t[0] != 1:
            raise GF2Error("chain must start at 1")
        live = {1}
        prev = 1
        for v in t[1:]:
            if v > prev:
                if v in live:
                    raise GF2Error(f"term {v} recomputed while live")
                if not any(v - a in live for a in live):
                    raise GF2Error(f"term {v} is not a sum of live terms")
                live.add(v)
            else:
                if v not in live:
                    raise GF2Error(f"clearing step {v} references a dead term")
                live.discard(v)
            prev = v

    @property
    def target(self) -> int:
        return max(self.terms)

    @property
    def l_tilde(self) -> int:
        return len(self.terms) - 1

    @property
    def l(self) -> int:
        return sum(1 for a, b in zip(self.terms, self.terms[1:]) if b > a)

    @property
    def r_factor(self) -> int:
        return 2 * self.l - self.l_tilde + 1

    def compute_terms(self):
        return [b for a, b in zip(self.terms, self.terms[1:]) if b > a]


@dataclass
class _Slot:
    wires: list
    value: int | None = None     # chain term stored, None = free
    offset: int = 0              # register holds <2^value - 1>^(2^offset)
    made: tuple | None = None    # ("dbl", alpha) or ("add", alpha, beta)


class InversionPlan:
    """Exponentiation-based modular inversion scheduled by an addition chain.

    With clearing, the interface is |f>|0>^(R n) -> |f>|f^-1>|garbage>|0>^n
    and the multiplication count is l_tilde; without clearing it is l at the
    price of more workspace.
    """

    def __init__(self, field: FieldSpec | FieldLike, chain: AdditionChain,
                 modmult: ModmultPlan, clearing: bool = True):
        if chain.target != field.n - 1:
            raise GF2Error(
                f"chain reaches {chain.target}, need n-1 = {field.n - 1}")
        self.field = field
        self.chain = chain
        self.modmult = modmult
        self.clearing = clearing
        self.n = field.n
        self._sq_cache: dict[int, tuple[str, object]] = {}
        self._sq_counts: dict[int, GateCounts] = {}
        self.mult_calls = 0
        # worked out during the dry run
        self.num_registers = 0
        self.result_slot: int | None = None
        self.temp_slot: int | None = None
        self._schedule: list | None = None
        self._plan_schedule()

    # squaring circuits ------------------------------------------------------

    def _square_parts(self, k: int):
        """Fused-vs-sequential choice for k consecutive squarings.

        Comparison is by total CNOT count with each swap at its three-CNOT
        equivalent; ties go to the fused circuit.
        """
        k = k % _frobenius_order(self.field)
        if k == 0:
            return ("fused", None)
        if k not in self._sq_cache:
            plu1 = _single_square_plu(self.field)
            fused = plu_decompose(squaring_matrix_like(self.field, k))
            if _plu_cnot_equiv(fused) <= k * _plu_cnot_equiv(plu1):
                self._sq_cache[k] = ("fused", fused)
            else:
                self._sq_cache[k] = ("seq", (plu1, k))
        return self._sq_cache[k]

    def _emit_square_power(self, sink, k: int, wires, rev: bool = False):
        k = k % _frobenius_order(self.field)
        if k == 0:
            return
        method, data = self._square_parts(k)
        sink.begin_group(f"square^{k} ({method})")
        if method == "fused":
            emit_inplace_linear(sink, data, wires, rev=rev)
        else:
            plu1, kk = data
            for _ in range(kk):
                emit_inplace_linear(sink, plu1, wires, rev=rev)
        sink.end_group()

    # scheduling -------------------------------------------------------------

    def _plan_schedule(self):
        """Dry-run the chain to fix register assignments and op order."""
        n = self.n
        schedule: list[tuple] = []
        slots: list[_Slot] = []

        def alloc():
            for i, s in enumerate(slots):
                if s.value is None:
                    return i
            slots.append(_Slot(wires=None))
            return len(slots) - 1

        def find(value):
            for i, s in enumerate(slots):
                if s.value == value:
                    return i
            raise GF2Error(f"term {value} not live")

        def adjust(idx, target_offset):
            s = slots[idx]
            if s.offset != target_offset:
                schedule.append(("sq", idx, target_offset - s.offset))
                s.offset = target_offset

        input_slot = alloc()
        slots[input_slot] = _Slot(wires=None, value=1, offset=0)

        def get_temp():
            # borrow any free slot (it is returned to |0> inside the op)
            for i, s in enumerate(slots):
                if s.value is None:
                    return i
            i = alloc()
            slots[i] = _Slot(wires=None)
            return i

        prev = 1
        for v in self.chain.terms[1:]:
            if v <= prev:
                if self.clearing:
                    self._plan_clear(v, slots, schedule, find, adjust, get_temp)
                prev = v
                continue
            alpha_dbl = v // 2 if v % 2 == 0 else None
            if alpha_dbl is not None and any(s.value == alpha_dbl for s in slots):
                ia = find(alpha_dbl)
                adjust(ia, 0)
                dst = alloc()
                slots[dst] = _Slot(wires=None, value=v, offset=0,
                                   made=("dbl", alpha_dbl))
                t = get_temp()
                schedule.append(("dbl", ia, t, dst, alpha_dbl))
            else:
                # added term: prefer the largest live a with v-a live
                lives = sorted((s.value for s in slots
                                if s.value not in (None, -1)), reverse=True)
                pick = None
                for a in lives:
                    if a < v and (v - a) in lives and (a != v - a):
                        pick = (min(a, v - a), max(a, v - a))
                        break
                if pick is None:
                    raise GF2Error(f"cannot form {v} from live terms")
                alpha, beta = pick
                ia, ib = find(alpha), find(beta)
                adjust(ia, 0)
                adjust(ib, alpha)
                dst = alloc()
                slots[dst] = _Slot(wires=None, value=v, offset=0,
                                   made=("add", alpha, beta))
                schedule.append(("mult", ia, ib, dst))
            prev = v
        # final squaring turns <2^(n-1) - 1> into <2^n - 2> = the inverse
        res = find(self.chain.target)
        if res == input_slot:
            # degenerate chain (n = 2): the target power is the input itself;
            # copy it out before the final squaring
            dst = alloc()
            slots[dst] = _Slot(wires=None, value=self.chain.target, offset=0,
                               made=("copy",))
            schedule.append(("copy", res, dst))
            res = dst
        adjust(res, 0)
        schedule.append(("sq", res, 1))
        slots[res].offset = 1
        self.result_slot = res
        free = [i for i, s in enumerate(slots) if s.value is None]
        if not free:
            # guarantee the zero-out register of the advertised interface
            slots.append(_Slot(wires=None))
            free = [len(slots) - 1]
        self.free_slots_at_end = free
        self.temp_slot = free[0]
        self.num_registers = len(slots)
        self.mult_calls = sum(1 for op in schedule
                              if op[0] in ("dbl", "mult", "clear_add",
                                           "clear_dbl"))
        self._schedule = schedule
        self._final_slots = slots

    def _plan_clear(self, v, slots, schedule, find, adjust, get_temp):
        idx = find(v)
        made = slots[idx].made
        if made is None:
            raise GF2Error(f"cannot clear input term {v}")
        if made[0] == "add":
            _, alpha, beta = made
            ia, ib = find(alpha), find(beta)
            adjust(ia, 0)
            adjust(ib, alpha)
            schedule.append(("clear_add", ia, ib, idx))
        else:
            _, alpha = made
            ia = find(alpha)
            adjust(ia, 0)
            adjust(idx, 0)
            t = get_temp()
            schedule.append(("clear_dbl", ia, t, idx, alpha))
        slots[idx].value = None
        slots[idx].made = None
        slots[idx].offset = 0

    # emission ----------------------------------------------------------------

    def emit(self, sink, fw, work):
        """fw: the n input wires; work: num_registers * n workspace wires."""
        n = self.n
        if len(work) < (self.num_registers - 1) * n:
            raise GF2Error("workspace too small for the schedule")
        regs = [fw] + [work[i * n:(i + 1) * n]
                       for i in range(self.num_registers - 1)]
        # slot 0 is the input register; remaining slots map in order
        def w(idx):
            return regs[idx]

        for op in self._schedule:
            kind = op[0]
            if kind == "copy":
                emit_addition(sink, w(op[1]), w(op[2]))
            elif kind == "sq":
                _, idx, delta = op
                self._emit_square_power(sink, abs(delta), w(idx),
                                        rev=(delta < 0))
            elif kind == "dbl":
                _, ia, t, dst, alpha = op
                sink.begin_group(f"double->{2 * alpha}")
                emit_addition(sink, w(ia), w(t))
                self._emit_square_power(sink, alpha, w(t))
                sink.begin_group("modmult")
                self.modmult.emit(sink, w(ia), w(t), w(dst))
                sink.end_group()
                self._emit_square_power(sink, alpha, w(t), rev=True)
                emit_addition(sink, w(ia), w(t))
                sink.end_group()
            elif kind == "mult":
                _, ia, ib, dst = op
                sink.begin_group("modmult")
                self.modmult.emit(sink, w(ia), w(ib), w(dst))
                sink.end_group()
            elif kind == "clear_add":
                _, ia, ib, idx = op
                sink.begin_group("modmult (clear)")
                self.modmult.emit(sink, w(ia), w(ib), w(idx))
                sink.end_group()
            elif kind == "clear_dbl":
                _, ia, t, idx, alpha = op
                sink.begin_group(f"clear double {2 * alpha}")
                emit_addition(sink, w(ia), w(t))
                self._emit_square_power(sink, alpha, w(t))
                sink.begin_group("modmult (clear)")
                self.modmult.emit(sink, w(ia), w(t), w(idx))
                sink.end_group()
                self._emit_square_power(sink, alpha, w(t), rev=True)
                emit_addition(sink, w(ia), w(t))
                sink.end_group()
            else:
                raise GF2Error(f"unknown op {kind}")

    def counts(self) -> GateCounts:
        """Counts assembled from the scheduled blocks (cached per block)."""
        total = GateCounts()
        mm = self.modmult.counts()
        n = self.n

        def sq_counts(k):
            k = k % _frobenius_order(self.field)
            if k == 0:
                return GateCounts()
            if k not in self._sq_counts:
                cs = CountSink()
                self._emit_square_power(cs, k, list(range(n)))
                self._sq_counts[k] = cs.counts
            return self._sq_counts[k]

        def add(c):
            nonlocal total
            total = total + c

        for op in self._schedule:
            kind = op[0]
            if kind == "copy":
                add(GateCounts(cnot=n))
            elif kind == "sq":
                add(sq_counts(abs(op[2])))
            elif kind in ("dbl", "clear_dbl"):
                alpha = op[4]
                add(GateCounts(cnot=2 * n))
                add(sq_counts(alpha))
                add(sq_counts(alpha))
                add(mm)
            else:
                add(mm)
        total.qubits_total = self.num_registers * n
        return total


def _frobenius_order(field) -> int:
    # f -> f^2 has order n on GF(2^n); for non-irreducible inner moduli the
    # order may differ, so fall back to the matrix order lazily.
    return field.n


def squaring_matrix_like(field, k: int) -> BitMatrix:
    cols = [clmod(1 << (2 * j), field.p.bits) for j in range(field.n)]
    S = BitMatrix.from_columns(cols, field.n)
    return S ** k if k > 1 else S


def _single_square_plu(field) -> PLUFactors:
    return plu_decompose(squaring_matrix_like(field, 1))


def _plu_cnot(plu: PLUFactors) -> int:
    d = plu.U.ncols
    cnots = 0
    for i in range(d):
        cnots += (plu.U.rows[i] & ~((1 << (i + 1)) - 1)).bit_count()
    for i in range(len(plu.L.rows)):
        cnots += (plu.L.rows[i] & ((1 << min(i, d)) - 1)).bit_count()
    return cnots


def _plu_cnot_equiv(plu: PLUFactors) -> int:
    return _plu_cnot(plu) + 3 * len(plu.transpositions())


# -- public circuit-producing wrappers ----------------------------------------

def synth_addition(mode: str, n: int, c: BinaryPoly | None = None) -> Circuit:
    """Addition-family circuits: plain, constant(c), controlled, and
    controlled-constant(c)."""
    if n < 1:
        raise GF2Error("n must be >= 1")
    circ = Circuit()
    if mode == "plain":
        src = circ.add_register(Register("f", n))
        dst = circ.add_register(Register("g", n))
        emit_addition(circ, src, dst)
    elif mode == "constant":
        if c is None or c.degree >= n:
            raise GF2Error("constant with degree < n required")
        dst = circ.add_register(Register("g", n))
        emit_constants(circ, c, dst)
    elif mode == "controlled":
        ctrl = circ.add_register(Register("ctrl", 1, "flag"))[0]
        src = circ.add_register(Register("f", n))
        dst = circ.add_register(Register("g", n))
        emit_controlled_addition(circ, ctrl, src, dst)
    elif mode == "controlled-constant":
        if c is None or c.degree >= n:
            raise GF2Error("constant with degree < n required")
        ctrl = circ.add_register(Register("ctrl", 1, "flag"))[0]
        dst = circ.add_register(Register("g", n))
        emit_controlled_constants(circ, ctrl, c, dst)
    else:
        raise GF2Error(f"unknown addition mode {mode!r}")
    return circ


def synth_out_of_place_mul(M: BitMatrix) -> Circuit:
    circ = Circuit()
    src = circ.add_register(Register("g", M.ncols))
    dst = circ.add_register(Register("f", M.nrows))
    emit_cnot_matrix(circ, M, src, dst)
    return circ


def synth_in_place_mul(M: BitMatrix) -> Circuit:
    if not M.is_invertible():
        from .linalg import SingularMatrixError

        raise SingularMatrixError("in-place map must be invertible", M.rank())
    circ = Circuit()
    wires = circ.add_register(Register("f", M.nrows))
    emit_inplace_linear(circ, plu_decompose(M), wires)
    return circ


def synth_square(field: FieldSpec, k: int = 1) -> Circuit:
    """In-place |f> -> |f^(2^k)>, choosing the cheaper of k single squarings
    or one fused circuit by CNOT-equivalents (swap = 3 CNOTs); ties go to
    the fused circuit."""
    if k < 1:
        raise GF2Error("k must be >= 1")
    circ = Circuit()
    wires = circ.add_register(Register("f", field.n))
    keff = k % field.n
    if keff == 0:
        circ.meta = {"method": "fused", "k": k}
        return circ
    plu1 = _single_square_plu(field)
    fused = plu_decompose(squaring_matrix_like(field, keff))
    if _plu_cnot_equiv(fused) <= keff * _plu_cnot_equiv(plu1):
        emit_inplace_linear(circ, fused, wires)
        circ.meta = {"method": "fused", "k": k}
    else:
        for _ in range(keff):
            emit_inplace_linear(circ, plu1, wires)
        circ.meta = {"method": "sequential", "k": k}
    return circ


def synth_kmult(formula: KaratsubaFormula, m_i: BinaryPoly) -> Circuit:
    circ = Circuit()
    d = formula.d
    fw = circ.add_register(Register("f", d))
    gw = circ.add_register(Register("g", d))
    hw = circ.add_register(Register("h", d, "output"))
    emit_kmult(circ, formula, m_i, fw, gw, hw)
    return circ


def synth_correction(omega: int, n: int) -> Circuit:
    circ = Circuit()
    fw = circ.add_register(Register("f", n))
    gw = circ.add_register(Register("g", n))
    tw = circ.add_register(Register("t", omega, "output"))
    emit_correction(circ, omega, n, fw, gw, tw)
    return circ


def synth_crt_modmult(plan: ModmultPlan) -> Circuit:
    circ = Circuit()
    n = plan.n
    fw = circ.add_register(Register("f", n))
    gw = circ.add_register(Register("g", n))
    hw = circ.add_register(Register("h", n, "output"))
    plan.emit(circ, fw, gw, hw)
    return circ


def synth_flt_inversion(plan: InversionPlan) -> Circuit:
    """Inversion circuit over registers f (input, restored) and w (workspace).

    Workspace slot layout is recorded in ``circ.meta``: ``result_slot`` holds
    the inverse, ``temp_slot`` is the register guaranteed to end at zero, and
    slot index i maps to wires [i*n, (i+1)*n) counting the input as slot 0.
    """
    circ = Circuit()
    n = plan.n
    fw = circ.add_register(Register("f", n))
    kind = "ancilla-garbage"
    work = circ.add_register(
        Register("w", (plan.num_registers - 1) * n, kind))
    plan.emit(circ, fw, work)
    circ.meta = {
        "result_slot": plan.result_slot,
        "temp_slot": plan.temp_slot,
        "mult_calls": plan.mult_calls,
        "registers": plan.num_registers,
    }
    return circ
