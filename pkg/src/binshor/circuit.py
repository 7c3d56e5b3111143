"""Reversible-circuit intermediate representation.

Gates are compact tuples; the only kinds are X, CNOT, SWAP, CCX, CCXU and
MCX.  CCXU is a Toffoli applied as a *measurement-based uncomputation* (the
standard clean-ancilla trick): it acts like a CCX on basis states but is
Toffoli-free at the fault-tolerant level, so gate counts tally it
separately.  MCX controls are signed qubit indices shifted by one:
``+(q+1)`` is a closed control, ``-(q+1)`` an open control.

Every gate kind permutes computational basis states, so the simulator works
on bitstrings (single inputs) or on numpy bit-planes (batched inputs).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import GF2Error


REG_KINDS = ("input", "output", "ancilla-clean", "ancilla-garbage", "flag")


@dataclass(frozen=True)
class Register:
    name: str
    width: int
    kind: str = "input"

    def __post_init__(self):
        if self.width < 1:
            raise GF2Error(f"register {self.name} must have width >= 1")
        if self.kind not in REG_KINDS:
            raise GF2Error(f"unknown register kind {self.kind!r}")


@dataclass
class GateCounts:
    """Exact per-kind gate tallies plus qubit bookkeeping.

    ``ccx_uncompute`` counts measurement-based Toffoli uncomputations, which
    cost no Toffolis in the fault-tolerant accounting.
    """

    not_: int = 0
    cnot: int = 0
    swap: int = 0
    toffoli: int = 0
    ccx_uncompute: int = 0
    qubits_total: int = 0
    ancilla_clean: int = 0
    ancilla_garbage: int = 0

    def __add__(self, other: "GateCounts") -> "GateCounts":
        return GateCounts(
            self.not_ + other.not_,
            self.cnot + other.cnot,
            self.swap + other.swap,
            self.toffoli + other.toffoli,
            self.ccx_uncompute + other.ccx_uncompute,
            max(self.qubits_total, other.qubits_total),
            max(self.ancilla_clean, other.ancilla_clean),
            max(self.ancilla_garbage, other.ancilla_garbage),
        )

    def as_dict(self) -> dict:
        return {
            "cnot": self.cnot,
            "toffoli": self.toffoli,
            "swap": self.swap,
            "not": self.not_,
            "ccx_uncompute": self.ccx_uncompute,
            "qubits": self.qubits_total,
            "ancilla_clean": self.ancilla_clean,
            "ancilla_garbage": self.ancilla_garbage,
        }


def _enc_controls(controls):
    out = []
    for q, closed in controls:
        out.append((q + 1) if closed else -(q + 1))
    return tuple(out)


def _dec_control(c):
    return (abs(c) - 1, c > 0)


class Circuit:
    """Ordered gate list over named registers, with group metadata.

    Groups are (label, units, start, end) spans used for provenance tagging
    and subroutine censuses; ``units`` carries the bookkeeping weight of the
    tagged construct (e.g. a 2n-qubit equality test counts as two n-qubit
    units).
    """

    def __init__(self, registers: list[Register] | None = None):
        self.registers: list[Register] = []
        self._offsets: dict[str, int] = {}
        self.gates: list[tuple] = []
        self.groups: list[tuple[str, int, int, int]] = []
        self._group_stack: list[tuple[str, int, int]] = []
        self.meta: dict = {}
        if registers:
            for r in registers:
                self.add_register(r)

    # -- registers ---------------------------------------------------------

    def add_register(self, reg: Register) -> list[int]:
        if reg.name in self._offsets:
            raise GF2Error(f"duplicate register name {reg.name!r}")
        self._offsets[reg.name] = self.width
        self.registers.append(reg)
        return self.reg(reg.name)

    @property
    def width(self) -> int:
        return sum(r.width for r in self.registers)

    def reg(self, name: str) -> list[int]:
        off = self._offsets[name]
        w = next(r.width for r in self.registers if r.name == name)
        return list(range(off, off + w))

    # -- gate emission -----------------------------------------------------

    def _chk(self, *qs):
        w = self.width
        if len(set(qs)) != len(qs):
            raise GF2Error(f"duplicate qubit in gate: {qs}")
        for q in qs:
            if not 0 <= q < w:
                raise GF2Error(f"qubit {q} out of range (width {w})")

    def x(self, t: int):
        self._chk(t)
        self.gates.append(("X", t))

    def cnot(self, c: int, t: int):
        self._chk(c, t)
        self.gates.append(("CNOT", c, t))

    def swap(self, a: int, b: int):
        self._chk(a, b)
        self.gates.append(("SWAP", a, b))

    def ccx(self, c1: int, c2: int, t: int):
        self._chk(c1, c2, t)
        self.gates.append(("CCX", c1, c2, t))

    def ccxu(self, c1: int, c2: int, t: int):
        self._chk(c1, c2, t)
        self.gates.append(("CCXU", c1, c2, t))

    def mcx(self, controls, t: int):
        qs = [q for q, _ in controls]
        self._chk(*qs, t)
        self.gates.append(("MCX", _enc_controls(controls), t))

    # -- groups ------------------------------------------------------------

    def begin_group(self, label: str, units: int = 1):
        self._group_stack.append((label, units, len(self.gates)))

    def end_group(self):
        label, units, start = self._group_stack.pop()
        self.groups.append((label, units, start, len(self.gates)))

    def census(self, prefix: str = "") -> dict[str, int]:
        """Sum group units by label (labels matching ``prefix*``)."""
        out: dict[str, int] = {}
        for label, units, _, _ in self.groups:
            if label.startswith(prefix):
                out[label] = out.get(label, 0) + units
        return out

    # -- structure ---------------------------------------------------------

    def extend(self, other: "Circuit"):
        """Append another circuit over the same register layout."""
        if other.registers != self.registers:
            raise GF2Error("register layouts differ")
        base = len(self.gates)
        self.gates.extend(other.gates)
        for label, units, s, e in other.groups:
            self.groups.append((label, units, s + base, e + base))

    def reversed(self) -> "Circuit":
        """Inverse circuit: reversed gate order.  Every kind is an involution
        on basis states, and a reversed Toffoli still costs a Toffoli, so
        gate kinds are preserved."""
        out = Circuit(list(self.registers))
        out.gates = list(reversed(self.gates))
        return out

    def __eq__(self, other):
        return (isinstance(other, Circuit)
                and self.registers == other.registers
                and self.gates == other.gates)

    def __repr__(self):
        return f"Circuit({self.width} qubits, {len(self.gates)} gates)"


def simulate(circuit: Circuit, state) -> str | int:
    """Apply the circuit to a basis state.

    ``state`` may be an int bit-vector (bit i = qubit i) or a 0/1 string
    whose i-th character is qubit i; the return type matches the input.
    """
    as_str = isinstance(state, str)
    if as_str:
        if len(state) != circuit.width:
            raise GF2Error(
                f"input length {len(state)} != qubit count {circuit.width}")
        s = 0
        for i, ch in enumerate(state):
            if ch == "1":
                s |= 1 << i
            elif ch != "0":
                raise GF2Error("input must be a 0/1 string")
    else:
        s = int(state)
        if s < 0 or s >> circuit.width:
            raise GF2Error("input out of range for qubit count")
    for g in circuit.gates:
        kind = g[0]
        if kind == "CNOT":
            if (s >> g[1]) & 1:
                s ^= 1 << g[2]
        elif kind in ("CCX", "CCXU"):
            if (s >> g[1]) & 1 and (s >> g[2]) & 1:
                s ^= 1 << g[3]
        elif kind == "X":
            s ^= 1 << g[1]
        elif kind == "SWAP":
            a, b = (s >> g[1]) & 1, (s >> g[2]) & 1
            if a != b:
                s ^= (1 << g[1]) | (1 << g[2])
        elif kind == "MCX":
            ok = True
            for c in g[1]:
                q, closed = _dec_control(c)
                if ((s >> q) & 1) != (1 if closed else 0):
                    ok = False
                    break
            if ok:
                s ^= 1 << g[2]
        else:
            raise GF2Error(f"unknown gate kind {kind}")
    if as_str:
        return "".join("1" if (s >> i) & 1 else "0" for i in range(circuit.width))
    return s


def simulate_planes(circuit: Circuit, planes: np.ndarray) -> np.ndarray:
    """Batched simulation on bit-planes.

    ``planes`` has shape (width, words) and dtype uint64; bit b of
    ``planes[q, w]`` is qubit q of batch element 64*w + b.  Returns a new
    array; the input is not modified.
    """
    pl = planes.copy()
    full = np.uint64(0xFFFFFFFFFFFFFFFF)
    for g in circuit.gates:
        kind = g[0]
        if kind == "CNOT":
            pl[g[2]] ^= pl[g[1]]
        elif kind in ("CCX", "CCXU"):
            pl[g[3]] ^= pl[g[1]] & pl[g[2]]
        elif kind == "X":
            pl[g[1]] ^= full
        elif kind == "SWAP":
            a, b = g[1], g[2]
            tmp = pl[a].copy()
            pl[a] = pl[b]
            pl[b] = tmp
        elif kind == "MCX":
            acc = np.full(pl.shape[1], full, dtype=np.uint64)
            for c in g[1]:
                q, closed = _dec_control(c)
                acc &= pl[q] if closed else pl[q] ^ full
            pl[g[2]] ^= acc
        else:
            raise GF2Error(f"unknown gate kind {kind}")
    return pl


def pack_planes(inputs: list[int], width: int) -> np.ndarray:
    words = (len(inputs) + 63) // 64
    pl = np.zeros((width, words), dtype=np.uint64)
    for b, v in enumerate(inputs):
        w, bit = divmod(b, 64)
        for q in range(width):
            if (v >> q) & 1:
                pl[q, w] |= np.uint64(1 << bit)
    return pl


def unpack_planes(planes: np.ndarray, count: int) -> list[int]:
    width = planes.shape[0]
    out = []
    for b in range(count):
        w, bit = divmod(b, 64)
        v = 0
        one = np.uint64(1 << bit)
        for q in range(width):
            if planes[q, w] & one:
                v |= 1 << q
        out.append(v)
    return out


def lower_mcx(circuit: Circuit) -> Circuit:
    """Replace every MCX by NOT/CNOT/CCX using clean ancillas.

    A k-control MCX costs k-1 CCX: an AND ladder into ancillas, with the
    final CCX targeting the MCX target directly; the ladder is then undone
    with measurement-based uncomputations (CCXU).  Open controls are
    realized by X conjugation.  One shared clean-ancilla register of width
    max(k-1) is appended.
    """
    max_k = 0
    for g in circuit.gates:
        if g[0] == "MCX":
            max_k = max(max_k, len(g[1]))
    out = Circuit(list(circuit.registers))
    anc: list[int] = []
    if max_k > 2:
        anc = out.add_register(Register("_mcx", max_k - 1, "ancilla-clean"))
    for g in circuit.gates:
        if g[0] != "MCX":
            out.gates.append(g)
            continue
        controls, t = g[1], g[2]
        qs = [_dec_control(c) for c in controls]
        opens = [q for q, closed in qs if not closed]
        for q in opens:
            out.x(q)
        cq = [q for q, _ in qs]
        k = len(cq)
        if k == 0:
            out.x(t)
        elif k == 1:
            out.cnot(cq[0], t)
        elif k == 2:
            out.ccx(cq[0], cq[1], t)
        else:
            # ladder: anc[0] = c0&c1, anc[i] = anc[i-1]&c(i+1), last CCX -> t
            out.ccx(cq[0], cq[1], anc[0])
            for i in range(k - 3):
                out.ccx(anc[i], cq[i + 2], anc[i + 1])
            out.ccx(anc[k - 3], cq[k - 1], t)
            for i in range(k - 4, -1, -1):
                out.ccxu(anc[i], cq[i + 2], anc[i + 1])
            out.ccxu(cq[0], cq[1], anc[0])
        for q in opens:
            out.x(q)
    out.groups = list(circuit.groups)
    return out


def counts(circuit: Circuit) -> GateCounts:
    """Exact tallies by gate kind; requires an MCX-free (lowered) circuit."""
    c = GateCounts()
    for g in circuit.gates:
        kind = g[0]
        if kind == "CNOT":
            c.cnot += 1
        elif kind == "CCX":
            c.toffoli += 1
        elif kind == "CCXU":
            c.ccx_uncompute += 1
        elif kind == "X":
            c.not_ += 1
        elif kind == "SWAP":
            c.swap += 1
        elif kind == "MCX":
            raise GF2Error("circuit contains MCX gates; lower_mcx first")
    c.qubits_total = circuit.width
    c.ancilla_clean = sum(r.width for r in circuit.registers
                          if r.kind == "ancilla-clean")
    c.ancilla_garbage = sum(r.width for r in circuit.registers
                            if r.kind == "ancilla-garbage")
    return c


# -- text format -----------------------------------------------------------

def serialize(circuit: Circuit) -> str:
    lines = []
    for r in circuit.registers:
        lines.append(f"reg {r.name} {r.width} {r.kind}")
    for g in circuit.gates:
        kind = g[0]
        if kind == "X":
            lines.append(f"X q[{g[1]}]")
        elif kind == "CNOT":
            lines.append(f"CNOT q[{g[1]}] q[{g[2]}]")
        elif kind == "SWAP":
            lines.append(f"SWAP q[{g[1]}] q[{g[2]}]")
        elif kind == "CCX":
            lines.append(f"CCX q[{g[1]}] q[{g[2]}] q[{g[3]}]")
        elif kind == "CCXU":
            lines.append(f"CCXU q[{g[1]}] q[{g[2]}] q[{g[3]}]")
        elif kind == "MCX":
            ctrls = " ".join(
                f"{'+' if c > 0 else '-'}q[{abs(c) - 1}]" for c in g[1])
            lines.append(f"MCX {ctrls} q[{g[2]}]")
        else:
            raise GF2Error(f"unknown gate kind {kind}")
    return "\n".join(lines) + "\n"


class ParseError(GF2Error):
    pass


def _parse_q(tok: str, lineno: int) -> int:
    if not (tok.startswith("q[") and tok.endswith("]")):
        raise ParseError(f"line {lineno}: bad qubit token {tok!r}")
    return int(tok[2:-1])


def parse(text: str) -> Circuit:
    """Parse the circuit text format; raises ParseError with line numbers."""
    circuit = Circuit()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        try:
            if kind == "reg":
                circuit.add_register(Register(toks[1], int(toks[2]), toks[3]))
            elif kind == "X":
                circuit.x(_parse_q(toks[1], lineno))
            elif kind == "CNOT":
                circuit.cnot(_parse_q(toks[1], lineno), _parse_q(toks[2], lineno))
            elif kind == "SWAP":
                circuit.swap(_parse_q(toks[1], lineno), _parse_q(toks[2], lineno))
            elif kind == "CCX":
                circuit.ccx(*(_parse_q(t, lineno) for t in toks[1:4]))
            elif kind == "CCXU":
                circuit.ccxu(*(_parse_q(t, lineno) for t in toks[1:4]))
            elif kind == "MCX":
                controls = []
                for tok in toks[1:-1]:
                    if tok[0] not in "+-":
                        raise ParseError(
                            f"line {lineno}: control needs +/- polarity")
                    controls.append((_parse_q(tok[1:], lineno), tok[0] == "+"))
                circuit.mcx(controls, _parse_q(toks[-1], lineno))
            else:
                raise ParseError(f"line {lineno}: unknown gate {kind!r}")
        except (IndexError, ValueError) as e:
            raise ParseError(f"line {lineno}: malformed line {line!r}") from e
    return circuit
