"""Binary polynomial and GF(2^n) field arithmetic.

Polynomials over F2 are stored as Python integers: bit i is the coefficient
of x^i.  This little-endian convention matches the qubit-register order used
by the circuit synthesizers, so a field element and the bitstring fed to a
simulated register read the same way.

Everything here is classical and serves two roles: the ground-truth oracle
that synthesized circuits are checked against, and the source of the
precomputed constants (reduction matrices, CRT constants, ...) that the
synthesizers consume.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce


class GF2Error(ValueError):
    pass


class ZeroModulusError(GF2Error):
    pass


class ZeroDivisionGF2Error(GF2Error):
    pass


class InvalidModulusSetError(GF2Error):
    pass


class BinaryPoly:
    """Immutable polynomial over F2, backed by an int bit-vector.

    Bit i of ``bits`` is the coefficient of x^i.  ``degree`` is -1 for the
    zero polynomial (stands in for the usual "-infinity").
    """

    __slots__ = ("bits",)

    def __init__(self, bits: int):
        if bits < 0:
            raise GF2Error("coefficient vector must be non-negative")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, *a):
        raise AttributeError("BinaryPoly is immutable")

    @classmethod
    def from_coeffs(cls, coeffs) -> "BinaryPoly":
        """Build from an iterable of 0/1 coefficients, index = degree."""
        bits = 0
        for i, c in enumerate(coeffs):
            if c & 1:
                bits |= 1 << i
        return cls(bits)

    @classmethod
    def from_terms(cls, *degrees: int) -> "BinaryPoly":
        bits = 0
        for d in degrees:
            bits ^= 1 << d
        return cls(bits)

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def coeff(self, i: int) -> int:
        return (self.bits >> i) & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return self.bits.bit_count()

    def __add__(self, other: "BinaryPoly") -> "BinaryPoly":
        return BinaryPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "BinaryPoly") -> "BinaryPoly":
        return BinaryPoly(clmul(self.bits, other.bits))

    def __mod__(self, other: "BinaryPoly") -> "BinaryPoly":
        return BinaryPoly(clmod(self.bits, other.bits))

    def __pow__(self, e: int) -> "BinaryPoly":
        r = BinaryPoly(1)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryPoly) and self.bits == other.bits

    def __hash__(self):
        return hash(("BinaryPoly", self.bits))

    def __repr__(self):
        return f"BinaryPoly({self.bits:#x})"

    def __str__(self):
        if self.bits == 0:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            if self.coeff(i):
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return "+".join(terms)


ZERO = BinaryPoly(0)
ONE = BinaryPoly(1)
X = BinaryPoly(2)


def clmul(a: int, b: int) -> int:
    """Carry-less product of two coefficient vectors."""
    r = 0
    while b:
        low = b & -b
        r ^= a * low  # multiplying by a power of two is a shift
        b ^= low
    return r


def cldivmod(a: int, m: int) -> tuple[int, int]:
    if m == 0:
        raise ZeroModulusError("division by the zero polynomial")
    dm = m.bit_length() - 1
    q = 0
    while a.bit_length() - 1 >= dm and a:
        shift = (a.bit_length() - 1) - dm
        q ^= 1 << shift
        a ^= m << shift
    return q, a


def clmod(a: int, m: int) -> int:
    return cldivmod(a, m)[1]


def poly_mul_mod(a: BinaryPoly, b: BinaryPoly, m: BinaryPoly) -> BinaryPoly:
    """Carry-less product of a and b reduced modulo m (schoolbook oracle)."""
    if m.is_zero():
        raise ZeroModulusError("zero modulus")
    return BinaryPoly(clmod(clmul(a.bits, b.bits), m.bits))


def poly_gcd(a: BinaryPoly, b: BinaryPoly) -> BinaryPoly:
    x, y = a.bits, b.bits
    while y:
        x, y = y, clmod(x, y)
    return BinaryPoly(x)


def poly_egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid on coefficient vectors: returns (g, s, t), sa+tb=g."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q, r = cldivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 ^ clmul(q, s1)
        t0, t1 = t1, t0 ^ clmul(q, t1)
    return r0, s0, t0


def poly_inv_mod(a: BinaryPoly, m: BinaryPoly) -> BinaryPoly:
    """Inverse of a modulo m; requires gcd(a, m) = 1."""
    if a.bits == 0:
        raise ZeroDivisionGF2Error("inverse of zero")
    g, s, _ = poly_egcd(a.bits, m.bits)
    if g != 1:
        raise GF2Error(f"{a} is not invertible modulo {m}")
    return BinaryPoly(clmod(s, m.bits))


def is_irreducible(p: BinaryPoly) -> bool:
    """Rabin irreducibility test over F2."""
    d = p.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if not p.coeff(0):  # divisible by x
        return False
    # x^(2^d) == x mod p, and for every prime divisor r of d,
    # gcd(x^(2^(d/r)) - x, p) == 1.
    def xpow2k(k: int) -> int:
        v = 2  # the polynomial x
        for _ in range(k):
            v = clmod(clmul(v, v), p.bits)
        return v

    if xpow2k(d) != 2:
        return False
    for r in _prime_divisors(d):
        if poly_gcd(BinaryPoly(xpow2k(d // r) ^ 2), p).degree > 0:
            return False
    return True


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


_IRRED_CACHE: dict[int, list[BinaryPoly]] = {}


def enumerate_irreducibles(d: int) -> list[BinaryPoly]:
    """All monic irreducible polynomials of degree d, ascending by integer
    encoding.  The ordering is fixed so that configs indexing "the i-th
    irreducible of degree d" are reproducible.
    """
    if d < 1:
        raise GF2Error("degree must be >= 1")
    if d not in _IRRED_CACHE:
        if d == 1:
            polys = [BinaryPoly(2), BinaryPoly(3)]  # x and x+1
        else:
            polys = []
            # constant term must be 1, else divisible by x
            for bits in range((1 << d) + 1, 1 << (d + 1), 2):
                p = BinaryPoly(bits)
                if is_irreducible(p):
                    polys.append(p)
        _IRRED_CACHE[d] = polys
    return list(_IRRED_CACHE[d])


# Irreducible field polynomials for the standardized binary curves.
STANDARD_POLYS = {
    163: BinaryPoly.from_terms(163, 7, 6, 3, 0),
    233: BinaryPoly.from_terms(233, 74, 0),
    283: BinaryPoly.from_terms(283, 12, 7, 5, 0),
    571: BinaryPoly.from_terms(571, 10, 5, 2, 0),
}


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^n) described by its extension degree and irreducible modulus."""

    n: int
    p: BinaryPoly

    def __post_init__(self):
        if self.p.degree != self.n:
            raise GF2Error(f"modulus degree {self.p.degree} != n = {self.n}")
        if self.n < 2:
            raise GF2Error("extension degree must be >= 2")
        if not is_irreducible(self.p):
            raise GF2Error(f"{self.p} is not irreducible")

    @classmethod
    def standard(cls, n: int) -> "FieldSpec":
        if n not in STANDARD_POLYS:
            raise GF2Error(f"no standard field of size {n}")
        return cls(n, STANDARD_POLYS[n])

    def mul(self, a: BinaryPoly, b: BinaryPoly) -> BinaryPoly:
        return poly_mul_mod(a, b, self.p)

    def inv(self, a: BinaryPoly) -> BinaryPoly:
        return field_inv(a, self)

    def elements(self):
        return (BinaryPoly(v) for v in range(1 << self.n))


def field_inv(a: BinaryPoly, field: FieldSpec) -> BinaryPoly:
    """Multiplicative inverse in GF(2^n) via extended Euclid.

    Deliberately independent of the exponentiation-based inversion circuits,
    so circuit validation checks against a genuinely different computation.
    """
    if a.is_zero():
        raise ZeroDivisionGF2Error("zero has no inverse")
    if a.degree >= field.n:
        raise GF2Error("element degree out of range")
    return poly_inv_mod(a, field.p)


@dataclass(frozen=True)
class ModulusSet:
    """Pairwise-coprime factors m_i = base^exp steering CRT multiplication.

    ``factors`` is a tuple of (base, exponent) pairs; bases must be distinct
    irreducibles, which makes the m_i pairwise coprime.
    """

    factors: tuple[tuple[BinaryPoly, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise InvalidModulusSetError("empty modulus set")
        seen = set()
        for base, exp in self.factors:
            if exp < 1:
                raise InvalidModulusSetError("factor exponent must be >= 1")
            if not is_irreducible(base):
                raise InvalidModulusSetError(f"base {base} is not irreducible")
            if base.bits in seen:
                raise InvalidModulusSetError(f"repeated base {base}")
            seen.add(base.bits)

    @property
    def moduli(self) -> list[BinaryPoly]:
        return [base ** exp for base, exp in self.factors]

    @property
    def m(self) -> BinaryPoly:
        return reduce(lambda a, b: a * b, self.moduli, ONE)

    def omega(self, n: int) -> int:
        return max(0, 2 * n - 1 - self.m.degree)


def validate_modulus_set(modset: ModulusSet, n: int, max_omega: int = 8) -> int:
    """Check a modulus set against field size n; returns the correction
    count omega = max(0, 2n-1-deg(m)).
    """
    for base, exp in modset.factors:
        avail = len(enumerate_irreducibles(base.degree)) if base.degree > 1 else 2
        if avail < 1:
            raise InvalidModulusSetError("no irreducibles of required degree")
    # pairwise coprimality (distinct irreducible bases imply it; verify anyway)
    mods = modset.moduli
    for i in range(len(mods)):
        for j in range(i + 1, len(mods)):
            if poly_gcd(mods[i], mods[j]).degree > 0:
                raise InvalidModulusSetError(
                    f"factors {mods[i]} and {mods[j]} are not coprime")
    omega = modset.omega(n)
    if omega > max_omega:
        raise InvalidModulusSetError(
            f"omega = {omega} exceeds the configured maximum {max_omega}")
    return omega


def crt_constants(modset: ModulusSet) -> list[BinaryPoly]:
    """CRT recombination constants q_i with q_i = 1 mod m_i, 0 mod m_j."""
    mods = modset.moduli
    m = modset.m
    out = []
    for mi in mods:
        cofactor = BinaryPoly(cldivmod(m.bits, mi.bits)[0])
        try:
            inv = poly_inv_mod(BinaryPoly(clmod(cofactor.bits, mi.bits)), mi)
        except GF2Error as e:
            raise InvalidModulusSetError(f"factors not coprime: {e}") from e
        qi = cofactor * inv
        out.append(qi)
    for i, qi in enumerate(out):
        for j, mj in enumerate(mods):
            want = 1 if i == j else 0
            if clmod(qi.bits, mj.bits) != want:
                raise InvalidModulusSetError("CRT residue check failed")
    return out


def parse_modulus_set(text: str) -> ModulusSet:
    """Parse a modulus-set config: one factor per line.

    Each line is either ``deg:index:exp`` (index is 1-based into the fixed
    ordering of irreducibles of that degree) or a literal 0/1 string whose
    i-th character is the coefficient of x^i, optionally followed by ``^exp``.
    ``#`` starts a comment.
    """
    factors = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            deg_s, idx_s, exp_s = line.split(":")
            deg, idx, exp = int(deg_s), int(idx_s), int(exp_s)
            polys = enumerate_irreducibles(deg)
            if not 1 <= idx <= len(polys):
                raise InvalidModulusSetError(
                    f"no irreducible #{idx} of degree {deg} (have {len(polys)})")
            factors.append((polys[idx - 1], exp))
        else:
            if "^" in line:
                bits_s, exp_s = line.split("^")
                exp = int(exp_s)
            else:
                bits_s, exp = line, 1
            base = BinaryPoly.from_coeffs(int(c) for c in bits_s.strip())
            factors.append((base, exp))
    return ModulusSet(tuple(factors))
