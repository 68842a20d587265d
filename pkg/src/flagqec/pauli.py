"""Unsigned Pauli algebra and stabilizer-code bookkeeping.

An n-qubit Pauli is stored as a pair of n-bit masks (x, z): bit i-1 of x
marks an X component on qubit i, bit i-1 of z a Z component, both set for Y.
Phases are never tracked; every quantity derived here (syndromes, flag bits,
logical-failure classification) depends only on the unsigned operator, and
dropping the sign removes a whole class of bookkeeping bugs.

Qubits are labeled 1..n in all public interfaces.  The string form follows
the convention that the leftmost character acts on qubit 1, so "XZZXI" has
an X on qubit 1.  The parser also accepts subscript-set notation such as
"Z{8,9}" or mixed products like "Z{2,5}X{3,8}".
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

_LETTER_TO_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_TO_LETTER = {bits: letter for letter, bits in _LETTER_TO_BITS.items()}

_DENSE_RE = re.compile(r"^[IXYZ]+$")
_TOKEN_RE = re.compile(r"([XYZ])(?:\{\s*(\d+(?:\s*,\s*\d+)*)\s*\}|(\d+))")


@dataclass(frozen=True)
class PauliOperator:
    """An unsigned Pauli on n qubits, as paired X/Z bit masks."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        mask = (1 << self.n) - 1
        if not (0 <= self.x <= mask and 0 <= self.z <= mask):
            raise ValueError(f"bit masks out of range for n={self.n}")

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        return cls(n, 0, 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliOperator":
        """The Pauli `letter` on one qubit (1-based), identity elsewhere."""
        if not 1 <= qubit <= n:
            raise ValueError(f"qubit {qubit} outside 1..{n}")
        xb, zb = _LETTER_TO_BITS[letter]
        bit = 1 << (qubit - 1)
        return cls(n, xb * bit, zb * bit)

    @classmethod
    def from_string(cls, text: str, n: int | None = None) -> "PauliOperator":
        """Parse "IIZXI", "Z{8,9}", "Z3", or products like "Z{2,5}X{3,8}".

        Dense strings fix n by their length.  Subscript forms need n
        passed explicitly.  Repeated subscripts multiply, so "Z{1}X{1}"
        parses to a Y on qubit 1.
        """
        text = text.strip()
        if _DENSE_RE.match(text):
            if n is not None and n != len(text):
                raise ValueError(f"dense string has length {len(text)}, expected n={n}")
            x = z = 0
            for i, letter in enumerate(text):
                xb, zb = _LETTER_TO_BITS[letter]
                x |= xb << i
                z |= zb << i
            return cls(len(text), x, z)

        if n is None:
            raise ValueError(f"subscript form needs an explicit qubit count: {text!r}")
        x = z = 0
        pos = 0
        for match in _TOKEN_RE.finditer(text):
            if match.start() != pos:
                raise ValueError(f"unrecognized token at {text[pos:]!r}")
            pos = match.end()
            letter = match.group(1)
            qubits = match.group(2) if match.group(2) is not None else match.group(3)
            xb, zb = _LETTER_TO_BITS[letter]
            for q in (int(tok) for tok in qubits.split(",")):
                if not 1 <= q <= n:
                    raise ValueError(f"qubit {q} outside 1..{n} in {text!r}")
                bit = 1 << (q - 1)
                x ^= xb * bit
                z ^= zb * bit
        if pos != len(text):
            raise ValueError(f"unrecognized token at {text[pos:]!r}")
        return cls(n, x, z)

    def letter(self, qubit: int) -> str:
        bit = 1 << (qubit - 1)
        return _BITS_TO_LETTER[(1 if self.x & bit else 0, 1 if self.z & bit else 0)]

    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def support(self) -> tuple[int, ...]:
        bits = self.x | self.z
        return tuple(i + 1 for i in range(self.n) if bits >> i & 1)

    def x_part(self) -> "PauliOperator":
        return PauliOperator(self.n, self.x, 0)

    def z_part(self) -> "PauliOperator":
        return PauliOperator(self.n, 0, self.z)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise ValueError(f"qubit counts differ: {self.n} vs {other.n}")
        return PauliOperator(self.n, self.x ^ other.x, self.z ^ other.z)

    def commutes(self, other: "PauliOperator") -> bool:
        return symplectic_product(self, other) == 0

    def __str__(self) -> str:
        return "".join(self.letter(q) for q in range(1, self.n + 1))

    def set_form(self) -> str:
        """Subscript-set rendering, e.g. "Z{2,5}X{3,8}"; "I" for identity."""
        parts = []
        for letter in "XYZ":
            qubits = [q for q in range(1, self.n + 1) if self.letter(q) == letter]
            if qubits:
                parts.append(f"{letter}{{{','.join(str(q) for q in qubits)}}}")
        return "".join(parts) if parts else "I"


def symplectic_product(a: PauliOperator, b: PauliOperator) -> int:
    """1 when the operators anticommute, 0 when they commute."""
    if a.n != b.n:
        raise ValueError(f"qubit counts differ: {a.n} vs {b.n}")
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) & 1


def weight_le1_paulis(n: int) -> list[PauliOperator]:
    """Identity plus every single-qubit Pauli, qubit-major, X before Y before Z."""
    out = [PauliOperator.identity(n)]
    for q in range(1, n + 1):
        for letter in "XYZ":
            out.append(PauliOperator.single(n, q, letter))
    return out


# ---------------------------------------------------------------------------
# GF(2) linear algebra on symplectic bit vectors.
#
# A Pauli maps to the 2n-bit integer x | z << n.  Row reduction over these
# vectors gives span membership, canonical coset representatives, and kernel
# bases; everything downstream (stabilizer membership, logical operators)
# reduces to these three.


def _to_vec(p: PauliOperator) -> int:
    return p.x | p.z << p.n


def _from_vec(v: int, n: int) -> PauliOperator:
    mask = (1 << n) - 1
    return PauliOperator(n, v & mask, v >> n)


def rref_gf2(rows: list[int]) -> list[int]:
    """Reduced row echelon basis of the span of `rows` (pivot-descending)."""
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    # back-substitute so each pivot appears in exactly one row
    for i, b in enumerate(basis):
        pivot = 1 << (b.bit_length() - 1)
        basis = [r ^ b if (r & pivot and j != i) else r for j, r in enumerate(basis)]
    return sorted(basis, reverse=True)


def reduce_gf2(v: int, basis: list[int]) -> int:
    """Canonical representative of v modulo span(basis); basis must be RREF."""
    for b in basis:
        pivot = 1 << (b.bit_length() - 1)
        if v & pivot:
            v ^= b
    return v


def kernel_basis_gf2(rows: list[int], width: int) -> list[int]:
    """Basis of {v : parity(v & r) = 0 for each row r}, over `width` bits."""
    basis = rref_gf2(rows)
    pivots = {b.bit_length() - 1 for b in basis}
    kernel = []
    for free in range(width):
        if free in pivots:
            continue
        v = 1 << free
        for b in basis:
            if (v & b).bit_count() & 1:
                v |= 1 << (b.bit_length() - 1)
        kernel.append(v)
    return kernel


def _symplectic_dual(p: PauliOperator) -> int:
    # parity(vec(q) & dual(p)) == symplectic_product(p, q)
    return p.z | p.x << p.n


def logical_pairs(
    n: int, generators: list[PauliOperator]
) -> list[tuple[PauliOperator, PauliOperator]]:
    """Anticommuting logical pairs completing a stabilizer group.

    Finds a basis of the normalizer modulo the group and pairs it up so
    that pair i anticommutes within itself and commutes with pair j != i
    and with every generator.  The assignment of which member plays the
    X role is arbitrary but deterministic.
    """
    duals = [_symplectic_dual(g) for g in generators]
    normalizer = kernel_basis_gf2(duals, 2 * n)
    stab = rref_gf2([_to_vec(g) for g in generators])
    classes = rref_gf2([reduce_gf2(v, stab) for v in normalizer])

    def sp(u: int, v: int) -> int:
        return (((u & (1 << n) - 1) & v >> n).bit_count() + ((u >> n) & v & (1 << n) - 1).bit_count()) & 1

    pairs = []
    remaining = list(classes)
    while remaining:
        a = remaining.pop(0)
        partner = next((i for i, v in enumerate(remaining) if sp(a, v)), None)
        if partner is None:
            raise ValueError("normalizer quotient is not symplectic; generators dependent?")
        b = remaining.pop(partner)
        remaining = [v ^ (a * sp(v, b)) ^ (b * sp(v, a)) for v in remaining]
        pairs.append((_from_vec(a, n), _from_vec(b, n)))
    return pairs


def group_elements(generators: list[PauliOperator]) -> list[PauliOperator]:
    """All products of subsets of `generators`, by Gray-code enumeration."""
    if not generators:
        return []
    n = generators[0].n
    out = [PauliOperator.identity(n)]
    current = PauliOperator.identity(n)
    for i in range(1, 1 << len(generators)):
        current = current * generators[(i & -i).bit_length() - 1]
        out.append(current)
    return out


def coset_min_weight(p: PauliOperator, generators: list[PauliOperator]) -> int:
    """Minimum weight of p times any product of the generators."""
    best = p.weight()
    x, z = p.x, p.z
    for g in group_elements(generators)[1:]:
        w = ((x ^ g.x) | (z ^ g.z)).bit_count()
        if w < best:
            best = w
    return best


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerCode:
    """An [[n,k,d]] stabilizer code with a fixed generator ordering.

    Syndromes are bit tuples ordered like `generators` (1 = anticommutes).
    The generator order matters: it fixes how syndromes print and how
    extraction rounds walk the generators, so it is part of the identity
    of the code, not a detail.
    """

    name: str
    n: int
    k: int
    d: int
    generators: tuple[PauliOperator, ...]
    logical_x: tuple[PauliOperator, ...]
    logical_z: tuple[PauliOperator, ...]
    is_css: bool
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.generators) != self.n - self.k:
            raise ValueError(f"{self.name}: expected {self.n - self.k} generators")
        for a, b in itertools.combinations(self.generators, 2):
            if symplectic_product(a, b):
                raise ValueError(f"{self.name}: generators {a} and {b} anticommute")
        rank = len(rref_gf2([_to_vec(g) for g in self.generators]))
        if rank != len(self.generators):
            raise ValueError(f"{self.name}: generators are dependent")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError(f"{self.name}: expected {self.k} logical pairs")
        for i, lx in enumerate(self.logical_x):
            for g in self.generators:
                if symplectic_product(lx, g) or symplectic_product(self.logical_z[i], g):
                    raise ValueError(f"{self.name}: logical pair {i + 1} hits a generator")
            for j, lz in enumerate(self.logical_z):
                expect = 1 if i == j else 0
                if symplectic_product(lx, lz) != expect:
                    raise ValueError(f"{self.name}: bad commutation X{i + 1} vs Z{j + 1}")
        if self.is_css:
            for g in self.generators:
                if g.x and g.z:
                    raise ValueError(f"{self.name}: mixed-type generator in a CSS code")

    # -- syndromes and corrections ------------------------------------

    def syndrome_of(self, e: PauliOperator) -> tuple[int, ...]:
        if e.n != self.n:
            raise ValueError(f"operator acts on {e.n} qubits, code has {self.n}")
        return tuple(symplectic_product(g, e) for g in self.generators)

    def _weight1_lut(self) -> dict[tuple[int, ...], PauliOperator]:
        lut = self._cache.get("w1")
        if lut is None:
            lut = {}
            for p in weight_le1_paulis(self.n):
                lut.setdefault(self.syndrome_of(p), p)
            self._cache["w1"] = lut
        return lut

    def min_weight_correction(self, syndrome: tuple[int, ...]) -> PauliOperator:
        """Minimum-weight Pauli with the given syndrome, weight <= (d-1)//2.

        Ties break toward the lowest qubit, then X before Y before Z.
        Raises ValueError when no low-weight Pauli matches (possible for
        non-perfect codes and always for d=2 with a nonzero syndrome).
        """
        if len(syndrome) != len(self.generators):
            raise ValueError("syndrome length does not match generator count")
        lut = self._weight1_lut() if self.d >= 3 else {self.syndrome_of(PauliOperator.identity(self.n)): PauliOperator.identity(self.n)}
        try:
            return lut[tuple(syndrome)]
        except KeyError:
            raise ValueError(f"{self.name}: no weight<={(self.d - 1) // 2} match for syndrome {syndrome}") from None

    # -- group structure ----------------------------------------------

    def _stab_rref(self) -> list[int]:
        rows = self._cache.get("rref")
        if rows is None:
            rows = rref_gf2([_to_vec(g) for g in self.generators])
            self._cache["rref"] = rows
        return rows

    def in_stabilizer_group(self, p: PauliOperator) -> bool:
        return reduce_gf2(_to_vec(p), self._stab_rref()) == 0

    def canonical_rep(self, p: PauliOperator) -> PauliOperator:
        """Unique representative of p's coset of the stabilizer group."""
        return _from_vec(reduce_gf2(_to_vec(p), self._stab_rref()), self.n)

    def coset_min_weight(self, p: PauliOperator) -> int:
        return coset_min_weight(p, list(self.generators))

    def logical_effect(self, residual: PauliOperator) -> str:
        """Classify a syndrome-free residual: identity, stabilizer, or logical."""
        if any(self.syndrome_of(residual)):
            raise ValueError("residual has a nonzero syndrome; correct it first")
        if residual.is_identity():
            return "identity"
        return "stabilizer" if self.in_stabilizer_group(residual) else "logical"

    # -- convenience ---------------------------------------------------

    def generator_strings(self) -> tuple[str, ...]:
        return tuple(str(g) for g in self.generators)

    def x_generator_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.z == 0 and g.x)

    def z_generator_indices(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.generators) if g.x == 0 and g.z)

    def max_generator_weight(self) -> int:
        return max(g.weight() for g in self.generators)
