"""Symplectic representation and algebra of n-qubit Pauli operators.

A Pauli operator is stored as two length-n bit vectors (packed into arbitrary
precision ints, bit i = qubit i) plus a power-of-i phase.  The value semantics
are

    matrix(p) = i**p.phase_power * sigma(x_0, z_0) (x) ... (x) sigma(x_{n-1}, z_{n-1})

with sigma(0,0)=I, sigma(1,0)=X, sigma(0,1)=Z and sigma(1,1)=Y.  The single
fixed convention Y = i * X * Z makes every phase below unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_SIGMA = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
}

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"+": 0, "": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_LETTER = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


@dataclass(frozen=True)
class PauliString:
    """n-qubit Pauli operator in symplectic bit form with a power-of-i phase."""

    n: int
    x_bits: int
    z_bits: int
    phase_power: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be nonnegative")
        mask = (1 << self.n) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit vector exceeds qubit count")
        if self.phase_power not in (0, 1, 2, 3):
            object.__setattr__(self, "phase_power", self.phase_power % 4)

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def single(n: int, qubit: int, kind: str) -> "PauliString":
        """Single-qubit X, Y or Z embedded in n qubits."""
        xb, zb = _LETTER_BITS[kind]
        return PauliString(n, xb << qubit, zb << qubit, 0)

    def is_identity_bits(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def is_hermitian(self) -> bool:
        return self.phase_power in (0, 2)

    def sign(self) -> int:
        """+1 or -1 for Hermitian Paulis."""
        if not self.is_hermitian():
            raise ValueError("non-Hermitian Pauli has no real sign")
        return 1 if self.phase_power == 0 else -1

    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x_bits, self.z_bits, (self.phase_power + 2) % 4)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; intended for small-n oracle checks."""
        if self.n > 12:
            raise ValueError("dense form is capped at 12 qubits")
        m = np.array([[1.0 + 0.0j]])
        for i in range(self.n):
            m = np.kron(m, _SIGMA[(self.x_bits >> i) & 1, (self.z_bits >> i) & 1])
        return (1j ** self.phase_power) * m

    def __str__(self) -> str:
        letters = "".join(
            _LETTER[(self.x_bits >> i) & 1, (self.z_bits >> i) & 1] for i in range(self.n)
        )
        return _PHASE_PREFIX[self.phase_power] + letters

    @staticmethod
    def from_string(text: str) -> "PauliString":
        """Parse the text form, e.g. "+XIZY", "-iZZ", "YY"."""
        body = text.strip()
        prefix = ""
        while body and body[0] in "+-i":
            prefix += body[0]
            body = body[1:]
        if prefix not in _PREFIX_PHASE:
            raise ValueError(f"bad phase prefix {prefix!r}")
        x = z = 0
        for i, ch in enumerate(body):
            if ch not in _LETTER_BITS:
                raise ValueError(f"bad Pauli letter {ch!r}")
            xb, zb = _LETTER_BITS[ch]
            x |= xb << i
            z |= zb << i
        return PauliString(len(body), x, z, _PREFIX_PHASE[prefix])


@dataclass(frozen=True)
class Region:
    """Strictly increasing qubit positions selecting a subsystem."""

    indices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError("region indices must be strictly increasing")
        if idx and idx[0] < 0:
            raise ValueError("region indices must be nonnegative")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, q) -> bool:
        return q in self.indices

    def validate(self, n: int):
        if self.indices and self.indices[-1] >= n:
            raise ValueError(f"region index {self.indices[-1]} out of range for n={n}")

    def mask(self) -> int:
        m = 0
        for q in self.indices:
            m |= 1 << q
        return m

    def complement(self, n: int) -> "Region":
        self.validate(n)
        return Region(tuple(q for q in range(n) if q not in self.indices))

    @staticmethod
    def full(n: int) -> "Region":
        return Region(tuple(range(n)))


def extract_bits(v: int, indices) -> int:
    """Gather the bits of v at the given positions into a packed int."""
    out = 0
    for i, q in enumerate(indices):
        out |= ((v >> q) & 1) << i
    return out


def spread_bits(v: int, indices) -> int:
    """Scatter the low bits of v to the given positions (inverse of extract)."""
    out = 0
    for i, q in enumerate(indices):
        out |= ((v >> i) & 1) << q
    return out


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product a*b with the exact power-of-i phase.

    Per qubit, sigma_a * sigma_b = i^g * sigma_{a xor b}; summing the local
    exponents via popcounts gives the global phase in O(n/64) word operations.
    """
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    xc = a.x_bits ^ b.x_bits
    zc = a.z_bits ^ b.z_bits
    # i-exponent from sigma(x,z) = i^{x&z} X^x Z^z and the Z^za X^xb reorder.
    delta = (
        (a.x_bits & a.z_bits).bit_count()
        + (b.x_bits & b.z_bits).bit_count()
        + 2 * (a.z_bits & b.x_bits).bit_count()
        - (xc & zc).bit_count()
    )
    return PauliString(a.n, xc, zc, (a.phase_power + b.phase_power + delta) % 4)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product a.x*b.z + a.z*b.x vanishes mod 2."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    acc = (a.x_bits & b.z_bits).bit_count() + (a.z_bits & b.x_bits).bit_count()
    return acc % 2 == 0


def restrict(p: PauliString, region: Region):
    """Restriction of p to region, or None when p is not identity outside.

    None encodes that the partial trace of p over the complement vanishes;
    otherwise the result is d_F^{-1} tr_F(p) with the phase preserved.
    """
    region.validate(p.n)
    mask = region.mask()
    if (p.x_bits | p.z_bits) & ~mask:
        return None
    return PauliString(
        len(region),
        extract_bits(p.x_bits, region.indices),
        extract_bits(p.z_bits, region.indices),
        p.phase_power,
    )


def embed(p: PauliString, region: Region, n: int) -> PauliString:
    """Embed a Pauli on region into n qubits, identity elsewhere."""
    region.validate(n)
    if len(region) != p.n:
        raise ValueError("region size must match Pauli size")
    return PauliString(
        n,
        spread_bits(p.x_bits, region.indices),
        spread_bits(p.z_bits, region.indices),
        p.phase_power,
    )
