"""Clifford tableaus and stabilizer mixed states over packed GF(2) rows.

A Clifford unitary (modulo global phase) is stored as the images of the 2n
generators X_i, Z_i under conjugation.  Uniform sampling builds the
symplectic part from hyperbolic pairs realised by transvections, which gives
exact uniform weights and doubles as an exhaustive enumerator at n <= 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .circuits import Gate, gate
from .gf2 import gf2_rank
from .pauli import PauliString, Region, commutes, extract_bits, pauli_mul, spread_bits


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# ---------------------------------------------------------------------------
# symplectic vectors: 2n-bit ints v = x | (z << n)


def _swap_halves(v: int, n: int) -> int:
    mask = (1 << n) - 1
    return ((v & mask) << n) | (v >> n)


def _sym(u: int, v: int, n: int) -> int:
    """Symplectic inner product of packed vectors, 0 or 1."""
    return (u & _swap_halves(v, n)).bit_count() & 1


def _transvection(h: int, v: int, n: int) -> int:
    return v ^ h if _sym(h, v, n) else v


def _find_transvection_pair(x: int, y: int, n: int) -> Tuple[int, ...]:
    """Transvection vectors (applied in order) mapping x to y.

    Both inputs nonzero; all returned vectors lie in the span of coordinate
    pairs touched by x and y, so they fix any standard generator whose pair
    is untouched.
    """
    if x == y:
        return ()
    if _sym(x, y, n):
        return (x ^ y,)
    # pick z with <x,z> = <y,z> = 1
    w1 = 1 << _partner(_lowest_bit(x), n)
    w2 = 1 << _partner(_lowest_bit(y), n)
    if _sym(y, w1, n):
        z = w1
    elif _sym(x, w2, n):
        z = w2
    else:
        z = w1 ^ w2
    return (x ^ z, z ^ y)


def _lowest_bit(v: int) -> int:
    return (v & -v).bit_length() - 1


def _partner(coord: int, n: int) -> int:
    return coord + n if coord < n else coord - n


def _pair_fixing_transvections(e1: int, w: int, v: int, n: int) -> Tuple[int, ...]:
    """Transvections fixing e1 that map w to v, given <e1,w> = <e1,v> = 1."""
    if w == v:
        return ()
    if _sym(w, v, n):
        return (w ^ v,)
    z = e1 ^ w
    return (w ^ z, z ^ v)


def _symplectic_rows_from_choices(n: int, choices) -> List[int]:
    """Build images of [X_0..X_{n-1}, Z_0..Z_{n-1}] from per-step (u, v) pairs.

    choices[k] = (u, v) with u nonzero and v satisfying <u,v> = 1, both
    supported on coordinates {k..n-1, n+k..2n-1}.  The resulting map is the
    composition R_0 o R_1 o ... o R_{n-1}; distinct choice sequences give
    distinct symplectic matrices and every matrix arises exactly once.
    """
    transvections: List[int] = []
    for k in range(n):
        u, v = choices[k]
        e1 = 1 << k
        e2 = 1 << (n + k)
        part_a = _find_transvection_pair(e1, u, n)
        # v' = A^{-1}(v); transvections are involutions so invert by reversing
        vp = v
        for h in reversed(part_a):
            vp = _transvection(h, vp, n)
        part_c = _pair_fixing_transvections(e1, e2, vp, n)
        transvections.append((part_c, part_a))

    rows = [1 << j for j in range(2 * n)]
    # Q = R_0 o ... o R_{n-1}; build by left-composing from the last step
    for part_c, part_a in reversed(transvections):
        for h in part_c + part_a:
            rows = [_transvection(h, r, n) for r in rows]
    return rows


def _random_pair_choice(n: int, k: int, rng: np.random.Generator) -> Tuple[int, int]:
    coords = list(range(k, n)) + list(range(n + k, 2 * n))
    m = len(coords)
    u = 0
    while u == 0:
        bits = rng.integers(0, 2, size=m)
        u = sum(int(b) << c for b, c in zip(bits, coords))
    s = _swap_halves(u, n)
    jstar = _lowest_bit(s)
    free = 0
    bits = rng.integers(0, 2, size=m)
    for b, c in zip(bits, coords):
        if c != jstar:
            free |= int(b) << c
    parity = (free & s).bit_count() & 1
    v = free | ((1 ^ parity) << jstar)
    return u, v


def _iter_pair_choices(n: int, k: int):
    coords = list(range(k, n)) + list(range(n + k, 2 * n))
    m = len(coords)
    for a in range(1, 1 << m):
        u = 0
        for j in range(m):
            if (a >> j) & 1:
                u |= 1 << coords[j]
        s = _swap_halves(u, n)
        jstar = _lowest_bit(s)
        free_coords = [c for c in coords if c != jstar]
        for b in range(1 << (m - 1)):
            free = 0
            for j in range(m - 1):
                if (b >> j) & 1:
                    free |= 1 << free_coords[j]
            parity = (free & s).bit_count() & 1
            yield u, free | ((1 ^ parity) << jstar)


def symplectic_group_order(n: int) -> int:
    order = 1
    for j in range(1, n + 1):
        order *= (4**j - 1) << (2 * j - 1)
    return order


def clifford_group_order(n: int) -> int:
    """Number of Cliffords modulo global phase: 2^(n^2+2n) * prod(4^j - 1)."""
    return symplectic_group_order(n) << (2 * n)


# ---------------------------------------------------------------------------
# tableau


@dataclass
class CliffordTableau:
    """Clifford unitary as conjugation images of X_i and Z_i.

    Treated as an immutable value once constructed.
    """

    n: int
    x_images: Tuple[PauliString, ...]
    z_images: Tuple[PauliString, ...]

    def __post_init__(self):
        self.x_images = tuple(self.x_images)
        self.z_images = tuple(self.z_images)
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise ValueError("need exactly n X-images and n Z-images")
        for p in self.x_images + self.z_images:
            if p.n != self.n:
                raise ValueError("image size mismatch")
            if not p.is_hermitian():
                raise ValueError("images must be Hermitian (phase in {0,2})")

    @staticmethod
    def identity(n: int) -> "CliffordTableau":
        xs = tuple(PauliString.single(n, q, "X") for q in range(n))
        zs = tuple(PauliString.single(n, q, "Z") for q in range(n))
        return CliffordTableau(n, xs, zs)

    def is_symplectic(self) -> bool:
        """Check the commutation pattern of the images."""
        for i in range(self.n):
            for j in range(self.n):
                if commutes(self.x_images[i], self.z_images[j]) != (i != j):
                    return False
                if not commutes(self.x_images[i], self.x_images[j]):
                    return False
                if not commutes(self.z_images[i], self.z_images[j]):
                    return False
        return True

    def conjugate(self, p: PauliString) -> PauliString:
        """Image T p T^dagger, with exact phase tracking.

        Uses p = i^{q + |x&z|} * prod_i X_i^{x_i} * prod_i Z_i^{z_i}, replacing
        each generator by its stored image.
        """
        if p.n != self.n:
            raise ValueError("size mismatch")
        acc = PauliString.identity(self.n)
        x = p.x_bits
        while x:
            q = _lowest_bit(x)
            acc = pauli_mul(acc, self.x_images[q])
            x &= x - 1
        z = p.z_bits
        while z:
            q = _lowest_bit(z)
            acc = pauli_mul(acc, self.z_images[q])
            z &= z - 1
        extra = p.phase_power + (p.x_bits & p.z_bits).bit_count()
        return PauliString(self.n, acc.x_bits, acc.z_bits, (acc.phase_power + extra) % 4)

    def conjugate_many(self, paulis: Sequence[PauliString]) -> List[PauliString]:
        return [self.conjugate(p) for p in paulis]

    def compose(self, first: "CliffordTableau") -> "CliffordTableau":
        """Tableau of self applied after `first` (matrix product self * first)."""
        if first.n != self.n:
            raise ValueError("size mismatch")
        xs = tuple(self.conjugate(p) for p in first.x_images)
        zs = tuple(self.conjugate(p) for p in first.z_images)
        return CliffordTableau(self.n, xs, zs)

    def inverse(self) -> "CliffordTableau":
        """Tableau of the inverse unitary."""
        n = self.n
        rows = [
            img.x_bits | (img.z_bits << n) for img in list(self.x_images) + list(self.z_images)
        ]
        inv_rows = _symplectic_inverse_rows(rows, n)
        imgs = []
        for row in inv_rows:
            cand = PauliString(n, row & ((1 << n) - 1), row >> n, 0)
            # fix the sign so that conjugating back returns +generator
            round_trip = self.conjugate(cand)
            imgs.append(cand if round_trip.phase_power == 0 else cand.negate())
        return CliffordTableau(n, tuple(imgs[:n]), tuple(imgs[n:]))

    def apply_gate(self, g: Gate) -> "CliffordTableau":
        """Tableau with g appended after the current circuit."""
        g.validate(self.n)
        if not g.is_clifford():
            raise ValueError(f"{g.name} is not a Clifford gate")
        xs = tuple(_conj_gate(p, g) for p in self.x_images)
        zs = tuple(_conj_gate(p, g) for p in self.z_images)
        return CliffordTableau(self.n, xs, zs)

    @staticmethod
    def from_circuit(gates: Iterable[Gate], n: int) -> "CliffordTableau":
        xs = [PauliString.single(n, q, "X") for q in range(n)]
        zs = [PauliString.single(n, q, "Z") for q in range(n)]
        for g in gates:
            g.validate(n)
            if not g.is_clifford():
                raise ValueError(f"{g.name} is not a Clifford gate")
            for i in range(n):
                xs[i] = _conj_gate(xs[i], g)
                zs[i] = _conj_gate(zs[i], g)
        return CliffordTableau(n, tuple(xs), tuple(zs))


def _symplectic_inverse_rows(rows: List[int], n: int) -> List[int]:
    """Inverse of a symplectic bit matrix via M^{-1} = J M^T J."""
    nn = 2 * n
    # transpose
    cols = [0] * nn
    for i, row in enumerate(rows):
        r = row
        while r:
            j = _lowest_bit(r)
            cols[j] |= 1 << i
            r &= r - 1
    # J swaps the x/z halves on both sides
    out = [0] * nn
    for i in range(nn):
        out[i] = _swap_halves(cols[_partner(i, n)], n)
    return out


def _conj_gate(p: PauliString, g: Gate) -> PauliString:
    """Conjugate a Pauli by a single Clifford gate, g p g^dagger."""
    x, z, ph = p.x_bits, p.z_bits, p.phase_power
    if g.name == "H":
        (q,) = g.qubits
        b = 1 << q
        xq, zq = x & b, z & b
        if xq and zq:
            ph = (ph + 2) % 4
        x = (x & ~b) | (b if zq else 0)
        z = (z & ~b) | (b if xq else 0)
        return PauliString(p.n, x, z, ph)
    if g.name == "S":
        (q,) = g.qubits
        b = 1 << q
        if x & z & b:
            ph = (ph + 2) % 4
        return PauliString(p.n, x, z ^ (x & b), ph)
    if g.name == "SDG":
        (q,) = g.qubits
        b = 1 << q
        if (x & b) and not (z & b):
            ph = (ph + 2) % 4
        return PauliString(p.n, x, z ^ (x & b), ph)
    if g.name == "CX":
        c, t = g.qubits
        bc, bt = 1 << c, 1 << t
        xc, zc = bool(x & bc), bool(z & bc)
        xt, zt = bool(x & bt), bool(z & bt)
        if xc and zt and (xt == zc):
            ph = (ph + 2) % 4
        if xc:
            x ^= bt
        if zt:
            z ^= bc
        return PauliString(p.n, x, z, ph)
    if g.name == "PERM":
        perm = g.perm
        return PauliString(
            p.n,
            _permute_bits(x, perm),
            _permute_bits(z, perm),
            ph,
        )
    raise ValueError(f"cannot conjugate by {g.name}")


def _permute_bits(v: int, perm: Sequence[int]) -> int:
    out = 0
    for i, pi in enumerate(perm):
        out |= ((v >> i) & 1) << pi
    return out


# ---------------------------------------------------------------------------
# sampling and enumeration


def random_clifford(n: int, seed) -> CliffordTableau:
    """Uniformly random Clifford modulo global phase; deterministic per seed."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = _as_rng(seed)
    choices = [_random_pair_choice(n, k, rng) for k in range(n)]
    rows = _symplectic_rows_from_choices(n, choices)
    signs = rng.integers(0, 2, size=2 * n)
    return _tableau_from_rows(n, rows, signs)


def _tableau_from_rows(n: int, rows: List[int], signs) -> CliffordTableau:
    mask = (1 << n) - 1
    imgs = [
        PauliString(n, row & mask, row >> n, 2 * int(s)) for row, s in zip(rows, signs)
    ]
    return CliffordTableau(n, tuple(imgs[:n]), tuple(imgs[n:]))


def permutation_clifford(perm: Sequence[int], n: int) -> CliffordTableau:
    """Qubit relabelling i -> perm[i] as a Clifford tableau, all phases +."""
    perm = tuple(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError("perm must be a bijection on [0, n)")
    xs = tuple(PauliString.single(n, perm[q], "X") for q in range(n))
    zs = tuple(PauliString.single(n, perm[q], "Z") for q in range(n))
    return CliffordTableau(n, xs, zs)


def enumerate_clifford_group(n: int) -> List[CliffordTableau]:
    """All Cliffords modulo global phase, each exactly once; n <= 2 only."""
    if n > 2:
        raise ValueError("exhaustive enumeration is refused for n > 2")
    out = []
    for rows in _iter_symplectic_rows(n):
        for signbits in range(1 << (2 * n)):
            signs = [(signbits >> j) & 1 for j in range(2 * n)]
            out.append(_tableau_from_rows(n, rows, signs))
    return out


def _iter_symplectic_rows(n: int):
    def rec(k, chosen):
        if k == n:
            yield _symplectic_rows_from_choices(n, chosen)
            return
        for uv in _iter_pair_choices(n, k):
            yield from rec(k + 1, chosen + [uv])

    yield from rec(0, [])


# ---------------------------------------------------------------------------
# stabilizer mixed states


@dataclass
class StabilizerMixedState:
    """k <= n independent commuting generators with real signs.

    Represents rho = 2^{-n} sum over the generated group (signs included).
    Independence of the generators over GF(2) rules out -I automatically.
    """

    n: int
    generators: Tuple[PauliString, ...]

    def __post_init__(self):
        self.generators = tuple(self.generators)
        for g in self.generators:
            if g.n != self.n:
                raise ValueError("generator size mismatch")
            if not g.is_hermitian():
                raise ValueError("generators need real sign (phase in {0,2})")
        if len(self.generators) > self.n:
            raise ValueError("more generators than qubits")

    @property
    def k(self) -> int:
        return len(self.generators)

    def validate(self):
        """Full invariant check: pairwise commuting and GF(2)-independent."""
        gens = self.generators
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not commutes(gens[i], gens[j]):
                    raise ValueError(f"generators {i} and {j} anticommute")
        rows = [g.x_bits | (g.z_bits << self.n) for g in gens]
        if gf2_rank(rows) != len(gens):
            raise ValueError("generators are GF(2)-dependent")

    @staticmethod
    def zero_state(n: int) -> "StabilizerMixedState":
        return StabilizerMixedState(n, tuple(PauliString.single(n, q, "Z") for q in range(n)))

    def apply_tableau(self, t: CliffordTableau) -> "StabilizerMixedState":
        return StabilizerMixedState(self.n, tuple(t.conjugate(g) for g in self.generators))

    def apply_gate(self, g: Gate) -> "StabilizerMixedState":
        g.validate(self.n)
        if not g.is_clifford():
            raise ValueError(f"{g.name} is not a Clifford gate")
        return StabilizerMixedState(self.n, tuple(_conj_gate(p, g) for p in self.generators))

    def canonicalize(self) -> "StabilizerMixedState":
        """Deterministic generating set: RREF with X-block columns first."""
        cols = [("x", q) for q in range(self.n)] + [("z", q) for q in range(self.n)]
        gens = _eliminate_paulis(list(self.generators), cols)
        return StabilizerMixedState(self.n, tuple(g for g in gens if not g.is_identity_bits()))

    def to_text(self) -> str:
        lines = [f"STAB n={self.n} k={self.k}"]
        lines += [str(g) for g in self.generators]
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "StabilizerMixedState":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 3 or head[0] != "STAB":
            raise ValueError("bad stabilizer header")
        n = int(head[1].split("=")[1])
        k = int(head[2].split("=")[1])
        gens = [PauliString.from_string(ln) for ln in lines[1:]]
        if len(gens) != k:
            raise ValueError(f"expected {k} generators, found {len(gens)}")
        return StabilizerMixedState(n, tuple(gens))

    def to_density_matrix(self) -> np.ndarray:
        """Dense 2^n group average; small-n oracle use only."""
        if self.n > 10:
            raise ValueError("dense form capped at 10 qubits")
        d = 1 << self.n
        acc = np.zeros((d, d), dtype=complex)
        group = [PauliString.identity(self.n)]
        for g in self.generators:
            group += [pauli_mul(h, g) for h in group]
        for h in group:
            acc += h.to_matrix()
        return acc / d


def _eliminate_paulis(gens: List[PauliString], cols) -> List[PauliString]:
    """Gaussian elimination on generators, phases tracked by group products.

    cols is an ordered list of ("x"|"z", qubit) pairs.  Pivots take the
    lowest-index candidate row; row operations are Pauli multiplications so
    signs stay exact.
    """
    work = list(gens)
    next_free = 0
    for kind, q in cols:
        b = 1 << q
        pivot = None
        for r in range(next_free, len(work)):
            bits = work[r].x_bits if kind == "x" else work[r].z_bits
            if bits & b:
                pivot = r
                break
        if pivot is None:
            continue
        work[next_free], work[pivot] = work[pivot], work[next_free]
        for r in range(len(work)):
            if r == next_free:
                continue
            bits = work[r].x_bits if kind == "x" else work[r].z_bits
            if bits & b:
                work[r] = pauli_mul(work[r], work[next_free])
        next_free += 1
    return work


def stab_partial_trace(s: StabilizerMixedState, keep: Region) -> StabilizerMixedState:
    """Marginal of a stabilizer mixed state on `keep`, signs retained."""
    keep.validate(s.n)
    keep_set = set(keep.indices)
    outside = [q for q in range(s.n) if q not in keep_set]
    # eliminate on the outside columns; rows left without an outside pivot
    # are supported on `keep` only and generate the marginal's group
    cols = [("x", q) for q in outside] + [("z", q) for q in outside]
    work = _eliminate_paulis(list(s.generators), cols)
    out_mask = 0
    for q in outside:
        out_mask |= 1 << q
    kept = []
    for g in work:
        if g.is_identity_bits() or (g.x_bits | g.z_bits) & out_mask:
            continue
        kept.append(
            PauliString(
                len(keep),
                extract_bits(g.x_bits, keep.indices),
                extract_bits(g.z_bits, keep.indices),
                g.phase_power,
            )
        )
    return StabilizerMixedState(len(keep), tuple(kept)).canonicalize()


def marginal_group_dim(s: StabilizerMixedState, region: Region) -> int:
    """Generator count of the marginal on region, phases skipped (bit-only).

    Rank-nullity on the restriction map: the subgroup acting as identity off
    region has dimension k minus the rank of the outside-column block.
    """
    region.validate(s.n)
    out_mask = ((1 << s.n) - 1) & ~region.mask()
    rows = [(g.x_bits & out_mask) | ((g.z_bits & out_mask) << s.n) for g in s.generators]
    return s.k - gf2_rank(rows)


def stab_marginal_purity(s: StabilizerMixedState, region: Region) -> Fraction:
    """Exact purity 2^(k_A - n_A) of the marginal on region."""
    return Fraction(2 ** marginal_group_dim(s, region), 2 ** len(region))


def stab_marginal_purity_log2(s: StabilizerMixedState, region: Region) -> int:
    return marginal_group_dim(s, region) - len(region)


def apply_gate(obj, g: Gate):
    """Gate application dispatcher for tableaus and stabilizer states."""
    return obj.apply_gate(g)


# ---------------------------------------------------------------------------
# circuit synthesis (tableau -> H/S/SDG/CX gate list)


def synthesize_circuit(t: CliffordTableau) -> List[Gate]:
    """Gate list whose from_circuit tableau equals t exactly (incl. phases).

    Reduces a working copy to the identity with appended gates, then returns
    the daggered gates in reverse.  O(n^2) gates.
    """
    n = t.n
    xs = list(t.x_images)
    zs = list(t.z_images)
    applied: List[Gate] = []

    def emit(g: Gate):
        applied.append(g)
        for i in range(n):
            xs[i] = _conj_gate(xs[i], g)
            zs[i] = _conj_gate(zs[i], g)

    def bit(p, kind, q):
        bits = p.x_bits if kind == "x" else p.z_bits
        return (bits >> q) & 1

    for j in range(n):
        # --- make image(Z_j) = +Z_j ---
        zj = zs[j]
        pivot = None
        for q in range(j, n):
            if bit(zj, "z", q):
                pivot = q
                break
        if pivot is None:
            for q in range(j, n):
                if bit(zj, "x", q):
                    emit(gate("H", q))
                    pivot = q
                    break
        zj = zs[j]
        if pivot != j:
            emit(gate("CX", j, pivot))
            emit(gate("CX", pivot, j))
            emit(gate("CX", j, pivot))
        zj = zs[j]
        if bit(zj, "x", j):  # Y at pivot: S then H sends Y -> -Z
            emit(gate("S", j))
            emit(gate("H", j))
        zj = zs[j]
        for q in range(n):
            if q == j:
                continue
            if bit(zj, "x", q) and bit(zj, "z", q):
                emit(gate("S", q))
                zj = zs[j]
            if bit(zj, "x", q):
                emit(gate("H", q))
                zj = zs[j]
            if bit(zj, "z", q):
                emit(gate("CX", q, j))
                zj = zs[j]
        if zs[j].phase_power == 2:  # flip sign with X_j = H S S H
            emit(gate("H", j))
            emit(gate("S", j))
            emit(gate("S", j))
            emit(gate("H", j))

        # --- make image(X_j) = +X_j, keeping Z_j fixed ---
        xj = xs[j]
        if bit(xj, "z", j):  # Y at j: S removes the Z part
            emit(gate("S", j))
        xj = xs[j]
        for q in range(n):
            if q == j:
                continue
            if bit(xj, "x", q) and bit(xj, "z", q):
                emit(gate("S", q))
                xj = xs[j]
            if bit(xj, "z", q):
                emit(gate("H", q))
                xj = xs[j]
            if bit(xj, "x", q):
                emit(gate("CX", j, q))
                xj = xs[j]
        if xs[j].phase_power == 2:  # flip sign with Z_j = S S
            emit(gate("S", j))
            emit(gate("S", j))

    return [g.dagger() for g in reversed(applied)]
