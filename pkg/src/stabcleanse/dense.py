"""Brute-force statevector / density-matrix engine, the oracle side.

Qubit 0 maps to the most significant bit of the flat amplitude index, i.e.
the state tensor axis order matches the qubit order and Pauli kron order.
Everything here is exact up to float precision and deliberately capped at
desk scale (n <= 14 states, m <= 10 density matrices).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .circuits import Gate
from .pauli import PauliString, Region

MAX_STATE_QUBITS = 14
MAX_DENSITY_QUBITS = 10

_1Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    "TDG": np.diag([1, np.exp(-1j * math.pi / 4)]).astype(complex),
}


@dataclass
class DenseState:
    """Normalised pure state on n <= 14 qubits."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n > MAX_STATE_QUBITS:
            raise ValueError(f"dense states capped at {MAX_STATE_QUBITS} qubits")
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.amplitudes.size != 1 << self.n:
            raise ValueError("amplitude count must be 2^n")
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state not normalised: |psi| = {norm}")

    @staticmethod
    def zero(n: int) -> "DenseState":
        amps = np.zeros(1 << n, dtype=complex)
        amps[0] = 1.0
        return DenseState(n, amps)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape([2] * self.n)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace matrix on m <= 10 qubits."""

    m: int
    entries: np.ndarray

    def __post_init__(self):
        if self.m > MAX_DENSITY_QUBITS:
            raise ValueError(f"density matrices capped at {MAX_DENSITY_QUBITS} qubits")
        self.entries = np.asarray(self.entries, dtype=complex)
        d = 1 << self.m
        if self.entries.shape != (d, d):
            raise ValueError("entries must be 2^m x 2^m")
        if np.abs(self.entries - self.entries.conj().T).max() > 1e-10:
            raise ValueError("matrix is not Hermitian")
        if abs(np.trace(self.entries).real - 1.0) > 1e-10:
            raise ValueError("trace must be 1")


@dataclass
class SEReport:
    """Stabilizer purity, purity and the derived stabilizer entropies."""

    sp: float
    sp_normalized: float
    purity: float
    w: float
    m2: float
    m_lin: float


def apply_gates(amps: np.ndarray, gates: Iterable[Gate], n: int) -> np.ndarray:
    """Apply gates to a flat amplitude vector, returning a new vector."""
    psi = np.array(amps, dtype=complex).reshape([2] * n)
    for g in gates:
        g.validate(n)
        if g.name in _1Q:
            (q,) = g.qubits
            psi = np.tensordot(_1Q[g.name], psi, axes=([1], [q]))
            psi = np.moveaxis(psi, 0, q)
        elif g.name == "CX":
            c, t = g.qubits
            idx: List = [slice(None)] * n
            idx[c] = 1
            t_shifted = t - 1 if t > c else t
            psi[tuple(idx)] = np.flip(psi[tuple(idx)], axis=t_shifted)
        elif g.name == "PERM":
            psi = np.moveaxis(psi, list(range(n)), list(g.perm))
        else:
            raise ValueError(f"unsupported gate {g.name}")
    return np.ascontiguousarray(psi).reshape(-1)


def simulate(gates: Iterable[Gate], n: int) -> DenseState:
    """Exact state (circuit applied to |0...0>)."""
    if n > MAX_STATE_QUBITS:
        raise ValueError(f"dense simulation capped at {MAX_STATE_QUBITS} qubits")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return DenseState(n, apply_gates(amps, gates, n))


def tableau_unitary(tab) -> np.ndarray:
    """Dense matrix of a Clifford tableau via circuit synthesis (small n)."""
    from .tableau import synthesize_circuit

    n = tab.n
    if n > 10:
        raise ValueError("dense tableau matrices capped at 10 qubits")
    gates = synthesize_circuit(tab)
    d = 1 << n
    cols = []
    for j in range(d):
        e = np.zeros(d, dtype=complex)
        e[j] = 1.0
        cols.append(apply_gates(e, gates, n))
    return np.column_stack(cols)


def reduced_density(state: DenseState, region: Region) -> DensityMatrix:
    """Exact partial trace onto region."""
    region.validate(state.n)
    k = len(region)
    if k > MAX_DENSITY_QUBITS:
        raise ValueError(f"reduced density capped at {MAX_DENSITY_QUBITS} qubits")
    keep = list(region.indices)
    rest = [q for q in range(state.n) if q not in region.indices]
    psi = state.tensor().transpose(keep + rest).reshape(1 << k, -1)
    return DensityMatrix(k, psi @ psi.conj().T)


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2)."""
    return float(np.einsum("ij,ji->", rho.entries, rho.entries).real)


def pauli_expectation(rho: DensityMatrix, p: PauliString) -> float:
    """tr(P rho) via the one-nonzero-per-row structure of P, O(2^m).

    Bit b of the matrix index corresponds to qubit m-1-b, so the packed
    x/z masks are bit-reversed relative to the PauliString convention.
    """
    if p.n != rho.m:
        raise ValueError("size mismatch")
    m = rho.m
    x = _revbits(p.x_bits, m)
    z = _revbits(p.z_bits, m)
    rows = np.arange(1 << m)
    signs = 1 - 2 * (_parity_table(m)[rows & z]).astype(np.int64)
    vals = rho.entries[rows, rows ^ x]
    tot = complex((signs * vals).sum())
    phase = (1j) ** ((p.phase_power + (p.x_bits & p.z_bits).bit_count()) % 4)
    return float((phase * tot).real)


def _revbits(v: int, m: int) -> int:
    out = 0
    for i in range(m):
        if (v >> i) & 1:
            out |= 1 << (m - 1 - i)
    return out


_parity_cache = {}


def _parity_table(m: int) -> np.ndarray:
    if m not in _parity_cache:
        idx = np.arange(1 << m, dtype=np.uint64)
        _parity_cache[m] = (np.bitwise_count(idx) & 1).astype(np.int8)
    return _parity_cache[m]


def stab_purity_sweep(rho: DensityMatrix) -> float:
    """SP by the literal 4^m Pauli sweep; reference path for cross-checks."""
    m = rho.m
    d = 1 << m
    total = 0.0
    for x in range(1 << m):
        for z in range(1 << m):
            e = pauli_expectation(rho, PauliString(m, x, z, 0))
            total += e**4
    return total / d**2


def stab_purity(rho: DensityMatrix) -> float:
    """SP(rho) = sum_P d^{-2} tr^4(P rho) over all 4^m Paulis.

    The z-sums for fixed x are Walsh-Hadamard transforms of the gathered
    diagonals, which turns the sweep into O(4^m log d) without changing the
    summand; agreement with the per-Pauli sweep is pinned by tests.
    """
    m = rho.m
    d = 1 << m
    rows = np.arange(d)
    total = 0.0
    for x in range(d):
        gathered = rho.entries[rows, rows ^ x]
        coeffs = _wht(gathered)
        # tr(P rho) = i^{|x&z|} * coeffs[z]; |x&z| counts Y sites
        ycount = np.bitwise_count((rows & x).astype(np.uint64)).astype(np.int64)
        vals = (1j**ycount) * coeffs
        total += float((vals.real**4).sum())
    return total / d**2


def _wht(v: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform."""
    w = v.copy()
    h = 1
    n = w.size
    while h < n:
        w = w.reshape(-1, 2, h)
        a = w[:, 0, :] + w[:, 1, :]
        b = w[:, 0, :] - w[:, 1, :]
        w = np.stack([a, b], axis=1)
        h *= 2
    return w.reshape(-1)


def se_report(rho: DensityMatrix) -> SEReport:
    """Assemble SP, purity and the 2-Renyi / linear stabilizer entropies."""
    d = 1 << rho.m
    pur = purity(rho)
    if pur < 1.0 / d - 1e-9:
        raise ValueError(f"purity {pur} below 1/d; not a valid state")
    sp = stab_purity(rho)
    w = d * sp / pur
    return SEReport(
        sp=sp,
        sp_normalized=d * sp,
        purity=pur,
        w=w,
        m2=-math.log2(w),
        m_lin=1.0 - w,
    )


def state_density(state: DenseState) -> DensityMatrix:
    return reduced_density(state, Region.full(state.n))


def se_report_state(state: DenseState, region=None) -> SEReport:
    region = Region.full(state.n) if region is None else region
    return se_report(reduced_density(state, region))


# ---------------------------------------------------------------------------
# exact fourth-moment averages at n <= 2


def _perm4_matrix(d: int, perm: Tuple[int, int, int, int]) -> np.ndarray:
    """Permutation operator T_pi on (C^d)^{x4}: copy j receives copy perm[j]."""
    t = np.zeros((d**4, d**4))
    idx = np.arange(d**4)
    digits = [(idx // d**(3 - j)) % d for j in range(4)]
    src = sum(digits[perm[j]] * d ** (3 - j) for j in range(4))
    t[idx, src] = 1.0
    return t


def _all_perms4():
    import itertools

    return list(itertools.permutations(range(4)))


def q_projector(m: int) -> np.ndarray:
    """Q = d^{-2} sum_P P^{x4} on m qubits (dense, m <= 2)."""
    if m > 2:
        raise ValueError("dense Q capped at 2 qubits")
    d = 1 << m
    acc = np.zeros((d**4, d**4), dtype=complex)
    for x in range(d):
        for z in range(d):
            pm = PauliString(m, x, z, 0).to_matrix()
            p4 = np.kron(np.kron(pm, pm), np.kron(pm, pm))
            acc += p4
    return acc / d**2


def sym_projector(d: int) -> np.ndarray:
    """Projector onto the symmetric subspace of four copies."""
    acc = np.zeros((d**4, d**4))
    for perm in _all_perms4():
        acc += _perm4_matrix(d, perm)
    return acc / 24.0


def fourth_moment_exact(psi: DenseState, region: Region):
    """Enumerated Clifford average of tr(Q_region x 1 . (C psi C^dag)^{x4}).

    Returns (enumeration_average, prediction) where the prediction contracts
    the two-parameter form alpha*Q*Pi_sym + beta*Pi_sym of the averaged four
    copies against Q_region.  n <= 2 only.
    """
    from .moments import moment_coefficients
    from .tableau import enumerate_clifford_group

    n = psi.n
    if n > 2:
        raise ValueError("exhaustive fourth moment capped at 2 qubits")
    region.validate(n)
    d = 1 << n
    rho_full = state_density(psi)
    coeffs = moment_coefficients(stab_purity(rho_full), d)

    total = 0.0
    cliffords = enumerate_clifford_group(n)
    for tab in cliffords:
        u = tableau_unitary(tab)
        sigma = DenseState(n, u @ psi.amplitudes)
        total += stab_purity(reduced_density(sigma, region))
    average = total / len(cliffords)

    d_e = 1 << len(region)
    d_f = d // d_e
    rest = Region(tuple(q for q in range(n) if q not in region.indices))
    q_e = q_projector(len(region))
    tr_q_pi = float(np.trace(q_projector(n) @ sym_projector(d)).real)
    beta_term = 0.0
    for perm in _all_perms4():
        t_e = _perm4_matrix(d_e, perm)
        tr_f = float(np.trace(_perm4_matrix(d_f, perm)).real) if len(rest) else 1.0
        beta_term += float(np.trace(q_e @ t_e).real) * tr_f
    prediction = coeffs.alpha * tr_q_pi + coeffs.beta * beta_term / 24.0
    return average, prediction
