"""Doped Clifford circuits in canonical decomposed form, the cleansing map,
and the re-entangled stabilizer proxy state.

A doped circuit is built directly in the decomposition D^dag c_t D V (c_t on
the first t qubits), so the diagonalizer W = T_pi D is known by construction.
Cleansing conjugates by W, which localizes the non-Clifford action onto the
region Y, and traces Y out.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .circuits import Gate, embed_gates, format_circuit, gate
from .dense import MAX_DENSITY_QUBITS, MAX_STATE_QUBITS, reduced_density, se_report, simulate
from .pauli import PauliString, Region, embed
from .seeding import sample_rng
from .tableau import (
    CliffordTableau,
    StabilizerMixedState,
    permutation_clifford,
    random_clifford,
    stab_partial_trace,
    synthesize_circuit,
)


@dataclass(frozen=True)
class Partition:
    """E|F split with the localization region Y (|Y| = t)."""

    e: Region
    f: Region
    y: Region

    def y_complement(self, n: int) -> Region:
        return self.y.complement(n)


@dataclass
class DecompositionParts:
    v: CliffordTableau
    d: CliffordTableau
    c_t: List[Gate]  # local gates on t qubits
    pi_y: Tuple[int, ...]
    y: Region


@dataclass
class DopedCircuit:
    """t-doped Clifford circuit with its canonical decomposition record."""

    n: int
    t: int
    parts: DecompositionParts
    seed: int

    _gates_cache: Optional[List[Gate]] = field(default=None, repr=False, compare=False)

    @property
    def gates(self) -> List[Gate]:
        """Flattened gate list implementing D^dag (c_t on first t qubits) D V."""
        if self._gates_cache is None:
            p = self.parts
            flat = synthesize_circuit(p.v)
            flat += synthesize_circuit(p.d)
            flat += list(p.c_t)
            flat += synthesize_circuit(p.d.inverse())
            self._gates_cache = flat
        return self._gates_cache

    def diagonalizer(self) -> CliffordTableau:
        """W = T_{pi_Y} D."""
        perm = permutation_clifford(self.parts.pi_y, self.n)
        return perm.compose(self.parts.d)

    def conjugated_state_gates(self) -> List[Gate]:
        """Gates preparing W psi_t = c_t^Y T_pi D V |0...0> (reduced form)."""
        p = self.parts
        gates = synthesize_circuit(p.v)
        gates += synthesize_circuit(p.d)
        gates.append(Gate("PERM", perm=p.pi_y))
        gates += embed_gates(p.c_t, p.y.indices, self.n)
        return gates

    def to_circuit_text(self) -> str:
        return format_circuit(self.gates)

    def sidecar(self) -> dict:
        p = self.parts
        return {
            "n": self.n,
            "t": self.t,
            "Y": list(p.y.indices),
            "seed": self.seed,
            "hashes": {
                "V": _tableau_hash(p.v),
                "D": _tableau_hash(p.d),
                "c_t": hashlib.sha256(format_circuit(p.c_t).encode()).hexdigest(),
            },
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n"


@dataclass
class CleanseOutput:
    """Diagonalizer, cleansed marginal and the re-entangled proxy state."""

    w: CliffordTableau
    phi_bar: StabilizerMixedState
    rho: StabilizerMixedState


def _tableau_hash(tab: CliffordTableau) -> str:
    h = hashlib.sha256()
    for p in tab.x_images + tab.z_images:
        h.update(str(p).encode())
        h.update(b";")
    return h.hexdigest()


def place_y(n: int, t: int, n_f: int) -> Region:
    """Deterministic localization region.

    Localized phase (t <= n_F): the last t qubits of F.  Otherwise all of F
    plus the first t - n_F qubits of E, so the overflow of non-Clifford
    action into E is explicit.
    """
    if t == 0:
        return Region(())
    if t <= n_f:
        return Region(tuple(range(n - t, n)))
    overflow = t - n_f
    return Region(tuple(range(overflow)) + tuple(range(n - n_f, n)))


def build_partition(n: int, t: int, f_fraction: float) -> Partition:
    n_f = round(f_fraction * n)
    if n_f < 0 or n_f > n:
        raise ValueError("F size out of range")
    e = Region(tuple(range(n - n_f)))
    f = Region(tuple(range(n - n_f, n)))
    return Partition(e=e, f=f, y=place_y(n, t, n_f))


def build_doped_circuit(
    n: int, t: int, f_fraction: float, seed: int
) -> Tuple[DopedCircuit, Partition]:
    """Random doped circuit in decomposed form plus its E|F|Y partition.

    V, D are uniform random Cliffords; c_t is t layers of a uniform random
    t-qubit Clifford followed by a T gate (t T gates in total).
    """
    if not 0 <= t <= n:
        raise ValueError("need 0 <= t <= n")
    part = build_partition(n, t, f_fraction)
    v = random_clifford(n, sample_rng(seed, 1))
    d = random_clifford(n, sample_rng(seed, 2))
    c_t: List[Gate] = []
    for layer in range(t):
        c_t += synthesize_circuit(random_clifford(t, sample_rng(seed, 3 + layer)))
        c_t.append(gate("T", layer % t))
    pi = _permutation_onto(part.y, n)
    parts = DecompositionParts(v=v, d=d, c_t=c_t, pi_y=pi, y=part.y)
    return DopedCircuit(n=n, t=t, parts=parts, seed=seed), part


def _permutation_onto(y: Region, n: int) -> Tuple[int, ...]:
    """Permutation sending qubits {0..t-1} onto Y, the rest in order."""
    t = len(y)
    pi = [0] * n
    for j, target in enumerate(y.indices):
        pi[j] = target
    rest_dst = [q for q in range(n) if q not in y.indices]
    for src, dst in zip(range(t, n), rest_dst):
        pi[src] = dst
    return tuple(pi)


def cleanse(circuit: DopedCircuit) -> CleanseOutput:
    """Apply the cleansing construction exactly on the tableau side.

    phi_bar is the stabilizer marginal of Phi = W V |0...0> on the
    complement of Y; rho re-entangles it through W^dag with the maximally
    mixed state appended on Y.
    """
    n = circuit.n
    w = circuit.diagonalizer()
    phi = StabilizerMixedState.zero_state(n).apply_tableau(w.compose(circuit.parts.v))
    ybar = circuit.parts.y.complement(n)
    phi_bar = stab_partial_trace(phi, ybar)
    w_inv = w.inverse()
    rho_gens = []
    for g in phi_bar.generators:
        rho_gens.append(w_inv.conjugate(embed(g, ybar, n)))
    rho = StabilizerMixedState(n, tuple(rho_gens))
    return CleanseOutput(w=w, phi_bar=phi_bar, rho=rho)


def cleansed_se_E(circuit: DopedCircuit, partition: Partition) -> float:
    """Dense 2-Renyi SE (bits) of the E-marginal of W psi_t W^dag.

    Conjugating by W localizes the non-Clifford action onto Y; tracing out
    F (which absorbs Y up to the overflow the permutation could not move)
    leaves the subsystem whose SE the phase transition tracks.  Zero in the
    localized phase t <= n_F.
    """
    n = circuit.n
    if n > MAX_STATE_QUBITS:
        raise ValueError("dense evaluation capped at 14 qubits")
    if len(partition.e) > MAX_DENSITY_QUBITS:
        raise ValueError("E subsystem capped at 10 qubits for the SE sweep")
    psi_w = simulate(circuit.conjugated_state_gates(), n)
    rep = se_report(reduced_density(psi_w, partition.e))
    return rep.m2
