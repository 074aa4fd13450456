"""Gate records and the shared circuit text format.

One gate per line: "H 0", "S 2", "SDG 1", "CX 0 1", "T 3", "TDG 4",
"PERM 2 0 1" (qubit i goes to position perm[i]).  Lines starting with '#'
are comments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Tuple

CLIFFORD_GATES = {"H", "S", "SDG", "CX", "PERM"}
ALL_GATES = CLIFFORD_GATES | {"T", "TDG"}

_ARITY = {"H": 1, "S": 1, "SDG": 1, "T": 1, "TDG": 1, "CX": 2}


@dataclass(frozen=True)
class Gate:
    """A named gate acting on explicit qubits; PERM carries a full permutation."""

    name: str
    qubits: Tuple[int, ...] = ()
    perm: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(self, "perm", tuple(self.perm))
        if self.name not in ALL_GATES:
            raise ValueError(f"unsupported gate {self.name!r}")
        if self.name == "PERM":
            if sorted(self.perm) != list(range(len(self.perm))):
                raise ValueError("PERM requires a bijection on [0, n)")
        elif len(self.qubits) != _ARITY[self.name]:
            raise ValueError(f"{self.name} takes {_ARITY[self.name]} qubit(s)")
        elif len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} qubits must be distinct")

    def validate(self, n: int):
        for q in self.qubits:
            if not 0 <= q < n:
                raise ValueError(f"qubit index {q} out of range for n={n}")
        if self.name == "PERM" and len(self.perm) != n:
            raise ValueError("PERM length must equal qubit count")

    def dagger(self) -> "Gate":
        if self.name == "S":
            return Gate("SDG", self.qubits)
        if self.name == "SDG":
            return Gate("S", self.qubits)
        if self.name == "T":
            return Gate("TDG", self.qubits)
        if self.name == "TDG":
            return Gate("T", self.qubits)
        if self.name == "PERM":
            inv = [0] * len(self.perm)
            for i, p in enumerate(self.perm):
                inv[p] = i
            return Gate("PERM", perm=tuple(inv))
        return self  # H and CX are involutions

    def is_clifford(self) -> bool:
        return self.name in CLIFFORD_GATES

    def to_line(self) -> str:
        if self.name == "PERM":
            return "PERM " + " ".join(str(p) for p in self.perm)
        return self.name + " " + " ".join(str(q) for q in self.qubits)


def gate(name: str, *qubits: int) -> Gate:
    return Gate(name, tuple(qubits))


def perm_gate(perm: Iterable[int]) -> Gate:
    return Gate("PERM", perm=tuple(perm))


def format_circuit(gates: Iterable[Gate]) -> str:
    return "".join(g.to_line() + "\n" for g in gates)


def parse_circuit(text: str) -> List[Gate]:
    """Parse the text format; raises ValueError mentioning the line number."""
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        name = parts[0].upper()
        try:
            args = [int(p) for p in parts[1:]]
            if name == "PERM":
                gates.append(Gate("PERM", perm=tuple(args)))
            else:
                gates.append(Gate(name, tuple(args)))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return gates


def embed_gates(gates: Iterable[Gate], positions, n: int) -> List[Gate]:
    """Re-target gates on k qubits to the given positions within n qubits."""
    pos = tuple(positions)
    out = []
    for g in gates:
        if g.name == "PERM":
            # local permutation becomes a global one fixing everything else
            full = list(range(n))
            for i, p in enumerate(g.perm):
                full[pos[i]] = pos[p]
            out.append(Gate("PERM", perm=tuple(full)))
        else:
            out.append(Gate(g.name, tuple(pos[q] for q in g.qubits)))
    return out


def count_gate(gates: Iterable[Gate], name: str) -> int:
    return sum(1 for g in gates if g.name == name)
