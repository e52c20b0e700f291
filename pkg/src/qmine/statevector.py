"""Dense state-vector simulator.

Holds all 2^q complex amplitudes of a q-qubit register and applies gates
from the closed set {H, X, SWAP, multi-controlled X}.  Basis convention:
basis index b encodes qubit k as bit k of b (qubit 0 is the least
significant bit).  Every gate except H is a permutation of the amplitude
array, so circuits built purely from X/SWAP/MCX are bit-exact and their
inverses cancel with zero rounding error.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .circuit import Gate

DEFAULT_QUBIT_CAP = 26  # 2^26 complex128 amplitudes ~ 1 GiB
HARD_QUBIT_LIMIT = 28   # ceiling for the cap itself (4 GiB of amplitudes)

_SQRT1_2 = 1.0 / np.sqrt(2.0)


class CapacityError(ValueError):
    """Requested register exceeds the configured qubit cap."""


@dataclass(frozen=True)
class MeasurementOutcome:
    """One sampled readout of a qubit register.

    ``bits`` is the MSB-first rendering of ``value``; bit i of ``value``
    is the sampled state of the i-th qubit in the measured register.
    """

    bits: str
    value: int
    probability: float


@lru_cache(maxsize=4)
def _basis_indices(dim: int) -> np.ndarray:
    return np.arange(dim, dtype=np.int64)


class StateVector:
    """Mutable amplitude array for ``num_qubits`` qubits.

    Owned by one logical thread at a time; gate application mutates in
    place.  All gates applied to this state are tallied in
    ``gate_counts`` (by gate kind), which feeds the mining resource
    reports.
    """

    def __init__(self, num_qubits: int, *, cap: int = DEFAULT_QUBIT_CAP):
        cap = min(cap, HARD_QUBIT_LIMIT)
        if num_qubits < 1 or num_qubits > cap:
            raise CapacityError(
                f"num_qubits must be in 1..{cap} (got {num_qubits}); "
                f"raise the cap explicitly to simulate more"
            )
        self.num_qubits = num_qubits
        self.amplitudes = np.zeros(1 << num_qubits, dtype=np.complex128)
        self.amplitudes[0] = 1.0
        self.gate_counts: Counter[str] = Counter()

    # -- bookkeeping -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def total_gates(self) -> int:
        return sum(self.gate_counts.values())

    def reset(self) -> None:
        """Return to |0...0> without clearing the gate tally."""
        self.amplitudes[:] = 0.0
        self.amplitudes[0] = 1.0

    def total_probability(self) -> float:
        a = self.amplitudes
        return float(np.sum(a.real * a.real + a.imag * a.imag))

    def _check_qubit(self, q: int) -> None:
        if not 0 <= q < self.num_qubits:
            raise IndexError(f"qubit {q} out of range for {self.num_qubits}-qubit state")

    # -- gate application --------------------------------------------------

    def apply_gate(self, gate: Gate) -> None:
        for q in gate.qubits():
            self._check_qubit(q)
        self.gate_counts[gate.kind] += 1
        if gate.kind == "H":
            self._apply_h(gate.targets[0])
        elif gate.kind == "X":
            self._exchange(self._slices((), gate.targets[0], 0),
                           self._slices((), gate.targets[0], 1))
        elif gate.kind == "SWAP":
            a, b = gate.targets
            self._exchange(self._slices(((b, False),), a, 1),
                           self._slices(((b, True),), a, 0))
        else:  # MCX
            self._exchange(self._slices(gate.controls, gate.targets[0], 0),
                           self._slices(gate.controls, gate.targets[0], 1))

    def _slices(self, fixed: tuple[tuple[int, bool], ...],
                target: int, target_bit: int) -> tuple:
        # index into the amplitude array viewed as a (2,)*q tensor; axis
        # q-1-k is qubit k, so all selections are basic (view) indexing
        q = self.num_qubits
        idx: list[object] = [slice(None)] * q
        for qubit, positive in fixed:
            idx[q - 1 - qubit] = 1 if positive else 0
        idx[q - 1 - target] = target_bit
        return tuple(idx)

    def _apply_h(self, target: int) -> None:
        view = self.amplitudes.reshape((2,) * self.num_qubits)
        i0 = self._slices((), target, 0)
        i1 = self._slices((), target, 1)
        lo = view[i0].copy()
        view[i0] = (lo + view[i1]) * _SQRT1_2
        view[i1] = (lo - view[i1]) * _SQRT1_2

    def _exchange(self, i0: tuple, i1: tuple) -> None:
        # swap two disjoint blocks of the amplitude tensor; amplitudes
        # only move, so X/SWAP/MCX are bit-exact
        view = self.amplitudes.reshape((2,) * self.num_qubits)
        tmp = view[i0].copy()
        view[i0] = view[i1]
        view[i1] = tmp

    # -- readout -----------------------------------------------------------

    def probability_of(self, assignment: Mapping[int, int]) -> float:
        """Total probability of all basis states matching a partial
        bit-assignment {qubit index: 0 or 1}."""
        care = 0
        want = 0
        for q, bit in assignment.items():
            self._check_qubit(q)
            care |= 1 << q
            want |= (bit & 1) << q
        idx = _basis_indices(self.dim)
        sel = self.amplitudes[(idx & care) == want]
        return float(np.sum(sel.real * sel.real + sel.imag * sel.imag))

    def register_distribution(self, register: Iterable[int]) -> np.ndarray:
        """Marginal Born-rule distribution over a register; entry v is the
        probability of reading value v (register[i] contributes bit i)."""
        register = list(register)
        if not register:
            raise ValueError("register must name at least one qubit")
        for q in register:
            self._check_qubit(q)
        a = self.amplitudes
        probs = a.real * a.real + a.imag * a.imag
        idx = _basis_indices(self.dim)
        values = np.zeros(self.dim, dtype=np.int64)
        for pos, q in enumerate(register):
            values |= ((idx >> q) & 1) << pos
        return np.bincount(values, weights=probs, minlength=1 << len(register))

    def measure_register(self, register: Iterable[int],
                         rng: np.random.Generator) -> MeasurementOutcome:
        """Sample a bitstring for ``register`` with Born-rule probability.

        Non-collapsing: the state vector is left untouched, so tests can
        read exact probabilities and sample from the same state.  The rng
        must be seeded by the caller.
        """
        register = list(register)
        dist = self.register_distribution(register)
        dist = dist / dist.sum()  # guard fp drift; errors are ~1e-16
        value = int(rng.choice(dist.shape[0], p=dist))
        return MeasurementOutcome(
            bits=format(value, f"0{len(register)}b"),
            value=value,
            probability=float(dist[value]),
        )


def new_zero_state(num_qubits: int, *, cap: int = DEFAULT_QUBIT_CAP) -> StateVector:
    """Fresh |0...0> state; raises CapacityError beyond the qubit cap."""
    return StateVector(num_qubits, cap=cap)


def assignment_for(register: Iterable[int], value: int) -> dict[int, int]:
    """Bit-assignment pinning ``register`` to ``value`` (bit i -> register[i])."""
    return {q: (value >> i) & 1 for i, q in enumerate(register)}
