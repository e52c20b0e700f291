"""Shared test utilities: independent oracles and fixture builders."""

from __future__ import annotations

import numpy as np

from qmine import Circuit, Gate, StateVector, enumerate_solutions, new_zero_state
from qmine.toyhash import GOLDEN_RATIO_32, HashParams


def permute_oracle(x: int, m: int, r: int, true_chi: bool = False) -> int:
    """Independent integer-twiddling evaluation of the sponge permutation
    (second route, deliberately structured unlike the package code)."""
    full = (1 << m) - 1
    for j in range(r):
        for i in range(m):
            a = (x >> ((i + 1) % m)) & 1
            if true_chi:
                a ^= 1
            b = (x >> ((i + 2) % m)) & 1
            x ^= (a & b) << i
        for i in range(m):
            x ^= ((x >> ((i + 3) % m)) & 1) << i
        x = ((x << 1) | (x >> (m - 1))) & full
        x ^= ((j + 1) * GOLDEN_RATIO_32) & full
    return x


def hash_oracle(blocks: list[int], m: int, r: int, true_chi: bool = False) -> int:
    state = 0
    for block in blocks:
        state = permute_oracle(state ^ block, m, r, true_chi)
    return state


def find_header_with_count(nonce_bits: int, params: HashParams, zeros: int,
                           count: int, seed: int = 0,
                           attempts: int = 20000) -> tuple[list[int], list[int]]:
    """Search random 4-block headers until one has exactly ``count``
    nonces clearing the difficulty; deterministic given the seed."""
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        header = [int(b) for b in rng.integers(0, params.mask + 1, size=4)]
        solutions = enumerate_solutions(header, params, nonce_bits, zeros)
        if len(solutions) == count:
            return header, solutions
    raise AssertionError(f"no header with exactly {count} solution(s) found "
                         f"(n={nonce_bits}, zeros={zeros})")


def set_register(state: StateVector, qubits, value: int) -> None:
    for i, q in enumerate(qubits):
        if (value >> i) & 1:
            state.apply_gate(Gate.x(q))


def basis_state(num_qubits: int, index: int) -> StateVector:
    state = new_zero_state(num_qubits)
    set_register(state, range(num_qubits), index)
    return state


def random_amplitudes(num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return amps / np.linalg.norm(amps)


def random_circuit(num_qubits: int, num_gates: int,
                   rng: np.random.Generator) -> Circuit:
    circuit = Circuit(num_qubits, label="random")
    for _ in range(num_gates):
        kind = rng.choice(["H", "X", "SWAP", "MCX"])
        if kind in ("H", "X"):
            q = int(rng.integers(num_qubits))
            circuit.append(Gate.h(q) if kind == "H" else Gate.x(q))
        elif kind == "SWAP":
            a, b = rng.choice(num_qubits, size=2, replace=False)
            circuit.append(Gate.swap(int(a), int(b)))
        else:
            arity = int(rng.integers(1, min(3, num_qubits - 1) + 1))
            picks = rng.choice(num_qubits, size=arity + 1, replace=False)
            controls = [(int(q), bool(rng.integers(2))) for q in picks[:-1]]
            circuit.append(Gate.mcx(controls, int(picks[-1])))
    return circuit


def max_global_phase_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """Elementwise deviation between two state vectors after removing a
    global phase (aligned on the largest amplitude of ``a``)."""
    k = int(np.argmax(np.abs(a)))
    phase = b[k] / a[k]
    return float(np.max(np.abs(a * phase - b)))
