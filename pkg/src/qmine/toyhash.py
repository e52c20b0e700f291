"""ToyKeccak: a parameterized, desk-scale sponge hash.

Single-rate sponge (block width = digest width) over an m-bit state,
4 <= m <= 16, built solely from XOR / AND / rotate / constants so it has
a direct reversible-circuit realization.  Two implementations are
provided and must agree bit-for-bit: the classical reference
(``hash_classical``) and the circuit builders that hash every nonce
value in superposition.

Round structure (sequential in-place semantics, index ascending — the
circuit is a gate-for-gate transcription, so the classical code must
keep exactly this update order):

    chi-like : h[i] ^= h[(i+1) mod m] AND h[(i+2) mod m]
    linear   : h[i] ^= h[(i+3) mod m]
    rotate   : left-rotate by 1, new[i] = old[(i-1) mod m]
    constant : h ^= RC_j, RC_j = low m bits of (j+1) * 0x9E3779B9

``true_chi=True`` inverts the first AND operand (a negative control in
the circuit), matching the chi nonlinearity of real sponge designs; the
default keeps the plain AND.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .circuit import Circuit, Gate, emit_rotate_left

if TYPE_CHECKING:
    from .miner import RegisterLayout

GOLDEN_RATIO_32 = 0x9E3779B9

MIN_DIGEST_BITS = 4
MAX_DIGEST_BITS = 16
MAX_ROUNDS = 8

# caps for the service-qubit demonstration variant
OUTOFPLACE_MAX_DIGEST_BITS = 4
OUTOFPLACE_ROUNDS = 1


@dataclass(frozen=True)
class HashParams:
    digest_bits: int
    rounds: int
    true_chi: bool = False

    def __post_init__(self):
        if not MIN_DIGEST_BITS <= self.digest_bits <= MAX_DIGEST_BITS:
            raise ValueError(f"digest_bits must be in {MIN_DIGEST_BITS}.."
                             f"{MAX_DIGEST_BITS}, got {self.digest_bits}")
        if not 1 <= self.rounds <= MAX_ROUNDS:
            raise ValueError(f"rounds must be in 1..{MAX_ROUNDS}, got {self.rounds}")

    @property
    def block_bits(self) -> int:
        # single-rate sponge: absorption block width equals the state width
        return self.digest_bits

    @property
    def mask(self) -> int:
        return (1 << self.digest_bits) - 1


@dataclass(frozen=True)
class Digest:
    """m-bit digest; bit i of ``value`` is hash bit i, bit m-1 is the
    leading (most significant) bit tested by the difficulty rule."""

    value: int
    width: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"digest value {self.value:#x} does not fit "
                             f"in {self.width} bits")

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.width}b")

    @property
    def hex(self) -> str:
        return format(self.value, f"0{(self.width + 3) // 4}x")

    def meets_difficulty(self, zeros: int) -> bool:
        return has_leading_zeros(self.value, self.width, zeros)


def has_leading_zeros(value: int, width: int, zeros: int) -> bool:
    """True iff the top ``zeros`` bits of a width-bit value are all 0."""
    if not 0 <= zeros <= width:
        raise ValueError(f"zeros must be in 0..{width}, got {zeros}")
    return value >> (width - zeros) == 0 if zeros else True


def round_constant(round_index: int, digest_bits: int) -> int:
    return ((round_index + 1) * GOLDEN_RATIO_32) & ((1 << digest_bits) - 1)


# -- classical reference -------------------------------------------------------


def permute(state_bits: int, params: HashParams) -> int:
    """Apply the full r-round permutation to an m-bit state value."""
    m = params.digest_bits
    if not 0 <= state_bits <= params.mask:
        raise ValueError(f"state {state_bits:#x} does not fit in {m} bits")
    bits = [(state_bits >> i) & 1 for i in range(m)]
    for j in range(params.rounds):
        for i in range(m):
            first = bits[(i + 1) % m] ^ 1 if params.true_chi else bits[(i + 1) % m]
            bits[i] ^= first & bits[(i + 2) % m]
        for i in range(m):
            bits[i] ^= bits[(i + 3) % m]
        bits = [bits[(i - 1) % m] for i in range(m)]
        rc = round_constant(j, m)
        bits = [b ^ ((rc >> i) & 1) for i, b in enumerate(bits)]
    return sum(b << i for i, b in enumerate(bits))


def hash_classical(message_blocks: Sequence[int], params: HashParams) -> Digest:
    """Sponge absorb: state ^= block, permute; digest is the final state."""
    if not message_blocks:
        raise ValueError("message must contain at least one block")
    state = 0
    for block in message_blocks:
        if not 0 <= block <= params.mask:
            raise ValueError(f"block {block:#x} does not fit in "
                             f"{params.digest_bits} bits")
        state ^= block
        state = permute(state, params)
    return Digest(state, params.digest_bits)


# -- reversible-circuit realization --------------------------------------------


def _emit_round(circuit: Circuit, hash_qubits: Sequence[int], round_index: int,
                params: HashParams) -> None:
    m = params.digest_bits
    for i in range(m):
        circuit.append(Gate.mcx(
            [(hash_qubits[(i + 1) % m], not params.true_chi),
             (hash_qubits[(i + 2) % m], True)],
            hash_qubits[i]))
    for i in range(m):
        circuit.append(Gate.cnot(hash_qubits[(i + 3) % m], hash_qubits[i]))
    emit_rotate_left(circuit, hash_qubits, 1)
    rc = round_constant(round_index, m)
    for i in range(m):
        if (rc >> i) & 1:
            circuit.append(Gate.x(hash_qubits[i]))


def _emit_round_outofplace(circuit: Circuit, hash_qubits: Sequence[int],
                           service_qubits: Sequence[int], round_index: int,
                           params: HashParams) -> None:
    # chi layer with one fresh service qubit per AND: compute the product
    # into the scratch, fold it into h[i], then uncompute the scratch —
    # legal because the fold targets h[i], never the two operands.
    m = params.digest_bits
    for i in range(m):
        product = Gate.mcx(
            [(hash_qubits[(i + 1) % m], not params.true_chi),
             (hash_qubits[(i + 2) % m], True)],
            service_qubits[i])
        circuit.append(product)
        circuit.append(Gate.cnot(service_qubits[i], hash_qubits[i]))
        circuit.append(product)
    for i in range(m):
        circuit.append(Gate.cnot(hash_qubits[(i + 3) % m], hash_qubits[i]))
    emit_rotate_left(circuit, hash_qubits, 1)
    rc = round_constant(round_index, m)
    for i in range(m):
        if (rc >> i) & 1:
            circuit.append(Gate.x(hash_qubits[i]))


def _check_layout(layout: "RegisterLayout", params: HashParams) -> None:
    if len(layout.hash) != params.digest_bits:
        raise ValueError(f"layout hash register has {len(layout.hash)} qubits, "
                         f"params need {params.digest_bits}")
    if len(layout.nonce) > params.digest_bits:
        raise ValueError(f"nonce register ({len(layout.nonce)} qubits) must embed "
                         f"into one {params.digest_bits}-bit block")


def _emit_absorbs(circuit: Circuit, layout: "RegisterLayout",
                  header_blocks: Sequence[int], params: HashParams,
                  emit_round) -> None:
    # header_blocks may be empty: the nonce block below is always absorbed
    for block in header_blocks:
        if not 0 <= block <= params.mask:
            raise ValueError(f"block {block:#x} does not fit in "
                             f"{params.digest_bits} bits")
        for i in range(params.digest_bits):
            if (block >> i) & 1:
                circuit.append(Gate.x(layout.hash[i]))
        for j in range(params.rounds):
            emit_round(circuit, j)
    # the nonce is always the final block, so the header prefix above is
    # nonce-independent and can be reused across mining attempts
    for i, q in enumerate(layout.nonce):
        circuit.append(Gate.cnot(q, layout.hash[i]))
    for j in range(params.rounds):
        emit_round(circuit, j)


def build_hash_circuit(layout: "RegisterLayout", header_blocks: Sequence[int],
                       params: HashParams) -> Circuit:
    """Circuit mapping |v>|0^m> to |v>|hash_classical(header + [v])> for
    every basis nonce v.  Fully in-place on the hash register: chi as
    CCNOTs, linear as CNOTs, rotation as a SWAP network, constants as X
    gates — no service qubits."""
    _check_layout(layout, params)
    circuit = Circuit(layout.total_qubits, label="hash")
    _emit_absorbs(circuit, layout, header_blocks, params,
                  lambda c, j: _emit_round(c, layout.hash, j, params))
    return circuit


def build_hash_circuit_outofplace(layout: "RegisterLayout",
                                  header_blocks: Sequence[int],
                                  params: HashParams) -> Circuit:
    """Demonstration variant routing every chi AND through a service
    qubit that is uncomputed back to |0>.  Same hash-register output as
    the in-place builder, strictly more gates; capped at digest_bits <= 4
    and rounds == 1 to keep the register total at desk scale."""
    _check_layout(layout, params)
    if params.digest_bits > OUTOFPLACE_MAX_DIGEST_BITS:
        raise ValueError(f"out-of-place variant supports digest_bits <= "
                         f"{OUTOFPLACE_MAX_DIGEST_BITS}, got {params.digest_bits}")
    if params.rounds != OUTOFPLACE_ROUNDS:
        raise ValueError(f"out-of-place variant supports rounds == "
                         f"{OUTOFPLACE_ROUNDS}, got {params.rounds}")
    if len(layout.service) < params.digest_bits:
        raise ValueError(f"need {params.digest_bits} service qubits, "
                         f"layout has {len(layout.service)}")
    circuit = Circuit(layout.total_qubits, label="hash-outofplace")
    _emit_absorbs(circuit, layout, header_blocks, params,
                  lambda c, j: _emit_round_outofplace(
                      c, layout.hash, layout.service, j, params))
    return circuit
