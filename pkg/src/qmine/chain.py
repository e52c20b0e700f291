"""Toy proof-of-work chain: headers, serialization, brute-force miner,
difficulty derivation, validation, and JSON persistence.

A header is absorbed as four fixed blocks (previous digest, payload
digest, timestamp, difficulty), each truncated to the digest width; the
nonce is deliberately not part of the serialization — it is the final
sponge block supplied by whichever miner is running.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .miner import MiningParams, MiningResult
from .toyhash import Digest, HashParams, hash_classical

CHAIN_FORMAT_VERSION = "qmine-chain/1"

REASON_DIGEST_MISMATCH = "digest-mismatch"
REASON_DIFFICULTY = "difficulty"
REASON_PREV_LINK = "prev-link"
REASON_GENESIS_PREV = "genesis-prev"
REASON_NONCE_RANGE = "nonce-range"


@dataclass(frozen=True)
class BlockHeader:
    prev_digest: int
    payload_digest: int
    timestamp: int
    difficulty_zeros: int
    nonce: int


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    digest: Digest

    @staticmethod
    def from_header(header: BlockHeader, params: HashParams) -> "Block":
        return Block(header, header_digest(header, params))


@dataclass
class ValidationReport:
    reasons: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.reasons

    def __bool__(self) -> bool:
        return self.ok


def serialize_header(header: BlockHeader, params: HashParams) -> list[int]:
    """Fixed block sequence [prev, payload, timestamp, difficulty]; the
    timestamp is truncated to the low m bits, digests must fit exactly."""
    m = params.digest_bits
    for name, value in (("prev_digest", header.prev_digest),
                        ("payload_digest", header.payload_digest)):
        if not 0 <= value <= params.mask:
            raise ValueError(f"{name} {value:#x} does not fit in {m} bits")
    if header.timestamp < 0:
        raise ValueError("timestamp must be non-negative")
    if not 0 <= header.difficulty_zeros <= m:
        raise ValueError(f"difficulty_zeros must be in 0..{m}")
    return [header.prev_digest,
            header.payload_digest,
            header.timestamp & params.mask,
            header.difficulty_zeros]


def header_digest(header: BlockHeader, params: HashParams) -> Digest:
    return hash_classical(serialize_header(header, params) + [header.nonce], params)


def mine_classical(header_blocks: Sequence[int], params: MiningParams,
                   nonce_bits: int) -> MiningResult:
    """Exhaustive baseline: try nonce 0,1,... and return the first whose
    digest clears the difficulty; ties against the quantum miner are
    broken toward the smallest nonce by construction."""
    hp = params.hash_params
    blocks = list(header_blocks)
    space = 1 << nonce_bits
    digest = Digest(0, hp.digest_bits)
    for value in range(space):
        digest = hash_classical(blocks + [value], hp)
        if digest.meets_difficulty(params.difficulty_zeros):
            return MiningResult(
                nonce=value, nonce_bits=format(value, f"0{nonce_bits}b"),
                digest=digest, success=True, grover_iterations_used=0,
                success_probability_at_measurement=1.0, total_gates=0,
                hashes_tried=value + 1)
    last = space - 1
    return MiningResult(
        nonce=last, nonce_bits=format(last, f"0{nonce_bits}b"),
        digest=digest, success=False, grover_iterations_used=0,
        success_probability_at_measurement=0.0, total_gates=0,
        hashes_tried=space)


def compute_required_zeros(nonce_bits: int, digest_bits: int) -> int:
    """Leading zeros that make the expected solution count within one
    nonce set equal 1/2: solving 2^x / 2^(m-n) = 1/2 gives solution
    exponent x = m-n-1, hence z = m-x = n+1."""
    if nonce_bits >= digest_bits:
        raise ValueError("nonce register must be narrower than the digest")
    solution_exponent = digest_bits - nonce_bits - 1
    return digest_bits - solution_exponent


# -- validation ------------------------------------------------------------------


def validate_block(block: Block, params: HashParams) -> ValidationReport:
    report = ValidationReport()
    recomputed = header_digest(block.header, params)
    if recomputed != block.digest:
        report.reasons.append(REASON_DIGEST_MISMATCH)
    if not block.digest.meets_difficulty(block.header.difficulty_zeros):
        report.reasons.append(REASON_DIFFICULTY)
    return report


def validate_chain(blocks: Sequence[Block], params: HashParams) -> ValidationReport:
    report = ValidationReport()
    for i, block in enumerate(blocks):
        block_report = validate_block(block, params)
        report.reasons.extend(f"block {i}: {r}" for r in block_report.reasons)
        if i == 0:
            if block.header.prev_digest != 0:
                report.reasons.append(f"block 0: {REASON_GENESIS_PREV}")
        elif block.header.prev_digest != blocks[i - 1].digest.value:
            report.reasons.append(f"block {i}: {REASON_PREV_LINK}")
    return report


# -- persistence -------------------------------------------------------------------


@dataclass
class Chain:
    hash_params: HashParams
    nonce_bits: int
    blocks: list[Block] = field(default_factory=list)

    def tip_digest(self) -> int:
        return self.blocks[-1].digest.value if self.blocks else 0

    def append(self, block: Block) -> None:
        self.blocks.append(block)

    def validate(self) -> ValidationReport:
        report = validate_chain(self.blocks, self.hash_params)
        for i, block in enumerate(self.blocks):
            if not 0 <= block.header.nonce < (1 << self.nonce_bits):
                report.reasons.append(f"block {i}: {REASON_NONCE_RANGE}")
        return report


def _hex_width(bits: int) -> int:
    return (bits + 3) // 4


def save_chain(chain: Chain, path: str | Path) -> None:
    m = chain.hash_params.digest_bits
    w = _hex_width(m)
    payload = {
        "version": CHAIN_FORMAT_VERSION,
        "hash_params": {
            "digest_bits": m,
            "rounds": chain.hash_params.rounds,
            "true_chi": chain.hash_params.true_chi,
        },
        "nonce_bits": chain.nonce_bits,
        "blocks": [
            {
                "prev_digest": format(b.header.prev_digest, f"0{w}x"),
                "payload_digest": format(b.header.payload_digest, f"0{w}x"),
                "timestamp": b.header.timestamp,
                "difficulty_zeros": b.header.difficulty_zeros,
                "nonce": format(b.header.nonce, "x"),
                "digest": b.digest.hex,
            }
            for b in chain.blocks
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_chain(path: str | Path) -> Chain:
    payload = json.loads(Path(path).read_text())
    version = payload.get("version")
    if version != CHAIN_FORMAT_VERSION:
        raise ValueError(f"unsupported chain file version {version!r}")
    hp = HashParams(
        digest_bits=payload["hash_params"]["digest_bits"],
        rounds=payload["hash_params"]["rounds"],
        true_chi=payload["hash_params"].get("true_chi", False),
    )
    blocks = []
    for entry in payload["blocks"]:
        header = BlockHeader(
            prev_digest=int(entry["prev_digest"], 16),
            payload_digest=int(entry["payload_digest"], 16),
            timestamp=int(entry["timestamp"]),
            difficulty_zeros=int(entry["difficulty_zeros"]),
            nonce=int(entry["nonce"], 16),
        )
        blocks.append(Block(header, Digest(int(entry["digest"], 16), hp.digest_bits)))
    return Chain(hash_params=hp, nonce_bits=int(payload["nonce_bits"]), blocks=blocks)
