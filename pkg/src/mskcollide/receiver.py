"""Turning soft bits into decisions: slicing and DSSS symbol decoding.

Hard decision decoding (HDD) slices each chip to +-1 first and correlates
the sliced block against all 16 codewords; soft decision decoding (SDD)
correlates the raw soft values directly. Both pick the symbol with the
largest absolute correlation, so a globally inverted block still decodes
to the same symbol. Ties: a soft value of exactly 0 slices to +1, and
correlation ties resolve to the lowest symbol index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chipseq import BIPOLAR_CHIP_TABLE, CHIPS_PER_SYMBOL
from .demod import packet_soft_bits
from .signal_model import Scenario, demultiplex_bits


def slice_bit(soft: float) -> int:
    """Sign of the soft value; exactly 0 maps to +1."""
    return 1 if soft >= 0 else -1


@dataclass(frozen=True)
class SymbolDecision:
    """Decoded symbol with its winning |correlation| and the margin to the
    runner-up."""

    symbol: int
    correlation: float
    runner_up_gap: float


def _correlate_decide(values: np.ndarray) -> SymbolDecision:
    corr = np.abs(BIPOLAR_CHIP_TABLE.astype(np.float64) @ values)
    best = int(np.argmax(corr))
    winning = float(corr[best])
    corr[best] = -np.inf
    return SymbolDecision(symbol=best, correlation=winning,
                          runner_up_gap=winning - float(np.max(corr)))


def hdd_decode(chips) -> SymbolDecision:
    """Decode one 32-chip block of sliced +-1 values."""
    chips = np.asarray(chips)
    if chips.shape != (CHIPS_PER_SYMBOL,):
        raise ValueError(f"expected exactly {CHIPS_PER_SYMBOL} chips")
    if not np.all(np.abs(chips) == 1):
        raise ValueError("hard-decision chips must be +1 or -1")
    return _correlate_decide(chips.astype(np.float64))


def sdd_decode(soft_chips) -> SymbolDecision:
    """Decode one 32-chip block of raw soft values."""
    soft_chips = np.asarray(soft_chips, dtype=np.float64)
    if soft_chips.shape != (CHIPS_PER_SYMBOL,):
        raise ValueError(f"expected exactly {CHIPS_PER_SYMBOL} soft chips")
    return _correlate_decide(soft_chips)


def despread_reference(transmit_chips: np.ndarray) -> np.ndarray:
    """Symbols of a clean +-1 chip stream, one per 32-chip block.

    Exact for valid codeword streams (autocorrelation is strictly maximal);
    arbitrary blocks decode to their nearest codeword.
    """
    chips = np.asarray(transmit_chips)
    if chips.size % CHIPS_PER_SYMBOL:
        raise ValueError("chip stream length must be a multiple of 32")
    blocks = chips.reshape(-1, CHIPS_PER_SYMBOL).astype(np.int32)
    corr = np.abs(blocks @ BIPOLAR_CHIP_TABLE.T.astype(np.int32))
    return np.argmax(corr, axis=1)


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of decoding one packet against a reference sender."""

    packet_ok: bool
    bit_errors: int
    n_bits: int
    decided_bits: np.ndarray
    symbol_errors: int | None = None
    n_symbols: int | None = None
    decided_symbols: np.ndarray | None = None


def decode_packet(scenario: Scenario, coding: str, target: str = "soi",
                  interferer_index: int = 0, rng=None) -> DecodeResult:
    """Demodulate a whole packet on the synchronized sender's timing grid
    and compare the decisions against one sender's payload.

    coding is "uncoded", "hdd", or "sdd"; target "soi" or "interferer".
    Bit errors always count sliced transmit bits (chips, when coded); symbol
    errors are reported for the coded modes. The receiver never re-times to
    the interferer: decisions stay on the synchronized grid even when the
    interferer is the target.
    """
    if coding not in ("uncoded", "hdd", "sdd"):
        raise ValueError(f"unknown coding {coding!r}")
    if target == "soi":
        reference = scenario.soi_payload
    elif target == "interferer":
        if not 0 <= interferer_index < len(scenario.interferers):
            raise IndexError("interferer index out of range")
        reference = scenario.interferers[interferer_index].payload
    else:
        raise ValueError(f"unknown target {target!r}")

    soft_i, soft_q = packet_soft_bits(scenario, rng)
    n_i, n_q = len(soft_i), len(soft_q)
    soft_t = np.zeros(n_i + n_q)
    soft_t[0 : 2 * n_i : 2] = soft_i
    soft_t[1 : 2 * n_q + 1 : 2] = soft_q

    ref_t = demultiplex_bits(reference)
    if len(ref_t) != len(soft_t):
        raise ValueError("target payload length does not match the decision grid")

    sliced = np.where(soft_t >= 0, 1, -1).astype(np.int8)
    bit_errors = int(np.count_nonzero(sliced != ref_t))

    if coding == "uncoded":
        return DecodeResult(packet_ok=bit_errors == 0, bit_errors=bit_errors,
                            n_bits=len(ref_t), decided_bits=sliced)

    if len(soft_t) % CHIPS_PER_SYMBOL:
        raise ValueError("coded packets need a multiple of 32 transmit chips")
    blocks = (sliced if coding == "hdd" else soft_t).reshape(-1, CHIPS_PER_SYMBOL)
    decided = np.array([_correlate_decide(b.astype(np.float64)).symbol for b in blocks])
    ref_symbols = despread_reference(ref_t)
    symbol_errors = int(np.count_nonzero(decided != ref_symbols))
    return DecodeResult(packet_ok=symbol_errors == 0, bit_errors=bit_errors,
                        n_bits=len(ref_t), decided_bits=sliced,
                        symbol_errors=symbol_errors, n_symbols=len(ref_symbols),
                        decided_symbols=decided)
