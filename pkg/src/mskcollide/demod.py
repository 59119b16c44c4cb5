"""Closed-form matched-filter contributions of colliding MSK signals.

The receiver correlates against the half-sine basis of the branch under
detection and integrates over one bit duration. A signal offset in time by
tau and in carrier phase by phi_c contributes to each decision through at
most four of its bits: the two bits of the same branch whose pulses overlap
the integration window, and two bits of the opposite branch that leak in
when phi_c != 0. With the matched-filter gain folded in, a fully
synchronized unit-amplitude signal contributes exactly its bit value.

The quadrature branch obeys the same expression with the branch roles
exchanged: its own bits enter with the plain offset decomposition and the
in-phase bits leak with the offset shifted by -T (the in-phase pulse grid
leads the quadrature grid by half a bit). The sign conventions used here
are pinned by the numerical oracle (see the oracle module and its tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signal_model import InterfererParams, Scenario

#: Extra pulse-grid shift applied before decomposing, in units of T.
#: "active" decomposes tau itself (bits of the branch being detected),
#: "q_leak" quadrature bits leaking into in-phase detection (tau + T),
#: "i_leak" in-phase bits leaking into quadrature detection (tau - T).
VARIANT_SHIFTS = {"active": 0.0, "q_leak": 1.0, "i_leak": -1.0}


@dataclass(frozen=True)
class OffsetDecomposition:
    """Time offset split into a whole-bit index shift and a remainder.

    tau_rel is confined to [0, 2T); the active bit indices for decision k
    are k - k_shift - 1 and k - k_shift. phi_p is the pulse phase pi*tau/2T
    of the full (unwrapped) offset.
    """

    k_shift: int
    tau_rel: float
    phi_p: float
    variant: str


def decompose_offset(tau: float, T: float = 1.0, variant: str = "active") -> OffsetDecomposition:
    """Decompose a time offset for one pulse grid; total for all finite tau."""
    if T <= 0:
        raise ValueError("T must be positive")
    if variant not in VARIANT_SHIFTS:
        raise ValueError(f"unknown variant {variant!r}")
    shifted = tau + VARIANT_SHIFTS[variant] * T
    two_t = 2.0 * T
    k_shift = math.floor(shifted / two_t)
    tau_rel = shifted - two_t * k_shift
    # Guard against float rounding pushing the remainder onto 2T.
    if tau_rel >= two_t:
        k_shift += 1
        tau_rel -= two_t
    if tau_rel < 0.0:
        tau_rel = 0.0
    return OffsetDecomposition(k_shift, tau_rel, math.pi * tau / two_t, variant)


@dataclass(frozen=True)
class BitContribution:
    """One signal's additive contribution to a single soft bit."""

    value: float
    branch: str
    bit_index: int


def synchronized_contribution(amplitude: float, bit: int) -> float:
    """Contribution of a fully synchronized signal: amplitude times bit."""
    if not amplitude > 0:
        raise ValueError("amplitude must be positive")
    if bit not in (-1, 0, 1):
        raise ValueError("bit must be -1, 0, or +1")
    return amplitude * bit


def _closed_form(main_prev, main_cur, leak_prev, leak_cur,
                 amplitude, phi_c, tau_rel, tau_rel_leak, phi_p, T):
    """Shared closed-form expression; scalar or broadcast array inputs.

    main_* are the bits of the detected branch selected by the plain
    decomposition, leak_* the opposite-branch bits selected by the shifted
    decomposition; tau_rel / tau_rel_leak are the matching remainders.
    """
    two_t = 2.0 * T
    over_pi = two_t / math.pi
    cos_p = math.cos(phi_p)
    sin_p = math.sin(phi_p)
    direct = (cos_p * (tau_rel * main_prev + (two_t - tau_rel) * main_cur)
              - over_pi * sin_p * (main_prev - main_cur))
    leak = (sin_p * (tau_rel_leak * leak_prev + (two_t - tau_rel_leak) * leak_cur)
            + over_pi * cos_p * (leak_prev - leak_cur))
    return amplitude / two_t * (np.cos(phi_c) * direct - np.sin(phi_c) * leak)


def interference_contribution(params: InterfererParams, k: int,
                              branch: str = "I", T: float = 1.0) -> BitContribution:
    """Closed-form contribution of one interferer to soft bit k of a branch."""
    if branch not in ("I", "Q"):
        raise ValueError("branch must be 'I' or 'Q'")
    main_dec = decompose_offset(params.tau, T, "active")
    leak_dec = decompose_offset(params.tau, T, "q_leak" if branch == "I" else "i_leak")
    payload = params.payload
    main_bit = payload.i_bit if branch == "I" else payload.q_bit
    leak_bit = payload.q_bit if branch == "I" else payload.i_bit
    km = k - main_dec.k_shift
    kl = k - leak_dec.k_shift
    value = _closed_form(
        main_bit(km - 1), main_bit(km), leak_bit(kl - 1), leak_bit(kl),
        params.amplitude, params.phi_c,
        main_dec.tau_rel, leak_dec.tau_rel, main_dec.phi_p, T,
    )
    return BitContribution(value=float(value), branch=branch, bit_index=k)


def _shifted_pair(bits: np.ndarray, shift: int, num_bits: int):
    """(prev, cur) where cur[..., k] = bits[..., k - shift] and prev lags cur
    by one index; single buffer, zero outside the payload."""
    buf = np.zeros(bits.shape[:-1] + (num_bits + 1,), dtype=bits.dtype)
    lo = max(0, shift + 1)
    hi = min(num_bits + 1, bits.shape[-1] + shift + 1)
    if lo < hi:
        buf[..., lo:hi] = bits[..., lo - shift - 1 : hi - shift - 1]
    return buf[..., :-1], buf[..., 1:]


def batch_interference(i_bits: np.ndarray, q_bits: np.ndarray, amplitude: float,
                       tau: float, phi_c, branch: str, num_bits: int,
                       T: float = 1.0, index_offset: int = 0) -> np.ndarray:
    """Contributions of one interferer for decision indices 0..num_bits-1.

    i_bits/q_bits hold +-1 payload bits on the trailing axis with arbitrary
    leading batch axes; phi_c broadcasts over those leading axes. Same
    expression as interference_contribution, evaluated for whole packets.
    index_offset is the interferer payload's first branch index relative to
    the first decision index (0 when both grids start at bit 0).
    """
    if branch not in ("I", "Q"):
        raise ValueError("branch must be 'I' or 'Q'")
    main_dec = decompose_offset(tau, T, "active")
    leak_dec = decompose_offset(tau, T, "q_leak" if branch == "I" else "i_leak")
    main_bits = i_bits if branch == "I" else q_bits
    leak_bits = q_bits if branch == "I" else i_bits
    phi_c = np.asarray(phi_c, dtype=np.float64)[..., None]
    main_prev, main_cur = _shifted_pair(main_bits, main_dec.k_shift + index_offset,
                                        num_bits)
    leak_prev, leak_cur = _shifted_pair(leak_bits, leak_dec.k_shift + index_offset,
                                        num_bits)
    # Same expression as _closed_form, folded into one scalar weight per
    # selected bit so the batch path touches each array only twice.
    two_t = 2.0 * T
    over_pi = two_t / math.pi
    gain = amplitude / two_t
    cos_p = math.cos(main_dec.phi_p)
    sin_p = math.sin(main_dec.phi_p)
    direct = ((gain * (cos_p * main_dec.tau_rel - over_pi * sin_p)) * main_prev
              + (gain * (cos_p * (two_t - main_dec.tau_rel) + over_pi * sin_p)) * main_cur)
    leak = ((gain * (sin_p * leak_dec.tau_rel + over_pi * cos_p)) * leak_prev
            + (gain * (sin_p * (two_t - leak_dec.tau_rel) - over_pi * cos_p)) * leak_cur)
    return np.cos(phi_c) * direct - np.sin(phi_c) * leak


def soft_bit(scenario: Scenario, branch: str, k: int, rng=None) -> float:
    """Demodulator output for one bit: synchronized sender plus all
    interferer contributions plus an optional Gaussian noise sample."""
    payload = scenario.soi_payload
    bit = payload.i_bit(k) if branch == "I" else payload.q_bit(k)
    total = scenario.soi_amplitude * bit
    for u in scenario.interferers:
        total += interference_contribution(u, k, branch, scenario.half_bit).value
    if scenario.noise_std > 0:
        if rng is None:
            raise ValueError("rng is required when noise_std > 0")
        total += rng.normal(0.0, scenario.noise_std)
    return float(total)


def packet_soft_bits(scenario: Scenario, rng=None) -> tuple[np.ndarray, np.ndarray]:
    """Soft bits for every payload index of the synchronized sender's grid.

    Returns (soft_i, soft_q) float arrays covering the synchronized
    sender's payload span on each branch.
    """
    payload = scenario.soi_payload
    n_i, n_q = len(payload.i_bits), len(payload.q_bits)
    soft_i = scenario.soi_amplitude * payload.i_bits.astype(np.float64)
    soft_q = scenario.soi_amplitude * payload.q_bits.astype(np.float64)
    for u in scenario.interferers:
        bi = u.payload.i_bits.astype(np.float64)
        bq = u.payload.q_bits.astype(np.float64)
        offset = u.payload.origin_index - payload.origin_index
        soft_i += batch_interference(bi, bq, u.amplitude, u.tau, u.phi_c, "I",
                                     n_i, scenario.half_bit, offset)
        soft_q += batch_interference(bi, bq, u.amplitude, u.tau, u.phi_c, "Q",
                                     n_q, scenario.half_bit, offset)
    if scenario.noise_std > 0:
        if rng is None:
            raise ValueError("rng is required when noise_std > 0")
        soft_i += rng.normal(0.0, scenario.noise_std, size=n_i)
        soft_q += rng.normal(0.0, scenario.noise_std, size=n_q)
    return soft_i, soft_q
