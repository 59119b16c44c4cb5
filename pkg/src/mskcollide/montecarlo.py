"""Randomized packet-collision experiments over (tau, SIR, phi, n) grids.

Per grid point the engine simulates a batch of independent packets with the
closed-form demodulator, decodes them, and aggregates packet reception
ratio, bit error rate, and symbol error rate. The synchronized sender's
amplitude is fixed to 1 and interferer amplitudes derive from the SIR of
the point, so sweeps are parametrized by (tau, SIR) alone.

Every point draws from its own RNG stream seeded by the master seed and
the point's physical parameters (offsets, amplitudes, modes). Results are
therefore bit-identical no matter how points are ordered or distributed
across workers. Within a point the per-packet values are rows of batched
draws made in one fixed order: payloads, phase offsets, noise.
"""

from __future__ import annotations

import hashlib
import math
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from .chipseq import BIPOLAR_CHIP_TABLE, BITS_PER_SYMBOL, CHIPS_PER_SYMBOL
from .demod import batch_interference

TWO_PI = 2.0 * math.pi

_BIPOLAR_T_F64 = BIPOLAR_CHIP_TABLE.T.astype(np.float64)

PAYLOAD_MODES = ("independent", "identical")
CODINGS = ("uncoded", "hdd", "sdd")
TARGETS = ("soi", "interferer")
PHI_MODES = ("random_uniform", "fixed")
POWER_SPLITS = ("single", "equal_split")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Experiment description; grids and per-point simulation parameters."""

    packets_per_point: int = 1000
    payload_bits: int = 64
    payload_mode: str = "independent"
    coding: str = "uncoded"
    target: str = "soi"
    tau_grid: tuple = ()
    sir_db_grid: tuple = ()
    phi_mode: str = "random_uniform"
    phi_c: float = 0.0
    n_interferers: int = 1
    interferer_power_split: str = "single"
    master_seed: int = 1234
    noise_std: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "tau_grid", tuple(float(t) for t in self.tau_grid))
        object.__setattr__(self, "sir_db_grid", tuple(float(s) for s in self.sir_db_grid))

    def validate(self, require_grids: bool = True):
        if self.packets_per_point < 1:
            raise ConfigError("packets_per_point must be at least 1")
        if self.payload_bits < 1:
            raise ConfigError("payload_bits must be positive")
        if self.payload_mode not in PAYLOAD_MODES:
            raise ConfigError(f"payload_mode must be one of {PAYLOAD_MODES}")
        if self.coding not in CODINGS:
            raise ConfigError(f"coding must be one of {CODINGS}")
        if self.coding != "uncoded" and self.payload_bits % BITS_PER_SYMBOL:
            raise ConfigError("coded payload_bits must be a multiple of 4")
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}")
        if self.phi_mode not in PHI_MODES:
            raise ConfigError(f"phi_mode must be one of {PHI_MODES}")
        if self.interferer_power_split not in POWER_SPLITS:
            raise ConfigError(f"interferer_power_split must be one of {POWER_SPLITS}")
        if self.n_interferers < 0:
            raise ConfigError("n_interferers must be non-negative")
        if self.target == "interferer" and self.n_interferers < 1:
            raise ConfigError("target 'interferer' needs at least one interferer")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be non-negative")
        if require_grids:
            if not self.tau_grid:
                raise ConfigError("tau_grid must not be empty")
            if not self.sir_db_grid:
                raise ConfigError("sir_db_grid must not be empty")

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True)
class MetricPoint:
    """Aggregated metrics of one grid point."""

    tau: float
    sir_db: float
    prr_mean: float
    prr_std: float
    ber: float
    ser: float
    packets: int
    phi_c: float | None = None
    n: int = 1


@dataclass(frozen=True)
class ZoneCell:
    """Error rate of one (tau, phi_c) cell of a capture-zone map."""

    tau: float
    phi_c: float
    error_rate: float
    packets: int


@dataclass(frozen=True)
class ThresholdPoint:
    """Smallest SIR reaching the PRR threshold at one time offset; sir_db is
    None where no grid SIR reaches it."""

    tau: float
    sir_db: float | None


@dataclass(frozen=True)
class NInterfererPoint:
    """SDD-style reception ratio for one (n, layout, payload_mode) cell."""

    n: int
    layout: str
    payload_mode: str
    prr_mean: float
    prr_std: float
    packets: int


def grid(start: float, stop: float, step: float) -> tuple:
    """Inclusive numeric grid with round-off-stable values."""
    if step <= 0:
        raise ConfigError("grid step must be positive")
    if stop < start:
        raise ConfigError("grid stop must not precede start")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + i * step, 10) for i in range(n))


def sir_db_to_amplitude(sir_db: float) -> float:
    """Interferer amplitude for a unit-amplitude synchronized sender."""
    return 10.0 ** (-sir_db / 20.0)


def split_amplitudes(total_power: float, n: int, layout: str) -> tuple:
    """Distribute a total interference power across interferers.

    "single" concentrates everything in one interferer, "equal_split"
    divides it evenly over n.
    """
    if layout not in POWER_SPLITS:
        raise ConfigError(f"unknown power split {layout!r}")
    if total_power < 0:
        raise ConfigError("total_power must be non-negative")
    if n == 0 or total_power == 0:
        return ()
    if layout == "single":
        return (math.sqrt(total_power),)
    return tuple(math.sqrt(total_power / n) for _ in range(n))


def _encode_part(part) -> bytes:
    if isinstance(part, float):
        return b"f" + struct.pack("<d", part)
    if isinstance(part, int):
        return b"i" + str(part).encode()
    if isinstance(part, str):
        return b"s" + part.encode()
    if isinstance(part, (tuple, list)):
        return b"t" + b"".join(_encode_part(p) for p in part) + b"e"
    raise TypeError(f"cannot encode {type(part)!r} into a point key")


def _point_rng(master_seed: int, *parts) -> np.random.Generator:
    """RNG stream for one grid point, keyed by its physical parameters."""
    digest = hashlib.blake2b(b"".join(_encode_part(p) for p in parts),
                             digest_size=16).digest()
    key = int.from_bytes(digest, "little")
    seq = np.random.SeedSequence([int(master_seed) & (2**64 - 1), key])
    return np.random.default_rng(seq)


@dataclass(frozen=True)
class _BatchStats:
    ok: np.ndarray
    bit_errors: int
    total_bits: int
    symbol_errors: int
    total_symbols: int


def _draw_bipolar(rng, shape) -> np.ndarray:
    return (rng.integers(0, 2, size=shape, dtype=np.int8) * 2 - 1).astype(np.int8)


def _compute_soft(alpha_i, alpha_q, interferer_bits, amplitudes, tau, phi,
                  noise_i=None, noise_q=None, soi_amplitude=1.0):
    """Soft-bit matrices for a batch of packets (pure given the draws).

    interferer_bits is a list of (beta_i, beta_q) pairs; phi has one column
    per interferer. Returns (soft_i, soft_q) float64 matrices.
    """
    n_i = alpha_i.shape[-1]
    n_q = alpha_q.shape[-1]
    soft_i = soi_amplitude * alpha_i.astype(np.float64, copy=False)
    soft_q = soi_amplitude * alpha_q.astype(np.float64, copy=False)
    for idx, (beta_i, beta_q) in enumerate(interferer_bits):
        amp = amplitudes[idx]
        phi_col = phi[..., idx]
        soft_i += batch_interference(beta_i, beta_q, amp, tau, phi_col, "I", n_i)
        soft_q += batch_interference(beta_i, beta_q, amp, tau, phi_col, "Q", n_q)
    if noise_i is not None:
        soft_i += noise_i
        soft_q += noise_q
    return soft_i, soft_q


def _simulate_batch(cfg: ExperimentConfig, tau: float, amplitudes: tuple,
                    phi_fixed: float | None) -> _BatchStats:
    """Simulate one grid point's packets and count errors against the target."""
    packets = cfg.packets_per_point
    coded = cfg.coding != "uncoded"
    n_chips = 8 * cfg.payload_bits if coded else cfg.payload_bits
    n_int = len(amplitudes)

    rng = _point_rng(
        cfg.master_seed,
        float(tau), tuple(float(a) for a in amplitudes),
        cfg.phi_mode, float(phi_fixed) if phi_fixed is not None else -1.0,
        cfg.payload_mode, cfg.coding, cfg.target,
        packets, cfg.payload_bits, float(cfg.noise_std),
    )

    # Canonical draw order: SoI payload, interferer payloads (independent
    # mode only), phase offsets (random mode only), then noise.
    if coded:
        n_symbols = cfg.payload_bits // BITS_PER_SYMBOL
        soi_symbols = rng.integers(0, 16, size=(packets, n_symbols))
        soi_chips = BIPOLAR_CHIP_TABLE[soi_symbols].reshape(packets, n_chips)
        senders = [(soi_symbols, soi_chips)]
        for _ in range(n_int):
            if cfg.payload_mode == "identical":
                senders.append((soi_symbols, soi_chips))
            else:
                symbols = rng.integers(0, 16, size=(packets, n_symbols))
                senders.append((symbols, BIPOLAR_CHIP_TABLE[symbols].reshape(packets, n_chips)))
    else:
        n_symbols = 0
        soi_chips = _draw_bipolar(rng, (packets, n_chips))
        senders = [(None, soi_chips)]
        for _ in range(n_int):
            if cfg.payload_mode == "identical":
                senders.append((None, soi_chips))
            else:
                senders.append((None, _draw_bipolar(rng, (packets, n_chips))))

    if cfg.phi_mode == "random_uniform":
        phi = rng.uniform(0.0, TWO_PI, size=(packets, n_int))
    else:
        phi = np.full((packets, n_int), float(phi_fixed))

    if cfg.noise_std > 0:
        noise_i = rng.normal(0.0, cfg.noise_std, size=(packets, n_chips - n_chips // 2))
        noise_q = rng.normal(0.0, cfg.noise_std, size=(packets, n_chips // 2))
    else:
        noise_i = noise_q = None

    split = [(chips[:, 0::2], chips[:, 1::2]) for _, chips in senders]
    soft_i, soft_q = _compute_soft(split[0][0], split[0][1], split[1:],
                                   amplitudes, tau, phi, noise_i, noise_q)

    target_idx = 0 if cfg.target == "soi" else 1
    ref_symbols = senders[target_idx][0]

    sliced_i = np.where(soft_i >= 0, np.int8(1), np.int8(-1))
    sliced_q = np.where(soft_q >= 0, np.int8(1), np.int8(-1))
    bit_err_per_packet = ((sliced_i != split[target_idx][0]).sum(axis=1)
                          + (sliced_q != split[target_idx][1]).sum(axis=1))
    bit_errors = int(bit_err_per_packet.sum())

    if not coded:
        ok = bit_err_per_packet == 0
        return _BatchStats(ok=ok, bit_errors=bit_errors,
                           total_bits=packets * n_chips,
                           symbol_errors=0, total_symbols=0)

    values = np.empty((packets, n_chips))
    if cfg.coding == "hdd":
        values[:, 0::2] = sliced_i
        values[:, 1::2] = sliced_q
    else:
        values[:, 0::2] = soft_i
        values[:, 1::2] = soft_q
    blocks = values.reshape(packets * n_symbols, CHIPS_PER_SYMBOL)
    corr = np.abs(blocks @ _BIPOLAR_T_F64)
    decided = np.argmax(corr, axis=1).reshape(packets, n_symbols)
    sym_err_per_packet = (decided != ref_symbols).sum(axis=1)
    ok = sym_err_per_packet == 0
    return _BatchStats(ok=ok, bit_errors=bit_errors,
                       total_bits=packets * n_chips,
                       symbol_errors=int(sym_err_per_packet.sum()),
                       total_symbols=packets * n_symbols)


def _prr_stats(ok: np.ndarray, n_batches: int = 10) -> tuple[float, float]:
    """Mean PRR plus its spread across equal batches of the packet set."""
    packets = len(ok)
    mean = float(np.mean(ok))
    n_batches = min(n_batches, packets)
    if n_batches < 2:
        return mean, 0.0
    batch_means = [float(np.mean(b)) for b in np.array_split(ok, n_batches)]
    return mean, float(np.std(batch_means, ddof=1))


def _point_amplitudes(cfg: ExperimentConfig, sir_db: float) -> tuple:
    total_power = 10.0 ** (-sir_db / 10.0)
    return split_amplitudes(total_power, cfg.n_interferers,
                            cfg.interferer_power_split)


def run_point(cfg: ExperimentConfig, tau: float, sir_db: float) -> MetricPoint:
    """Simulate one (tau, SIR) grid point."""
    cfg.validate(require_grids=False)
    amplitudes = _point_amplitudes(cfg, sir_db)
    phi_fixed = cfg.phi_c if cfg.phi_mode == "fixed" else None
    stats = _simulate_batch(cfg, tau, amplitudes, phi_fixed)
    prr_mean, prr_std = _prr_stats(stats.ok)
    ber = stats.bit_errors / stats.total_bits
    ser = stats.symbol_errors / stats.total_symbols if stats.total_symbols else 0.0
    return MetricPoint(tau=float(tau), sir_db=float(sir_db), prr_mean=prr_mean,
                       prr_std=prr_std, ber=ber, ser=ser,
                       packets=cfg.packets_per_point, phi_c=phi_fixed,
                       n=len(amplitudes))


def _sweep_task(args):
    cfg, tau, sir_db = args
    return run_point(cfg, tau, sir_db)


def _map_tasks(task_fn, tasks: list, threads: int) -> list:
    if threads <= 1 or len(tasks) <= 1:
        return [task_fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(task_fn, tasks, chunksize=chunk))


def sweep(cfg: ExperimentConfig, threads: int = 1) -> list[MetricPoint]:
    """Run the full tau x SIR grid; deterministic for a given master seed
    regardless of threads."""
    cfg.validate()
    tasks = [(cfg, tau, sir) for tau in cfg.tau_grid for sir in cfg.sir_db_grid]
    return _map_tasks(_sweep_task, tasks, threads)


def _zone_task(args):
    cfg, tau, phi, sir_db = args
    point_cfg = replace(cfg, phi_mode="fixed", phi_c=phi)
    point = run_point(point_cfg, tau, sir_db)
    rate = point.ber if cfg.coding == "uncoded" else point.ser
    return ZoneCell(tau=float(tau), phi_c=float(phi), error_rate=rate,
                    packets=point.packets)


def capture_zone(cfg: ExperimentConfig, sir_db: float, tau_grid, phi_grid,
                 threads: int = 1) -> list[ZoneCell]:
    """Error-rate map over (tau, phi_c) cells at a fixed SIR.

    Each cell fixes the carrier phase offset; the error rate is the bit
    error rate for uncoded operation and the symbol error rate for the
    coded modes.
    """
    cfg.validate(require_grids=False)
    if not len(tau_grid) or not len(phi_grid):
        raise ConfigError("capture zone grids must not be empty")
    tasks = [(cfg, tau, phi, sir_db) for tau in tau_grid for phi in phi_grid]
    return _map_tasks(_zone_task, tasks, threads)


def _ninterf_task(args):
    cfg, n, layout, payload_mode = args
    point_cfg = replace(cfg, payload_mode=payload_mode, n_interferers=n,
                        interferer_power_split=layout, phi_mode="random_uniform")
    amplitudes = split_amplitudes(n * 0.5, n, layout)
    stats = _simulate_batch(point_cfg, 0.0, amplitudes, None)
    prr_mean, prr_std = _prr_stats(stats.ok)
    return NInterfererPoint(n=n, layout=layout, payload_mode=payload_mode,
                            prr_mean=prr_mean, prr_std=prr_std,
                            packets=cfg.packets_per_point)


def n_interferer_experiment(cfg: ExperimentConfig, max_n: int = 8,
                            threads: int = 1) -> list[NInterfererPoint]:
    """Reception under one strong interferer versus n weaker ones.

    All interferers are time-synchronized (tau = 0) with i.i.d. uniform
    phase offsets; each weak interferer carries half the synchronized
    sender's power, the single strong one carries n times that. Runs both
    payload modes and both layouts for n = 1..max_n.
    """
    cfg.validate(require_grids=False)
    if max_n < 1:
        raise ConfigError("max_n must be at least 1")
    tasks = [(cfg, n, layout, mode)
             for mode in PAYLOAD_MODES
             for layout in POWER_SPLITS
             for n in range(1, max_n + 1)]
    return _map_tasks(_ninterf_task, tasks, threads)


def threshold_extract(points: list[MetricPoint],
                      prr_threshold: float = 0.9) -> list[ThresholdPoint]:
    """Per time offset, the smallest SIR whose PRR reaches the threshold.

    Linear interpolation between the bracketing SIR grid points; None where
    the curve never reaches the threshold.
    """
    by_tau: dict[float, list[MetricPoint]] = {}
    for p in points:
        by_tau.setdefault(p.tau, []).append(p)
    out = []
    for tau in sorted(by_tau):
        pts = sorted(by_tau[tau], key=lambda p: p.sir_db)
        sir = None
        for i, p in enumerate(pts):
            if p.prr_mean >= prr_threshold:
                if i == 0:
                    sir = p.sir_db
                else:
                    prev = pts[i - 1]
                    frac = (prr_threshold - prev.prr_mean) / (p.prr_mean - prev.prr_mean)
                    sir = prev.sir_db + frac * (p.sir_db - prev.sir_db)
                break
        out.append(ThresholdPoint(tau=tau, sir_db=sir))
    return out
