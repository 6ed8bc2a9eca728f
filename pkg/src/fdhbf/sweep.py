"""Monte-Carlo power sweep: scheduling, aggregation, CSV emission.

Each (power index, trial index) cell owns an independent random stream
derived with ``SeedSequence(seed, spawn_key=(power_index, trial_index))``, so
results do not depend on worker count or execution order, and adding power
points or trials never perturbs existing cells.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import numerics
from .channel import ArrayGeometry, ChannelRealization, clustered_channel, dump_matrix, rician_si_channel
from .codebook import dft_codebook
from .config import SweepConfig
from .numerics import watts_to_dbm
from .rates import residual_si_profile
from .trial import solve_trial

CSV_HEADER = "power_dbm,fd_rate,dl_rate,ul_rate,hd_rate,feasibility,mean_residual_si_dbm,trials"


@dataclass(frozen=True)
class TrialSummary:
    power_dbm: float
    power_index: int
    trial_index: int
    dl_rate: float
    ul_rate: float
    fd_rate: float
    hd_rate: float
    feasible: bool
    max_residual_si_w: float
    dl_subspace_dim: int
    regularizations: int


@dataclass(frozen=True)
class SweepRow:
    power_dbm: float
    fd_rate: float
    dl_rate: float
    ul_rate: float
    hd_rate: float
    feasibility: float
    mean_residual_si_dbm: float  # dBm of the mean max-residual wattage
    trials: int


def trial_rng(seed: int, power_index: int, trial_index: int) -> np.random.Generator:
    """The deterministic random stream owned by one sweep cell."""
    return np.random.default_rng(
        np.random.SeedSequence(seed, spawn_key=(power_index, trial_index))
    )


def draw_channels(cfg: SweepConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw one trial's three channels (order: downlink, uplink, SI)."""
    node = cfg.node
    s = cfg.array_spacing_wavelengths
    geom_tx = ArrayGeometry(node.tx_antennas, s)
    geom_rx = ArrayGeometry(node.rx_antennas, s)
    geom_dl = ArrayGeometry(node.dl_rx_antennas, s)
    geom_ul = ArrayGeometry(node.ul_tx_antennas, s)
    h_dl = clustered_channel(
        node.dl_rx_antennas, node.tx_antennas, geom_dl, geom_tx, cfg.clustered, rng
    )
    h_ul = clustered_channel(
        node.rx_antennas, node.ul_tx_antennas, geom_rx, geom_ul, cfg.clustered, rng
    )
    h_si = rician_si_channel(
        node.rx_antennas, node.tx_antennas, geom_rx, geom_tx, cfg.si, rng
    )
    return ChannelRealization(h_dl=h_dl, h_ul=h_ul, h_si=h_si)


def run_cell(cfg: SweepConfig, power_index: int, trial_index: int,
             dump_dir: str | None = None) -> TrialSummary:
    """Run one (power, trial) cell end to end."""
    power = cfg.powers_dbm[power_index]
    rng = trial_rng(cfg.seed, power_index, trial_index)
    channels = draw_channels(cfg, rng)
    if dump_dir is not None:
        stem = os.path.join(dump_dir, f"p{power_index}_t{trial_index}")
        dump_matrix(f"{stem}_dl.txt", channels.h_dl)
        dump_matrix(f"{stem}_ul.txt", channels.h_ul)
        dump_matrix(f"{stem}_si.txt", channels.h_si)
    node = replace(cfg.node, tx_power_dbm=power, ul_tx_power_dbm=power)
    codebook_tx = dft_codebook(node.tx_subarray, cfg.codebook_subsample_step)
    codebook_rx = dft_codebook(node.rx_subarray, cfg.codebook_subsample_step)
    before = numerics.regularization_count()
    result = solve_trial(
        channels, node, codebook_tx, codebook_rx, cfg.num_taps, cfg.impairments,
        strategy=cfg.strategy, shortlist_size=cfg.shortlist_size,
    )
    rates = result.rates
    residual_w = float(np.max(residual_si_profile(result.h_si_eff, result.design.f_bb)))
    return TrialSummary(
        power_dbm=power,
        power_index=power_index,
        trial_index=trial_index,
        dl_rate=rates.dl_rate_bpshz,
        ul_rate=rates.ul_rate_bpshz,
        fd_rate=rates.fd_sum_bpshz,
        hd_rate=rates.hd_rate_bpshz,
        feasible=rates.feasible,
        max_residual_si_w=residual_w,
        dl_subspace_dim=result.dl_subspace_dim,
        regularizations=numerics.regularization_count() - before,
    )


def _cell_star(args) -> TrialSummary:
    return run_cell(*args)


def run_sweep(cfg: SweepConfig, dump_dir: str | None = None,
              progress=None) -> tuple[list[SweepRow], list[TrialSummary]]:
    """Run the full grid and reduce per-power means in trial-index order."""
    if dump_dir is not None:
        os.makedirs(dump_dir, exist_ok=True)
    tasks = [
        (cfg, pi, ti, dump_dir)
        for pi in range(len(cfg.powers_dbm))
        for ti in range(cfg.trials)
    ]
    if cfg.workers <= 1:
        summaries = [_cell_star(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (cfg.workers * 8))
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            summaries = list(pool.map(_cell_star, tasks, chunksize=chunk))

    rows = []
    for pi, power in enumerate(cfg.powers_dbm):
        cell = [s for s in summaries if s.power_index == pi]
        cell.sort(key=lambda s: s.trial_index)
        rows.append(SweepRow(
            power_dbm=power,
            fd_rate=float(np.mean([s.fd_rate for s in cell])),
            dl_rate=float(np.mean([s.dl_rate for s in cell])),
            ul_rate=float(np.mean([s.ul_rate for s in cell])),
            hd_rate=float(np.mean([s.hd_rate for s in cell])),
            feasibility=float(np.mean([1.0 if s.feasible else 0.0 for s in cell])),
            mean_residual_si_dbm=watts_to_dbm(
                float(np.mean([s.max_residual_si_w for s in cell]))
            ),
            trials=len(cell),
        ))
        if progress is not None:
            progress(rows[-1])
    return rows, summaries


# =====================================================================
# CSV
# =====================================================================


def _fmt(value: float) -> str:
    return format(value, ".6g")


def emit_csv(rows: list[SweepRow], path) -> None:
    """Aggregate CSV, one row per power point, floats at 6 significant
    digits, LF newlines; byte-identical for identical inputs."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(",".join([
                _fmt(r.power_dbm), _fmt(r.fd_rate), _fmt(r.dl_rate),
                _fmt(r.ul_rate), _fmt(r.hd_rate), _fmt(r.feasibility),
                _fmt(r.mean_residual_si_dbm), str(r.trials),
            ]) + "\n")


def emit_trials_csv(summaries: list[TrialSummary], path) -> None:
    """Per-trial records for external plotting."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("power_dbm,trial,dl_rate,ul_rate,fd_rate,hd_rate,"
                 "feasible,max_residual_si_dbm,dl_subspace_dim\n")
        for s in sorted(summaries, key=lambda s: (s.power_index, s.trial_index)):
            fh.write(",".join([
                _fmt(s.power_dbm), str(s.trial_index), _fmt(s.dl_rate),
                _fmt(s.ul_rate), _fmt(s.fd_rate), _fmt(s.hd_rate),
                "1" if s.feasible else "0",
                _fmt(watts_to_dbm(s.max_residual_si_w)),
                str(s.dl_subspace_dim),
            ]) + "\n")
