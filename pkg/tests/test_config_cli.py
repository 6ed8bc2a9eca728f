"""Config-file parsing, validation, CLI behavior, and CSV emission."""

import warnings

import numpy as np
import pytest

from fdhbf.cli import main
from fdhbf.config import (
    ConfigError,
    SweepConfig,
    config_from_values,
    load_config,
    parse_config_text,
    with_overrides,
)
from fdhbf.sweep import CSV_HEADER, emit_csv, run_sweep, SweepRow


TINY_CONFIG = """
# smallest node that still exercises the full pipeline
node.tx_antennas = 8
node.rx_antennas = 8
node.tx_chains = 2
node.rx_chains = 2
node.dl_rx_antennas = 2
node.si_budget_dbm = -60
node.rx_noise_dbm = -90
node.dl_rx_noise_dbm = -90
channel.pathloss_db = 60
si.pathloss_db = 40
canceller.taps = 2
sweep.powers_dbm = 10,30
sweep.trials = 3
sweep.seed = 5
"""


# =====================================================================
# parsing and validation
# =====================================================================


def test_parse_ignores_comments_and_blanks():
    vals = parse_config_text("# a comment\n\nnode.tx_antennas = 32\n")
    assert vals == {"node.tx_antennas": 32}


def test_parse_unknown_key_warns_but_proceeds():
    with pytest.warns(UserWarning, match="mystery.key"):
        vals = parse_config_text("mystery.key = 1\nnode.tx_chains = 2\n")
    assert vals == {"node.tx_chains": 2}


def test_parse_collects_every_problem():
    with pytest.raises(ConfigError) as exc:
        parse_config_text("node.tx_antennas = oops\nsweep.trials = many\n")
    text = "\n".join(exc.value.problems)
    assert "node.tx_antennas" in text and "sweep.trials" in text


def test_defaults_fill_omitted_fields():
    cfg = config_from_values(parse_config_text("node.tx_antennas = 64\n"))
    assert cfg.node.tx_antennas == 64
    assert cfg.node.rx_antennas == 32
    assert cfg.node.tx_chains == 4 and cfg.node.rx_chains == 2
    assert cfg.node.dl_rx_antennas == 4 and cfg.node.ul_tx_antennas == 1
    assert cfg.node.rx_noise_dbm == -110.0
    assert cfg.node.si_budget_dbm == -47.0
    assert cfg.num_taps == 4
    assert cfg.trials == 1000
    assert cfg.powers_dbm == (0.0, 10.0, 20.0, 30.0, 40.0, 50.0)
    assert cfg.clustered.pathloss_db == 110.0
    assert cfg.si.pathloss_db == 40.0 and cfg.si.k_factor_db == 35.0
    assert cfg.si.tx_rx_distance_wavelengths == 2.0
    assert cfg.si.tx_rx_angle_rad == pytest.approx(np.pi / 6.0)


def test_validation_collects_every_violation():
    with pytest.raises(ConfigError) as exc:
        config_from_values({"node.tx_antennas": 10, "node.tx_chains": 4,
                            "sweep.trials": 0, "canceller.taps": 99})
    assert len(exc.value.problems) >= 3


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(TINY_CONFIG)
    cfg = load_config(path)
    assert isinstance(cfg, SweepConfig)
    assert cfg.trials == 3
    assert cfg.powers_dbm == (10.0, 30.0)
    assert cfg.node.tx_chains == 2


def test_with_overrides():
    cfg = config_from_values({})
    out = with_overrides(cfg, trials=7, seed=99)
    assert out.trials == 7 and out.seed == 99
    assert out.node == cfg.node  # untouched parts are preserved


# =====================================================================
# CSV emission
# =====================================================================


def test_emit_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path)
    assert path.read_text() == CSV_HEADER + "\n"


def test_emit_csv_one_row_formatting(tmp_path):
    row = SweepRow(power_dbm=10.0, fd_rate=15.346912, dl_rate=12.654001,
                   ul_rate=2.69292, hd_rate=9.644131, feasibility=1.0,
                   mean_residual_si_dbm=-49.72101, trials=6)
    path = tmp_path / "one.csv"
    emit_csv([row], path)
    lines = path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    # six significant digits
    assert lines[1] == "10,15.3469,12.654,2.69292,9.64413,1,-49.721,6"


def test_same_sweep_twice_is_byte_identical(tmp_path):
    cfg = with_overrides(load_config_from_text(tmp_path), trials=2)
    rows1, _ = run_sweep(cfg)
    rows2, _ = run_sweep(cfg)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(rows1, p1)
    emit_csv(rows2, p2)
    assert p1.read_bytes() == p2.read_bytes()


def load_config_from_text(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_CONFIG)
    return load_config(path)


# =====================================================================
# sweep statistics
# =====================================================================


def test_degenerate_sweep_equals_direct_trial(tmp_path):
    """One power point, one trial: the row is just that cell's result."""
    from dataclasses import replace

    from fdhbf.codebook import dft_codebook
    from fdhbf.sweep import draw_channels, trial_rng
    from fdhbf.trial import solve_trial

    cfg = with_overrides(load_config_from_text(tmp_path), trials=1,
                         powers_dbm=(30.0,))
    rows, summaries = run_sweep(cfg)
    assert len(rows) == 1 and len(summaries) == 1

    rng = trial_rng(cfg.seed, 0, 0)
    channels = draw_channels(cfg, rng)
    node = replace(cfg.node, tx_power_dbm=30.0, ul_tx_power_dbm=30.0)
    cb = dft_codebook(node.tx_subarray)
    result = solve_trial(channels, node, cb, dft_codebook(node.rx_subarray),
                         cfg.num_taps, cfg.impairments,
                         strategy=cfg.strategy,
                         shortlist_size=cfg.shortlist_size)
    assert rows[0].fd_rate == result.rates.fd_sum_bpshz
    assert rows[0].dl_rate == result.rates.dl_rate_bpshz
    assert rows[0].ul_rate == result.rates.ul_rate_bpshz
    assert rows[0].hd_rate == result.rates.hd_rate_bpshz
    assert rows[0].trials == 1


def _fd_sem(cfg, trials):
    _, summaries = run_sweep(with_overrides(cfg, trials=trials))
    fd = np.array([s.fd_rate for s in summaries])
    return float(np.std(fd, ddof=1) / np.sqrt(len(fd)))


def test_doubling_trials_shrinks_sem_like_root_two(tmp_path):
    """Standard error of the mean FD rate scales ~ 1/sqrt(trials).

    The ratio between 80- and 40-trial SEM estimates is itself a noisy
    statistic, so the tolerance is a generous 20% around 1/sqrt(2) and the
    seed is fixed.
    """
    cfg = with_overrides(load_config_from_text(tmp_path),
                         powers_dbm=(30.0,), seed=9)
    ratio = _fd_sem(cfg, 80) / _fd_sem(cfg, 40)
    target = 1.0 / np.sqrt(2.0)
    assert target * 0.8 < ratio < target * 1.2


# =====================================================================
# command-line interface
# =====================================================================


def test_cli_run_writes_csv(tmp_path, capsys):
    cfg_path = tmp_path / "tiny.cfg"
    cfg_path.write_text(TINY_CONFIG)
    out_path = tmp_path / "out.csv"
    code = main(["run", "--config", str(cfg_path), "--output", str(out_path)])
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3  # two power points
    assert all(line.split(",")[-1] == "3" for line in lines[1:])


def test_cli_overrides_apply(tmp_path):
    cfg_path = tmp_path / "tiny.cfg"
    cfg_path.write_text(TINY_CONFIG)
    out_path = tmp_path / "out.csv"
    plot_path = tmp_path / "trials.csv"
    code = main(["run", "--config", str(cfg_path),
                 "--trials", "2", "--power-grid", "20",
                 "--output", str(out_path), "--plot-data", str(plot_path)])
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("20,")
    assert lines[1].endswith(",2")
    # per-trial records: header plus trials x powers rows
    assert len(plot_path.read_text().splitlines()) == 3


def test_cli_seed_changes_results(tmp_path):
    cfg_path = tmp_path / "tiny.cfg"
    cfg_path.write_text(TINY_CONFIG)
    outs = []
    for seed in ("5", "6"):
        out_path = tmp_path / f"out{seed}.csv"
        assert main(["run", "--config", str(cfg_path), "--seed", seed,
                     "--output", str(out_path)]) == 0
        outs.append(out_path.read_text())
    assert outs[0] != outs[1]


def test_cli_validate_accepts_good_config(tmp_path, capsys):
    cfg_path = tmp_path / "tiny.cfg"
    cfg_path.write_text(TINY_CONFIG)
    assert main(["validate", "--config", str(cfg_path)]) == 0


def test_cli_validate_rejects_bad_config(tmp_path, capsys):
    cfg_path = tmp_path / "bad.cfg"
    cfg_path.write_text("node.tx_antennas = 10\nnode.tx_chains = 4\n")
    assert main(["validate", "--config", str(cfg_path)]) == 1
    err = capsys.readouterr().err
    assert "tx_antennas" in err and "tx_chains" in err


def test_cli_missing_config_is_runtime_error(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_cli_dump_channels(tmp_path):
    cfg_path = tmp_path / "tiny.cfg"
    cfg_path.write_text(TINY_CONFIG)
    dump_dir = tmp_path / "dumps"
    code = main(["run", "--config", str(cfg_path), "--trials", "1",
                 "--power-grid", "30", "--output", str(tmp_path / "o.csv"),
                 "--dump-channels", str(dump_dir)])
    assert code == 0
    dumped = sorted(p.name for p in dump_dir.iterdir())
    assert len(dumped) == 3  # one file per channel matrix of the single cell
