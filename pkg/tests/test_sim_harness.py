import math

import numpy as np
import pytest

from fdswipt.joint_solver import solve
from fdswipt.model import SystemParams
from fdswipt.sim_harness import (
    CSV_HEADER,
    ChannelModel,
    SweepRow,
    SweepSpec,
    run_sweep,
    run_trials,
    sample_channel,
    trial_rng,
    write_csv,
)


class FixedDraws:
    """Stands in for a Generator and returns |g|^2 = 1 on every entry."""

    def standard_normal(self, n):
        return np.full(n, 1.0)


def test_perfect_cancellation_removes_si():
    ch = sample_channel(trial_rng(0, 0), ChannelModel(kappa=0.0))
    assert ch.h_ab_hat == 0 and ch.h_cd_hat == 0


def test_cancellation_fraction_scales_power():
    ch = sample_channel(FixedDraws(), ChannelModel(kappa=0.3))
    assert abs(ch.h_ab_hat) ** 2 == pytest.approx(0.3)
    assert abs(ch.h_cd_hat) ** 2 == pytest.approx(0.3)
    assert ch.g_cb == pytest.approx(1.0)


def test_rsi_above_noise_mean_power():
    model = ChannelModel(si_mode="rsi_above_noise", rsi_db=10.0)
    g = [abs(sample_channel(trial_rng(1, t), model).h_ab_hat) ** 2 for t in range(20000)]
    assert np.mean(g) == pytest.approx(10.0, rel=0.03)


def test_link_statistics():
    draws = [sample_channel(trial_rng(2, t), ChannelModel()) for t in range(20000)]
    h = np.array([d.h_cb for d in draws])
    assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, rel=0.03)
    assert abs(np.mean(h)) < 0.03
    assert np.var(h.real) == pytest.approx(0.5, rel=0.05)


def test_eps_fraction():
    ch = sample_channel(trial_rng(0, 5), ChannelModel(eps_fraction=0.2))
    assert ch.eps1 ** 2 == pytest.approx(0.2 * abs(ch.h_ab_hat) ** 2)


def test_model_and_spec_validation():
    with pytest.raises(ValueError):
        ChannelModel(kappa=1.5)
    with pytest.raises(ValueError):
        ChannelModel(si_mode="nope")
    with pytest.raises(ValueError):
        SweepSpec("p_max_db", ())
    with pytest.raises(ValueError):
        SweepSpec("p_max_db", (0.0,), q_bars=())
    with pytest.raises(ValueError):
        SweepSpec("p_max_db", (0.0,), trials=0)


def test_single_trial_row_equals_single_solve():
    spec = SweepSpec("p_max_db", (10.0,), q_bars=(0.5,), trials=1, seed=11, schemes=("joint",))
    (row,) = run_sweep(spec)
    ch = sample_channel(trial_rng(11, 0), ChannelModel())
    sol = solve(ch, SystemParams(p_max=10.0, q_bar_21=0.5, q_bar_12=0.5))
    assert row.mean_sum_rate == sol.r_sum and row.trials == 1 and row.infeasible == 0


def test_paired_dominance_and_budget_trend():
    spec = SweepSpec("p_max_db", (0.0, 10.0, 20.0), q_bars=(0.1,), trials=30, seed=4)
    res = run_trials(spec)
    for x in spec.x_values:
        for j, f in zip(res[(x, 0.1, "joint")], res[(x, 0.1, "fixed_rho")]):
            if not (j.infeasible or f.infeasible):
                assert j.r_sum >= f.r_sum - 1e-6
    rows = {(r.x_value, r.scheme): r.mean_sum_rate for r in run_sweep(spec)}
    joint = [rows[(x, "joint")] for x in spec.x_values]
    assert joint == sorted(joint)
    assert all(rows[(x, "joint")] >= rows[(x, "fixed_rho")] for x in spec.x_values)


def test_infeasible_trials_are_counted_not_averaged():
    spec = SweepSpec("p_max_db", (-10.0,), q_bars=(5.0,), trials=3, schemes=("joint",))
    (row,) = run_sweep(spec)
    assert row.infeasible == 3 and math.isnan(row.mean_sum_rate)


def test_parallel_matches_serial():
    spec = SweepSpec("rsi_db", (0.0, 10.0), q_bars=(0.5,), trials=6, seed=9)
    assert run_sweep(spec, n_jobs=2) == run_sweep(spec, n_jobs=1)


def test_csv_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    write_csv([], out)
    assert out.read_text() == ",".join(CSV_HEADER) + "\n"


def test_csv_row_order_and_precision(tmp_path):
    spec = SweepSpec("p_max_db", (0.0, 5.0), q_bars=(0.1,), trials=2, seed=1)
    out = tmp_path / "rows.csv"
    write_csv(run_sweep(spec), out, {"seed": 1})
    lines = out.read_text().splitlines()
    assert lines[0] == "# seed=1"
    assert lines[1] == ",".join(CSV_HEADER)
    keys = [tuple(line.split(",")[1:4:2]) for line in lines[2:]]
    assert keys == [("0", "joint"), ("0", "fixed_rho"), ("5", "joint"), ("5", "fixed_rho")]
    mean = lines[2].split(",")[4]
    assert len(mean.replace(".", "").lstrip("0")) >= 9


def test_csv_rerun_is_byte_identical(tmp_path):
    spec = SweepSpec("p_max_db", (10.0,), trials=4, seed=21)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(run_sweep(spec), a)
    write_csv(run_sweep(spec), b)
    assert a.read_bytes() == b.read_bytes()


def test_csv_unwritable_path_names_it(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    with pytest.raises(OSError, match="missing"):
        write_csv([SweepRow("p_max_db", 0.0, 0.1, "joint", 1.0, 1, 0)], bad)


def test_stable_across_seed_blocks():
    means = []
    for seed in (100, 200):
        spec = SweepSpec("p_max_db", (10.0,), q_bars=(0.5,), trials=200, seed=seed,
                         schemes=("joint",))
        means.append(run_sweep(spec)[0].mean_sum_rate)
    assert abs(means[0] - means[1]) / max(means) < 0.05
