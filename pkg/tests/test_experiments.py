import csv
import json

import numpy as np
import pytest

from ini_lab import experiments as ex
from ini_lab.numerology import MultiplexPair


def rows_of(result, **match):
    keys = ex.CSV_HEADER
    out = []
    for r in result.rows:
        d = dict(zip(keys, r))
        if all(d[k] == v for k, v in match.items()):
            out.append(d)
    return out


def ini(rows):
    return np.array([float(r["ini_db"]) for r in rows])


@pytest.fixture(scope="module")
def fig3():
    return ex.scenario_per_subcarrier_ini(engine="analytic")


def test_fig3_zero_ini_lattice(fig3):
    rows = rows_of(fig3, cp_mode="common", victim="NSN", source="analytic")
    zeros = [int(r["subcarrier"]) for r in rows if r["ini_db"] == "-inf"]
    assert zeros == list(range(0, 64, ex.FIG3_DEFAULT_Q))
    assert all(r["sir_db"] == "inf" for r in rows if r["ini_db"] == "-inf")


def test_fig3_wsn_identical_across_modes(fig3):
    a = rows_of(fig3, cp_mode="individual", victim="WSN")
    b = rows_of(fig3, cp_mode="common", victim="WSN")
    assert [r["ini_db"] for r in a] == [r["ini_db"] for r in b]
    assert [r["subcarrier"] for r in a] == [str(i) for i in range(16, 32)]


def test_common_cp_costs_more_on_non_lattice_subcarriers():
    # Elementwise at Q=2; for larger Q only on average over the non-lattice subcarriers.
    for q in (2, 4, 8):
        res = ex.scenario_per_subcarrier_ini(MultiplexPair(q=q), engine="analytic")
        ind = 10 ** (ini(rows_of(res, cp_mode="individual", victim="NSN")) / 10)
        com = 10 ** (ini(rows_of(res, cp_mode="common", victim="NSN")) / 10)
        off = np.arange(64) % q != 0
        if q == 2:
            assert np.all(com[off] >= ind[off])
        assert com[off].mean() > ind[off].mean()


def test_q_sweep_summary():
    res = ex.scenario_q_sweep(engine="analytic")
    s = res.summary
    series = {(m, n): [s[f"q={q}"][m]["analytic"][f"avg_ini_{n}"] for q in ex.Q_SWEEP]
              for m in ("individual", "common") for n in ("nsn", "wsn")}
    for vals in series.values():
        assert vals[0] < vals[1] < vals[2]
    for i, q in enumerate(ex.Q_SWEEP):
        trio = 10 * np.log10([series["common", "nsn"][i], series["common", "wsn"][i], series["individual", "wsn"][i]])
        assert np.ptp(trio) < 0.1
        nsn_ind = 10 * np.log10(series["individual", "nsn"][i])
        assert nsn_ind < trio.min() if q == 2 else nsn_ind > trio.max()


def test_power_offset_scenario():
    res = ex.scenario_power_offset(engine="analytic")
    s = res.summary
    base = s["offset_db=0"]["analytic"]
    assert base["avg_sir_nsn_db"] > base["avg_sir_wsn_db"]
    for off in range(1, 13):
        up, down = s[f"offset_db={off}"]["analytic"], s[f"offset_db={-off}"]["analytic"]
        assert up["avg_sir_nsn_db"] - base["avg_sir_nsn_db"] == pytest.approx(off, abs=1e-9)
        assert up["avg_sir_wsn_db"] - base["avg_sir_wsn_db"] == pytest.approx(-off, abs=1e-9)
        assert down["avg_sir_wsn_db"] - base["avg_sir_wsn_db"] == pytest.approx(off, abs=1e-9)
        assert down["avg_sir_nsn_db"] - base["avg_sir_nsn_db"] == pytest.approx(-off, abs=1e-9)
        assert up["avg_sir_system_db"] > down["avg_sir_system_db"]


def test_offset_powers_symmetric():
    a, b = ex.offset_powers(6.0)
    assert a * b == pytest.approx(1.0)
    assert 10 * np.log10(a / b) == pytest.approx(6.0)


def test_cross_validation_scenario():
    res = ex.scenario_cross_validation()
    cells = res.summary["cells"]
    default = [c for c in cells if c["cell"] != "probe"]
    assert len(default) == 4 * 2 * 2
    assert all(c["max_rel_err"] <= 1e-9 for c in cells)
    q1 = rows_of(res, sweep_value="q=1")
    assert q1 and all(r["ini_db"] == "-inf" for r in q1)
    probe = [c for c in cells if c["cell"] == "probe" and "literal_deviates" in c]
    assert probe[0]["literal_deviates"] is True


def test_both_engine_rows_pair_up():
    res = ex.scenario_per_subcarrier_ini(MultiplexPair(q=2), engine="both", trials=3000, seed=3)
    key = lambda r: (r["cp_mode"], r["victim"], r["subcarrier"])
    ana = {key(r): r for r in rows_of(res, source="analytic")}
    mc = {key(r): r for r in rows_of(res, source="mc")}
    assert ana.keys() == mc.keys()
    for mode in ("individual", "common"):
        assert res.summary[mode]["max_rel_err"] < 0.2


def test_write_result_byte_stable(tmp_path):
    res = [ex.scenario_q_sweep(engine="both", trials=500, seed=4, workers=w) for w in (1, 4)]
    paths = [ex.write_result(r, tmp_path / str(i)) for i, r in enumerate(res)]
    for a, b in zip(*paths):
        assert a.read_bytes() == b.read_bytes()
    with open(paths[0][0], newline="") as f:
        header = next(csv.reader(f))
    assert header == ex.CSV_HEADER
    summary = json.loads(paths[0][1].read_text())
    assert summary["scenario"] == "q_sweep" and summary["seed"] == 4
