import csv
import json

import numpy as np
import pytest

from gicwsr.channel import rates_of_witness
from gicwsr.cli import main
from gicwsr.config import channel_to_dict, dumps, load_config
from gicwsr.instances import random_miso, random_simo

from conftest import orthogonal_simo


def _write(tmp_path, ch, name="c.json"):
    f = tmp_path / name
    f.write_text(dumps(channel_to_dict(ch)))
    return str(f)


def _single(tmp_path):
    f = tmp_path / "single.json"
    f.write_text(json.dumps({"topology": "siso", "gain": [[1.0]], "noise": 1.0, "pmax": 3.0}))
    return str(f)


def test_solve_single_user(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", _single(tmp_path), "--out-dir", str(out)]) == 0
    res = json.loads((out / "result.json").read_text())
    assert res["wsr"] == pytest.approx(2.0, abs=1e-3)
    assert (out / "report.md").read_text().startswith("#")
    rows = list(csv.reader((out / "trace.csv").open()))
    assert rows[0] == ["iteration", "upper_bound", "lower_bound", "num_vertices"]


def test_oracle_single_user(tmp_path):
    out = tmp_path / "o"
    assert main(["oracle", _single(tmp_path), "--out-dir", str(out)]) == 0
    assert json.loads((out / "result.json").read_text())["wsr"] == pytest.approx(2.0)


def test_malformed_json_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"topology": "siso",\n "gain": [[1.0]],,}')
    assert main(["solve", str(f), "--out-dir", str(tmp_path / "o")]) == 2
    assert "bad.json:2:" in capsys.readouterr().err


def test_bad_flag_exit_2(tmp_path):
    assert main(["solve", "--topology", "siso", "--users", "2", "--epsilon", "-1",
                 "--out-dir", str(tmp_path)]) == 2
    assert main(["solve", "--nonsense"]) == 2
    assert main(["solve", "--topology", "simo", "--out-dir", str(tmp_path)]) == 2


def test_topology_mismatch_exit_2(tmp_path):
    assert main(["solve", _single(tmp_path), "--topology", "miso",
                 "--out-dir", str(tmp_path / "o")]) == 2


def test_infeasible_rmin_exit_2(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"topology": "siso", "gain": [[1.0, 1.0], [1.0, 1.0]],
                             "noise": 1.0, "pmax": 3.0}))
    assert main(["solve", str(f), "--rmin", "1.5", "--out-dir", str(tmp_path / "o")]) == 2


def test_iteration_cap_exit_1(tmp_path):
    assert main(["solve", "--topology", "siso", "--users", "3", "--seed", "2",
                 "--epsilon", "0.001", "--eta", "0.0001", "--max-iters", "3",
                 "--supports", "full", "--out-dir", str(tmp_path / "o")]) == 1


@pytest.mark.parametrize("topology", ["siso", "simo", "miso"])
def test_solve_deterministic_and_revalidates(topology, tmp_path):
    args = ["solve", "--topology", topology, "--users", "3", "--seed", "4", "--eta", "0.3",
            "--epsilon", "0.05"]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out-dir", str(a)]) == 0
    assert main(args + ["--out-dir", str(b)]) == 0
    for name in ("result.json", "trace.csv", "report.md"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    res = json.loads((a / "result.json").read_text())
    inst = load_config(_write(tmp_path, _instance(res)))
    rates = rates_of_witness(inst.channel, _witness(res["witness"]))
    assert rates == pytest.approx(res["rates"], abs=1e-6)
    assert float(np.dot(inst.channel.weights, rates)) == pytest.approx(res["wsr"], abs=1e-6)


def _instance(res):
    from gicwsr.config import parse_config
    return parse_config(res["instance"]["channel"]).channel


def _witness(w):
    out = {}
    for key, val in w.items():
        if key == "p":
            out[key] = np.array(val)
        else:
            out[key] = [np.array([complex(*c) for c in v]) for v in val]
    return out


def test_baseline_orthogonal(tmp_path):
    out = tmp_path / "o"
    assert main(["baseline", _write(tmp_path, orthogonal_simo()), "--out-dir", str(out)]) == 0
    res = json.loads((out / "result.json").read_text())
    assert res["wsr"] == pytest.approx(4.0)
    assert (out / "trajectory.csv").read_text().startswith("sweep,wsr,max_power_change")


def test_baseline_below_solve_miso(tmp_path):
    cfg = _write(tmp_path, random_miso(3, 2, 6, noise=0.1))
    assert main(["baseline", cfg, "--out-dir", str(tmp_path / "b")]) in (0, 1)
    assert main(["solve", cfg, "--epsilon", "0.05", "--eta", "0.3",
                 "--out-dir", str(tmp_path / "s")]) == 0
    base = json.loads((tmp_path / "b" / "result.json").read_text())["wsr"]
    glob = json.loads((tmp_path / "s" / "result.json").read_text())
    assert base <= glob["wsr"] + 0.3


def test_dump_cone_program(tmp_path):
    cfg = _write(tmp_path, random_miso(2, 2, 1))
    out = tmp_path / "o"
    assert main(["solve", cfg, "--epsilon", "0.05", "--eta", "0.5", "--dump-cone-program",
                 "--out-dir", str(out)]) == 0
    dumped = list(out.glob("cone_program*.json"))
    assert dumped
    assert "sinr_cones" in json.loads(dumped[0].read_text())


def test_repro_unknown_experiment():
    assert main(["repro", "fig9"]) == 2


def test_repro_table5_small(tmp_path):
    out = tmp_path / "t5"
    assert main(["repro", "table5", "--out-dir", str(out)]) == 0
    rows = list(csv.DictReader((out / "table5.csv").open()))
    assert len(rows) == 9
    wsr = [float(r["wsr"]) for r in rows]
    assert all(b <= a + 1e-12 for a, b in zip(wsr, wsr[1:]))


def test_simo_oracle_random_search(tmp_path):
    cfg = _write(tmp_path, random_simo(2, 2, 1))
    out = tmp_path / "o"
    assert main(["oracle", cfg, "--samples", "2000", "--out-dir", str(out)]) == 0
    assert json.loads((out / "result.json").read_text())["wsr"] > 0
