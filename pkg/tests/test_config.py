import json

import numpy as np
import pytest

from gicwsr.config import (
    bundled_names,
    channel_to_dict,
    dumps,
    load_bundled,
    load_config,
    parse_config,
)
from gicwsr.errors import ConfigError
from gicwsr.instances import random_miso, random_simo, random_siso


def test_bundled_configs_load():
    names = bundled_names()
    assert {"siso_weak4", "siso_strong4", "siso_eps3", "siso_single"} <= set(names)
    for n in names:
        load_bundled(n)


def test_strong_is_scaled_weak():
    weak = load_bundled("siso_weak4").channel.gain
    strong = load_bundled("siso_strong4").channel.gain
    off = ~np.eye(4, dtype=bool)
    assert strong[off] == pytest.approx(10 * weak[off])
    assert np.diag(strong) == pytest.approx(np.diag(weak))


@pytest.mark.parametrize("ch", [random_siso(3, 1), random_simo(2, 3, 1), random_miso(3, 2, 1)])
def test_roundtrip(ch, tmp_path):
    d = channel_to_dict(ch, rmin=[0.1] * ch.K, name="x")
    f = tmp_path / "c.json"
    f.write_text(dumps(d))
    inst = load_config(f)
    back = inst.channel
    assert back.topology == ch.topology
    assert inst.rmin == pytest.approx([0.1] * ch.K)
    if ch.topology == "siso":
        assert np.array_equal(back.gain, ch.gain)
    else:
        for k in range(ch.K):
            for j in range(ch.K):
                assert np.array_equal(back.h[k][j], ch.h[k][j])


def test_syntax_error_position(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text('{\n  "topology": "siso",\n  "gain": [[1.0]]\n  "noise": 1\n}\n')
    with pytest.raises(ConfigError, match=r"bad\.json:4:3:"):
        load_config(f)


def test_nan_rejected(tmp_path):
    f = tmp_path / "nan.json"
    f.write_text('{"topology": "siso", "gain": [[NaN]]}')
    with pytest.raises(ConfigError):
        load_config(f)


@pytest.mark.parametrize("doc,msg", [
    ([], "JSON object"),
    ({"topology": "mimo"}, "topology"),
    ({"topology": "siso", "gain": [[1.0]], "extra": 1}, "unknown keys"),
    ({"topology": "siso", "gain": [[1.0, 2.0]]}, r"gain\[0\]"),
    ({"topology": "siso", "gain": [["a"]]}, r"gain\[0\]\[0\]"),
    ({"topology": "simo", "h": [[[[1.0]]]]}, r"h\[0\]\[0\]\[0\]"),
    ({"topology": "siso", "gain": [[1.0]], "schema_version": 2}, "schema_version"),
    ({"topology": "siso", "gain": [[1.0]], "pmax": -1}, "power budgets"),
    ({"topology": "siso", "gain": [[1.0]], "rmin": 5.0}, "rmin"),
])
def test_schema_errors(doc, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(doc)


def test_dumps_deterministic_and_strict():
    obj = {"b": np.float64(1.5), "a": [1 + 2j, np.inf], "c": np.arange(3)}
    text = dumps(obj)
    assert text == dumps(obj)
    assert json.loads(text) == {"b": 1.5, "a": [[1.0, 2.0], "inf"], "c": [0, 1, 2]}
