"""Network definition file parsing, validation, and round-trips."""

import json

import numpy as np
import pytest

from phaselock import NetworkFileError, OscillatorNetwork, parse_network, write_network


def write_raw(tmp_path, payload, name="net.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_parse_dense(tmp_path):
    path = write_raw(tmp_path, {"n": 3, "omega": [1, 2, 3], "coupling": [9, 6, 0]})
    net = parse_network(path)
    assert net.n_oscillators == 3
    assert np.array_equal(net.natural_frequencies, [1.0, 2.0, 3.0])
    assert np.array_equal(net.coupling_gains, [9.0, 6.0, 0.0])


def test_parse_sparse_records(tmp_path):
    payload = {
        "n": 4,
        "omega": [0.5, 1.0, 1.5, 2.0],
        "coupling": [{"i": 1, "j": 2, "k": 3.0}, {"i": 2, "j": 4, "k": 1.5}],
    }
    net = parse_network(write_raw(tmp_path, payload))
    assert np.array_equal(net.coupling_gains, [3.0, 0.0, 0.0, 0.0, 1.5, 0.0])


def test_parse_rejects_wrong_coupling_length(tmp_path):
    path = write_raw(tmp_path, {"n": 3, "omega": [1, 2, 3], "coupling": [1, 2]})
    with pytest.raises(NetworkFileError, match="dense form needs 3"):
        parse_network(path)


def test_parse_rejects_negative_gain(tmp_path):
    path = write_raw(tmp_path, {"n": 3, "omega": [1, 2, 3], "coupling": [1, -2, 1]})
    with pytest.raises(NetworkFileError, match="nonnegative"):
        parse_network(path)


def test_parse_rejects_mixed_forms(tmp_path):
    payload = {"n": 3, "omega": [1, 2, 3], "coupling": [1.0, {"i": 1, "j": 2, "k": 2.0}]}
    with pytest.raises(NetworkFileError, match="mixes"):
        parse_network(write_raw(tmp_path, payload))


def test_parse_rejects_bad_records(tmp_path):
    base = {"n": 3, "omega": [1, 2, 3]}
    bad_order = dict(base, coupling=[{"i": 2, "j": 1, "k": 1.0}])
    with pytest.raises(NetworkFileError, match="1 <= i < j"):
        parse_network(write_raw(tmp_path, bad_order))
    duplicate = dict(base, coupling=[{"i": 1, "j": 2, "k": 1.0}, {"i": 1, "j": 2, "k": 2.0}])
    with pytest.raises(NetworkFileError, match="duplicate"):
        parse_network(write_raw(tmp_path, duplicate))
    missing_k = dict(base, coupling=[{"i": 1, "j": 2}])
    with pytest.raises(NetworkFileError, match="missing key 'k'"):
        parse_network(write_raw(tmp_path, missing_k))


def test_parse_rejects_field_problems(tmp_path):
    with pytest.raises(NetworkFileError, match="missing fields"):
        parse_network(write_raw(tmp_path, {"n": 2, "omega": [1, 2]}))
    with pytest.raises(NetworkFileError, match="unknown fields"):
        parse_network(
            write_raw(tmp_path, {"n": 2, "omega": [1, 2], "coupling": [1], "x": 0})
        )
    with pytest.raises(NetworkFileError, match="omega"):
        parse_network(write_raw(tmp_path, {"n": 3, "omega": [1, 2], "coupling": [1, 1, 1]}))
    with pytest.raises(NetworkFileError, match="'n'"):
        parse_network(write_raw(tmp_path, {"n": 1, "omega": [1], "coupling": []}))


def test_parse_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 2,\n "omega": [1, 2\n}')
    with pytest.raises(NetworkFileError, match="broken.json:"):
        parse_network(path)


def test_round_trip_exact(tmp_path):
    rng = np.random.default_rng(404)
    for idx in range(100):
        n = int(rng.integers(2, 7))
        e = n * (n - 1) // 2
        net = OscillatorNetwork(n, rng.normal(size=n), rng.uniform(0, 5, e))
        path = tmp_path / f"net_{idx}.json"
        write_network(net, path)
        assert parse_network(path) == net
