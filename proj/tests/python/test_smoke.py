import math

import numpy as np
import pytest

import synlat


def test_flat_band_counts():
    for lattice, flat in [("square", 1), ("triangular", 2), ("honeycomb", 1)]:
        k, bands, count = synlat.bands(lattice, 16)
        assert k.shape == (256, 2)
        assert count == flat
        assert np.allclose(bands, -bands[:, ::-1], atol=1e-10)


def test_localized_state_is_a_zero_mode():
    h = synlat.ladder_hamiltonian(10)
    psi = synlat.psi_loc(10, 4)
    assert h.shape == (50, 50)
    assert math.isclose(np.linalg.norm(psi), 1.0)
    assert np.abs(h @ psi).max() < 1e-14


def test_clean_exponents_pair_up():
    g = synlat.clean_exponents(3.0)
    assert g[0] == pytest.approx(-g[3])
    assert g[1] == pytest.approx(-g[2])


def test_run_returns_tables():
    out = synlat.run("bands", lattice="ladder", kpoints=64)
    assert out["subcommand"] == "bands"
    assert "bands" in out["data"]
    assert out["status"] == "ok"


def test_invalid_config_raises():
    with pytest.raises(ValueError):
        synlat.run("bands", lattice="kagome")
    with pytest.raises(ValueError):
        synlat.run("bands", no_such_key=1)


def test_reproduce_fig2():
    out = synlat.reproduce("fig2")
    assert all(c["passed"] for c in out["checks"])
