# Copyright 2026 The ptdd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import ptdd


def test_not_gate_time():
    p = ptdd.PTParams(1e4, 1e3)
    assert ptdd.not_gate_time(p) / 2 * 1e6 == pytest.approx(73.9, abs=0.05)
    assert ptdd.ideal_period(p) * 1e6 == pytest.approx(315.8, abs=0.1)
    assert ptdd.phase(p) == "symmetry-preserving"
    with pytest.raises(ptdd.DomainError):
        ptdd.not_gate_time(ptdd.PTParams(1e3, 2e3))


def test_hamiltonians():
    p = ptdd.PTParams(1e4, 1e3)
    np.testing.assert_allclose(ptdd.h_pt(p), [[1e3j, 1e4], [1e4, -1e3j]])
    np.testing.assert_allclose(ptdd.h_pt_passive(p), [[0, 1e4], [1e4, -2e3j]])
    h = ptdd.h_total(p, detuning=10.0)
    assert h[0, 0] == 10.0


def test_expm_matches_series():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        np.testing.assert_allclose(ptdd.expm(a, 0.8), ptdd.expm_series(a, 0.8), atol=1e-10)
    with pytest.raises(ValueError):
        ptdd.expm(np.eye(3), 1.0)


def test_ideal_density_is_a_state():
    rho = ptdd.ideal_density(ptdd.PTParams(1e4, 1e3), 1e-4, "plus")
    assert np.trace(rho).real == pytest.approx(1.0)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)


def test_presets_and_config():
    names = list(ptdd.presets())
    assert names[0] == "fig1a" and names[-1] == "fig4bcd" and len(names) == 11
    text = ptdd.format_config(preset="fig2a", overrides={"trials": "10"})
    assert "trials = 10" in text
    with pytest.raises(ptdd.ConfigError, match="gamma_khz"):
        ptdd.format_config(config="gamma_khz = 1\n")


def test_simulate_fig1a():
    table = ptdd.simulate(preset="fig1a")
    cols = table["columns"]
    row = table["rows"][0]
    fu = float(row[cols.index("F_unprotected")])
    fs = float(row[cols.index("F_s1")])
    assert fs > fu
    quiet = ptdd.simulate(preset="fig1a", overrides={"beta": "0"})
    assert float(quiet["rows"][0][cols.index("F_s1")]) == pytest.approx(1.0, abs=1e-9)


def test_sweep_is_deterministic():
    overrides = {"trials": "30", "sweep.sigma": "0:2400:3"}
    a = ptdd.sweep(preset="fig2a", overrides=overrides)
    b = ptdd.sweep(preset="fig2a", overrides={**overrides, "workers": "3"})
    assert a["rows"] == b["rows"]
    assert len(a["rows"]) == 3
    assert "# seed = 0" in a["csv"]


def test_magnus_and_selftest():
    report = ptdd.magnus(preset="fig4a")
    assert report["passed"]
    assert ptdd.selftest()["passed"]


def test_main_exit_codes():
    assert ptdd.main(["presets"]) == 0
    assert ptdd.main(["simulate", "--preset", "nope"]) == 2
