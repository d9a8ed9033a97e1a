import numpy as np
import pytest

from pauliscatter.config import (
    Grid, RunConfig, config_hash, dumps, load, loads, override_grid, set_value,
)
from pauliscatter.errors import ConfigError


def test_defaults_round_trip():
    text = dumps(RunConfig())
    assert dumps(loads(text)) == text
    assert loads(text) == RunConfig()


def test_partial_config_canonicalised():
    cfg = loads("[beam]\npower_mw = 5   # comment\n\n[grids]\npower_mw = 1:2:5:lin\n")
    assert cfg.beam.power_mw == 5.0
    assert cfg.grids.power_mw == Grid(1.0, 2.0, 5, False)
    text = dumps(cfg)
    assert dumps(loads(text)) == text
    assert config_hash(cfg) == config_hash(loads(text))
    assert config_hash(cfg) != config_hash(RunConfig())


def test_booleans_and_optionals():
    cfg = loads("[heating]\nblocking = off\ninclude_overlap = yes\n[sq]\nphase_space_density = 0.1\n")
    assert cfg.heating.blocking is False and cfg.heating.include_overlap is True
    assert cfg.sq.phase_space_density == 0.1
    assert dumps(loads(dumps(cfg))) == dumps(cfg)


@pytest.mark.parametrize("text,line", [
    ("[trap]\nf_r_hz = -1\n", 2),
    ("[nosuch]\n", 1),
    ("[trap]\n\nbogus = 3\n", 3),
    ("f_r_hz = 3\n", 1),
    ("[beam]\npower_mw\n", 2),
    ("[beam]\npower_mw = lots\n", 2),
    ("[beam\n", 1),
    ("[heating]\nangle_average = cardioid\n", 2),
    ("[heating]\nblocking = maybe\n", 2),
    ("[grids]\n\n\npower_mw = 1:2\n", 4),
    ("[scattering]\nangle_deg = 270\n", 2),
    ("[heating]\nlow_fraction = 1.5\n", 2),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigError) as exc:
        loads(text)
    assert exc.value.line == line
    assert str(exc.value).startswith(f"line {line}: ")


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load(tmp_path / "absent.cfg")


def test_load_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("[sample]\nt_over_tf = 0.3\n")
    assert load(path).sample.t_over_tf == 0.3


def test_grid_parse_and_values():
    g = Grid.parse("0.15:3:40:log")
    assert g.log and g.count == 40
    vals = g.values()
    assert vals[0] == pytest.approx(0.15) and vals[-1] == pytest.approx(3.0)
    assert np.allclose(np.diff(np.log(vals)), np.log(20) / 39)
    assert str(g) == "0.15:3:40:log"
    assert Grid.parse(str(g)) == g
    assert Grid.parse("1:2:1").values().tolist() == [1.0]
    lin = Grid.parse("0:3:61")
    assert lin.values()[1] == pytest.approx(0.05)


@pytest.mark.parametrize("text", ["1:2", "1:2:3:cubic", "a:2:3", "2:1:5", "0:1:5:log", "1:2:0"])
def test_grid_errors(text):
    with pytest.raises(ConfigError):
        Grid.parse(text)


def test_override_grid():
    cfg = override_grid(RunConfig(), "power_mw=1:4:4")
    assert cfg.grids.power_mw.values().tolist() == [1.0, 2.0, 3.0, 4.0]
    with pytest.raises(ConfigError):
        override_grid(cfg, "nonsense=1:2:3")
    with pytest.raises(ConfigError):
        override_grid(cfg, "power_mw")


def test_set_value():
    cfg = set_value(RunConfig(), "beam", "power_mw", 7.0)
    assert cfg.beam.power_mw == 7.0
    assert RunConfig().beam.power_mw == 2.35
