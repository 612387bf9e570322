import pytest

from gaborshear.coneshear import ConeSystem
from gaborshear.config import CONFIG_VERSION, ConfigError, RunConfig, config_from_dict, load_config
from gaborshear.gaborwin import max_epsilon
from gaborshear.groupshear import GroupSystem


def test_defaults():
    cfg = load_config(None)
    assert cfg == RunConfig()
    eff = cfg.effective()
    assert eff["version"] == CONFIG_VERSION
    assert eff["epsilon"] == pytest.approx(max_epsilon(4, 3))
    assert eff["jmax"] == 3


def test_effective_epsilon():
    assert RunConfig(system="group").effective_epsilon == 0.25
    assert RunConfig(N0=16, tau=15).effective_epsilon == pytest.approx(max_epsilon(16, 15))
    assert RunConfig(epsilon=0.1).effective_epsilon == 0.1


def test_build_system():
    assert isinstance(RunConfig(N=32).build_system(), ConeSystem)
    assert isinstance(RunConfig(N=32, system="group").build_system(), GroupSystem)


@pytest.mark.parametrize(
    "data,match",
    [
        ({"N": 100}, "N: must be a power of two"),
        ({"system": "wave"}, "system"),
        ({"tau": 4}, "tau: must be smaller"),
        ({"epsilon": 0.4}, "epsilon"),
        ({"N": 64, "jmax": 5}, "largest feasible value is 2"),
        ({"N": True}, "N: must be an integer"),
        ({"colour": 1}, "unknown key"),
        ({"M": 8}, "M:"),
    ],
)
def test_invalid_configs(data, match):
    with pytest.raises(ConfigError, match=match):
        config_from_dict(data)


def test_overrides_win(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"N": 64, "system": "group", "version": "gaborshear-config/1"}')
    cfg = load_config(path, N=32, system=None)
    assert cfg.N == 32 and cfg.system == "group"


def test_json_errors_report_position(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{\n  "N": 64,\n  "tau": }\n')
    with pytest.raises(ConfigError, match="line 3, column 10"):
        load_config(path)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    path.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        load_config(path)
