from pathlib import Path

import pytest

from cfmimo_ofdm.config import ConfigError, SimConfig, from_mapping, load_config, validate


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    cfg = load_config(path)
    assert (cfg.M, cfg.K, cfg.N, cfg.N_RB, cfg.lambda_RB) == (128, 6, 1200, 100, 12)
    assert cfg.delta_f == 15e3 and cfg.N_T == 10 and cfg.tau_u == 0
    assert cfg.p_d == 0.2 and cfg.p_u == 0.1
    assert cfg.shadowing_sigma_dB == 8.0
    assert cfg.pathloss.L_dB == 140.72 and cfg.pathloss.d0 == 10 and cfg.pathloss.d1 == 50
    assert cfg.power_normalization == "per_subcarrier"


def test_subcarrier_identity_enforced(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("N: 1200\nN_RB: 100\nlambda_RB: 13\n")
    with pytest.raises(ConfigError, match="N != N_RB"):
        load_config(path)


def test_pilot_capacity_enforced():
    with pytest.raises(ConfigError, match="pilot capacity exceeded"):
        from_mapping({"K": 13, "tau_p": 1, "lambda_RB": 12,
                      "allocation": "custom", "group_sizes": [13], "rb_assignment": {0: [1]}})


def test_minimum_tau_p_absorbs_large_groups():
    cfg = from_mapping({"K": 13, "allocation": "custom", "group_sizes": [13], "rb_assignment": {0: [1]}})
    assert cfg.pilot_symbols() == 2


def test_parse_failure(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("M: [1, 2\n")
    with pytest.raises(ConfigError, match="parse failure"):
        load_config(path)


@pytest.mark.parametrize("changes, field", [
    ({"M": 130, "N_t": 4}, "M"),
    ({"p_d": 0.0}, "p_d"),
    ({"tau_p": 9, "tau_u": 1}, "tau_p"),
    ({"allocation": "custom", "K": 6, "group_sizes": [3, 2], "rb_assignment": {0: [1], 1: [2]}}, "group_sizes"),
    ({"allocation": "custom", "K": 6, "group_sizes": [3, 3], "rb_assignment": {0: [1, 2], 1: [2]}}, "rb_assignment"),
    ({"allocation": "mtc", "K": 3601}, "K"),
    ({"power_normalization": "per_rb"}, "power_normalization"),
])
def test_invariant_violations_name_the_field(changes, field):
    with pytest.raises(ConfigError) as err:
        validate(SimConfig(**changes))
    assert err.value.field_name == field


def test_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown"):
        from_mapping({"antennas": 4})


def test_total_split_divides_by_subcarriers():
    cfg = SimConfig(power_normalization="total_split")
    assert cfg.p_d_subcarrier == pytest.approx(0.2 / 1200)
    assert cfg.p_u_subcarrier == pytest.approx(0.1 / 1200)


def test_noise_per_subcarrier():
    # -174 dBm/Hz + 9 dB over 15 kHz
    expected = 10 ** ((-174 + 9) / 10) * 1e-3 * 15e3
    assert SimConfig().sigma_z2 == pytest.approx(expected, rel=1e-12)


def test_nested_pathloss_mapping():
    cfg = from_mapping({"pathloss": {"L_dB": 150.0}})
    assert cfg.pathloss.L_dB == 150.0 and cfg.pathloss.d1 == 50.0


def test_numeric_spellings_are_coerced(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("B_w: 20.0e6\nM: '64'\ndelta_f: 15000\n")
    cfg = load_config(path)
    assert cfg.B_w == 20e6 and cfg.M == 64 and isinstance(cfg.delta_f, float)


def test_non_numeric_value_names_field(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text("p_d: lots\n")
    with pytest.raises(ConfigError, match="p_d"):
        load_config(path)


CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.parametrize("name", ["default", "mbb", "mtc", "custom"])
def test_shipped_configs_load(name):
    load_config(CONFIGS / f"{name}.yaml")


def test_default_file_matches_dataclass():
    assert load_config(CONFIGS / "default.yaml") == SimConfig()
