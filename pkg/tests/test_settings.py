"""
Tests de configuración, presets y gestor de perfiles
"""

import json

import pytest

from src.core.errors import ConfigError, TraceError
from src.core.settings import (
    OperatorSpec, ScenarioConfig, get_preset, preset_names, price_assignments,
    price_preset, scenario_preset
)
from src.managers.profile_manager import get_profile_manager


def minimal_config(**overrides) -> ScenarioConfig:
    data = dict(operators=[OperatorSpec(1, target_mean=0.2)], energy_prices=[0.12])
    data.update(overrides)
    return ScenarioConfig(**data)


class TestScenarioConfig:

    def test_save_and_load(self, tmp_path):
        cfg = scenario_preset(3, 'heterogeneous', step_hours=2.0)
        loaded = ScenarioConfig.load(cfg.save(tmp_path / 'cfg.json'))
        assert loaded == cfg
        assert loaded.energy_prices == [0.12, 0.24, 0.24, 0.12, 0.12]

    @pytest.mark.parametrize('overrides', [
        {'operators': []},
        {'energy_prices': [0.12, 0.24]},
        {'energy_prices': [0.0]},
        {'operators': [OperatorSpec(1)]},
        {'operators': [OperatorSpec(1, trace='a.csv', target_mean=0.2)]},
        {'operators': [OperatorSpec(1, target_mean=1.5)]},
        {'step_hours': 0.0},
        {'seeds': []},
        {'stable_set_strategy': 'random'},
        {'rp_metric': 'mean'},
        {'workers': 0},
        {'tolerance': 1.0},
        {'user_mix': 'mixed'},
        {'user_mix': [{'name': 'A', 'min_rate': 1.0, 'revenue_rate': 0.1, 'mix_probability': 0.5}]},
    ])
    def test_invalid(self, overrides):
        with pytest.raises(ConfigError):
            minimal_config(**overrides).validate()

    def test_duplicate_ids(self):
        ops = [OperatorSpec(1, target_mean=0.2), OperatorSpec(1, target_mean=0.3)]
        with pytest.raises(ConfigError):
            minimal_config(operators=ops, energy_prices=[0.12, 0.12]).validate()

    def test_custom_mix(self):
        mix = [
            {'name': 'A', 'min_rate': 1.0, 'revenue_rate': 0.1, 'mix_probability': 0.25},
            {'name': 'B', 'min_rate': 2.0, 'revenue_rate': 0.3, 'mix_probability': 0.75},
        ]
        classes = minimal_config(user_mix=mix).validate().mix_classes()
        assert [c.name for c in classes] == ['A', 'B']

    def test_unknown_field(self, tmp_path):
        path = tmp_path / 'cfg.json'
        data = minimal_config().to_dict()
        data['color'] = 'verde'
        path.write_text(json.dumps(data), encoding='utf-8')
        with pytest.raises(ConfigError):
            ScenarioConfig.load(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / 'cfg.json'
        path.write_text('{no es json', encoding='utf-8')
        with pytest.raises(ConfigError):
            ScenarioConfig.load(path)

    def test_relative_trace_resolved_against_config(self, tmp_path):
        cfg = minimal_config(operators=[OperatorSpec(1, trace='traces/no1.csv')])
        loaded = ScenarioConfig.load(cfg.save(tmp_path / 'cfg.json'))
        assert loaded.trace_path(loaded.operators[0]) == tmp_path / 'traces' / 'no1.csv'

    def test_overrides_ignore_none(self):
        cfg = minimal_config().validate().with_overrides(step_hours=2.0, horizon_hours=None)
        assert cfg.step_hours == 2.0
        assert cfg.horizon_hours == 168.0


class TestPresets:

    def test_price_assignments(self):
        assignments = price_assignments()
        assert len(assignments) == 32
        assert assignments[0] == (0.12,) * 5
        assert assignments[1] == (0.24, 0.12, 0.12, 0.12, 0.12)

    def test_price_preset_range(self):
        assert price_preset(31).energy_prices == [0.24] * 5
        with pytest.raises(ConfigError):
            price_preset(32)

    def test_every_name_resolves(self):
        names = preset_names()
        assert len(names) == 8 + 64
        for name in names[:8] + names[-2:]:
            assert get_preset(name).name == name

    @pytest.mark.parametrize('name', ['scenario-5-homogeneous', 'prices-1', 'otro'])
    def test_unknown_preset(self, name):
        with pytest.raises(ConfigError):
            get_preset(name)


class TestProfileManager:

    def test_singleton(self):
        assert get_profile_manager() is get_profile_manager()

    def test_synthetic_profiles_are_cached(self):
        manager = get_profile_manager()
        manager.clear_cache()
        a = manager.synthetic(0.2, seed=8)
        assert manager.synthetic(0.2, seed=8) is a
        manager.get_stats(a)
        assert manager.get_cache_info() == {'traces': 0, 'synthetic': 1, 'stats': 1}

    def test_missing_trace(self, tmp_path):
        with pytest.raises(TraceError):
            get_profile_manager().load_trace(tmp_path / 'nada.csv')

    def test_error_names_the_file(self, tmp_path):
        path = tmp_path / 'rota.csv'
        path.write_text("time_hours,load\n0,0.1\n1,2.0\n2,0.1\n3,0.1\n", encoding='utf-8')
        with pytest.raises(TraceError) as err:
            get_profile_manager().load_trace(path, period=24.0)
        assert 'rota.csv' in str(err.value)
