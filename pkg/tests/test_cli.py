"""
Tests de la línea de órdenes
"""

import json

import pytest

from main import main
from src.commands.run_command import parse_sweep
from src.commands.synth_command import read_targets
from src.core.errors import ConfigError
from src.core.settings import OperatorSpec, ScenarioConfig
from src.systems.traces import parse_trace


@pytest.fixture
def config_file(tmp_path):
    cfg = ScenarioConfig(
        name='cli',
        operators=[
            OperatorSpec(1, target_mean=0.3, profile_seed=5),
            OperatorSpec(2, target_mean=0.15, profile_seed=6),
        ],
        energy_prices=[0.12, 0.12],
        horizon_hours=24.0,
        step_hours=6.0,
    )
    return cfg.save(tmp_path / 'escenario.json')


class TestRun:

    def test_run_writes_outputs(self, tmp_path, config_file, capsys):
        out = tmp_path / 'out'
        assert main(['run', '--config', str(config_file), '--out', str(out)]) == 0
        assert (out / 'metrics.csv').read_text(encoding='utf-8').startswith('no,rp,on,xl')
        assert len((out / 'steps.jsonl').read_text(encoding='utf-8').splitlines()) == 4
        assert 'RP' in capsys.readouterr().out

    def test_overrides(self, tmp_path, config_file):
        out = tmp_path / 'out'
        code = main(['run', '--config', str(config_file), '--out', str(out),
                     '--seed', '9', '--dt', '12', '--stable-set', 'single'])
        assert code == 0
        saved = json.loads((out / 'config.json').read_text(encoding='utf-8'))
        assert saved['seeds'] == [9]
        assert saved['step_hours'] == 12.0
        assert saved['stable_set_strategy'] == 'single'
        assert len((out / 'steps.jsonl').read_text(encoding='utf-8').splitlines()) == 2

    def test_preset(self, tmp_path):
        out = tmp_path / 'preset'
        code = main(['run', '--preset', 'scenario-2-homogeneous', '--out', str(out),
                     '--horizon', '12', '--dt', '6', '--stable-set', 'single'])
        assert code == 0
        assert len((out / 'metrics.csv').read_text(encoding='utf-8').splitlines()) == 6

    def test_sweep(self, tmp_path, config_file):
        out = tmp_path / 'sweep'
        assert main(['run', '--config', str(config_file), '--out', str(out), '--sweep', '6,12']) == 0
        lines = (out / 'plotdata' / 'rp_vs_dt.csv').read_text(encoding='utf-8').splitlines()
        assert len(lines) == 1 + 2 * 2

    def test_invalid_config_exit_code(self, tmp_path):
        bad = tmp_path / 'malo.json'
        bad.write_text(json.dumps({
            'operators': [{'id': 1, 'target_mean': 0.3}],
            'energy_prices': [0.12, 0.24],
        }), encoding='utf-8')
        assert main(['run', '--config', str(bad), '--out', str(tmp_path / 'x')]) == 2

    def test_missing_config_exit_code(self, tmp_path):
        assert main(['run', '--config', str(tmp_path / 'no.json'), '--out', str(tmp_path)]) == 2

    def test_unknown_preset(self, tmp_path):
        assert main(['run', '--preset', 'scenario-9-homogeneous', '--out', str(tmp_path)]) == 2

    def test_source_required(self, tmp_path):
        with pytest.raises(SystemExit):
            main(['run', '--out', str(tmp_path)])

    def test_parse_sweep(self):
        assert parse_sweep('1, 2,4') == [1.0, 2.0, 4.0]
        with pytest.raises(ConfigError):
            parse_sweep('1,x')
        with pytest.raises(ConfigError):
            parse_sweep('0,2')


class TestCheckStability:

    def test_recorded_run_is_stable(self, tmp_path, config_file, capsys):
        out = tmp_path / 'out'
        main(['run', '--config', str(config_file), '--out', str(out)])
        capsys.readouterr()
        assert main(['check-stability', '--records', str(out)]) == 0
        assert 'pasos comprobados: 4' in capsys.readouterr().out

    def test_tampered_partition_fails(self, tmp_path, config_file):
        out = tmp_path / 'out'
        main(['run', '--config', str(config_file), '--out', str(out)])
        steps = out / 'steps.jsonl'
        records = [json.loads(line) for line in steps.read_text(encoding='utf-8').splitlines()]
        # Sin historial, una partición con un miembro que gana yéndose solo no es estable
        for record in records:
            record['partition'] = [[1, 2]]
            record['history'] = {}
            record['users'] = {'1': 9, '2': 9}
        steps.write_text('\n'.join(json.dumps(r) for r in records) + '\n', encoding='utf-8')
        assert main(['check-stability', '--records', str(out)]) == 1

    def test_missing_records(self, tmp_path):
        assert main(['check-stability', '--records', str(tmp_path)]) == 2


class TestSynthTraces:

    def test_writes_traces_and_stats(self, tmp_path):
        targets = tmp_path / 'objetivos.csv'
        targets.write_text("name,target_mean,seed\nno1,0.316,4\nno3,0.143,\n", encoding='utf-8')
        out = tmp_path / 'traces'
        assert main(['synth-traces', '--targets', str(targets), '--out', str(out)]) == 0
        text = (out / 'no1.csv').read_text(encoding='utf-8')
        lines = [line for line in text.splitlines() if not line.startswith('#')]
        assert lines[0] == 'time_hours,load'
        assert len(parse_trace(text).times) == len(lines) - 1
        assert (out / 'no3.csv').exists()
        stats_lines = (out / 'stats.csv').read_text(encoding='utf-8').splitlines()
        assert stats_lines[0] == 'name,gamma,mean'
        mean = float(stats_lines[1].split(',')[2])
        assert mean == pytest.approx(0.316, rel=0.02)

    def test_read_targets_default_seed(self, tmp_path):
        targets = tmp_path / 'objetivos.csv'
        targets.write_text("name,target_mean\na,0.2\nb,0.3\n", encoding='utf-8')
        assert read_targets(targets) == [('a', 0.2, 1), ('b', 0.3, 2)]

    def test_bad_header(self, tmp_path):
        targets = tmp_path / 'objetivos.csv'
        targets.write_text("nombre,media\na,0.2\n", encoding='utf-8')
        assert main(['synth-traces', '--targets', str(targets), '--out', str(tmp_path)]) == 2
