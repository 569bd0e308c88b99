"""
Tests for run specifications, the runner and the command-line entry point
"""

import json

import pytest

from ngbs_toolkit.cli import build_parser, main
from ngbs_toolkit.config import DEFAULT_CONFIG, ToolkitConfig, load_config
from ngbs_toolkit.errors import ConvergenceError, OutputError, ParameterError
from ngbs_toolkit.output import format_number, sidecar_path
from ngbs_toolkit.parser import SpecParser, StateSpec, SweepSpec
from ngbs_toolkit.runner import SWEEP_COLUMNS, ToolkitRunner
from ngbs_toolkit.witnesses.result import STATUS_INVALID, STATUS_OK

SAMPLE_SPEC = """\
# HOA curves at fixed q
[state]
family = ngbs
M = 10
q = -0.02

[sweep]
param = p
from = 0.25
to = 0.95
count = 15

[witnesses]
hoa:1
hoa = 2, 3
hosps

[output]
path = hoa.csv
"""


def test_parse_sample_spec():
    """Sections, witness forms and comments"""
    parser = SpecParser()
    spec = parser.sweep_spec(parser.parse_text(SAMPLE_SPEC))
    assert spec.state_family == 'ngbs'
    assert spec.fixed_params == {'M': 10.0, 'q': -0.02}
    assert spec.sweep_param == 'p'
    assert spec.count == 15
    assert spec.witnesses == [('hoa', 1), ('hoa', 2), ('hoa', 3), ('hosps', 2)]
    assert spec.output == 'hoa.csv'
    assert spec.format == 'csv'
    assert spec.values()[0] == 0.25 and spec.values()[-1] == 0.95

    print("✅ Sample spec test passed")


def test_sweep_spec_round_trip():
    """to_config_text parses back to an equal SweepSpec"""
    parser = SpecParser()
    original = SweepSpec(
        state_family='ngbs',
        fixed_params={'M': 25, 'q': 0.1},
        sweep_param='p',
        start=0.1,
        stop=0.9,
        count=9,
        witnesses=[('agarwal_tara', 3), ('vogel', 4)],
        output='out.json',
        format='json',
    )
    restored = parser.sweep_spec(parser.parse_text(original.to_config_text()))
    assert restored == original

    no_output = SweepSpec('coherent', {}, 'alpha', 0.5, 2.0, 4, [('hoa', 1)])
    assert parser.sweep_spec(parser.parse_text(no_output.to_config_text())) == no_output


def test_parse_errors_carry_line_numbers():
    parser = SpecParser()
    cases = [
        ("[sweep]\nparam = p\nstep = 0.1\n", "<spec>:3"),
        ("[state]\nM = 10\nM = 11\n", "<spec>:3"),
        ("M = 10\n", "<spec>:1"),
        ("[plot]\n", "<spec>:1"),
        ("[witnesses]\nhoa::2\n", "<spec>:2"),
        ("[state]\njust text\n", "<spec>:2"),
    ]
    for text, where in cases:
        with pytest.raises(ParameterError, match=where):
            parser.parse_text(text)

    parsed = parser.parse_text("[state]\nfamily = ngbs\nM = ten\np = 0.5\nq = 0\n", source='run.cfg')
    with pytest.raises(ParameterError, match="run.cfg:3"):
        parser.state_spec(parsed)

    print("✅ Parse error test passed")


def test_sweep_spec_invariants():
    with pytest.raises(ParameterError, match="count"):
        SweepSpec('ngbs', {'M': 10, 'q': 0.0}, 'p', 0.1, 0.9, 1)
    with pytest.raises(ParameterError, match="from < to"):
        SweepSpec('ngbs', {'M': 10, 'q': 0.0}, 'p', 0.9, 0.1, 5)
    with pytest.raises(ParameterError, match="fixed"):
        SweepSpec('ngbs', {'M': 10, 'p': 0.5, 'q': 0.0}, 'p', 0.1, 0.9, 5)
    with pytest.raises(ParameterError, match="no parameter"):
        SweepSpec('fock', {}, 'alpha', 0.1, 0.9, 5)
    with pytest.raises(ParameterError, match="unknown state family"):
        SweepSpec('cat', {}, 'alpha', 0.1, 0.9, 5)
    with pytest.raises(ParameterError, match="format"):
        SweepSpec('coherent', {}, 'alpha', 0.1, 0.9, 5, format='xlsx')


def test_grid_options_and_windows():
    parser = SpecParser()
    parsed = parser.parse_text("[state]\nfamily = fock\nn = 2\n\n[grid]\nkind = tomogram\n"
                               "window = -4, 4\nresolution = 51\ntheta_count = 8\n")
    options = parser.grid_options(parsed)
    assert options == {'kind': 'tomogram', 'window': (-4.0, 4.0), 'resolution': 51,
                       'theta_count': 8, 'tolerance': None}
    assert parser.state_spec(parsed) == StateSpec('fock', {'n': 2})

    assert SpecParser.parse_window('5') == 5.0
    assert SpecParser.parse_window('-1,1,-2,2') == (-1.0, 1.0, -2.0, 2.0)
    with pytest.raises(ParameterError):
        SpecParser.parse_window('1,2,3')
    with pytest.raises(ParameterError):
        SpecParser.parse_window('-3')
    with pytest.raises(ParameterError, match="unknown grid kind"):
        parser.grid_options(parser.parse_text("[grid]\nkind = husimi\n"))


def test_runner_fock_sweep():
    """D(1) = -n along a Fock-number sweep"""
    spec = SweepSpec('fock', {}, 'n', 1.0, 5.0, 5, [('hoa', 1)])
    rows = ToolkitRunner().run_sweep(spec)
    assert [row['sweep_value'] for row in rows] == [1.0, 2.0, 3.0, 4.0, 5.0]
    for row in rows:
        assert row['value'] == pytest.approx(-row['sweep_value'], abs=1e-12)
        assert row['nonclassical'] and row['status'] == STATUS_OK

    print("✅ Fock sweep test passed")


def test_runner_marks_invalid_points():
    """Sweep points below the Abel bound become invalid-params rows"""
    spec = SweepSpec('ngbs', {'M': 10, 'p': 0.5}, 'q', -0.2, 0.2, 5, [('hoa', 1), ('hosps', 2)])
    rows = ToolkitRunner().run_sweep(spec)
    assert len(rows) == 10
    statuses = [(row['sweep_value'], row['status']) for row in rows]
    assert statuses[:4] == [(-0.2, STATUS_INVALID)] * 2 + [(-0.1, STATUS_INVALID)] * 2
    assert all(row['status'] == STATUS_OK for row in rows[4:])
    assert all(row['value'] is None and not row['nonclassical'] for row in rows[:4])


def test_runner_coherent_sweep_is_classical():
    spec = SweepSpec('coherent', {}, 'alpha', 0.5, 2.0, 4,
                     [('hoa', 1), ('hong_mandel', 2), ('hillery', 1), ('agarwal_tara', 2)])
    for row in ToolkitRunner().run_sweep(spec):
        assert abs(row['value']) < 1e-6, row


def test_sweep_output_is_independent_of_workers(tmp_path):
    """Byte-identical tables with one and several workers"""
    tables = []
    for workers in (1, 3):
        path = tmp_path / f"sweep_{workers}.csv"
        spec = SweepSpec('ngbs', {'M': 10, 'q': 0.1}, 'p', 0.1, 0.9, 9,
                         [('hoa', 2), ('vogel', 3), ('agarwal_tara', 2)], output=str(path))
        ToolkitRunner(workers=workers).run_sweep(spec)
        tables.append(path.read_bytes())

        sidecar = json.loads(sidecar_path(path).read_text())
        assert sidecar['rows'] == 27
        assert sidecar['columns'] == list(SWEEP_COLUMNS)
        assert sidecar['spec'] == spec.to_config_text()

    assert tables[0] == tables[1]
    lines = tables[0].decode().split('\r\n')
    assert lines[0] == ','.join(SWEEP_COLUMNS)
    assert lines[1].startswith('0.1,agarwal_tara,2,')

    print("✅ Worker determinism test passed")


def test_sweep_json_output(tmp_path):
    path = tmp_path / 'sweep.json'
    spec = SweepSpec('fock', {}, 'n', 1.0, 2.0, 2, [('hoa', 1)], output=str(path), format='json')
    ToolkitRunner().run_sweep(spec)
    payload = json.loads(path.read_text())
    assert payload['columns'] == list(SWEEP_COLUMNS)
    assert [row['value'] for row in payload['rows']] == [-1.0, -2.0]


def test_grid_files(tmp_path):
    runner = ToolkitRunner()
    wigner_path = tmp_path / 'wigner.csv'
    runner.run_grid('wigner', StateSpec('fock', {'n': 1}), 3.0, 21, wigner_path)
    lines = wigner_path.read_text().splitlines()
    comments = [line for line in lines if line.startswith('# ')]
    assert comments[0] == '# kind: wigner'
    assert '# state: fock(n=1)' in comments
    assert any(line.startswith('# normalization_check: ') for line in comments)
    assert lines[len(comments)] == 'x,p,W'
    assert len(lines) == len(comments) + 1 + 21 * 21

    checks = {}
    for label, spec, window in [('vacuum', StateSpec('fock', {'n': 0}), None),
                                ('truncated', StateSpec('fock', {'n': 3}), 1.0)]:
        path = tmp_path / f'{label}.csv'
        runner.run_grid('wigner', spec, window, 41, path)
        checks[label] = [line for line in path.read_text().splitlines()
                         if line.startswith('# normalization_check: ')][0]
    assert checks['vacuum'] == '# normalization_check: pass (tolerance 1e-06)'
    assert checks['truncated'] == '# normalization_check: fail (tolerance 1e-06), window truncates support'

    tomogram_path = tmp_path / 'tomogram.csv'
    grid = runner.run_grid('tomogram', StateSpec('fock', {'n': 0}), 4.0, 11, tomogram_path, theta_count=4)
    assert grid.values.shape == (11, 4)
    lines = tomogram_path.read_text().splitlines()
    assert lines[0] == '# kind: tomogram'
    assert 'X,theta,w' in lines
    assert len([line for line in lines if not line.startswith('#')]) == 1 + 44

    with pytest.raises(ParameterError):
        runner.run_grid('tomogram', StateSpec('fock', {'n': 0}), (-1.0, 1.0, -1.0, 1.0))
    with pytest.raises(OutputError):
        runner.run_grid('wigner', StateSpec('fock', {'n': 0}), 3.0, 11, tmp_path / 'missing' / 'w.csv')


def test_state_dump(tmp_path):
    path = tmp_path / 'state.csv'
    summary = ToolkitRunner().dump_state(StateSpec('binomial', {'M': 2, 'p': 0.5}), path)
    assert summary['cutoff'] == 2
    assert summary['mean_photon_number'] == pytest.approx(1.0)
    assert [row[3] for row in summary['rows']] == pytest.approx([0.25, 0.5, 0.25])
    assert 'n,amplitude_re,amplitude_im,probability' in path.read_text().splitlines()


def test_volume_report_file(tmp_path):
    """The volume JSON carries delta and the negative-part volume"""
    path = tmp_path / 'volume.json'
    report = ToolkitRunner().run_volume(StateSpec('fock', {'n': 1}), output=path)
    payload = json.loads(path.read_text())
    assert payload['state'] == 'fock(n=1)'
    assert payload['converged'] is True
    assert payload['delta'] == pytest.approx(report.delta, abs=1e-11)
    assert payload['negative_volume'] == pytest.approx(0.5 * report.delta, abs=1e-11)
    assert [entry['resolution'] for entry in payload['history']][:2] == [201, 401]


def test_volume_failure_writes_history(tmp_path):
    path = tmp_path / 'volume.json'
    config = ToolkitConfig(max_refinements=0)
    with pytest.raises(ConvergenceError) as excinfo:
        ToolkitRunner(config).run_volume(StateSpec('fock', {'n': 1}), output=path, resolution=21)
    assert excinfo.value.exit_code == 2
    report = json.loads(path.read_text())
    assert report['converged'] is False
    assert len(report['history']) == 1


def test_format_number():
    assert format_number(None) == ''
    assert format_number(True) == 'true'
    assert format_number(3) == '3'
    assert format_number(0.1) == '0.1'
    assert format_number(-0.0) == '0'
    assert format_number(1 / 3) == '0.333333333333'


def test_load_config(tmp_path):
    settings = tmp_path / 'settings.json'
    settings.write_text(json.dumps({'resolution': 101, 'volume_tolerance': 1e-4}))
    config = load_config(settings)
    assert config.resolution == 101
    assert config.volume_tolerance == 1e-4
    assert config.kink_subdivisions == DEFAULT_CONFIG.kink_subdivisions

    settings.write_text(json.dumps({'resolutoin': 101}))
    with pytest.raises(ParameterError, match="unknown settings"):
        load_config(settings)
    with pytest.raises(ParameterError, match="not found"):
        load_config(tmp_path / 'absent.json')


def test_main_exit_codes(tmp_path, monkeypatch):
    """0 success, 1 bad parameters, 2 no convergence, 3 unwritable output"""
    monkeypatch.chdir(tmp_path)

    assert main(['state', '--family', 'fock', '--n', '2']) == 0
    assert main(['state', '--family', 'ngbs', '--M', '10', '--p', '0.5', '--q', '-0.5']) == 1
    assert main(['sweep', '--family', 'fock', '--sweep', 'n', '--from', '1', '--to', '3',
                 '--count', '3', '--witness', 'hoa:7:1']) == 1
    assert main([]) == 1

    settings = tmp_path / 'settings.json'
    settings.write_text(json.dumps({'max_refinements': 0}))
    assert main(['--settings', str(settings), 'volume', '--family', 'fock', '--n', '1',
                 '--resolution', '21']) == 2

    assert main(['state', '--family', 'fock', '--n', '1',
                 '--out', str(tmp_path / 'missing' / 'state.csv')]) == 3

    print("✅ Exit code test passed")


def test_global_flags_after_the_command(tmp_path, monkeypatch):
    """--workers, --settings and --verbose work on either side of the command name"""
    monkeypatch.chdir(tmp_path)
    sweep = ['--family', 'fock', '--sweep', 'n', '--from', '1', '--to', '4', '--count', '4',
             '--witness', 'hoa:1']

    assert main(['sweep', *sweep, '--out', 'after.csv', '--workers', '2', '--verbose']) == 0
    assert main(['--workers', '2', 'sweep', *sweep, '--out', 'before.csv']) == 0
    assert (tmp_path / 'after.csv').read_bytes() == (tmp_path / 'before.csv').read_bytes()

    args = build_parser().parse_args(['--workers', '3', 'state', '--family', 'fock', '--n', '1'])
    assert args.workers == 3 and args.verbose is False
    args = build_parser().parse_args(['state', '--family', 'fock', '--n', '1', '--workers', '5', '--debug'])
    assert args.workers == 5 and args.debug is True and args.settings is None

    settings = tmp_path / 'settings.json'
    settings.write_text(json.dumps({'max_refinements': 0}))
    assert main(['volume', '--family', 'fock', '--n', '1', '--resolution', '21',
                 '--settings', str(settings)]) == 2


def test_main_sweep_with_config_file(tmp_path, monkeypatch):
    """Flags override the specification file"""
    monkeypatch.chdir(tmp_path)
    (tmp_path / 'run.cfg').write_text(SAMPLE_SPEC)

    assert main(['sweep', '--config', 'run.cfg', '--count', '3', '--witness', 'hoa:1']) == 0
    lines = (tmp_path / 'hoa.csv').read_text().splitlines()
    assert len(lines) == 1 + 3
    assert lines[1].startswith('0.25,hoa,1,')
    assert (tmp_path / 'hoa.csv.json').exists()

    assert main(['grid', 'tomogram', '--family', 'fock', '--n', '1', '--grid-window', '4',
                 '--resolution', '11', '--theta-count', '2', '--out', 'tomo.csv']) == 0
    assert (tmp_path / 'tomo.csv').exists()


if __name__ == '__main__':
    test_parse_sample_spec()
    test_sweep_spec_round_trip()
    test_parse_errors_carry_line_numbers()
    test_sweep_spec_invariants()
    test_grid_options_and_windows()
    test_runner_fock_sweep()
    test_runner_marks_invalid_points()
    test_runner_coherent_sweep_is_classical()
    test_format_number()
    print("\n🎉 All CLI tests passed!")
