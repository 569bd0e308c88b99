"""
Parser - Parse key = value run specifications into structured records

A run specification is plain text:

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

    [output]
    path = hoa.csv
"""

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ParameterError
from .fock.state import FockSuperposition
from .states.families import FAMILIES, family_parameters, normalize_params, state_from_family
from .witnesses.catalog import WitnessCatalog

OUTPUT_FORMATS = ('csv', 'json')
GRID_KINDS = ('wigner', 'tomogram')

Window = Union[None, float, Tuple[float, ...]]


@dataclass(frozen=True)
class StateSpec:
    """A state family with its parameter values"""

    family: str
    params: Dict[str, float]

    def build(self) -> FockSuperposition:
        return state_from_family(self.family, self.params)

    def label(self) -> str:
        inner = ', '.join(f"{name}={value:g}" for name, value in self.params.items())
        return f"{self.family}({inner})"


@dataclass
class SweepSpec:
    """Witness sweep over one state parameter; the rest stay fixed"""

    state_family: str
    fixed_params: Dict[str, float]
    sweep_param: str
    start: float
    stop: float
    count: int
    witnesses: List[Tuple[str, int]] = field(default_factory=list)
    output: Optional[str] = None
    format: str = 'csv'

    def __post_init__(self):
        if self.state_family not in FAMILIES:
            raise ParameterError(
                f"unknown state family '{self.state_family}' (choose from {', '.join(sorted(FAMILIES))})"
            )
        if self.sweep_param in self.fixed_params:
            raise ParameterError(f"sweep parameter '{self.sweep_param}' is also given a fixed value")
        if self.sweep_param not in family_parameters(self.state_family):
            raise ParameterError(
                f"family '{self.state_family}' has no parameter '{self.sweep_param}' to sweep"
            )
        if self.count < 2:
            raise ParameterError(f"sweep count must be >= 2, got {self.count}")
        if not self.start < self.stop:
            raise ParameterError(f"sweep needs from < to, got {self.start} and {self.stop}")
        if self.format not in OUTPUT_FORMATS:
            raise ParameterError(f"unknown output format '{self.format}'")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def to_config_text(self) -> str:
        """Specification text that parses back to an equal SweepSpec"""
        lines = ['[state]', f"family = {self.state_family}"]
        lines += [f"{name} = {value!r}" for name, value in self.fixed_params.items()]
        lines += [
            '',
            '[sweep]',
            f"param = {self.sweep_param}",
            f"from = {self.start!r}",
            f"to = {self.stop!r}",
            f"count = {self.count}",
            '',
            '[witnesses]',
        ]
        lines += [f"{name}:{order}" for name, order in self.witnesses]
        lines += ['', '[output]', f"format = {self.format}"]
        if self.output is not None:
            lines.append(f"path = {self.output}")
        return '\n'.join(lines) + '\n'


@dataclass
class ParsedSpec:
    """Raw section contents with the line each entry came from"""

    source: str = '<spec>'
    sections: Dict[str, Dict[str, str]] = field(default_factory=dict)
    witnesses: List[str] = field(default_factory=list)
    lines: Dict[Tuple[str, str], int] = field(default_factory=dict)

    def get(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.sections.get(section, {}).get(key, default)

    def set(self, section: str, key: str, value: str):
        """Override an entry (command-line flags take precedence over the file)"""
        self.sections.setdefault(section, {})[key] = str(value)
        self.lines.pop((section, key), None)

    def where(self, section: str, key: str) -> str:
        line = self.lines.get((section, key))
        return f"{self.source}:{line}" if line else f"[{section}] {key}"


class SpecParser:
    """Parse run specification text into a ParsedSpec and typed records"""

    SECTION_PATTERN = re.compile(r'^\[(?P<section>[A-Za-z_]+)\]$')
    ENTRY_PATTERN = re.compile(r'^(?P<key>[A-Za-z_][\w-]*)\s*=\s*(?P<value>.*?)$')
    WITNESS_PATTERN = re.compile(r'^[A-Za-z_][\w-]*(?::\s*\d+)?$')

    def __init__(self):
        self.catalog = WitnessCatalog()
        self.section_keys = {
            'state': None,  # family parameters vary
            'sweep': {'param', 'from', 'to', 'count'},
            'witnesses': None,
            'grid': {'kind', 'window', 'resolution', 'theta_count', 'tolerance'},
            'output': {'path', 'format'},
        }

    def parse_file(self, path: Path) -> ParsedSpec:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise ParameterError(f"cannot read specification {path}: {e}")
        return self.parse_text(text, source=str(path))

    def parse_text(self, text: str, source: str = '<spec>') -> ParsedSpec:
        """
        Parse specification text

        Args:
            text: Specification contents
            source: Name used in error messages

        Returns:
            ParsedSpec with every entry and its line number
        """
        parsed = ParsedSpec(source=source)
        section: Optional[str] = None

        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.split('#', 1)[0].strip()
            if not line:
                continue

            header = self.SECTION_PATTERN.match(line)
            if header:
                section = header.group('section').lower()
                if section not in self.section_keys:
                    raise ParameterError(f"{source}:{number}: unknown section [{section}]")
                parsed.sections.setdefault(section, {})
                continue

            if section is None:
                raise ParameterError(f"{source}:{number}: entry outside any section: '{line}'")
            if section == 'witnesses':
                parsed.witnesses.extend(self._parse_witness_line(line, source, number))
                continue

            self._parse_entry(parsed, section, line, source, number)

        return parsed

    def _parse_entry(self, parsed: ParsedSpec, section: str, line: str, source: str, number: int):
        entry = self.ENTRY_PATTERN.match(line)
        if not entry:
            raise ParameterError(f"{source}:{number}: expected 'key = value', got '{line}'")

        key = entry.group('key').replace('-', '_')
        allowed = self.section_keys[section]
        if allowed is not None and key not in allowed:
            raise ParameterError(f"{source}:{number}: unknown key '{key}' in [{section}]")
        if key in parsed.sections[section]:
            raise ParameterError(f"{source}:{number}: duplicate key '{key}' in [{section}]")

        parsed.sections[section][key] = entry.group('value')
        parsed.lines[(section, key)] = number

    def _parse_witness_line(self, line: str, source: str, number: int) -> List[str]:
        """'name:order', bare 'name', or 'name = order, order, ...'"""
        entry = self.ENTRY_PATTERN.match(line)
        if entry:
            name = entry.group('key')
            orders = [o.strip() for o in entry.group('value').split(',') if o.strip()]
            if not orders:
                raise ParameterError(f"{source}:{number}: no orders given for '{name}'")
            return [f"{name}:{order}" for order in orders]
        if not self.WITNESS_PATTERN.match(line):
            raise ParameterError(f"{source}:{number}: malformed witness '{line}'")
        return [line.replace(' ', '')]

    def state_spec(self, parsed: ParsedSpec) -> StateSpec:
        """[state] section as a StateSpec"""
        entries = dict(parsed.sections.get('state', {}))
        family = entries.pop('family', None)
        if family is None:
            raise ParameterError(f"{parsed.source}: [state] needs a family")

        params = {key: self._number(parsed, 'state', key, text) for key, text in entries.items()}
        params = normalize_params(family, params)
        return StateSpec(family=family, params=params)

    def sweep_spec(self, parsed: ParsedSpec) -> SweepSpec:
        """
        Build a SweepSpec from [state], [sweep], [witnesses] and [output]

        Witnesses default to every criterion at its default order.
        """
        sweep_param = parsed.get('sweep', 'param')
        if sweep_param is None:
            raise ParameterError(f"{parsed.source}: [sweep] needs a param")

        family = parsed.get('state', 'family')
        if family is None:
            raise ParameterError(f"{parsed.source}: [state] needs a family")
        fixed = {
            key: self._number(parsed, 'state', key, text)
            for key, text in parsed.sections.get('state', {}).items()
            if key != 'family'
        }

        tokens = parsed.witnesses or self.catalog.names()
        witnesses: List[Tuple[str, int]] = []
        for token in tokens:
            pair = self.catalog.parse(token)
            if pair not in witnesses:
                witnesses.append(pair)

        return SweepSpec(
            state_family=family,
            fixed_params=fixed,
            sweep_param=sweep_param,
            start=self._number(parsed, 'sweep', 'from', self._required(parsed, 'sweep', 'from')),
            stop=self._number(parsed, 'sweep', 'to', self._required(parsed, 'sweep', 'to')),
            count=self._integer(parsed, 'sweep', 'count', self._required(parsed, 'sweep', 'count')),
            witnesses=witnesses,
            output=parsed.get('output', 'path'),
            format=parsed.get('output', 'format', 'csv'),
        )

    def grid_options(self, parsed: ParsedSpec) -> Dict:
        """[grid] section with numbers converted; absent entries stay None"""
        kind = parsed.get('grid', 'kind')
        if kind is not None and kind not in GRID_KINDS:
            raise ParameterError(f"{parsed.where('grid', 'kind')}: unknown grid kind '{kind}'")

        options = {'kind': kind, 'window': None, 'resolution': None,
                   'theta_count': None, 'tolerance': None}
        if parsed.get('grid', 'window') is not None:
            options['window'] = self.parse_window(parsed.get('grid', 'window'), parsed.where('grid', 'window'))
        for key in ('resolution', 'theta_count'):
            if parsed.get('grid', key) is not None:
                options[key] = self._integer(parsed, 'grid', key, parsed.get('grid', key))
        if parsed.get('grid', 'tolerance') is not None:
            options['tolerance'] = self._number(parsed, 'grid', 'tolerance', parsed.get('grid', 'tolerance'))
        return options

    @staticmethod
    def parse_window(text: str, where: str = '--grid-window') -> Window:
        """'R' for a centred square, or comma-separated bounds"""
        try:
            values = tuple(float(v) for v in text.split(','))
        except ValueError:
            raise ParameterError(f"{where}: window must be numbers, got '{text}'")
        if len(values) == 1:
            if values[0] <= 0.0:
                raise ParameterError(f"{where}: window radius must be positive, got {values[0]}")
            return values[0]
        if len(values) not in (2, 4):
            raise ParameterError(f"{where}: window needs 1, 2 or 4 numbers, got {len(values)}")
        return values

    def _required(self, parsed: ParsedSpec, section: str, key: str) -> str:
        value = parsed.get(section, key)
        if value is None:
            raise ParameterError(f"{parsed.source}: [{section}] needs '{key}'")
        return value

    def _number(self, parsed: ParsedSpec, section: str, key: str, text: str) -> float:
        try:
            return float(text)
        except ValueError:
            raise ParameterError(f"{parsed.where(section, key)}: '{key}' must be a number, got '{text}'")

    def _integer(self, parsed: ParsedSpec, section: str, key: str, text: str) -> int:
        value = self._number(parsed, section, key, text)
        if value != int(value):
            raise ParameterError(f"{parsed.where(section, key)}: '{key}' must be an integer, got '{text}'")
        return int(value)
