"""
Families - Named state families addressable from run specifications
"""

from typing import Callable, Dict, List, Mapping

from ..errors import ParameterError
from ..fock.state import FockSuperposition
from .limits import binomial_state, fock_state, truncated_coherent_state
from .ngbs import NGBSParams, ngbs_state

# parameter names that must hold whole numbers
INTEGER_PARAMS = {'M', 'n', 'cutoff'}


def _build_ngbs(params: Mapping[str, float]) -> FockSuperposition:
    return ngbs_state(NGBSParams(M=params['M'], p=params['p'], q=params['q']))


def _build_binomial(params: Mapping[str, float]) -> FockSuperposition:
    return binomial_state(params['M'], params['p'])


def _build_fock(params: Mapping[str, float]) -> FockSuperposition:
    return fock_state(params['n'], params.get('cutoff'))


def _build_coherent(params: Mapping[str, float]) -> FockSuperposition:
    return truncated_coherent_state(params['alpha'], params.get('cutoff'))


FAMILIES: Dict[str, Dict] = {
    'ngbs': {
        'builder': _build_ngbs,
        'required': ['M', 'p', 'q'],
        'optional': [],
        'description': 'Generalized binomial state |M, p, q>',
    },
    'binomial': {
        'builder': _build_binomial,
        'required': ['M', 'p'],
        'optional': [],
        'description': 'Binomial state (q = 0, endpoints allowed)',
    },
    'fock': {
        'builder': _build_fock,
        'required': ['n'],
        'optional': ['cutoff'],
        'description': 'Number state |n>',
    },
    'coherent': {
        'builder': _build_coherent,
        'required': ['alpha'],
        'optional': ['cutoff'],
        'description': 'Truncated coherent state |alpha>',
    },
}


def family_parameters(family: str) -> List[str]:
    """All parameter names a family understands"""
    entry = _lookup(family)
    return entry['required'] + entry['optional']


def normalize_params(family: str, params: Mapping[str, float]) -> Dict[str, float]:
    """Check names and presence, casting integer-valued parameters"""
    entry = _lookup(family)
    allowed = set(entry['required']) | set(entry['optional'])

    unknown = sorted(set(params) - allowed)
    if unknown:
        raise ParameterError(f"family '{family}' does not take {', '.join(unknown)}")
    missing = [name for name in entry['required'] if name not in params]
    if missing:
        raise ParameterError(f"family '{family}' needs {', '.join(missing)}")

    normalized = {}
    for name, value in params.items():
        if name in INTEGER_PARAMS:
            if float(value) != round(float(value)):
                raise ParameterError(f"{name} must be an integer, got {value}")
            normalized[name] = int(round(float(value)))
        else:
            normalized[name] = float(value)
    return normalized


def state_from_family(family: str, params: Mapping[str, float]) -> FockSuperposition:
    """
    Build a state from a family name and its parameters

    Args:
        family: One of ngbs, binomial, fock, coherent
        params: Parameter values by name

    Returns:
        The constructed FockSuperposition
    """
    builder: Callable = _lookup(family)['builder']
    return builder(normalize_params(family, params))


def _lookup(family: str) -> Dict:
    try:
        return FAMILIES[family]
    except KeyError:
        raise ParameterError(
            f"unknown state family '{family}' (choose from {', '.join(sorted(FAMILIES))})"
        )
