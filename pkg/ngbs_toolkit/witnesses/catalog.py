"""
Witness Catalog - Registry of the nonclassicality criteria and how to call them
"""

from typing import Callable, Dict, List, Optional, Tuple

from ..errors import DomainError, ParameterError
from ..fock.state import FockSuperposition
from .moment_matrix import vogel_determinant
from .photon_statistics import agarwal_tara, hoa, hosps
from .result import WitnessResult
from .squeezing import hillery_hos, hong_mandel_hos


class WitnessCatalog:
    """Catalog of witnesses keyed by their CLI names"""

    def __init__(self):
        self.criteria = self._load_criteria()

    def _load_criteria(self) -> Dict[str, Dict]:
        """Known criteria with their order semantics"""
        return {
            'hoa': {
                'function': hoa,
                'order_name': 'l',
                'min_order': 1,
                'default_order': 1,
                'description': 'Higher-order antibunching D(l) < 0',
            },
            'hosps': {
                'function': hosps,
                'order_name': 'l',
                'min_order': 2,
                'default_order': 2,
                'description': 'Higher-order sub-Poissonian statistics D_h(l-1) < 0',
            },
            'hong_mandel': {
                'function': hong_mandel_hos,
                'order_name': 'n',
                'min_order': 2,
                'default_order': 2,
                'even_only': True,
                'description': 'Hong-Mandel higher-order squeezing S_HM(n) < 0 (even n)',
            },
            'hillery': {
                'function': hillery_hos,
                'order_name': 'l',
                'min_order': 1,
                'default_order': 2,
                'description': 'Hillery amplitude-powered squeezing A_l < 0',
            },
            'agarwal_tara': {
                'function': agarwal_tara,
                'order_name': 'n',
                'min_order': 2,
                'default_order': 2,
                'description': 'Agarwal-Tara ratio -1 <= A_n < 0',
            },
            'vogel': {
                'function': vogel_determinant,
                'order_name': 'V',
                'min_order': 3,
                'default_order': 3,
                'description': 'Shchukin-Vogel determinant d_V < 0',
            },
        }

    def names(self) -> List[str]:
        return sorted(self.criteria)

    def parse(self, token: str) -> Tuple[str, int]:
        """
        Parse 'name:order' (or a bare name, using its default order)

        Args:
            token: Witness token from a flag or config file

        Returns:
            (criterion, order)
        """
        name, _, order_text = token.strip().partition(':')
        name = name.strip().replace('-', '_')
        entry = self._lookup(name)

        if not order_text.strip():
            return name, entry['default_order']
        try:
            order = int(order_text)
        except ValueError:
            raise ParameterError(f"witness order must be an integer: '{token}'")
        if order < entry['min_order']:
            raise ParameterError(
                f"{name} needs {entry['order_name']} >= {entry['min_order']}, got {order}"
            )
        if entry.get('even_only') and order % 2:
            raise DomainError(f"{name} needs an even {entry['order_name']}, got {order}")
        return name, order

    def evaluate(self, state: FockSuperposition, name: str, order: int) -> WitnessResult:
        function: Callable = self._lookup(name)['function']
        return function(state, order)

    def _lookup(self, name: str) -> Dict:
        entry: Optional[Dict] = self.criteria.get(name)
        if entry is None:
            raise ParameterError(
                f"unknown witness '{name}' (choose from {', '.join(self.names())})"
            )
        return entry
