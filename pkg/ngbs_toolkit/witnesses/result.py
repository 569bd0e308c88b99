"""
Result - Uniform envelope for nonclassicality witness values
"""

from dataclasses import dataclass
from typing import Optional

AGARWAL_TARA_FLOOR_SLACK = 1e-9

STATUS_OK = 'ok'
STATUS_INDETERMINATE = 'indeterminate'
STATUS_INVALID = 'invalid-params'


@dataclass(frozen=True)
class WitnessResult:
    """A witness value with its verdict; value is None when indeterminate"""

    value: Optional[float]
    criterion: str
    order: int
    nonclassical: bool
    status: str = STATUS_OK

    @classmethod
    def from_value(cls, value: float, criterion: str, order: int) -> 'WitnessResult':
        return cls(value=float(value), criterion=criterion, order=order, nonclassical=value < 0.0)

    @classmethod
    def indeterminate(cls, criterion: str, order: int) -> 'WitnessResult':
        return cls(value=None, criterion=criterion, order=order, nonclassical=False,
                   status=STATUS_INDETERMINATE)
