"""Compact quantum metric spaces from split extensions, computed numerically."""

from .amplification import Amplification, MatrixElement
from .circle import CircleBase, CircleState, HaarState, TrigPoly, TrivialBase
from .exceptions import CqmsError, InvalidInputError, LPError, PreconditionError
from .extension import DualPair, ExtensionElement, SplitExtension
from .metric import Caps

__version__ = "0.1.0"

__all__ = [
    "Amplification",
    "Caps",
    "CircleBase",
    "CircleState",
    "CqmsError",
    "DualPair",
    "ExtensionElement",
    "HaarState",
    "InvalidInputError",
    "LPError",
    "MatrixElement",
    "PreconditionError",
    "SplitExtension",
    "TrigPoly",
    "TrivialBase",
]
