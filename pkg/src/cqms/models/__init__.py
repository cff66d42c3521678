"""Concrete extensions: Toeplitz, quantum SU(2) and the Podles sphere."""

from .podles import PodlesModel, PodlesParams
from .suq2 import SuqModel, SuqParams
from .toeplitz import ToeplitzModel

__all__ = ["PodlesModel", "PodlesParams", "SuqModel", "SuqParams", "ToeplitzModel"]
