"""Groups whose discrete logarithm is as hard as a chosen function ``f``."""
from .kernels import BACKEND

__version__ = "0.1.0"
