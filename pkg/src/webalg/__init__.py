"""Exact computations on codimension-one webs: abelian relations, the Chern
bound, rational normal curves, adapted coframes and the curves C(x)."""

from .errors import ParseError, PreconditionError
from .exact import Rat, rat
from .jets import MJet, UJet

__all__ = ["MJet", "UJet", "ParseError", "PreconditionError", "Rat", "rat"]
__version__ = "0.1.0"
