from quarry.frontend.tokens import Span, Token, tokenize
from quarry.frontend.parser import MiniCAst, parse
from quarry.frontend.lowering import FunctionInfo, LoweredFunction, LoweredUnit, UnifiedStatement, lower

__all__ = [
    "Span",
    "Token",
    "tokenize",
    "MiniCAst",
    "parse",
    "FunctionInfo",
    "LoweredFunction",
    "LoweredUnit",
    "UnifiedStatement",
    "lower",
]
