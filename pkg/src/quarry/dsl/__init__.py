from quarry.dsl.ast import QueryAst
from quarry.dsl.parser import parse_query
from quarry.dsl.printer import format_query
from quarry.dsl.plan import QueryPlan
from quarry.dsl.translate import translate

__all__ = ["QueryAst", "parse_query", "format_query", "QueryPlan", "translate"]
