from typing import Optional

from ..fs.relation import CoupledRelation, parse_relation
from ..syntax.env import NamedEnv
from .base import BaseFormat
from .registry import register_format

__all__ = ["RelationFormat"]


class RelationFormat(BaseFormat):
    """Coupled relations with ``[DEFS]``, ``[V]``, ``[E]`` and ``[CTX]`` sections."""

    name = "relation"

    def loads(self, text: str, env: Optional[NamedEnv] = None) -> CoupledRelation:
        return parse_relation(text, env)


register_format("relation", RelationFormat, ["rel"])
