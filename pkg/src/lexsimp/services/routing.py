# POS routing
# Maps the target's part of speech to the candidate modules that run for it

from typing import Self

from pydantic import BaseModel, ConfigDict, model_validator

from ..config import RoutingSection
from ..errors import ConfigError
from ..models.candidate import ModuleId
from ..models.instance import POSCategory

V, P, M, K = ModuleId.VSD, ModuleId.PPDB, ModuleId.MLM, ModuleId.KG


class RoutingConfig(BaseModel):
    """POS category -> ordered candidate modules."""

    model_config = ConfigDict(frozen=True)

    table: dict[POSCategory, tuple[ModuleId, ...]]

    @model_validator(mode="after")
    def check_table(self) -> Self:
        for pos in (POSCategory.VERB, POSCategory.NOUN, POSCategory.ADJ):
            if not self.table.get(pos):
                raise ValueError(f"{pos} must route to at least one module")
        for pos, modules in self.table.items():
            if len(set(modules)) != len(modules):
                raise ValueError(f"{pos} routes to a module twice")
        return self


DEFAULT_ROUTING = RoutingConfig(
    table={
        POSCategory.VERB: (V, P, M),
        POSCategory.NOUN: (P, M, K),
        POSCategory.ADJ: (P, M),
        POSCategory.OTHER: (P, M),
    }
)

# Also queries the KG for verbs.
VERB_KG_ROUTING = RoutingConfig(
    table={**DEFAULT_ROUTING.table, POSCategory.VERB: (V, P, M, K)}
)

PROFILES: dict[str, RoutingConfig] = {
    "table1": DEFAULT_ROUTING,
    "algorithm1": VERB_KG_ROUTING,
}


def modules_for_pos(pos: POSCategory, cfg: RoutingConfig) -> list[ModuleId]:
    """Modules to run for `pos`; UNASSIGNED routes like OTHER."""
    if pos is POSCategory.UNASSIGNED:
        pos = POSCategory.OTHER
    return list(cfg.table.get(pos, ()))


def routing_from_config(section: RoutingSection) -> RoutingConfig:
    """Build the routing table selected by `routing.profile`."""
    if section.profile != "custom":
        return PROFILES[section.profile]

    table: dict[POSCategory, tuple[ModuleId, ...]] = {}
    try:
        for category, names in (section.table or {}).items():
            table[POSCategory(category.upper())] = tuple(
                ModuleId(name.lower()) for name in names
            )
    except ValueError as e:
        raise ConfigError(f"invalid routing.table: {e}") from e
    table.setdefault(POSCategory.OTHER, DEFAULT_ROUTING.table[POSCategory.OTHER])
    try:
        return RoutingConfig(table=table)
    except ValueError as e:
        raise ConfigError(f"invalid routing.table: {e}") from e
