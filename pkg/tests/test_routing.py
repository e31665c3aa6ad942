"""
POS routing tests: which candidate modules run for which part of speech.
"""

import pytest

from lexsimp.config import RoutingSection, parse_config
from lexsimp.errors import ConfigError
from lexsimp.models.candidate import ModuleId
from lexsimp.models.instance import POSCategory
from lexsimp.services.routing import (
    DEFAULT_ROUTING,
    VERB_KG_ROUTING,
    modules_for_pos,
    routing_from_config,
)

V, P, M, K = ModuleId.VSD, ModuleId.PPDB, ModuleId.MLM, ModuleId.KG

DEFAULT_ROWS = {
    POSCategory.VERB: {V, P, M},
    POSCategory.NOUN: {P, M, K},
    POSCategory.ADJ: {P, M},
}


class TestDefaultTable:
    @pytest.mark.parametrize(
        "pos,module",
        [(pos, module) for pos in DEFAULT_ROWS for module in (V, P, M, K)],
    )
    def test_membership(self, pos, module):
        routed = modules_for_pos(pos, DEFAULT_ROUTING)
        assert (module in routed) == (module in DEFAULT_ROWS[pos])

    def test_canonical_order(self):
        assert modules_for_pos(POSCategory.VERB, DEFAULT_ROUTING) == [V, P, M]
        assert modules_for_pos(POSCategory.NOUN, DEFAULT_ROUTING) == [P, M, K]

    def test_other_and_unassigned(self):
        assert modules_for_pos(POSCategory.OTHER, DEFAULT_ROUTING) == [P, M]
        assert modules_for_pos(POSCategory.UNASSIGNED, DEFAULT_ROUTING) == [P, M]


class TestAlternativeProfiles:
    def test_algorithm1_queries_kg_for_verbs(self):
        assert modules_for_pos(POSCategory.VERB, VERB_KG_ROUTING) == [V, P, M, K]
        assert modules_for_pos(POSCategory.ADJ, VERB_KG_ROUTING) == [P, M]

    def test_profile_selection(self):
        assert RoutingSection().profile == "table1"
        assert routing_from_config(RoutingSection()) is DEFAULT_ROUTING
        assert routing_from_config(RoutingSection(profile="table1")) is DEFAULT_ROUTING
        verb_kg = RoutingSection(profile="algorithm1")
        assert routing_from_config(verb_kg) is VERB_KG_ROUTING

    def test_profile_names_in_config_document(self):
        config = parse_config({"routing": {"profile": "algorithm1"}})
        assert routing_from_config(config.routing) is VERB_KG_ROUTING
        with pytest.raises(ConfigError):
            parse_config({"routing": {"profile": "verb_kg"}})

    def test_custom_table(self):
        routing = routing_from_config(
            RoutingSection(
                profile="custom",
                table={"verb": ["ppdb"], "noun": ["MLM", "kg"], "adj": ["kg"]},
            )
        )
        assert modules_for_pos(POSCategory.VERB, routing) == [P]
        assert modules_for_pos(POSCategory.NOUN, routing) == [M, K]
        assert modules_for_pos(POSCategory.OTHER, routing) == [P, M]

    def test_custom_table_needs_every_content_category(self):
        with pytest.raises(ConfigError):
            routing_from_config(
                RoutingSection(profile="custom", table={"verb": ["ppdb"]})
            )

    def test_custom_table_unknown_module(self):
        with pytest.raises(ConfigError):
            routing_from_config(
                RoutingSection(
                    profile="custom",
                    table={"verb": ["wordnet"], "noun": ["kg"], "adj": ["kg"]},
                )
            )

    def test_custom_profile_without_table(self):
        with pytest.raises(ConfigError):
            parse_config({"routing": {"profile": "custom"}})
