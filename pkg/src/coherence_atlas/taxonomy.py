"""Closed coding catalogs: component kinds, categories, and canonical codes.

Every other module validates component references against the catalogs
defined here. The catalogs are fixed; there is no user extension point.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass
from enum import Enum

from .errors import CatalogError


class ComponentKind(Enum):
    OBJECTIVE = "objective"
    FORESIGHT = "foresight"
    INSTRUMENT = "instrument"


class ObjectiveCategory(Enum):
    ECONOMIC_TRANSFORMATION = "economic_transformation"
    SOCIETAL_APPLICATIONS = "societal_applications"
    GOVERNANCE_FRAMEWORKS = "governance_frameworks"
    GLOBAL_POSITIONING = "global_positioning"


class ForesightCategory(Enum):
    EXPERT_BASED = "expert_based"
    SCENARIO_BASED = "scenario_based"
    DATA_DRIVEN = "data_driven"
    PARTICIPATORY = "participatory"


class InstrumentCategory(Enum):
    FUNDING = "funding"
    REGULATORY = "regulatory"
    CAPACITY_BUILDING = "capacity_building"
    COORDINATION = "coordination"


ComponentCategory = ObjectiveCategory | ForesightCategory | InstrumentCategory


class GovernanceModel(Enum):
    MARKET_LED = "market_led"
    STATE_DIRECTED = "state_directed"
    RIGHTS_BASED = "rights_based"
    RISK_FOCUSED = "risk_focused"
    HYBRID = "hybrid"


class Region(Enum):
    NORTH_AMERICA = "north_america"
    EUROPE = "europe"
    EAST_ASIA = "east_asia"
    SOUTHEAST_ASIA = "southeast_asia"
    SOUTH_ASIA = "south_asia"
    MIDDLE_EAST = "middle_east"
    AFRICA = "africa"
    LATIN_AMERICA = "latin_america"
    OCEANIA = "oceania"


@dataclass(frozen=True)
class ComponentId:
    kind: ComponentKind
    code: str
    display_name: str

    def __str__(self) -> str:
        return self.code


# (code, display name, category) in canonical catalog order.
_OBJECTIVES = (
    ("OBJ.ECON_COMP", "economic competitiveness", ObjectiveCategory.ECONOMIC_TRANSFORMATION),
    ("OBJ.SCI_LEAD", "scientific leadership", ObjectiveCategory.ECONOMIC_TRANSFORMATION),
    ("OBJ.IND_DIGI", "industrial digitalization", ObjectiveCategory.ECONOMIC_TRANSFORMATION),
    ("OBJ.PUB_SECTOR", "public sector transformation", ObjectiveCategory.SOCIETAL_APPLICATIONS),
    ("OBJ.WORKFORCE", "workforce development", ObjectiveCategory.SOCIETAL_APPLICATIONS),
    ("OBJ.SOC_WELFARE", "social welfare enhancement", ObjectiveCategory.SOCIETAL_APPLICATIONS),
    ("OBJ.ETHICS", "ethical/responsible AI", ObjectiveCategory.GOVERNANCE_FRAMEWORKS),
    ("OBJ.REG_FRAME", "regulatory framework development", ObjectiveCategory.GOVERNANCE_FRAMEWORKS),
    ("OBJ.DATA_ECO", "data ecosystem development", ObjectiveCategory.GOVERNANCE_FRAMEWORKS),
    ("OBJ.INTL_COLLAB", "international collaboration", ObjectiveCategory.GLOBAL_POSITIONING),
    ("OBJ.NAT_SEC", "national security", ObjectiveCategory.GLOBAL_POSITIONING),
    ("OBJ.ENV_SUST", "environmental sustainability", ObjectiveCategory.SOCIETAL_APPLICATIONS),
)

_FORESIGHT = (
    ("FOR.HORIZON", "horizon scanning", ForesightCategory.DATA_DRIVEN),
    ("FOR.SCENARIO", "scenario development", ForesightCategory.SCENARIO_BASED),
    ("FOR.DELPHI", "Delphi studies", ForesightCategory.EXPERT_BASED),
    ("FOR.EXPERT_PANEL", "expert panels", ForesightCategory.EXPERT_BASED),
    ("FOR.ROADMAP", "technology roadmapping", ForesightCategory.PARTICIPATORY),
    ("FOR.TREND", "trend extrapolation", ForesightCategory.DATA_DRIVEN),
    ("FOR.WORKSHOP", "participatory workshops", ForesightCategory.PARTICIPATORY),
    ("FOR.CROSS_IMPACT", "cross-impact analysis", ForesightCategory.SCENARIO_BASED),
)

_INSTRUMENTS = (
    ("INS.FUNDING", "research funding", InstrumentCategory.FUNDING),
    ("INS.SKILLS", "skills development programs", InstrumentCategory.CAPACITY_BUILDING),
    ("INS.REGULATION", "regulatory frameworks", InstrumentCategory.REGULATORY),
    ("INS.INSTITUTION", "institutional creation", InstrumentCategory.CAPACITY_BUILDING),
    ("INS.PROCUREMENT", "public procurement", InstrumentCategory.FUNDING),
    ("INS.TAX", "tax incentives", InstrumentCategory.FUNDING),
    ("INS.STANDARDS", "standardization initiatives", InstrumentCategory.REGULATORY),
    ("INS.DEMO", "demonstration projects", InstrumentCategory.CAPACITY_BUILDING),
    ("INS.NETWORK", "networking/coordination mechanisms", InstrumentCategory.COORDINATION),
    ("INS.INTL_AGREE", "international agreements", InstrumentCategory.COORDINATION),
)

_KIND_TABLES = {
    ComponentKind.OBJECTIVE: _OBJECTIVES,
    ComponentKind.FORESIGHT: _FORESIGHT,
    ComponentKind.INSTRUMENT: _INSTRUMENTS,
}

_CATALOGS: dict[ComponentKind, tuple[ComponentId, ...]] = {
    kind: tuple(ComponentId(kind, code, name) for code, name, _ in table)
    for kind, table in _KIND_TABLES.items()
}

_CATEGORIES: dict[str, ComponentCategory] = {
    code: cat for table in _KIND_TABLES.values() for code, _, cat in table
}

_BY_CODE: dict[str, ComponentId] = {
    c.code: c for catalog in _CATALOGS.values() for c in catalog
}

# Global order: objectives, then foresight, then instruments.
ALL_COMPONENTS: tuple[ComponentId, ...] = (
    _CATALOGS[ComponentKind.OBJECTIVE]
    + _CATALOGS[ComponentKind.FORESIGHT]
    + _CATALOGS[ComponentKind.INSTRUMENT]
)

_GLOBAL_INDEX: dict[str, int] = {c.code: i for i, c in enumerate(ALL_COMPONENTS)}

CATALOG_SIZES = {
    ComponentKind.OBJECTIVE: 12,
    ComponentKind.FORESIGHT: 8,
    ComponentKind.INSTRUMENT: 10,
}

# Kind pairs in the order the three cross-reference matrices are built.
KIND_PAIRS = (
    (ComponentKind.OBJECTIVE, ComponentKind.FORESIGHT),
    (ComponentKind.OBJECTIVE, ComponentKind.INSTRUMENT),
    (ComponentKind.FORESIGHT, ComponentKind.INSTRUMENT),
)


def catalog(kind: ComponentKind) -> tuple[ComponentId, ...]:
    """Return the fixed catalog for a kind in canonical order."""
    return _CATALOGS[kind]


def category_of(component: ComponentId) -> ComponentCategory:
    """Category of a catalog component; raises CatalogError for strangers."""
    try:
        return _CATEGORIES[component.code]
    except KeyError:
        raise CatalogError(f"unknown component code {component.code!r}") from None


def parse_component(code: str) -> ComponentId:
    """Resolve a canonical code (case-insensitive) to its ComponentId."""
    component = _BY_CODE.get(code.strip().upper())
    if component is None:
        near = difflib.get_close_matches(code.strip().upper(), _BY_CODE, n=1, cutoff=0.4)
        hint = f"; nearest match: {near[0]}" if near else ""
        raise CatalogError(f"unknown component code {code!r}{hint}")
    return component


def component_index(component: ComponentId) -> int:
    """Position of a component in the global catalog order."""
    try:
        return _GLOBAL_INDEX[component.code]
    except KeyError:
        raise CatalogError(f"unknown component code {component.code!r}") from None


def order_pair(a: ComponentId, b: ComponentId) -> tuple[ComponentId, ComponentId]:
    """Canonical orientation of an unordered cross-kind pair."""
    if component_index(a) <= component_index(b):
        return a, b
    return b, a


def taxonomy_document() -> dict:
    """Versioned JSON-ready dump of the full taxonomy."""
    return {
        "schema_version": "1",
        "kinds": [k.value for k in ComponentKind],
        "components": [
            {
                "code": c.code,
                "kind": c.kind.value,
                "display_name": c.display_name,
                "category": category_of(c).value,
            }
            for c in ALL_COMPONENTS
        ],
        "governance_models": [m.value for m in GovernanceModel],
        "regions": [r.value for r in Region],
    }
