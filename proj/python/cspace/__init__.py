"""Conceptual-space concepts as fuzzy unions of intersecting cuboids."""

from ._cspace import (
    Concept,
    Core,
    CspaceError,
    Cuboid,
    KnowledgeBase,
    Space,
    Weights,
    combine_adjective_noun,
    height_of_intersection,
    intersect,
    load,
    membership,
    project,
    save,
    subsethood_check,
    union,
)

__all__ = [
    "Concept",
    "Core",
    "CspaceError",
    "Cuboid",
    "KnowledgeBase",
    "Space",
    "Weights",
    "combine_adjective_noun",
    "height_of_intersection",
    "intersect",
    "load",
    "membership",
    "project",
    "save",
    "subsethood_check",
    "union",
]
