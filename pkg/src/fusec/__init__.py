"""Fusion systems of finite p-groups, their group models and mod p cohomology."""
from .errors import (BudgetExceeded, FusecError, InputError, ModelError, NotASubgroup,
                     NotSaturated)
from .fusion import FusionGenerators, FusionSystem, fusion_of_group, generate_fusion, is_saturated
from .groups import FiniteGroup, GroupHom, Subgroup
from .library import named_group

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded", "FiniteGroup", "FusecError", "FusionGenerators", "FusionSystem",
    "GroupHom", "InputError", "ModelError", "NotASubgroup", "NotSaturated", "Subgroup",
    "fusion_of_group", "generate_fusion", "is_saturated", "named_group",
]
