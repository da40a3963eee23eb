"""Modeling input: the MoT profile, XMI ingestion and model validation.

Imports are lazy so that profile-only consumers (for example loading an
extension file) do not pull in ``lxml``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from motflow.model.profile import Category as Category
    from motflow.model.profile import ProfileRegistry as ProfileRegistry
    from motflow.model.profile import Stereotype as Stereotype
    from motflow.model.profile import builtin_profile as builtin_profile
    from motflow.model.profile import lookup as lookup
    from motflow.model.profile import register as register
    from motflow.model.validation import ValidationMode as ValidationMode
    from motflow.model.validation import ValidationReport as ValidationReport
    from motflow.model.validation import validate_model as validate_model
    from motflow.model.xmi import UmlModel as UmlModel
    from motflow.model.xmi import parse_xmi as parse_xmi

__all__ = [
    "Category",
    "ProfileRegistry",
    "Stereotype",
    "builtin_profile",
    "lookup",
    "register",
    "ValidationMode",
    "ValidationReport",
    "validate_model",
    "UmlModel",
    "parse_xmi",
]


def __getattr__(name: str):
    if name in {"Category", "ProfileRegistry", "Stereotype", "builtin_profile", "lookup", "register"}:
        from motflow.model import profile as mod

        return getattr(mod, name)
    if name in {"ValidationMode", "ValidationReport", "validate_model"}:
        from motflow.model import validation as mod

        return getattr(mod, name)
    if name in {"UmlModel", "parse_xmi"}:
        from motflow.model import xmi as mod

        return getattr(mod, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
