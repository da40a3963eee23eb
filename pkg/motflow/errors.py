"""Exception hierarchy shared by every pipeline stage.

Each error carries the stable ``code`` used in JSON reports and the process
``exit_code`` the CLI returns for it (1 = domain error, 2 = environment/IO).
"""

from __future__ import annotations


class MotError(Exception):
    """Base class for all motflow failures."""

    code = "MotError"
    exit_code = 1

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict[str, str]:
        return {"error": self.code, "message": self.message}


# -- profile ----------------------------------------------------------------
class ProfileError(MotError):
    code = "ProfileError"


class UnknownStereotype(MotError):
    code = "UnknownStereotype"


class DuplicateStereotype(MotError):
    code = "DuplicateStereotype"


# -- xmi --------------------------------------------------------------------
class MalformedXml(MotError):
    code = "MalformedXml"
    exit_code = 2


class NotXmi(MotError):
    code = "NotXmi"
    exit_code = 2


class DanglingReference(MotError):
    code = "DanglingReference"


class DuplicateId(MotError):
    code = "DuplicateId"


class InvalidModel(MotError):
    code = "InvalidModel"


# -- transform --------------------------------------------------------------
class TemplateSyntax(MotError):
    code = "TemplateSyntax"


class UnresolvedChild(MotError):
    code = "UnresolvedChild"


class CyclicTemplate(MotError):
    code = "CyclicTemplate"


class NoApplicableTemplate(MotError):
    code = "NoApplicableTemplate"


class EmptyGraph(MotError):
    code = "EmptyGraph"


class GraphFormatError(MotError):
    code = "GraphFormatError"


# -- configure --------------------------------------------------------------
class ManifestError(MotError):
    code = "ManifestError"


class UnknownComponent(MotError):
    code = "UnknownComponent"


class UnknownProperty(MotError):
    code = "UnknownProperty"


class TypeMismatch(MotError):
    code = "TypeMismatch"


class ProviderUnavailable(MotError):
    code = "ProviderUnavailable"


class DuplicateInstance(MotError):
    code = "DuplicateInstance"


# -- emit -------------------------------------------------------------------
class NotReady(MotError):
    code = "NotReady"


class InvalidDocument(MotError):
    code = "InvalidDocument"


class IoFailure(MotError):
    code = "IoFailure"
    exit_code = 2


# -- simulate ---------------------------------------------------------------
class ScenarioError(MotError):
    code = "ScenarioError"


class UnresolvedSecret(MotError):
    code = "UnresolvedSecret"


class UnknownNodeType(MotError):
    code = "UnknownNodeType"


class SimulationError(MotError):
    code = "SimulationError"


class ExpressionError(SimulationError):
    code = "ExpressionError"
