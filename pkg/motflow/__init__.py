"""motflow: compile MoT-annotated UML use-case models into Node-RED applications."""

__version__ = "0.9.0"
