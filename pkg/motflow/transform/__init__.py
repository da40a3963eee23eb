"""Model transformation: template repository, expansion and the component graph."""

from motflow.transform.builder import transform_model
from motflow.transform.expander import expand
from motflow.transform.graph import ComponentGraph, dump_graph, load_graph
from motflow.transform.templates import BUILTIN_TEMPLATE_DIR, TemplateRepo, load_templates

__all__ = [
    "BUILTIN_TEMPLATE_DIR",
    "ComponentGraph",
    "TemplateRepo",
    "dump_graph",
    "expand",
    "load_graph",
    "load_templates",
    "transform_model",
]
