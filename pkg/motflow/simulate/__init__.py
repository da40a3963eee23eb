"""Flow simulation: scenarios, the interpreter and trace recording."""

from motflow.simulate.recorder import SimulationTrace, TraceRecorder, trace_from_dict, write_db_dump
from motflow.simulate.runtime import FlowSimulator, run_simulation, topic_matches
from motflow.simulate.scenario import Injection, SimulationScenario, load_scenario, parse_scenario

__all__ = [
    "FlowSimulator",
    "Injection",
    "SimulationScenario",
    "SimulationTrace",
    "TraceRecorder",
    "load_scenario",
    "parse_scenario",
    "run_simulation",
    "topic_matches",
    "trace_from_dict",
    "write_db_dump",
]
