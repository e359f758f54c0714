"""Single-molecule tracking in stochastic reaction networks."""

import json

from ._core import (
    BoundUnavailable,
    InvalidArgument,
    Model,
    ModelError,
    SimulationError,
    load_model,
    parse_model,
    simulate_single,
    simulate_ssa,
    simulate_tracked,
    solve_fluid,
)
from . import _core


def bounds(model, volume, epsilon, t, gamma=1.0):
    """Error-bound report for a fluid tube of radius epsilon over [0, t]."""
    return json.loads(_core.bounds_json(model, volume, epsilon, t, gamma))


def run(mode, model, **options):
    """Runs one experiment like the CLI subcommand `mode` and returns its summary."""
    config = dict(options, mode=mode, model=str(model))
    if "out_dir" in config:
        config["out_dir"] = str(config["out_dir"])
    return json.loads(_core.run_json(json.dumps(config)))


__all__ = [
    "BoundUnavailable",
    "InvalidArgument",
    "Model",
    "ModelError",
    "SimulationError",
    "bounds",
    "load_model",
    "parse_model",
    "run",
    "simulate_single",
    "simulate_ssa",
    "simulate_tracked",
    "solve_fluid",
]
