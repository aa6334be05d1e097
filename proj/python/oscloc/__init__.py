"""Forced-oscillation source localization from generator measurements."""

from ._core import (
    Case,
    IdentificationError,
    NumericalError,
    OsclocError,
    Params,
    ParseError,
    ReducedModel,
    ScanResult,
    Trajectory,
    ValidationError,
    __version__,
    learn,
    load_case,
    localize,
    params_from_json,
    parse_case,
    read_trajectory,
    reduce,
    run_scenario,
    simulate,
    true_params,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
