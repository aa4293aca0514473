"""Train and certify neural trial solutions of -eps y'' + b y' + c y = f."""

from ._pinncert import (
    Certificate,
    Family,
    Network,
    PinncertError,
    Problem,
    Report,
    SampleSet,
    TrainResult,
    Trial,
    ValidationReport,
    certified_report,
    constants,
    make_trial,
    registry_get,
    registry_names,
    run_cli,
    train,
    validate,
)

__all__ = [
    "Certificate",
    "Family",
    "Network",
    "PinncertError",
    "Problem",
    "Report",
    "SampleSet",
    "TrainResult",
    "Trial",
    "ValidationReport",
    "certified_report",
    "constants",
    "make_trial",
    "registry_get",
    "registry_names",
    "run_cli",
    "train",
    "validate",
]
