"""Backward-forward perfect simulation of one neuron in a Hawkes network."""

from ._kalikow import (
    FiniteHawkesModel,
    InsufficientData,
    InvalidModel,
    IoError,
    KalikowModel,
    LatticeGaussianHawkesModel,
    LimitExceeded,
    SimulationRecord,
    dominating_tree,
    ks_two_sample,
    load_record,
    mann_whitney,
    rate_test,
    run_cli,
    simulate_bf,
    simulate_ogata,
)

__all__ = [
    "FiniteHawkesModel",
    "InsufficientData",
    "InvalidModel",
    "IoError",
    "KalikowModel",
    "LatticeGaussianHawkesModel",
    "LimitExceeded",
    "SimulationRecord",
    "dominating_tree",
    "ks_two_sample",
    "load_record",
    "mann_whitney",
    "rate_test",
    "run_cli",
    "simulate_bf",
    "simulate_ogata",
]
