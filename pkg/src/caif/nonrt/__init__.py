"""Non-RT RIC layer: SLA Slice rApp, A1 Policy Handler, O1 history store."""

from caif.nonrt.history import DEFAULT_RING_SIZE, NoData, PerfHistoryEntry, PerfHistoryStore
from caif.nonrt.rapps import (
    A1Dispatcher,
    A1Policy,
    DispatchFailure,
    FeasibilityRejected,
    HttpA1Dispatcher,
    Infeasible,
    NoHistory,
    NonPositiveCurrent,
    PolicyState,
    SlaSliceRapp,
    derive_target,
    feasibility_check,
)

__all__ = [
    "A1Dispatcher",
    "A1Policy",
    "DEFAULT_RING_SIZE",
    "DispatchFailure",
    "FeasibilityRejected",
    "HttpA1Dispatcher",
    "Infeasible",
    "NoData",
    "NoHistory",
    "NonPositiveCurrent",
    "PerfHistoryEntry",
    "PerfHistoryStore",
    "PolicyState",
    "SlaSliceRapp",
    "derive_target",
    "feasibility_check",
]
