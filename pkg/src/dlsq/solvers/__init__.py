"""Distributed least-squares solvers simulated over a mesh network."""

from .dlms import DlmsConfig, dlms_run
from .dmcgls import McglsConfig, dmcgls_run, mcgls_centralized
from .dms import DmsConfig, dms_run
from .drls import DrlsConfig, drls_run, rls_centralized

SOLVERS = {
    "dms": (dms_run, DmsConfig),
    "dmcgls": (dmcgls_run, McglsConfig),
    "dlms": (dlms_run, DlmsConfig),
    "drls": (drls_run, DrlsConfig),
}

__all__ = [
    "DlmsConfig",
    "DmsConfig",
    "DrlsConfig",
    "McglsConfig",
    "SOLVERS",
    "dlms_run",
    "dmcgls_run",
    "dms_run",
    "drls_run",
    "mcgls_centralized",
    "rls_centralized",
]
