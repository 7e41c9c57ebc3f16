from .config_models import RunConfig
from .report_models import (
    CertificateCheck,
    CertificateReport,
    CompositionReport,
    MutationReport,
    MutationStep,
    OperadReport,
    QuasiClusterReport,
)

__all__ = [
    "RunConfig",
    "CertificateCheck",
    "CertificateReport",
    "CompositionReport",
    "MutationReport",
    "MutationStep",
    "OperadReport",
    "QuasiClusterReport",
]
