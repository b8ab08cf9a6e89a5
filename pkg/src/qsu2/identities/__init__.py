"""Identity catalog, suite runner, report writer and command line interface."""
from .catalog import (CATALOG, CatalogError, CheckConfig, CheckResult, ResourceError, run_check,
                      run_suite)
from .report import REPORT_SCHEMA, build_report, validate

__all__ = ["CATALOG", "CatalogError", "CheckConfig", "CheckResult", "ResourceError", "run_check",
           "run_suite", "REPORT_SCHEMA", "build_report", "validate"]
