"""Dualtune - dual hyperparameter optimization for security bug report triage."""

__version__ = "0.1.0"
