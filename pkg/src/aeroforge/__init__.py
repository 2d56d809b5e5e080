"""aeroforge: deterministic synthetic aerial imagery with exact labels."""

__version__ = "0.1.0"
