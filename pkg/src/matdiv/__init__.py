"""Matrix divisors, Z-gradings and genus-0 Lax operator spaces in exact arithmetic."""

__version__ = "0.1.0"
