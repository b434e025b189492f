"""Read-only plotting layer over the integrator CLI's CSV outputs.

No numerical computation happens here beyond plotting transforms (norms,
integer offsets, log scales); the integrator package remains the single
source of numerical truth.
"""

from .schema import SchemaError, read_table
from .render import render

__all__ = ["SchemaError", "read_table", "render"]
