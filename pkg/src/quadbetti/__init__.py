"""Betti number bounds for intersections of real projective quadrics.

Exact rational arithmetic for the certified parts (inertia, pencil roots,
net curve tracing); floating point only in the homology oracle prefilter
and the critical-value estimate used to start the epsilon schedule.
"""

__version__ = "0.1.0"
