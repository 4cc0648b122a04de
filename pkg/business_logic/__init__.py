"""Computational core of lcert.

Modules:
    core_measure: step functions, distribution functions, rearrangements
    norms: Lorentz and Λ_φ quasi-norms, fundamental functions
    calderon: Calderón-type operators and their closed forms
    quadrature: adaptive Gauss–Legendre rule
    operators_rn: Riesz, maximal and Hilbert operators on radial inputs
    certify: lower-bound certificates, sweeps and probes
"""
import logging

logging.getLogger(__name__).addHandler(logging.NullHandler())
