"""
armarket: simulation and analysis toolkit for the auto-regressive market
model of wealth distribution and the kinetic exchange models it subsumes.

Sub-packages:
- noise       : market-return variable ξ and its mean schedule a(t)
- dynamics    : AR market simulators (quenched, annealed, growing) and
                pairwise kinetic exchange models (CCM, CC, generic, Yakovenko)
- analytics   : exact / semi-analytic steady states and reference densities
- estimation  : empirical distributions, KS distance, moments, Hill tail fits
- experiments : declarative experiment runner (``python -m armarket``)
"""

__version__ = "0.1.0"
