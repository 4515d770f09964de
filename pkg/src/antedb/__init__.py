"""Exact-arithmetic database of exponent bounds for the Riemann zeta-function.

Exponent pairs and the exponential-sum exponent beta(alpha), the growth
exponent mu(sigma), large-value exponents LV/LV_zeta(sigma, tau), the
zero-density exponent A(sigma), and additive-energy analogues, all stored
and combined over exact rational polytopes with provenance-carrying
derivations.
"""

__version__ = "0.1.0"
