"""Exact-arithmetic toolkit for diagram calculus, quantum SL(2) module data at
roots of unity, fusion rings, and ribbon/modularity verification.

Subpackage map:
    cyclo   exact cyclotomic field Q(zeta_{4p})
    tldiag  Temperley-Lieb diagram category at d = -(q + q^{-1})
    qrep    weight modules, R-matrix braiding, ribbon twist
    fusion  Z+-rings, morphisms, Frobenius-Perron dimensions
    ribbon  twist tables, monodromy spectra, Mueger-center tests
    cli     command-line front end with a small expression DSL
"""

__version__ = "0.1.0"

from . import cyclo, tldiag, qrep, fusion, ribbon, cli  # noqa: F401
