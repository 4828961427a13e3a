"""Exact and numerical toolkit for chordal Loewner evolution.

Subpackages:
    symbolic  - exact multivariate rational functions, Laurent extraction
    ward      - restriction correlators and the operator calculus on them
    virasoro  - central-extension algebra, Verma modules, null vectors
    maps      - branch-correct half-plane slit maps and the zipper
    loewner   - discrete Loewner evolution: driving, point flow, traces
    mc        - Monte Carlo estimators and martingale/drift checks
    cli       - command-line interface
"""

__version__ = "0.1.0"
