"""
levylt: local-time statistics of symmetric Lévy random walks.

Sub-packages:
- core: pydantic schemas, the error hierarchy, configuration/logging bootstrap
        and the shared quadrature helpers.
- analytic: stable densities, resolvents and local-time distributions/moments.
- montecarlo: path sampling and the statistical estimators used as an
              independent check of the analytic results.
- cli: the `levylt` command-line front end.
"""

__version__ = "0.1.0"
