"""Finite p-group engine for Schur sigma-group computations at p = 3.

Submodules:
  pcgroup      core pc-presentation arithmetic, subgroups, quotients, maps
  filtrations  Zassenhaus filtration, lower p-central series
  covers       p-cover, multiplicator/nucleus, immediate descendants
  schur        sigma-structure, powerfulness criterion, E-quotient recursion
  classify     the 19-class catalog, Massey-relator classification, IPADs
  heuristics   expected-frequency model and observed-vs-expected reports
  cli          command-line entry point
"""

__version__ = "0.1.0"
