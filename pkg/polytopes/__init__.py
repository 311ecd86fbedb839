"""
Exact-arithmetic core: graphs, polytopes, perturbation, MGFs, Ehrhart
polynomials, the central fast path and the brute-force oracle.

Nothing in this package reads Django settings.
"""
