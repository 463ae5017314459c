"""
Exact homological algebra over Z/n: rings, modules, complexes and t-structures.
"""
