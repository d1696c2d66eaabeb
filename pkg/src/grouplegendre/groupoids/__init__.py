"""Generating-function engines for three symplectic groupoids.

* :mod:`.constant_poisson`: a vector space with constant Poisson tensor,
  realized in T*V with twisted projections;
* :mod:`.cotangent_group`: T*SU(N) over su(N)*;
* :mod:`.pair`: the pair groupoid S x S-bar of a symplectic vector space.
"""
