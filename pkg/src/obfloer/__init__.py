"""Heegaard Floer invariants of contact open books, from region-list diagrams.

The package is organized bottom-up:

    linalg   exact integer / GF(2) linear algebra, lattice points of polytopes
    diagram  region-list encoding, validation, curves, generators
    domains  domains between generators, Maslov index, SpinC structure
    nicefy   finger moves until every unpointed region is a bigon or square
    floer    hat differential, homology, contact class, spectral order
    cli      command line front end
"""

__version__ = "0.1.0"
