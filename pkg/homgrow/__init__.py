"""
homgrow - homological growth invariants along towers of finite quotients.

Exact Smith-form homology, Fuglede-Kadison determinants and L2-torsion of
chain complexes over Z[Z^m], base change to finite quotients, homology of
finite abelian groups and the tower experiments built on them.

    python -m homgrow tower --example circle --levels 1,2,4,8
"""
__version__ = "0.1.0"
