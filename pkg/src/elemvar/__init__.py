"""Elementary abelian subalgebra varieties over small finite fields.

Exact linear algebra (`fq`), restricted Lie algebras given by structure
constants (`liealg`), plane enumeration on Grassmannian charts
(`grassmann`, `evariety`), module restrictions with radical and socle
layers (`repmod`), pointwise rank tables for families of planes
(`sheaffib`), and a command line front end (`cli`).
"""

from .fq import FqContext, FqMatrix, SubspaceBasis
from .liealg import MatrixLieAlgebra
from .evariety import enumerate_E_dfs, enumerate_E_scan, is_elementary, max_elementary_dim
from .repmod import Representation, rad_j, restrict, soc_j
from .sheaffib import fiber_table
from .verify import run_all, run_suite

__version__ = "0.1.0"

__all__ = [
    "FqContext",
    "FqMatrix",
    "MatrixLieAlgebra",
    "Representation",
    "SubspaceBasis",
    "enumerate_E_dfs",
    "enumerate_E_scan",
    "fiber_table",
    "is_elementary",
    "max_elementary_dim",
    "rad_j",
    "restrict",
    "run_all",
    "run_suite",
    "soc_j",
]
