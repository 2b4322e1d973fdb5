"""Zero modules of proper rational matrices from state-space data."""
from .exceptions import *  # noqa: F401,F403
from .matrixcore import Subspace, Tolerance, DEFAULT_TOL  # noqa: F401
from .statespace import StateSpace, evaluate, para_conjugate, dual, series, minimal_realization, mcmillan_degree  # noqa: F401
from .geometry import profile, vstar, cstar, rstar  # noqa: F401
from .zeromod import zero_report, max_zero_triple, fzk_triple, kernel_structure, k0_function  # noqa: F401
from .innerfact import kernel_inner, square_inner_extension, right_reduce, left_reduce, squaring  # noqa: F401

__version__ = "0.1.0"
