"""Exact computations with Daugavet- and delta-points in binary tree spaces
and in spaces with 1-unconditional bases."""
from .errors import *  # noqa: F401,F403
from .tree import (ROOT, TreeKind, enumerate_admissible_sets, enumerate_unit_antichains,
                   is_admissible, is_unit_antichain, rank, unrank)
from .spaces import (C0, L1, Lorentz, TreeNorm, TreeVector, norm, parse_backend, project,
                     remove)
from .functionals import NormedFunctional
from .minimal_sets import (all_minimal_sets, delta_refutation, families, minimal_norming_set,
                           weak_nbhd_bound)
from .points import (daugavet_check, daugavet_refute_XB, delta_witness_XB, dyadic_check,
                     geometric, slice_sup_distance, z_tree, z_vector)
from .construct import (daugavetify, decompose_into_DB, decompose_into_F, shift,
                        standard_vector)
from .geometry import lasq_probe, octahedral_probe, octahedral_sweep, weak_nbhd_diameter_DB

__version__ = "0.1.0"
