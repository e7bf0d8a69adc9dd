"""Local criteria for tile-transitivity of face-to-face tilings, checked on finite patches."""

__version__ = "0.1.0"

from .complex import RankedComplex, validate, adjacent_flag, flags_of, meet  # noqa: E402
from .metric import corona, tile_distance, is_corona_exact, exact_core  # noqa: E402
from .iso import isomorphic, automorphism_group  # noqa: E402
from .local import classify, check_conditions, find_local_k  # noqa: E402
from .generators import generate, min_radius  # noqa: E402
from .geometric import GeoTiling, check_geom_theorem  # noqa: E402

__all__ = ["RankedComplex", "validate", "adjacent_flag", "flags_of", "meet",
           "corona", "tile_distance", "is_corona_exact", "exact_core",
           "isomorphic", "automorphism_group", "classify", "check_conditions",
           "find_local_k", "generate", "min_radius", "GeoTiling",
           "check_geom_theorem", "__version__"]
