"""Modules, resolutions, chain complexes, Tor and connectivity."""

from .complexes import (
    ChainComplex, ChainMap, ConnectivityResult, connectivity_of_complex, connectivity_of_map,
    mapping_fibre, symmetrized_tor, with_coefficients,
)
from .modules import (
    FiniteModule, FreeResolution, ModPresentation, ModuleError, free_resolution, lift_chain_map,
    matrix_tensor_hom, tensor_complex, tor, tor_table,
)
from .cache import ResolutionCache
from .poly import (
    PolyFreeComplex, PolyModule, PolyModuleMap, PolyResolution, poly_free_resolution,
    poly_lift_chain_map, poly_tor,
)
