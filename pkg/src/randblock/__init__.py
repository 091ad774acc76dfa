"""Random block operators [[H, B], [B, -H]] on finite lattice cubes:
construction, disorder ensembles, spectral identity checks and density of
states statistics."""

__version__ = "0.1.0"

from .eigen import backend_name

__all__ = ["backend_name", "__version__"]
