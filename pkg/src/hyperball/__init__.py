"""Interactive exploration of high-dimensional data along 3D subspaces."""

__version__ = "0.1.0"
