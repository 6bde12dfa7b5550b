"""Frobenius splittings of seminormal affine monoid algebras."""

from .cone_geom import FaceLatticeCone, build_cone
from .frob_hom import FracPoint, Mode, is_hom, is_hom_oracle
from .monoid import SeminormalMonoid

__all__ = ["FaceLatticeCone", "FracPoint", "Mode", "SeminormalMonoid", "build_cone", "is_hom", "is_hom_oracle"]
