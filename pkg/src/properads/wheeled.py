"""The wheeled graphical category: enumeration over all connected graphs,
the four coface types plus the exceptional inner coface, wheeled subgraphs
and graphical maps, factorization, codimension 2, and the embedding of the
wheel-free category."""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from . import analysis, substitution
from .analysis import ClassViolation
from .category import (
    GMap,
    Image,
    MapFactorization,
    MorphismError,
    SubgraphWitness,
    codegeneracy_map,
    codim2_alternative,
    codim2_alternatives,
    coface_map,
    compose,
    exceptional_coface,
    faces,
    factorize,
    identity_map,
    image,
    is_graphical,
    maps_equal_up_to_source_iso,
    subgraph_witness,
)
from .category import enumerate_elements as _enumerate
from .category import enumerate_graphical_maps as _enumerate_maps
from .category import is_finite as _is_finite
from .decorated import DecoratedGraph
from .graphs import GGraph


def enumerate_wheeled(G: GGraph, max_vertices: int) -> List[DecoratedGraph]:
    """Elements of the graphical wheeled properad with bounded shape size,
    up to listing (exceptional edges and loops included)."""
    return _enumerate(G, max_vertices, wheeled=True)


def is_finite_wheeled(G: GGraph) -> bool:
    """Finite iff G is simply connected, except the exceptional wheel."""
    return _is_finite(G, wheeled=True)


def wheeled_faces(K: GGraph) -> List[GMap]:
    return faces(K, wheeled=True)


def wheeled_coface(K: GGraph, fact: substitution.Factorization) -> GMap:
    return coface_map(K, fact, wheeled=True)


def wheeled_codegeneracy(G: GGraph, v: str) -> GMap:
    return codegeneracy_map(G, v)


def wheeled_subgraph_witness(f: GMap) -> Optional[SubgraphWitness]:
    return subgraph_witness(f, wheeled=True)


def is_wheeled_graphical(f: GMap) -> bool:
    return is_graphical(f, wheeled=True)


def wheeled_image(f: GMap) -> Image:
    return image(f, wheeled=True)


def wheeled_factorize(f: GMap, order_key=None) -> MapFactorization:
    return factorize(f, wheeled=True, order_key=order_key)


def image_outer_split(f: GMap) -> Tuple[GMap, GMap]:
    """The unique factorization into an image-surjective map followed by a
    composition of outer coface maps."""
    img = image(f, wheeled=True)
    return img.to_image, img.from_image


def wheeled_codim2(d_v: GMap, d_u: GMap) -> Tuple[GMap, GMap]:
    return codim2_alternative(d_v, d_u, wheeled=True)


def wheeled_codim2_all(d_v: GMap, d_u: GMap) -> List[Tuple[GMap, GMap]]:
    return codim2_alternatives(d_v, d_u, wheeled=True)


def embed_gamma(f: GMap) -> GMap:
    """A properadic graphical map, revalidated as a wheeled graphical map."""
    g = GMap(f.source, f.target, dict(f.f0), dict(f.f1),
             tag=f.tag).check(wheeled=True)
    if not is_wheeled_graphical(g):
        raise MorphismError("embedding produced a non-graphical map")
    return g


def enumerate_wheeled_graphical_maps(G: GGraph, K: GGraph) -> List[GMap]:
    return _enumerate_maps(G, K, wheeled=True)
