from koenig.graph import LayeredGraph, NoRay, Ray, check_chain, find_ray
from koenig.embedding import (
    EmbeddingInstance, atomic_schedule, build_layers, check_schedule, instance_from_catalog,
    interpret_constants,
)
from koenig.instance import parse_instance
