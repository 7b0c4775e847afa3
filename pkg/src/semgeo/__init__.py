"""semgeo: semantic-geometry workbench for multilingual embedding spaces.

Loads multi-level lexical datasets, obtains embeddings (HTTP providers or a
deterministic offline mock), projects them with a diffusion-potential
pipeline and a suite of comparison reducers, and scores the resulting
geometry (clustering, branching, spirals, collapse, script separation,
modality integration).
"""

__version__ = "0.1.0"
