"""Python bindings for the synlat simulation library."""

import json

from ._synlat import (  # noqa: F401
    InvalidArgument,
    NumericalFailure,
    __version__,
    bands,
    clean_exponents,
    ladder_hamiltonian,
    psi_loc,
)
from . import _synlat


def run(subcommand, **config):
    """Run a subcommand and return its manifest with table contents under "data"."""
    return json.loads(_synlat.run_json(subcommand, json.dumps(config)))


def reproduce(figure):
    return json.loads(_synlat.reproduce_json(figure))
