"""
Free-association norms to semantic networks: preprocessing, network
construction, spreading activation, and the priming / bias experiments
run on top of them.
"""

__version__ = "0.1.0"


class FreeAssocException(Exception):
    pass
