# API package
# HTTP endpoints for the masked-LM wire protocol

from . import maskfill

__all__ = ["maskfill"]
