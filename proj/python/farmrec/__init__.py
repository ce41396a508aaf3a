"""Python bindings for the farmrec record store."""

from ._core import Actor, FarmrecError, Service, http_request, openapi, templates

__all__ = ["Actor", "FarmrecError", "Service", "http_request", "openapi", "templates"]
