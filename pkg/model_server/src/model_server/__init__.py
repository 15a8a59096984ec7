"""Reference classifier microservice for the classify/pair protocol."""

from model_server.model import KeywordModel
from model_server.server import create_server, main

__version__ = "0.1.0"

__all__ = ["KeywordModel", "create_server", "main"]
