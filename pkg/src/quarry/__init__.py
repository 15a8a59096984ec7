"""quarry: graph-based static defect detection.

Source files are lowered to a compressed, statement-level code graph
(control flow, variable-annotated data flow, and call edges), persisted
as line-delimited JSON, and queried either through built-in defect
detectors or through a small declarative query language (.vql files).
"""

__version__ = "0.1.0"
