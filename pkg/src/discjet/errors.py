"""Exception types shared across the package.

Two failure modes are distinguished so that callers (in particular the CLI)
can map them to different exit codes:

* ``SchemaError`` -- a JSON document does not have the expected shape;
* ``PreconditionError`` -- the input parses fine but violates a mathematical
  precondition (non-unit linear part, non-nilpotent constant term, ...).
"""


class SchemaError(ValueError):
    """Raised when a serialized document fails structural validation."""


class PreconditionError(ValueError):
    """Raised when an operation's mathematical precondition is violated."""
