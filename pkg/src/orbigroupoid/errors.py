"""Exception types shared across the package.

Every error carries a stable ``code`` string so the command line tool can
report failures uniformly, and a ``witness`` payload with the offending datum
when one exists.
"""
from __future__ import annotations


class OrbiError(Exception):
    """Base class for all errors raised by this package."""

    code = "ERROR"

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UndefinedVertex(OrbiError):
    """A map refers to a vertex that is not in the relevant space."""

    code = "UNDEFINED_VERTEX"


class CodomainMismatch(OrbiError):
    """Two maps that must share a codomain (or compose) do not line up."""

    code = "CODOMAIN_MISMATCH"


class InvalidAction(OrbiError):
    """A purported group action fails the action axioms or is not by
    automorphisms of the space."""

    code = "INVALID_ACTION"


class GlueNotIso(OrbiError):
    """A gluing map in an atlas is not a local isomorphism onto its image,
    or its twist data is not compatible with it."""

    code = "GLUE_NOT_ISO"


class BadOverlap(OrbiError):
    """Interval chart data whose overlaps cannot produce a valid atlas."""

    code = "BAD_OVERLAP"


class CompositionNotClosed(OrbiError):
    """An atlas admits a composable pair of arrows whose composite cannot be
    expressed by any arrow of the atlas groupoid."""

    code = "COMPOSITION_NOT_CLOSED"


class BadWitness(OrbiError):
    """Witness data for a two-cell comparison fails validation."""

    code = "BAD_WITNESS"


class NotEtale(OrbiError):
    """Operation requires an etale groupoid but the input is not one."""

    code = "NOT_ETALE"


class ParseError(OrbiError):
    """Text document that does not conform to the groupoid file format."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 0, col: int = 0, witness=None):
        super().__init__(message, witness)
        self.line = line
        self.col = col

    def __str__(self):
        base = super().__str__()
        if self.line:
            return f"line {self.line}, col {self.col}: {base}"
        return base


class DanglingId(ParseError):
    """A document section refers to an identifier that was never declared."""

    code = "DANGLING_ID"
