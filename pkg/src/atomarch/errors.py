"""Exception hierarchy. Every model failure derives from ModelError."""


class ModelError(Exception):
    """Base class for errors raised by the models (CLI exit status 1)."""


class ParseError(ModelError, ValueError):
    """A quantity string does not match the unit grammar."""


class DimensionError(ModelError, TypeError):
    """A quantity has the wrong physical dimension for the operation."""


class DomainError(ModelError, ValueError):
    """An input lies outside the domain where a model is defined."""


class ConfigError(ModelError, ValueError):
    """A scenario or call is missing inputs, or they are inconsistent."""


class UnknownEntryError(ModelError, LookupError):
    """A catalog lookup failed."""

    def __str__(self):
        # LookupError.__str__ would repr() a lone argument
        return str(self.args[0]) if self.args else ""
