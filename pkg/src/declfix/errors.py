"""Exception types shared across the package."""


class DeclfixError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(DeclfixError):
    """AST JSON violates the node schema (bad _nodetype, unknown key, ...)."""


class LexError(DeclfixError):
    def __init__(self, coord, message):
        super().__init__(f"{coord}: lexical error: {message}")
        self.coord = coord


class CSyntaxError(DeclfixError):
    """Raised when the token stream does not match the grammar subset."""

    def __init__(self, coord, expected, found):
        exp = ", ".join(sorted(expected)) if expected else "?"
        super().__init__(f"{coord}: error: expected {exp}, found {found!r}")
        self.coord = coord
        self.expected = set(expected)
        self.found = found


class DuplicateDecl(DeclfixError):
    def __init__(self, name, coord):
        super().__init__(f"{coord}: error: duplicate declaration of '{name}'")
        self.name = name
        self.coord = coord


class CapacityError(DeclfixError):
    """A terminal-code band ran out of room."""


class RangeError(DeclfixError):
    """Index outside the valid range for a dense vocabulary vector."""


class DimError(DeclfixError):
    """Mismatched tensor dimensions."""


class UnknownToken(DeclfixError):
    def __init__(self, code):
        super().__init__(f"composite code {code} is not in the vocabulary")
        self.code = code


class EmptyDataset(DeclfixError):
    """Training was requested on a vocabulary with no training pairs."""


class ConflictError(DeclfixError):
    def __init__(self, name, function):
        super().__init__(
            f"cannot insert declaration of '{name}': already declared in '{function}'"
        )
        self.name = name
        self.function = function


class EmitError(DeclfixError):
    """Node kind outside the emitter's supported subset."""


class MissingTruth(DeclfixError):
    def __init__(self, path):
        super().__init__(f"no truth annotation found for {path}")
        self.path = path


class ModelFormatError(DeclfixError):
    """Model file is corrupt or does not match the expected layout."""


class FixtureIntegrityError(DeclfixError):
    """A bundled fixture violates one of its invariants."""
