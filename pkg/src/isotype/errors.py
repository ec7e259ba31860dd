"""Exception hierarchy shared by the library and the CLI."""


class IsotypeError(Exception):
    """Base class for all library errors."""


class InputError(IsotypeError, ValueError):
    """Malformed input: bad file, bad element syntax, mismatched arguments."""


class SpecError(InputError):
    """A group description is used outside its preconditions."""


class CapExceeded(IsotypeError):
    """An enumeration would exceed a configured size cap."""

    def __init__(self, what, size, cap):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what} too large: {size} > cap {cap}")
