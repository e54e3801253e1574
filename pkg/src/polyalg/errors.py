"""Exception hierarchy shared by every module."""


class PolyalgError(Exception):
    """Base class for all errors raised by polyalg."""


class InputError(PolyalgError):
    """Malformed or out-of-class input."""


class EmptyInput(InputError):
    pass


class Disconnected(InputError):
    def __init__(self, components):
        self.components = components
        sizes = ", ".join(str(len(c)) for c in components)
        super().__init__(f"cells split into {len(components)} components (sizes {sizes})")


class BudgetExceeded(PolyalgError):
    """A configured search or enumeration cap was hit."""


class SearchBudgetExceeded(BudgetExceeded):
    pass


class UnmatchedConfiguration(PolyalgError):
    """No labelling rule applies at some position of the path."""


class NoOrderFound(PolyalgError):
    pass


class NotFlag(PolyalgError):
    pass


class IncompleteOrder(PolyalgError):
    def __init__(self, missing):
        self.missing = missing
        super().__init__(f"{len(missing)} facet(s) missing from the constructed order")
