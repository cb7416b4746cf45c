class GraphError(ValueError):
    """Invalid input: malformed graphs, unknown vertices, bad arguments."""


class ContractViolation(ArithmeticError):
    """A numerical identity the library guarantees failed its tolerance."""
