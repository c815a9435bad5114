class MerkleError(Exception):
    pass


class ConfigError(MerkleError, ValueError):
    """Invalid tree parameters, hash name or input sizes."""


class EndOfTree(MerkleError):
    """All leaves have been consumed."""


class TraversalFault(MerkleError):
    """An internal scheduling invariant was violated.

    None of these should ever fire on a correct engine; tests treat any
    occurrence as a failure.
    """


class SlotCollision(TraversalFault):
    pass


class MissingNode(TraversalFault):
    pass


class StackFault(TraversalFault):
    pass


class StallFault(TraversalFault):
    """A higher TreeHash update found no bottom-level node waiting."""
