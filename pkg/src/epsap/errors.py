"""Shared exception types."""


class SearchCapExceeded(RuntimeError):
    """A search exceeded its configured node/work budget."""


class MemoryGuardExceeded(RuntimeError):
    """Materializing an object would exceed its configured size cap."""
