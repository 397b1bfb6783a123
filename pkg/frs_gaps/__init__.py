"""frs-gaps: Folded Reed-Solomon codes and proximity-gap experiments."""

__version__ = "0.1.0"
