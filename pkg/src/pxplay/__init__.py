"""pxplay: pixels-to-buttons imitation learning on a built-in 2D duel arena."""

__version__ = "0.1.0"
