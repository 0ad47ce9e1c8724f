"""Network-aware profile daemon.

Identifies the attached network, applies per-network application settings,
and watches TCP traffic to notify about established HTTPS tunnels and
audio/video streaming away from the home network.
"""

__version__ = "0.1.0"
