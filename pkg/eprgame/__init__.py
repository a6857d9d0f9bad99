"""
eprgame.

Three-player symmetric games played with coins and with no-signaling
(EPR-setting) joint probabilities.
"""

__version__ = "0.1.0"
