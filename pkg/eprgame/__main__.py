"""
Command line calls are redirected to cli.py.
"""

from eprgame.cli import app

if __name__ == "__main__":
    app()
