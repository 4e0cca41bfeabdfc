"""
Main entry point for the lattice protein move explorer.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
