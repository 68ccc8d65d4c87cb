"""
Main entry point for direct package execution.
"""

import sys

from relbackflow.cli import main

if __name__ == "__main__":
    sys.exit(main())
