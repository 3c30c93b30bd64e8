#!/usr/bin/env python3
"""Entry point for running stratawave.cli as a module."""

import sys

from stratawave.cli import main

if __name__ == "__main__":
    sys.exit(main())
