#!/usr/bin/env python3
"""CoopEq - cooperative equilibrium solver. Entry point."""

import sys
import os

# Ensure src is on path when running as script
sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))

from coopeq.app import main

if __name__ == "__main__":
    sys.exit(main())
