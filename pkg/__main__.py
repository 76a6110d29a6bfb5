#!/usr/bin/env python3
"""
Quarterplane Module Entry Point
Allows running Quarterplane from the repository root: python .
"""

from quarterplane.cli import main

if __name__ == "__main__":
    main()
