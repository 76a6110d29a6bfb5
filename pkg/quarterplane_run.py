#!/usr/bin/env python3
"""
Quarterplane Easy Runner
Simple script to run Quarterplane without installing it
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from quarterplane.cli import main

if __name__ == "__main__":
    main()
