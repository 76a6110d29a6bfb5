"""
Quarterplane Module Entry Point
Allows running Quarterplane as a module: python -m quarterplane
"""

from quarterplane.cli import main

if __name__ == "__main__":
    main()
