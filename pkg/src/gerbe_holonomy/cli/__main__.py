"""
CLI package entry point for gerbe-holonomy.

This allows running the CLI with: python -m gerbe_holonomy.cli
"""

from .main import main

if __name__ == "__main__":
    main()
