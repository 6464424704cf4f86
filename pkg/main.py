#!/usr/bin/env python3
"""Main entry point for the sparse recovery CLI."""

from src.cli.main import main

if __name__ == "__main__":
    main()
