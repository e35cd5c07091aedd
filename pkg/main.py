#!/usr/bin/env python3
"""
Manakov Lab - Main Entry Point
simulate / verify / sweep commands for Manakov-type flows on so(n)
"""

import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli.commands import run


def main():
    """Main entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
