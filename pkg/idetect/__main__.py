"""
Isolate-Detect - Main Entry Point

Runs the command-line interface.
"""

import logging

from idetect.cli import app as cli_app

logger = logging.getLogger(__name__)


def main() -> None:
    """Main entry point for the idetect command."""
    cli_app()


if __name__ == "__main__":
    main()
