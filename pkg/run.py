#!/usr/bin/env python3
"""
Main entry point for the graphic analysis engine.
Loads config.env, configures logging and dispatches to the CLI.
"""

from __future__ import annotations

import logging
import os
import sys

from dotenv import load_dotenv


def main(argv=None) -> int:
    """Main entry point."""
    load_dotenv('config.env')
    logging.basicConfig(
        level=os.environ.get('GRAPHIC_LOG_LEVEL', 'WARNING').upper(),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )
    # Services read their configuration at import time, after config.env is loaded.
    from app.cli import main as cli_main
    return cli_main(argv)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
