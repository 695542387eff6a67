"""kosweep - command-line entry point."""

import sys

from src.cli.app import run


def main():
    """Run one kosweep command and return its exit code."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
