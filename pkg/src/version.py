"""Version information for kosweep."""

VERSION = "0.1.0"

def get_version():
    """Get the current version string."""
    return VERSION
