"""Gear-and-generator biomechanical energy harvester design toolkit."""

try:
    from ._harvestsim import *  # noqa: F401,F403
    from ._harvestsim import __version__  # noqa: F401
except ImportError:
    # Build-tree layout: the extension sits on sys.path next to this package.
    from _harvestsim import *  # noqa: F401,F403
    from _harvestsim import __version__  # noqa: F401
