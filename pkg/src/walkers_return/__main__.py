"""Allow `python -m walkers_return` as an alias for the console script."""

from .cli import console_main

console_main()
