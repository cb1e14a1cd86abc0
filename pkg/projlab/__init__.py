"""projlab - numerical lab for projection constants of polynomial spaces"""

__version__ = "0.2.0"
