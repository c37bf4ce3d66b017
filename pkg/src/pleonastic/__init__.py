"""Detection of pleonastic *it* from parsed sentences and corpus hit counts."""

__version__ = "0.1.0"
