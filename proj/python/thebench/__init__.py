"""Categorial grammar workbench: analysis, ranking, case functions, training."""

from ._thebench import BenchError, Grammar, alpha_equiv, category, normalize, train

__all__ = ["BenchError", "Grammar", "alpha_equiv", "category", "normalize", "train"]
__version__ = "1.0.0"
