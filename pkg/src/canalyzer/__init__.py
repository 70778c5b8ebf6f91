"""canalyzer: a static analyzer for a small C subset based on abstract
interpretation over pluggable numeric domains."""

from __future__ import annotations

from .api import analyze_file, analyze_source
from .engine import AnalysisResult, EngineConfig, analyze_function
from .frontend import load
from .normalizer import normalize

__version__ = "0.1.0"

__all__ = ["analyze_file", "analyze_source", "analyze_function", "AnalysisResult",
           "EngineConfig", "load", "normalize", "__version__"]
