"""One-call entry points: source text in, analysis results out."""

from __future__ import annotations

from .engine import AnalysisResult, EngineConfig, analyze_function, assertion_texts
from .frontend import load
from .normalizer import normalize


def analyze_source(source: str, filename: str = "<input>",
                   config: EngineConfig = EngineConfig()) -> list[AnalysisResult]:
    """Analyze every function in ``source`` after normalizing it."""
    results = []
    for fn in load(source, filename):
        texts = assertion_texts(fn)
        results.append(analyze_function(normalize(fn), config, texts))
    return results


def analyze_file(path: str, config: EngineConfig = EngineConfig()) -> list[AnalysisResult]:
    with open(path, encoding="utf-8") as fh:
        return analyze_source(fh.read(), path, config)
