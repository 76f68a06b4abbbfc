"""Pipeline configuration and its key=value file format.

The config file is plain UTF-8 text, one `key = value` per line, `#`
comments allowed. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path


@dataclass
class PipelineConfig:
    store_dir: str = "store"
    seed_keywords: str = ""
    manifest: str = ""
    rcp_threshold: float = 0.01
    keyword_budget: int = 60_000
    timeline_limit: int = 100
    search_limit: int = 100
    revisit_cadence_days: float = 7.0
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 50
    batch_size: int = 64
    threshold: float = 0.5
    rate_requests: int = 0  # 0 disables the rate budget
    rate_window_days: float = 1.0
    seed: int = 42

    def validate(self) -> None:
        if not (0 < self.rcp_threshold <= 1):
            raise ValueError("rcp_threshold must be in (0, 1]")
        if self.keyword_budget < 1:
            raise ValueError("keyword_budget must be >= 1")
        if self.timeline_limit < 1 or self.search_limit < 1:
            raise ValueError("retrieval limits must be >= 1")
        if self.revisit_cadence_days < 1:
            raise ValueError("revisit_cadence_days must be >= 1")
        if not (0 < self.threshold < 1):
            raise ValueError("threshold must be in (0, 1)")
        if self.rate_requests < 0:
            raise ValueError("rate_requests must be >= 0")

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in asdict(self).items())


_FIELD_TYPES = {f.name: f.type for f in PipelineConfig.__dataclass_fields__.values()}


def parse_config(text: str) -> PipelineConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise ValueError(f"line {lineno}: expected `key = value`, got {raw!r}")
        if key not in _FIELD_TYPES:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        kind = _FIELD_TYPES[key]
        if kind == "int":
            values[key] = int(value)
        elif kind == "float":
            values[key] = float(value)
        else:
            values[key] = value
    config = PipelineConfig(**values)
    config.validate()
    return config


def load_config(path: str | Path) -> PipelineConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))
