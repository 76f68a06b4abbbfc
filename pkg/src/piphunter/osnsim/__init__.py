"""Deterministic OSN simulator: manifest-driven corpus generation plus an
in-process (or HTTP-wrapped) backend with a movable clock."""

from .generator import (
    DEFAULT_UNAVAILABILITY_MIX,
    CampaignSpec,
    SimCorpus,
    SimManifest,
    generate_corpus,
    generate_ner_corpus,
    post_document,
    table1_manifest,
)
from .sim import RateBudget, Simulator, make_app

__all__ = [
    "CampaignSpec",
    "SimManifest",
    "SimCorpus",
    "DEFAULT_UNAVAILABILITY_MIX",
    "generate_corpus",
    "generate_ner_corpus",
    "post_document",
    "table1_manifest",
    "RateBudget",
    "Simulator",
    "make_app",
]
