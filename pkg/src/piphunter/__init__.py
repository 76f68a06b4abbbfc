"""End-to-end toolchain for hunting posts of illicit promotion (PIPs) on
an online social network: text normalization, TF-IDF features, linear
classifiers, contact extraction, snowball keyword hunting, campaign
clustering, availability monitoring, durable storage, a deterministic OSN
simulator, and operator interfaces."""

__version__ = "0.1.0"

from . import (  # noqa: F401
    campaigns,
    classify,
    contacts,
    errors,
    features,
    hunt,
    monitor,
    store,
    textnorm,
)

__all__ = [
    "campaigns",
    "classify",
    "contacts",
    "errors",
    "features",
    "hunt",
    "monitor",
    "store",
    "textnorm",
    "__version__",
]
