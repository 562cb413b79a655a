"""Configuration (INI file) and engine construction from it."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Optional

from .engine import PkgEngine
from .linking import EMPTY_RELATIONS, HttpEntityLinker, RelationIriTable
from .nl2pkg import ModelAnnotator, ModelEndpointConfig, RuleAnnotator
from .terms import Iri


@dataclass
class PkgConfig:
    listen: str = "127.0.0.1:8402"
    data_file: Optional[str] = None
    base_namespace: str = "https://pkg.local/"
    admin_token: Optional[str] = None
    annotator: str = "rule"  # rule | model
    model_endpoint: str = "http://127.0.0.1:11434/api/generate"
    model_name: str = "mistral"
    model_timeout: float = 30.0
    linker_endpoint: Optional[str] = None
    link_threshold: float = 0.5
    relation_iris: dict[str, str] = field(default_factory=dict)


def load_config(path: str) -> PkgConfig:
    parser = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        parser.read_file(fh)
    cfg = PkgConfig()
    server = parser["server"] if parser.has_section("server") else {}
    cfg.listen = server.get("listen", cfg.listen)
    cfg.data_file = server.get("data_file", cfg.data_file)
    cfg.base_namespace = server.get("base_namespace", cfg.base_namespace)
    cfg.admin_token = server.get("admin_token", cfg.admin_token)
    nl = parser["nl2pkg"] if parser.has_section("nl2pkg") else {}
    cfg.annotator = nl.get("annotator", cfg.annotator)
    cfg.model_endpoint = nl.get("model_endpoint", cfg.model_endpoint)
    cfg.model_name = nl.get("model_name", cfg.model_name)
    cfg.model_timeout = float(nl.get("model_timeout", cfg.model_timeout))
    linking = parser["linking"] if parser.has_section("linking") else {}
    cfg.linker_endpoint = linking.get("linker_endpoint", cfg.linker_endpoint) or None
    cfg.link_threshold = float(linking.get("link_threshold", cfg.link_threshold))
    if parser.has_section("relations"):
        cfg.relation_iris = dict(parser["relations"])
    return cfg


def build_engine(cfg: PkgConfig) -> PkgEngine:
    if cfg.annotator == "model":
        annotator = ModelAnnotator(
            ModelEndpointConfig(
                url=cfg.model_endpoint, model=cfg.model_name, timeout=cfg.model_timeout
            )
        )
    elif cfg.annotator == "rule":
        annotator = RuleAnnotator()
    else:
        raise ValueError(f"unknown annotator {cfg.annotator!r} (expected rule or model)")
    linker = HttpEntityLinker(cfg.linker_endpoint) if cfg.linker_endpoint else None
    relations = (
        RelationIriTable({lemma: Iri(value) for lemma, value in cfg.relation_iris.items()})
        if cfg.relation_iris
        else EMPTY_RELATIONS
    )
    return PkgEngine(
        annotator=annotator,
        linker=linker,
        link_threshold=cfg.link_threshold,
        relations=relations,
    )
