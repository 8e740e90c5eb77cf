import json
import logging
import os
from dataclasses import asdict, is_dataclass

import dill
import numpy as np

from normal_generators import helpers
from normal_generators.classifier import Template, TripleCatalogEntry, build_catalog
from normal_generators.constants import Constants
from normal_generators.criteria import Certificate, Verdict, annotate_catalog
from normal_generators.dictionaries import (
    CatalogRecord, CertificateFile, CertificateRecord, SystemRecord, TemplateRecord,
)
from normal_generators.errors import DataDecodingError
from normal_generators.isomorphism import DEFAULT_POLICY, Policy
from normal_generators.surface import CurveSystem, side_sequence, validate

logger = logging.getLogger("__main__")


class Encoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, CurveSystem):
            return encode_system(obj)
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, (set, frozenset)):
            return sorted(obj)
        if is_dataclass(obj) and not isinstance(obj, type):
            logger.debug(f"Encoding dataclass {type(obj).__name__} field by field.")
            return {name: getattr(obj, name) for name in obj.__dataclass_fields__}
        return json.JSONEncoder.default(self, obj)


def dumps(data) -> str:
    """
    Deterministic JSON text: keys sorted, two-space indent.
    """
    return json.dumps(data, cls=Encoder, indent=2, sort_keys=True)


def encode_system(system: CurveSystem) -> SystemRecord:
    return {
        "vertices": [{"id": v, "darts": [[e, end] for e, end in darts]} for v, darts in system.rotations],
        "edges": [{"id": e.id, "curve": e.curve, "tail": e.tail, "head": e.head} for e in system.edges],
        "curves": [{"id": c, "edges": list(edges)} for c, edges in system.curves],
        "regions": [{"id": r.id, "genus": r.genus, "walks": [side_sequence(w) for w in r.walks]}
                    for r in system.regions],
    }


def decode_system(raw: dict) -> CurveSystem:
    """
    Validates a decoded system record. Broken invariants raise InvalidSystemError,
    records of the wrong shape raise DataDecodingError.
    """
    try:
        return validate(raw)
    except (KeyError, TypeError, ValueError) as error:
        raise DataDecodingError(f"System record is malformed: {error!r}.") from error


def encode_certificate(certificate: Certificate) -> CertificateFile:
    record: CertificateFile = dict(encode_system(certificate.system))
    record["certificate"] = {
        "criterion": certificate.criterion,
        "roles": dict(certificate.roles),
        "witnesses": dict(certificate.witnesses),
        "images": list(certificate.images),
        "genus": certificate.genus,
        "data": dict(certificate.data),
    }
    return record


def decode_certificate(raw: dict) -> Certificate:
    try:
        block: CertificateRecord = raw["certificate"]
        certificate = Certificate(
            criterion=str(block["criterion"]),
            system=decode_system(raw),
            roles={str(k): str(v) for k, v in block["roles"].items()},
            witnesses={str(k): str(v) for k, v in block.get("witnesses", {}).items()},
            genus=int(block.get("genus", 0)),
            images=tuple(str(name) for name in block.get("images", [])),
            data={str(k): int(v) for k, v in block.get("data", {}).items()},
        )
    except (KeyError, TypeError, ValueError, AttributeError) as error:
        raise DataDecodingError(f"Certificate record is malformed: {error!r}.") from error
    return certificate


def encode_verdict(verdict: Verdict) -> dict:
    return asdict(verdict) | {"positive": verdict.positive}


def encode_template(template: Template) -> TemplateRecord:
    return {
        "index": template.index,
        "type": template.type,
        "arc_matrix": [list(row) for row in template.arc_matrix],
        "linked": template.linked,
        "system": encode_system(template.system),
    }


def encode_catalog(entries: list[TripleCatalogEntry]) -> list[CatalogRecord]:
    return [{"label": entry.label, "type": entry.type, "template": entry.template,
             "strategy": entry.strategy, "system": encode_system(entry.system)} for entry in entries]


def decode_catalog(records: list) -> list[TripleCatalogEntry]:
    try:
        return [TripleCatalogEntry(str(record["label"]), str(record["type"]), int(record["template"]),
                                   decode_system(record["system"]), record.get("strategy"))
                for record in records]
    except (KeyError, TypeError, ValueError, AttributeError) as error:
        raise DataDecodingError(f"Catalog record is malformed: {error!r}.") from error


def load_json(filename: str):
    logger.debug(f"Reading JSON from {filename}.")
    try:
        with open(filename, "r") as input_file:
            return json.load(input_file)
    except json.JSONDecodeError as error:
        raise DataDecodingError(f"{filename}: line {error.lineno}, column {error.colno}: {error.msg}.") from error
    except OSError as error:
        raise DataDecodingError(f"Cannot read {filename}.") from error


def save_json(data, filename: str) -> None:
    logger.info(f"Saving JSON to {filename}...")
    helpers.make_sure_filepath_exists(filename)
    with open(filename, "w") as output_file:
        output_file.write(dumps(data) + "\n")
    logger.info(f"Saved JSON to {filename}.")


def save_catalog(entries: list[TripleCatalogEntry], policy: Policy, filename: str = Constants.CATALOG_CACHE) -> None:
    """
    Saves the annotated catalog together with the policy it was built under.
    """
    logger.info(f"Saving catalog to {filename}...")
    helpers.make_sure_filepath_exists(filename)
    with open(filename, "wb") as output_file:
        dill.dump({"policy": policy, "entries": entries}, file=output_file)
    logger.info(f"Saved catalog to {filename}.")


def load_catalog(policy: Policy, filename: str = Constants.CATALOG_CACHE) -> list[TripleCatalogEntry] | None:
    """
    Loads a cached catalog.
    :return: the entries, or None when there is no cache or it was built under another policy.
    """
    if not os.path.exists(filename):
        logger.debug(f"No catalog cache at {filename}.")
        return None
    logger.info(f"Loading catalog from file {filename}...")
    try:
        with open(filename, "rb") as input_file:
            data = dill.load(file=input_file)
    except Exception as error:
        logger.warning(f"Catalog cache {filename} is unreadable ({error!r}), rebuilding.")
        return None
    if data.get("policy") != policy:
        logger.info(f"Catalog cache was built under {data.get('policy')}, not {policy}.")
        return None
    logger.info(f"Loaded catalog from file {filename}.")
    return data["entries"]


def cached_catalog(policy: Policy = DEFAULT_POLICY, jobs: int = 1,
                   filename: str = Constants.CATALOG_CACHE) -> list[TripleCatalogEntry]:
    entries = load_catalog(policy, filename)
    if entries is None:
        entries = annotate_catalog(build_catalog(policy, jobs))
        save_catalog(entries, policy, filename)
    return entries
