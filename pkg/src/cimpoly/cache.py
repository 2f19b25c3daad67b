"""On-disk JSON cache for vertex sets and vertex-edge graphs.

Keys are SHA-256 digests of a canonical JSON description of the request
(kind, node count or skeleton edge list, guard override, version tag).
Without a cache directory every call recomputes.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .enumeration import Mec, VertexSet, enumerate_mecs, enumerate_mecs_skeleton
from .geometry import EdgeGraph, edge_graph
from .graphs import Dag, UGraph
from .imset import Imset

ENV_VAR = "CIMPOLY_CACHE"
VERSION = "1"


def cache_dir(override: str | os.PathLike | None = None) -> Path | None:
    raw = override if override is not None else os.environ.get(ENV_VAR)
    return Path(raw) if raw else None


def key_for(kind: str, n: int, face: UGraph | None, unsafe: bool = False) -> str:
    desc = {
        "kind": kind,
        "n": n,
        "skeleton": None if face is None else [list(e) for e in face.sorted_edges()],
        "unsafe": bool(unsafe),
        "version": VERSION,
    }
    blob = json.dumps(desc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def vertex_set_to_json(vs: VertexSet) -> dict:
    return {
        "n": vs.n,
        "skeleton": None if vs.face is None else [list(e) for e in vs.face.sorted_edges()],
        "dag_count": sum(m.member_count for m in vs.mecs),
        "mec_count": len(vs),
        "vertices": [
            {
                "representative": [list(e) for e in m.representative.sorted_edges()],
                "imset": m.imset.to_json()["ones"],
                "members": m.member_count,
            }
            for m in vs.mecs
        ],
    }


def vertex_set_from_json(obj: dict) -> VertexSet:
    n = obj["n"]
    face = None if obj["skeleton"] is None else UGraph(n, [tuple(e) for e in obj["skeleton"]])
    mecs = tuple(
        Mec(
            Dag(n, [tuple(e) for e in v["representative"]]),
            Imset.from_json({"n": n, "ones": v["imset"]}),
            v["members"],
        )
        for v in obj["vertices"]
    )
    return VertexSet(n, face, mecs)


def _read(path: Path) -> dict | None:
    if path.is_file():
        with open(path) as fh:
            return json.load(fh)
    return None


def _write(path: Path, obj: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(obj, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)


def load_vertex_set(
    n: int, face: UGraph | None = None, unsafe: bool = False, directory: Path | None = None
) -> VertexSet:
    key = key_for("vertices", n, face, unsafe)
    if directory is not None:
        hit = _read(directory / f"{key}.json")
        if hit is not None:
            return vertex_set_from_json(hit["payload"])
    vs = enumerate_mecs(n, unsafe) if face is None else enumerate_mecs_skeleton(face, unsafe)
    if directory is not None:
        _write(directory / f"{key}.json", {"key": key, "version": VERSION, "payload": vertex_set_to_json(vs)})
    return vs


def load_edge_graph(
    vs: VertexSet, unsafe: bool = False, jobs: int = 1, directory: Path | None = None
) -> EdgeGraph:
    key = key_for("edges", vs.n, vs.face, unsafe)
    if directory is not None:
        hit = _read(directory / f"{key}.json")
        if hit is not None:
            N = len(vs)
            known = {(a, b): False for a in range(N) for b in range(a + 1, N)}
            for a, b in hit["payload"]["edges"]:
                known[(a, b)] = True
            return edge_graph(vs, unsafe=True, pairs_done=known)
    eg = edge_graph(vs, unsafe=unsafe, jobs=jobs)
    if directory is not None:
        payload = {"vertices": len(vs), "edges": [list(e) for e in eg.edge_list()]}
        _write(directory / f"{key}.json", {"key": key, "version": VERSION, "payload": payload})
    return eg
