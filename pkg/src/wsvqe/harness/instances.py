"""Random sparse Hermitian problem instances and their JSON files."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from ..errors import DomainError
from ..numerics import EigenPair
from ..pipeline import ProblemInstance, make_instance
from .seeding import derive_rng, STREAM_INSTANCE, STREAM_APPROX


def random_hermitian(
    rng: np.random.Generator,
    size: int = 8,
    sparsity: float = 0.5,
    bound: float = 5.0,
) -> np.ndarray:
    """Sparse Hermitian matrix sampled on its upper triangle.

    Each entry ``i <= j`` is zero with probability ``sparsity``; otherwise a
    diagonal entry is uniform in ``[-bound, bound]`` and an off-diagonal
    entry uniform in ``[-bound, bound] + [-bound, bound]i``. The lower
    triangle mirrors the conjugates.
    """
    if not 0.0 <= sparsity <= 1.0:
        raise DomainError(f"sparsity must be in [0, 1], got {sparsity}")
    H = np.zeros((size, size), dtype=complex)
    for i in range(size):
        for j in range(i, size):
            if rng.random() < sparsity:
                continue
            if i == j:
                H[i, i] = rng.uniform(-bound, bound)
            else:
                H[i, j] = complex(rng.uniform(-bound, bound), rng.uniform(-bound, bound))
                H[j, i] = H[i, j].conjugate()
    return H


def generate_instance(seed: int, index: int, size: int = 8, sparsity: float = 0.5, bound: float = 5.0) -> ProblemInstance:
    """Instance ``index`` of the stream rooted at ``seed``.

    Matrices whose smallest eigenvalue is not negative are redrawn, since
    the approximation ratio is undefined or inverted for them.
    """
    rng = derive_rng(seed, STREAM_INSTANCE, index)
    while True:
        H = random_hermitian(rng, size, sparsity, bound)
        inst = make_instance(f"{index:04d}", H, derive_rng(seed, STREAM_APPROX, index))
        if inst.lambda_ref < -1e-9:
            return inst


def instance_to_dict(inst: ProblemInstance) -> dict:
    return {
        "id": inst.id,
        "n": inst.n_qubits,
        "h_re": inst.H.real.tolist(),
        "h_im": inst.H.imag.tolist(),
        "lambda_ref": inst.lambda_ref,
        "v_opt_re": inst.reference.vector.real.tolist(),
        "v_opt_im": inst.reference.vector.imag.tolist(),
        "q3_re": inst.approx_vector.real.tolist(),
        "q3_im": inst.approx_vector.imag.tolist(),
        "r_classical": inst.approx_ratio_classical,
    }


def instance_from_dict(d: dict) -> ProblemInstance:
    H = np.array(d["h_re"], dtype=float) + 1j * np.array(d["h_im"], dtype=float)
    v = np.array(d["v_opt_re"]) + 1j * np.array(d["v_opt_im"])
    q = np.array(d["q3_re"]) + 1j * np.array(d["q3_im"])
    return ProblemInstance(str(d["id"]), H, EigenPair(float(d["lambda_ref"]), v), q, float(d["r_classical"]))


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def instance_path(directory: Path, inst_id: str) -> Path:
    return Path(directory) / f"instance_{inst_id}.json"


def save_instance(inst: ProblemInstance, directory: Path) -> Path:
    path = instance_path(directory, inst.id)
    write_atomic(path, json.dumps(instance_to_dict(inst), indent=1) + "\n")
    return path


def load_instance(path: Path) -> ProblemInstance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def load_instances(directory: Path) -> list[ProblemInstance]:
    paths = sorted(Path(directory).glob("instance_*.json"))
    if not paths:
        raise FileNotFoundError(f"no instance files in {directory}")
    return [load_instance(p) for p in paths]
