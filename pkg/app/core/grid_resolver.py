"""
Parameter grid reference resolver.

Grids are YAML or JSON documents, either referenced as
- @grids/exact-default.yaml
or given as a plain file path. Two layouts are accepted: a product of
`lambdas` and `alphas`, or an explicit `points` list of {lambda, alpha}.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List

import yaml
from pydantic import ValidationError

from app.core.exceptions import GridReferenceError
from app.schemas import ParameterGrid, PoissonParams

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parent.parent.parent
GRIDS_DIR = PROJECT_ROOT / "grids"


def resolve_grid_path(value: str) -> Path:
    """
    Map a grid reference to a file path.

    Raises:
        GridReferenceError: bad reference format or missing file
    """
    if value.startswith('@'):
        parts = value[1:].split('/', 1)
        if len(parts) != 2 or parts[0] != "grids":
            raise GridReferenceError(f"Invalid grid reference: {value}. Expected format: @grids/filename")
        file_path = GRIDS_DIR / parts[1]
    else:
        file_path = Path(value)

    if not file_path.is_file():
        raise GridReferenceError(f"Grid file not found: {file_path}")
    return file_path


def _load_document(file_path: Path) -> Dict[str, Any]:
    content = file_path.read_text(encoding='utf-8')
    try:
        if file_path.suffix == ".json":
            data = json.loads(content)
        else:
            data = yaml.safe_load(content)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise GridReferenceError(f"Invalid grid file {file_path}: {str(e)}")
    if not isinstance(data, dict):
        raise GridReferenceError(f"Grid file {file_path} must contain a mapping")
    return data


def _expand_points(data: Dict[str, Any]) -> List[Dict[str, Any]]:
    if "points" in data:
        return [{"lam": str(p["lambda"]), "alpha": str(p["alpha"])} for p in data["points"] or []]
    lambdas = data.get("lambdas") or []
    alphas = data.get("alphas") or []
    return [{"lam": str(lam), "alpha": str(alpha)} for lam in lambdas for alpha in alphas]


def load_grid(value: str) -> ParameterGrid:
    """
    Load and validate a parameter grid.

    Every point is classified as it is read, so a grid with an unsupported
    (λ, α) pair fails here rather than inside the suite.
    """
    file_path = resolve_grid_path(value)
    logger.info(f"Loading parameter grid: {value} -> {file_path}")
    data = _load_document(file_path)
    try:
        raw_points = _expand_points(data)
    except (KeyError, TypeError) as e:
        raise GridReferenceError(f"Grid file {file_path} has a malformed point list: {str(e)}")
    try:
        points = [PoissonParams(**point) for point in raw_points]
        grid = ParameterGrid(name=data.get("name", file_path.stem), n_max=data.get("n_max"), points=points)
    except ValidationError as e:
        raise GridReferenceError(f"Invalid grid file {file_path}: {str(e)}")
    logger.info(f"Grid '{grid.name}' has {len(grid.points)} points")
    return grid
