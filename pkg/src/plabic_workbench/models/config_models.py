from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field


class RunConfig(BaseModel):
    """Settings shared by every command; identical config and seed give identical output"""

    seed: int = Field(0, description="Seed of the root random.Random")
    trials: int = Field(25, description="Random points per verification", gt=0)
    samples: int = Field(1000, description="Positive points per certificate run", gt=0)
    coordinate_bound: int = Field(10_000, description="Numerators lie in [-bound, bound], denominators in [1, bound]", gt=0)
    retry_cap: int = Field(32, description="Boundary redraws before giving up", gt=0)
    orientation_cap: int = Field(40, description="Largest edge count for exhaustive orientation search", gt=0)
    brushing_cap: int = Field(10_000, description="Orientations tried while searching a brushing", gt=0)
    tree_cap: int = Field(64, description="Largest boundary count accepted for tree enumeration", gt=0)
    threads: int = Field(1, description="Worker threads for sample-parallel commands", gt=0)
    output_dir: Optional[Path] = Field(None, description="Where CSV and JSON artifacts are written")
