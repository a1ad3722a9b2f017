"""
Run configuration shared by the command-line front end and the kernels.

The config is built once per invocation and passed explicitly.
"""

import logging
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from exactalg import ParseError

logger = logging.getLogger(__name__)

SEED_VARIABLE = "HJET_SEED"


def _env_seed(default: int = 0) -> int:
    raw = os.environ.get(SEED_VARIABLE)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ParseError(f"{SEED_VARIABLE}={raw!r} is not an integer") from exc


@dataclass
class ToolkitConfig:
    seed: int = 0
    trials: int = 5
    bound: int = 2**64
    max_step: Optional[int] = None
    modulus: int = 2**31 - 1
    symbolic_limit: int = 20
    witness_attempts: int = 12
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "ToolkitConfig":
        return cls(seed=_env_seed())

    @classmethod
    def from_args(cls, args: Any) -> "ToolkitConfig":
        """Command-line values win over the environment; unset flags keep the defaults"""
        config = cls.from_env()
        for name in ("seed", "trials", "bound", "max_step", "log_level"):
            value = getattr(args, name, None)
            if value is not None:
                setattr(config, name, value)
        logger.debug(f"configuration: {config.to_dict()}")
        return config

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["bound"] = str(self.bound)
        return out
