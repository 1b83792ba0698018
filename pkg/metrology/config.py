from typing import Optional, Union
import logging
import os

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

# Load environment variables
load_dotenv()

logger = logging.getLogger(__name__)

class WorkbenchConfig:
    """Runtime settings, read from the environment (a .env file is honoured)"""
    LOGLEVEL = os.getenv("LOGLEVEL", "warning").lower()
    THREADS = os.getenv("PHASEBENCH_THREADS", "auto")
    N_MAX = int(os.getenv("PHASEBENCH_N_MAX", "2000"))

    @staticmethod
    def resolve_threads(value: Optional[Union[int, str]] = None) -> int:
        """Worker count for grid sweeps; 'auto' means one per CPU"""
        value = WorkbenchConfig.THREADS if value is None else value
        if isinstance(value, str):
            if value.lower() == "auto":
                return os.cpu_count() or 1
            value = int(value)
        if value < 1:
            raise ValueError(f"Thread count must be positive, got {value}")
        return value

    @staticmethod
    def log_level(value: Optional[str] = None) -> int:
        """Map a LOGLEVEL name onto a logging level"""
        name = (value or WorkbenchConfig.LOGLEVEL).upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level: {value}")
        return level

def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr through rich; stdout carries data only"""
    logging.basicConfig(
        level=WorkbenchConfig.log_level(level),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )
    logger.debug(f"Logging configured at {logging.getLevelName(logging.getLogger().level)}")
