"""Runtime settings loaded from the environment."""
import os

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Exhaustive enumeration of DAG(v) is refused above this many vertices
MAX_M = int(os.getenv("RAZORS_MAX_M", "5"))

# Hard cap regardless of configuration; 6 vertices already means ~3.8M DAGs
HARD_MAX_M = 6

THREADS = int(os.getenv("RAZORS_THREADS", "1"))

# Largest joint table (product of ranges) we are willing to materialise
JOINT_CEILING = int(os.getenv("RAZORS_JOINT_CEILING", "4096"))

LOG_LEVEL = os.getenv("RAZORS_LOG_LEVEL", "WARNING")


def effective_max_m(requested: int = None) -> int:
    """Clamp a requested enumeration ceiling to the hard cap."""
    value = MAX_M if requested is None else requested
    return max(1, min(value, HARD_MAX_M))
